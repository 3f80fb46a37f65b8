#include <doctest.h>

#include <filesystem>

#include <srblab/io.hpp>
#include <srblab/serialize.hpp>

using namespace srblab;

TEST_CASE("config parsing and echo") {
    auto cfg = Config::parse("# comment\nseed = 7\n[family]\nid = \"logistic\"\n[response]\ncount = 12 # rows\nflag = yes\n"
                             "list = [1, 2.5, 3e-2]\n");
    CHECK(cfg.has("family", "id"));
    CHECK(cfg.get_string("family", "id", "x") == "logistic");
    CHECK(cfg.get_size("response", "count", 0) == 12);
    CHECK(cfg.get_bool("response", "flag", false));
    CHECK(cfg.get_list("response", "list", {}) == std::vector<double>{1.0, 2.5, 0.03});
    CHECK(cfg.get_double("response", "missing", 0.25) == 0.25);
    CHECK(cfg.get_size("", "seed", 0) == 7);
    const auto e = cfg.echo();
    CHECK(e.at("response").at("missing") == "0.25");
    CHECK(e.at("family").at("id") == "logistic");
    CHECK(e.at("seed") == "7");
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS((void)Config::parse("[oops\n"), ConfigError);
    CHECK_THROWS_AS((void)Config::parse("novalue\n"), ConfigError);
    CHECK_THROWS_AS((void)Config::load("/nonexistent/srblab.toml"), ConfigError);
    auto cfg = Config::parse("n = 2.5\nb = maybe\nx = 1e\n");
    CHECK_THROWS_AS((void)cfg.get_size("", "n", 0), ConfigError);
    CHECK_THROWS_AS((void)cfg.get_bool("", "b", false), ConfigError);
    CHECK_THROWS_AS((void)cfg.get_double("", "x", 0), ConfigError);
}

TEST_CASE("family selection") {
    auto cfg = Config::parse("[family]\nid = sine\n");
    const auto s = family_from_config(cfg);
    CHECK(eval_map(s, 4.0, 0.5) == doctest::Approx(1.0));
    cfg = Config::parse("[family]\nid = polynomial\ncoeffs = [0, 1, -1]\n");
    const auto p = family_from_config(cfg);
    CHECK(eval_map(p, 4.0, 0.5) == doctest::Approx(eval_map(logistic_family(), 4.0, 0.5)));
    cfg = Config::parse("[family]\nid = tent\n");
    CHECK_THROWS_AS((void)family_from_config(cfg), ConfigError);
}

TEST_CASE("numbers are written with 17 significant digits") {
    CHECK(fmt17(0.1) == "0.10000000000000001");
    CHECK(parse_double(fmt17(3.6785735104283224)) == 3.6785735104283224);
    CsvWriter w({"a", "b"});
    w.row(std::vector<double>{1.0 / 3.0, 2.0});
    CHECK(w.str() == "a,b\n0.33333333333333331,2\n");
}

TEST_CASE("cache round-trip") {
    const auto dir = std::filesystem::temp_directory_path() / "srblab_unit_cache";
    std::filesystem::remove_all(dir);
    const Cache cache(dir);
    const auto k = Cache::key("demo", "inputs-1");
    CHECK_FALSE(cache.get(k, "inputs-1").has_value());
    cache.put(k, "inputs-1", {{"x", 0.1}});
    const auto hit = cache.get(k, "inputs-1");
    REQUIRE(hit.has_value());
    CHECK(hit->at("x").get<double>() == 0.1);
    CHECK_FALSE(cache.get(k, "inputs-2").has_value());
    CHECK_FALSE(Cache(dir, false).get(k, "inputs-1").has_value());
    std::filesystem::remove_all(dir);
}

TEST_CASE("cached orbit equals the direct computation") {
    const auto dir = std::filesystem::temp_directory_path() / "srblab_unit_orbit";
    std::filesystem::remove_all(dir);
    const Cache cache(dir);
    const auto fam = logistic_family();
    const auto a = cached_orbit(cache, fam, 2.0, 5);  // contains -inf log derivatives
    const auto b = cached_orbit(cache, fam, 2.0, 5);
    const auto c = critical_orbit(fam, 2.0, 5);
    CHECK(a.points == c.points);
    CHECK(b.points == c.points);
    CHECK(b.log_derivs == c.log_derivs);
    CHECK(b.first_zero == c.first_zero);
    std::filesystem::remove_all(dir);
}

TEST_CASE("MT parameter JSON round-trip") {
    MTParameter mt;
    mt.t = {3.6785735104283224, -1.0332e-16};
    mt.preperiod = 3;
    mt.period = 1;
    mt.periodic_point = 0.72815549365396182;
    mt.multiplier_log = 0.1;
    const auto back = mt_from_json(nlohmann::json{{"mt", mt_to_json(mt)}});
    CHECK(back.t.hi == mt.t.hi);
    CHECK(back.t.lo == mt.t.lo);
    CHECK(back.periodic_point == mt.periodic_point);
    CHECK_THROWS_AS((void)mt_from_json(nlohmann::json{{"t", 3.0}}), ConfigError);
}
