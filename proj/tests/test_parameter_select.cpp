#include <doctest.h>

#include <cmath>

#include <srblab/parameter_select.hpp>

using namespace srblab;

TEST_CASE("Collet-Eckmann at t=4") {
    const auto fam = logistic_family();
    const auto r = check_collet_eckmann(fam, 4.0, 4.0, 1, 50);
    CHECK(r.ce_ok);
    CHECK_FALSE(r.superstable);
    CHECK(std::abs(r.worst_ce_margin) < 1e-12);

    const auto s = check_collet_eckmann(fam, 4.0, 4.5, 1, 10);
    CHECK_FALSE(s.ce_ok);
    CHECK(s.worst_ce_margin == doctest::Approx(10.0 * (std::log(4.0) - std::log(4.5))));
    CHECK(s.worst_ce_k == 10);
}

TEST_CASE("Collet-Eckmann flags superstable parameters") {
    const auto r = check_collet_eckmann(logistic_family(), 2.0, 1.5, 1, 20);
    CHECK(r.superstable);
    CHECK_FALSE(r.ce_ok);
}

TEST_CASE("Collet-Eckmann argument checks") {
    const auto fam = logistic_family();
    CHECK_THROWS_AS((void)check_collet_eckmann(fam, 4.0, 1.0, 1, 10), std::invalid_argument);
    CHECK_THROWS_AS((void)check_collet_eckmann(fam, 4.0, 2.0, 11, 10), std::invalid_argument);
}

TEST_CASE("polynomial recurrence") {
    const auto fam = logistic_family();
    // |c_2 - c| = 1/2 = 2^-1 sits exactly on the strict boundary
    const auto edge = check_polynomial_recurrence(fam, 4.0, 1.0, 2, 100);
    CHECK_FALSE(edge.recurrence_ok);
    CHECK(edge.worst_rec_k == 2);
    CHECK(std::abs(edge.worst_rec_margin) < 1e-15);
    const auto r = check_polynomial_recurrence(fam, 4.0, 1.0, 3, 100);
    CHECK(r.recurrence_ok);
    CHECK(r.worst_distance == 0.5);
    const auto z = check_polynomial_recurrence(fam, 4.0, 0.0, 2, 100, 4.0);
    CHECK(z.recurrence_ok);
    CHECK(z.worst_distance == 0.5);

    const auto s = check_polynomial_recurrence(fam, 2.0, 1.0, 1, 10);
    CHECK_FALSE(s.recurrence_ok);
    CHECK(s.worst_rec_k == 1);
    CHECK(s.worst_distance == 0.0);
}

TEST_CASE("expansion conditions hold for the full map") {
    const auto rep = check_expansion_conditions(logistic_family(), 4.0, 2.0, 0.1, 0.05, 1000);
    CHECK(rep.samples.size() == 1000);
    CHECK(rep.all_ok);
    CHECK(rep.sampled);
    CHECK_THROWS_AS((void)check_expansion_conditions(logistic_family(), 4.0, 1.0, 0.1, 0.05, 10),
                    std::invalid_argument);
}

TEST_CASE("find MT parameter: the full map") {
    MTSearchOptions o;
    o.periodic_seed = 0.0;
    const auto mt = find_misiurewicz_thurston(logistic_family(), {3.9, 4.0}, 2, 1, o);
    CHECK(mt.t.hi == 4.0);
    CHECK(mt.periodic_point == 0.0);
    CHECK(mt.multiplier_log == doctest::Approx(std::log(4.0)));
    CHECK(mt.residual == 0.0);
    CHECK(mt.repelling());
}

TEST_CASE("find MT parameter: preperiod 3 landing on the interior fixed point") {
    const auto fam = logistic_family();
    const auto mt = find_misiurewicz_thurston(fam, {3.6, 3.7}, 3, 1);
    CHECK(mt.t.hi == doctest::Approx(3.6785735104283224).epsilon(1e-15));
    CHECK(mt.residual < 1e-12);
    CHECK(mt.periodic_point == doctest::Approx(1.0 - 1.0 / mt.t.hi));
    CHECK(mt.repelling());
    const auto sh = verify_mt_shadowing(fam, mt);
    CHECK(sh.ok);
    CHECK(sh.shadow_point == doctest::Approx(mt.periodic_point).epsilon(1e-12));
}

TEST_CASE("find MT parameter without a sign change") {
    CHECK_THROWS_AS((void)find_misiurewicz_thurston(logistic_family(), {3.0, 3.1}, 3, 1), BracketError);
    CHECK_THROWS_AS((void)find_misiurewicz_thurston(logistic_family(), {3.0, 3.1}, 0, 1), std::invalid_argument);
}

TEST_CASE("admissible M at t0=4 matches the closed form") {
    const auto fam = logistic_family();
    for (double dt : {1e-3, 1e-5, 3e-7, 1e-9}) {
        const auto pr = admissible_M(fam, 4.0, Param(4.0 - dt), 10.0, 0.0, 0.0);
        const auto expect = std::size_t(std::floor(std::log(1.0 / (10.0 * dt)) / std::log(4.0)));
        CHECK(pr.M == expect);
        CHECK(pr.margin_at_M >= 0.0);
        CHECK(pr.margin_at_M1 < 0.0);
    }
}

TEST_CASE("admissible M is monotone in |t - t0|") {
    const auto fam = logistic_family();
    std::size_t prev = 0;
    for (double dt = 1e-2; dt > 1e-10; dt /= 3.0) {
        const auto M = admissible_M(fam, 4.0, Param(4.0 - dt), 10.0, 0.5, 0.5).M;
        CHECK(M >= prev);
        prev = M;
    }
}

TEST_CASE("admissible M rejects far and equal parameters") {
    const auto fam = logistic_family();
    CHECK_THROWS_AS((void)admissible_M(fam, 4.0, Param(3.5), 10.0, 0.0, 0.0), NotAdmissible);
    CHECK_THROWS_AS((void)admissible_M(fam, 4.0, Param(4.0), 10.0, 0.0, 0.0), NotAdmissible);
}

TEST_CASE("one-sided MT sequence") {
    const auto fam = logistic_family();
    const auto t0 = find_misiurewicz_thurston(fam, {3.6, 3.7}, 3, 1);
    MTSequenceOptions o;
    o.dt_min = 1e-6;
    const auto seq = mt_sequence(fam, t0, 4, o);
    REQUIRE(seq.entries.size() == 4);
    double prev = 1.0;
    for (const auto& e : seq.entries) {
        CHECK(e.dt * seq.side > 0.0);
        CHECK(std::abs(e.dt) < prev);
        prev = std::abs(e.dt);
        CHECK(e.mt.residual < 1e-11);
        CHECK(e.mt.repelling());
        CHECK(e.Lambda_ratio_M > 0.1);
        CHECK(e.Lambda_ratio_M < 10.0);
        CHECK(std::abs(e.dt) <= 1.0 / (e.pair.Ca * std::exp(critical_orbit(fam, t0.t, e.pair.M).log_derivs[e.pair.M])));
    }
}
