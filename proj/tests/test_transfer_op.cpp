#include <doctest.h>

#include <cmath>

#include <srblab/transfer_op.hpp>

using namespace srblab;

namespace {
const TransferOperator& full_map_op() {
    static const TransferOperator op = [] {
        TowerOptions o;
        o.K_max = 24;
        Tower T = build_tower(logistic_family(), 4.0, o);
        CutoffFamily cf = cutoff_family(T);
        TransferOptions to;
        to.ground_cells = 1024;
        to.level_cells = 64;
        return TransferOperator(std::move(T), std::move(cf), to);
    }();
    return op;
}
} // namespace

TEST_CASE("operator maps zero to zero") {
    const auto& op = full_map_op();
    const auto y = op.apply(op.zero());
    for (double v : y.v) CHECK(v == 0.0);
}

TEST_CASE("ground function climbs to level one") {
    const auto& op = full_map_op();
    auto psi = op.sample([](std::size_t k, double) { return k == 0 ? 1.0 : 0.0; });
    const auto y = op.apply(psi);
    const auto& G = op.grid()->levels[1];
    double m = 0.0;
    auto lv = y.level(1);
    for (std::size_t i = 0; i < G.cells(); ++i) m += lv[i] * G.width(i);
    const double delta = op.tower().delta;
    CHECK(op.lambda() * m == doctest::Approx(op.cutoffs().integral(0, -delta, delta)).epsilon(1e-12));
    for (std::size_t k = 2; k <= op.K(); ++k)
        for (double v : y.level(k)) CHECK(v == 0.0);
}

TEST_CASE("dual mass is conserved by the full operator") {
    const auto& op = full_map_op();
    auto psi = default_start(op);
    const double m0 = dual_mass(psi);
    for (int i = 0; i < 5; ++i) psi = op.apply(psi);
    CHECK(dual_mass(psi) == doctest::Approx(m0).epsilon(1e-13));
}

TEST_CASE("truncation is idempotent and lowers the norm") {
    const auto& op = full_map_op();
    const auto psi = default_start(op);
    const auto a = truncate(psi, 7);
    const auto b = truncate(a, 7);
    CHECK(a.v == b.v);
    CHECK(norm(a) <= norm(psi));
    CHECK(norm(truncate(psi, op.K())) == norm(psi));
}

TEST_CASE("L1 norm of a single level") {
    const auto& op = full_map_op();
    const std::size_t k = 5;
    const auto psi = op.sample([&](std::size_t j, double) { return j == k ? 1.0 : 0.0; });
    const auto& G = op.grid()->levels[k];
    CHECK(norm(psi) == doctest::Approx(std::pow(op.lambda(), double(k)) * (G.hi() - G.lo())));
    CHECK(dual_mass(psi) == doctest::Approx(norm(psi)));
    CHECK(norm(psi, {NormKind::W11}) == doctest::Approx(2.0));
    CHECK_THROWS_AS((void)norm(psi, {NormKind::Lp, 2.0, 0.0}), std::invalid_argument);
}

TEST_CASE("projection preserves mass") {
    const auto& op = full_map_op();
    auto psi = default_start(op);
    const auto rho = op.project(psi, 256);
    double s = 0.0;
    for (double v : rho) s += v / 256.0;
    CHECK(s == doctest::Approx(dual_mass(psi)).epsilon(1e-12));
    CHECK(op.pair([](double) { return 1.0; }, psi) == doctest::Approx(dual_mass(psi)).epsilon(1e-12));
}

TEST_CASE("leading eigenpair approaches the arcsine density") {
    const auto& op = full_map_op();
    const auto ep = leading_eigenpair(op, op.K());
    CHECK(ep.kappa == doctest::Approx(1.0));
    CHECK(ep.residual < 1e-12);
    CHECK(dual_mass(ep.phi) == doctest::Approx(1.0));
    for (double v : ep.phi.v) CHECK(v >= -1e-14);
    // <x, mu> = 1/2
    CHECK(op.pair([](double x) { return x; }, ep.phi) == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("truncated eigenvalue is below one and increases with M") {
    const auto& op = full_map_op();
    double prev = 0.0;
    for (std::size_t M : {6u, 10u, 14u}) {
        const auto ep = leading_eigenpair(op, M);
        CHECK(ep.kappa < 1.0);
        CHECK(ep.kappa > prev);
        prev = ep.kappa;
    }
}

TEST_CASE("mismatched grids are rejected") {
    const auto& op = full_map_op();
    auto g = std::make_shared<TowerGrid>();
    g->offset = {0, 1};
    TowerFunction bad;
    bad.grid = g;
    CHECK_THROWS_AS((void)op.apply(bad), std::invalid_argument);
}
