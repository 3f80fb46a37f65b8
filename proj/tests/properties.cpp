// Randomized property checks; every property runs at least kCases cases from a fixed seed.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <memory>
#include <random>

#include <srblab/parameter_select.hpp>
#include <srblab/response.hpp>
#include <srblab/srb_estimate.hpp>
#include <srblab/transfer_op.hpp>

using namespace srblab;

namespace {

constexpr int kCases = 100;

const TransferOperator& op_at(double t) {
    static std::map<double, std::unique_ptr<TransferOperator>> ops;
    auto& p = ops[t];
    if (!p) {
        TowerOptions o;
        o.K_max = 24;
        Tower T = build_tower(logistic_family(), t, o);
        CutoffFamily cf = cutoff_family(T);
        TransferOptions to;
        to.ground_cells = 512;
        to.level_cells = 32;
        p = std::make_unique<TransferOperator>(std::move(T), std::move(cf), to);
    }
    return *p;
}

TowerFunction random_function(const TransferOperator& op, std::mt19937_64& rng, bool nonneg) {
    std::uniform_real_distribution<double> U(nonneg ? 0.0 : -1.0, 1.0);
    TowerFunction f = op.zero();
    for (double& v : f.v) v = U(rng);
    return f;
}

} // namespace

TEST_CASE("truncation lowers every norm and is idempotent") {
    std::mt19937_64 rng(1);
    const auto& op = op_at(4.0);
    std::uniform_int_distribution<std::size_t> L(0, op.K());
    for (int i = 0; i < kCases; ++i) {
        const auto psi = random_function(op, rng, false);
        std::size_t a = L(rng), b = L(rng);
        if (a > b) std::swap(a, b);
        const auto ta = truncate(psi, a), tb = truncate(psi, b);
        for (NormKind k : {NormKind::L1, NormKind::W11}) {
            CHECK(norm(ta, {k}) <= norm(tb, {k}) + 1e-12);
            CHECK(norm(tb, {k}) <= norm(psi, {k}) + 1e-12);
        }
        CHECK(truncate(ta, a).v == ta.v);
        CHECK(truncate(tb, a).v == ta.v);
    }
}

TEST_CASE("operator preserves positivity and nu mass") {
    std::mt19937_64 rng(2);
    const double ts[] = {4.0, 3.9277370017867517, 3.6785735104283224};
    for (int i = 0; i < kCases; ++i) {
        const auto& op = op_at(ts[i % 3]);
        const auto psi = random_function(op, rng, true);
        const auto y = op.apply(psi);
        for (double v : y.v) REQUIRE(v >= 0.0);
        CHECK(dual_mass(y) == doctest::Approx(dual_mass(psi)).epsilon(1e-12));
    }
}

TEST_CASE("tower levels are nested") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(3.85, 4.0);
    int done = 0, tries = 0;
    while (done < kCases && tries < 10 * kCases) {
        ++tries;
        TowerOptions o;
        o.K_max = 30;
        Tower T;
        try {
            T = build_tower(logistic_family(), U(rng), o);
        } catch (const TowerError&) {
            continue;  // superstable windows have no valid delta
        }
        ++done;
        for (std::size_t k = 1; k < T.K_max; ++k) {
            CHECK(T.r_minus[k + 1] <= T.r_minus[k]);
            CHECK(T.r_plus[k + 1] <= T.r_plus[k]);
        }
    }
    CHECK(done == kCases);
}

TEST_CASE("Collet-Eckmann is monotone in the expansion base") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> T(3.5, 4.0), Lc(1.01, 4.0);
    const auto fam = logistic_family();
    for (int i = 0; i < kCases; ++i) {
        const double t = T(rng);
        double a = Lc(rng), b = Lc(rng);
        if (a > b) std::swap(a, b);
        const auto ra = check_collet_eckmann(fam, t, a, 1, 60), rb = check_collet_eckmann(fam, t, b, 1, 60);
        CHECK(ra.worst_ce_margin >= rb.worst_ce_margin);
        if (rb.ce_ok) CHECK(ra.ce_ok);
    }
}

TEST_CASE("admissible M is maximal") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> E(-9.0, -3.0), A(0.0, 1.0);
    const auto fam = logistic_family();
    const Param t0 = 3.9277370017867517;
    const auto orb = critical_orbit(fam, t0, 400);
    for (int i = 0; i < kCases; ++i) {
        const double dt = std::pow(10.0, E(rng)) * (i % 2 ? 1.0 : -1.0);
        const double alpha = A(rng), beta = A(rng);
        const auto pr = admissible_M(orb, Param(t0.hi + dt), 10.0, alpha, beta);
        auto lhs = [&](std::size_t M) { return orb.log_derivs[M] + std::log(std::abs(dt)); };
        auto rhs = [&](std::size_t M) { return -std::log(10.0) - (alpha + beta) * std::log(double(M)); };
        CHECK(lhs(pr.M) <= rhs(pr.M));
        CHECK(lhs(pr.M + 1) > rhs(pr.M + 1));
    }
}

TEST_CASE("Ulam matrices are row-stochastic") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> T(2.8, 4.0);
    std::uniform_int_distribution<std::size_t> N(2, 300);
    for (int i = 0; i < kCases; ++i) {
        const auto P = build_ulam(logistic_family(), T(rng), N(rng));
        for (std::size_t r = 0; r < P.n; ++r) REQUIRE(std::abs(P.row_sum(r) - 1.0) < 1e-12);
        for (double v : P.vals) REQUIRE(v >= 0.0);
    }
}

TEST_CASE("dt_iterate matches finite differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> T(3.0, 3.99), X(0.01, 0.99);
    std::uniform_int_distribution<std::size_t> K(1, 4);
    const auto fam = logistic_family();
    for (int i = 0; i < kCases; ++i) {
        const double t = T(rng), x = X(rng);
        const std::size_t k = K(rng);
        auto iter = [&](double s) {
            double y = x;
            for (std::size_t j = 0; j < k; ++j) y = eval_map(fam, s, y);
            return y;
        };
        const double h = 1e-6;
        const double fd = (iter(t + h) - iter(t - h)) / (2 * h);
        CHECK(dt_iterate(fam, t, x, k).value == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    }
}

TEST_CASE("power-law fits are exact on exact data") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> Ex(0.1, 1.0), C(-3.0, 3.0), X(-9.0, -2.0);
    std::uniform_int_distribution<int> N(5, 20);
    for (int i = 0; i < kCases; ++i) {
        const double a = Ex(rng), c = std::pow(10.0, C(rng));
        const int n = N(rng);
        std::vector<double> x, y;
        for (int j = 0; j < n; ++j) x.push_back(std::pow(10.0, X(rng)));
        x[0] = 1e-9;
        x[1] = 1e-2;
        for (double v : x) y.push_back(c * std::pow(v, a));
        const auto f = fit_power_law(x, y);
        CHECK(f.slope == doctest::Approx(a).epsilon(1e-10));
        CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("perturbed orbits keep one orientation on bound levels") {
    // f_t^k - f^k is single-signed on J_k for k <= M when (t0, t) is admissible
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> E(-8.0, -4.0), U(0.0, 1.0);
    const auto fam = logistic_family();
    const auto t0 = find_misiurewicz_thurston(fam, {3.6, 3.7}, 3, 1);
    TowerOptions o;
    o.K_max = 80;
    const Tower T0 = build_tower(fam, t0.t, o);
    for (int i = 0; i < kCases; ++i) {
        const double dt = std::pow(10.0, E(rng)) * (i % 2 ? 1.0 : -1.0);
        const Param t = Param::from_quad(t0.t.as_quad() + quad(dt));
        const std::size_t M = admissible_M(T0.orbit, t, 10.0, 0.0, 0.0).M;
        const Tower Tt = build_tower_like(T0, t, 2 * M, T0.K_max);
        for (std::size_t k = 1; k <= M; ++k) {
            int pos = 0, neg = 0;
            for (int s = 0; s < 16; ++s) {
                const double u = -T0.r_minus[k] + U(rng) * T0.J_length(k);
                const double d = Tt.X(k, u) - T0.X(k, u);
                pos += d > 0.0;
                neg += d < 0.0;
            }
            CHECK((pos == 0 || neg == 0));
        }
    }
}
