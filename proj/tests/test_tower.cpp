#include <doctest.h>

#include <cmath>

#include <srblab/tower.hpp>

using namespace srblab;

namespace {
Tower full_map_tower(double delta = 0.0, std::size_t K = 30) {
    TowerOptions o;
    o.delta = delta;
    o.K_max = K;
    return build_tower(logistic_family(), 4.0, o);
}
} // namespace

TEST_CASE("H(delta) is non-increasing in delta") {
    std::size_t prev = 1000;
    for (double d : {0.001, 0.002, 0.005, 0.01, 0.02}) {
        const auto T = full_map_tower(d);
        CHECK(T.H_delta <= prev);
        prev = T.H_delta;
    }
}

TEST_CASE("delta too large is rejected") {
    TowerOptions o;
    o.delta = 0.45;
    o.H0 = 6;
    CHECK_THROWS_AS((void)build_tower(logistic_family(), 4.0, o), TowerError);
    o.delta = 0.6;
    CHECK_THROWS_AS((void)build_tower(logistic_family(), 4.0, o), DomainError);
}

TEST_CASE("tower option checks") {
    TowerOptions o;
    o.L = 1.0;
    CHECK_THROWS_AS((void)build_tower(logistic_family(), 4.0, o), std::invalid_argument);
    o = {};
    o.K_max = 2;
    CHECK_THROWS_AS((void)build_tower(logistic_family(), 4.0, o), std::invalid_argument);
}

TEST_CASE("levels are nested around the critical point") {
    const auto T = full_map_tower();
    CHECK(T.r_minus[1] <= T.delta);
    CHECK(T.r_plus[1] <= T.delta);
    for (std::size_t k = 1; k < T.K_max; ++k) {
        CHECK(T.r_minus[k + 1] <= T.r_minus[k]);
        CHECK(T.r_plus[k + 1] <= T.r_plus[k]);
        CHECK(T.J_length(k) > 0.0);
    }
}

TEST_CASE("ground cutoff equals one on the inner half") {
    const auto T = full_map_tower();
    const auto cf = cutoff_family(T);
    for (double s : {-0.5, -0.3, 0.0, 0.2, 0.5}) CHECK(cf.eval(0, s * T.delta) == 1.0);
    CHECK(cf.eval(0, T.delta) == 0.0);
    CHECK(cf.eval(0, -T.delta) == 0.0);
    CHECK(cf.eval(T.K_max, 0.0) == 0.0);
    CHECK(cf.integral(0, -T.delta, T.delta) == doctest::Approx(1.5 * T.delta));
}

TEST_CASE("cutoff partial sets are disjoint") {
    const auto T = full_map_tower();
    const auto cf = cutoff_family(T);
    for (std::size_t k = 0; k + 1 <= T.K_max; ++k) {
        const auto P = cf.partial_set(k);
        if (P.size() == 2) CHECK(P[0].hi <= P[1].lo);
        for (const auto& I : P) CHECK(I.lo < I.hi);
        // xi_k is 1 on J_{k+2} when I_{k+2} is nonempty
        if (k >= 1 && k + 2 <= T.K_max && !T.I_empty(k + 2)) {
            CHECK(cf.eval(k, 0.999 * T.r_plus[k + 2]) == 1.0);
            CHECK(cf.eval(k, -0.999 * T.r_minus[k + 2]) == 1.0);
        }
    }
}

TEST_CASE("cutoff derivatives are bounded") {
    const auto T = full_map_tower();
    const auto cf = cutoff_family(T);
    const auto B = cutoff_derivative_bounds(T, cf);
    for (double c : B.C) {
        CHECK(std::isfinite(c));
        CHECK(c > 0.0);
    }
}

TEST_CASE("bound and free times") {
    const auto T = full_map_tower();
    // the critical point is bound forever at once
    auto b = bound_free_times(T, 0.5, 50);
    REQUIRE(b.T.size() == 1);
    CHECK(b.T[0] == 0);
    CHECK(b.hit_c);
    // the repelling fixed point 0 never approaches c
    b = bound_free_times(T, 0.0, 50);
    CHECK(b.T.empty());
    // generic point: each bound period ends after it starts
    b = bound_free_times(T, 0.123456, 500);
    CHECK_FALSE(b.T.empty());
    for (std::size_t i = 0; i < b.S.size(); ++i) CHECK(b.S[i] > b.T[i]);
    for (std::size_t i = 1; i < b.T.size(); ++i) CHECK(b.T[i] >= b.S[i - 1]);
}

TEST_CASE("distortion stays below the predicted bound") {
    const auto T = full_map_tower();
    for (std::size_t j : {1u, 5u, 10u, 20u}) {
        const auto d = verify_distortion(T, j, 500);
        CHECK(d.max_log_ratio <= d.predicted_log_bound + 1e-12);
    }
    CHECK_THROWS_AS((void)verify_distortion(T, 0, 10), std::invalid_argument);
}

TEST_CASE("key estimate at the full map") {
    for (std::size_t j : {1u, 2u, 10u}) {
        const auto k = key_estimate_check(logistic_family(), 4.0, j, 60);
        CHECK(k.partial_sum + k.tail == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        CHECK_FALSE(k.diverging);
        CHECK(k.margin > 0.0);
    }
}

TEST_CASE("key estimate flags a superstable orbit") {
    const auto k = key_estimate_check(logistic_family(), 2.0, 1, 10);
    CHECK(k.diverging);
}

TEST_CASE("build_tower_like copies the reference levels") {
    TowerOptions o;
    o.K_max = 40;
    const auto fam = logistic_family();
    const auto T0 = build_tower(fam, 3.9277370017867517, o);
    const auto T1 = build_tower_like(T0, 3.9277370017867517 + 1e-7, 10, 40);
    CHECK(T1.inherited == 10);
    CHECK(T1.delta == T0.delta);
    for (std::size_t k = 1; k <= 10; ++k) {
        CHECK(T1.r_minus[k] == T0.r_minus[k]);
        CHECK(T1.r_plus[k] == T0.r_plus[k]);
    }
}
