#include <doctest.h>

#include <cmath>
#include <numbers>

#include <srblab/srb_estimate.hpp>

using namespace srblab;

namespace {
double l1_to_arcsine(std::size_t n) {
    const auto d = ulam_density(logistic_family(), 4.0, n);
    const auto ref = arcsine_bin_masses(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(d.masses[i] - ref[i]);
    return s;
}
} // namespace

TEST_CASE("Birkhoff average of a constant") {
    const auto r = birkhoff_average(logistic_family(), 3.8, [](double) { return 1.0; }, 100000, 0.3);
    CHECK(r.mean == 1.0);
    CHECK(r.stderr_ == 0.0);
}

TEST_CASE("Birkhoff average at an attracting fixed point") {
    const auto r = birkhoff_average(logistic_family(), 2.5, [](double x) { return x; }, 100000, 0.3);
    CHECK(r.mean == doctest::Approx(0.6).epsilon(1e-6));
}

TEST_CASE("Birkhoff average of x at t=4") {
    BirkhoffOptions o;
    o.chains = 4;
    const auto r = birkhoff_average(logistic_family(), 4.0, [](double x) { return x; }, 4000000, 0.3, o);
    CHECK(r.mean == doctest::Approx(0.5).epsilon(0.01));
    CHECK(r.stderr_ > 0.0);
    CHECK(std::abs(r.mean - 0.5) < 5.0 * r.stderr_ + 1e-3);
}

TEST_CASE("Birkhoff argument checks") {
    const auto fam = logistic_family();
    auto A = [](double x) { return x; };
    CHECK_THROWS_AS((void)birkhoff_average(fam, 4.0, A, 100, 0.3), std::invalid_argument);
    CHECK_THROWS_AS((void)birkhoff_average(fam, 4.0, A, 100000, 0.0), DomainError);
    CHECK_THROWS_AS((void)birkhoff_average(fam, 4.5, A, 100000, 0.3), DomainError);
}

TEST_CASE("Lyapunov exponents") {
    CHECK(lyapunov(logistic_family(), 4.0, 1000000, 0.3).value == doctest::Approx(std::log(2.0)).epsilon(5e-3));
    CHECK(lyapunov(logistic_family(), 2.5, 100000, 0.3).value == doctest::Approx(std::log(0.5)).epsilon(1e-9));
}

TEST_CASE("Ulam rows are stochastic") {
    for (double t : {2.5, 3.3, 3.83, 4.0}) {
        const auto P = build_ulam(logistic_family(), t, 1000);
        for (std::size_t i = 0; i < P.n; ++i) CHECK(std::abs(P.row_sum(i) - 1.0) < 1e-12);
    }
}

TEST_CASE("Ulam with two bins at t=4") {
    // f maps [0,1/2] onto [0,1]; the left half of the bin is sent to the left bin
    const auto P = build_ulam(logistic_family(), 4.0, 2);
    const double a = 0.5 - std::sqrt(0.125);  // f(a) = 1/2
    CHECK(P.at(0, 0) == doctest::Approx(2.0 * a));
    CHECK(P.at(0, 1) == doctest::Approx(1.0 - 2.0 * a));
    CHECK(P.at(1, 0) == doctest::Approx(2.0 * a));
    CHECK_THROWS_AS((void)build_ulam(logistic_family(), 4.0, 1), std::invalid_argument);
}

TEST_CASE("Ulam density approaches the arcsine law") {
    const double e1 = l1_to_arcsine(1024);
    const double e2 = l1_to_arcsine(2048);
    CHECK(e1 < 0.05);
    CHECK(e2 < e1);
    CHECK(e2 / e1 == doctest::Approx(0.5).epsilon(0.3));
}

TEST_CASE("Ulam mean at t=4") {
    const auto d = ulam_density(logistic_family(), 4.0, 4096);
    CHECK(integrate_observable(d, [](double x) { return x; }) == doctest::Approx(0.5).epsilon(0.004));
}

TEST_CASE("stationary density of a permutation is uniform") {
    UlamMatrix P;
    P.n = 4;
    P.row_ptr = {0, 1, 2, 3, 4};
    P.cols = {1, 2, 3, 0};
    P.vals = {1.0, 1.0, 1.0, 1.0};
    const auto d = stationary_density(P);
    for (double m : d.masses) CHECK(m == doctest::Approx(0.25));
}

TEST_CASE("Ulam density concentrates at an attracting fixed point") {
    const auto d = ulam_density(logistic_family(), 2.5, 500);
    const std::size_t i = std::size_t(0.6 * 500);
    CHECK(d.masses[i] + d.masses[i - 1] > 0.99);
}

TEST_CASE("integrate_observable") {
    BinnedDensity d;
    d.bins = 4;
    d.masses = {0.25, 0.25, 0.25, 0.25};
    CHECK(integrate_observable(d, [](double) { return 2.0; }) == doctest::Approx(2.0));
    CHECK(integrate_observable(d, [](double x) { return x; }) == doctest::Approx(0.5));
    d.masses = {0.0, 1.0, 0.0, 0.0};
    CHECK(integrate_observable(d, [](double x) { return x; }) == doctest::Approx(0.375));
}

TEST_CASE("arcsine bin masses sum to one") {
    const auto m = arcsine_bin_masses(64);
    double s = 0.0;
    for (double v : m) s += v;
    CHECK(s == doctest::Approx(1.0));
    CHECK(m.front() == doctest::Approx(2.0 / std::numbers::pi * std::asin(std::sqrt(1.0 / 64))));
}
