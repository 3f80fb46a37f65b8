#include <doctest.h>

#include <cmath>

#include <srblab/map_family.hpp>

using namespace srblab;

TEST_CASE("eval_map on the logistic family") {
    const auto fam = logistic_family();
    CHECK(eval_map(fam, 4.0, 0.5) == 1.0);
    CHECK(eval_map(fam, 3.5, 0.0) == 0.0);
    CHECK(eval_map(fam, 2.0, 0.5) == 0.5);
    CHECK_THROWS_AS((void)eval_map(fam, 7.0, 0.5), DomainError);
    CHECK_THROWS_AS((void)eval_map(fam, 4.0, 1.5), DomainError);
}

TEST_CASE("critical orbit at t=4 lands on the fixed point 0") {
    const auto fam = logistic_family();
    const auto orb = critical_orbit(fam, 4.0, 3);
    REQUIRE(orb.size() == 4);
    CHECK(orb.points[0] == 0.5);
    CHECK(orb.points[1] == 1.0);
    CHECK(orb.points[2] == 0.0);
    CHECK(orb.points[3] == 0.0);
    CHECK_FALSE(orb.zero_derivative);
    // f'(1) = -4, f'(0) = 4
    for (std::size_t k = 1; k <= 3; ++k) CHECK(orb.log_derivs[k] == doctest::Approx(double(k) * std::log(4.0)));
    CHECK(orb.signs[1] == -1);
}

TEST_CASE("superstable critical orbit reports a vanishing derivative") {
    const auto fam = logistic_family();
    const auto orb = critical_orbit(fam, 2.0, 4);
    CHECK(orb.points[1] == 0.5);
    CHECK(orb.zero_derivative);
    CHECK(orb.first_zero == 1);
    CHECK(orb.log_derivs[1] == kNegInf);
}

TEST_CASE("critical_orbit rejects N = 0") {
    CHECK_THROWS_AS((void)critical_orbit(logistic_family(), 4.0, 0), std::invalid_argument);
}

TEST_CASE("log_deriv_along") {
    const auto fam = logistic_family();
    auto d = log_deriv_along(fam, 4.0, 1.0, 5);
    CHECK(d.value.log_mag == doctest::Approx(5.0 * std::log(4.0)));
    CHECK(d.value.sign == -1);
    CHECK_FALSE(d.zero_flag);

    d = log_deriv_along(fam, 4.0, 0.3, 0);
    CHECK(d.value.log_mag == 0.0);
    CHECK(d.value.sign == 1);

    d = log_deriv_along(fam, 4.0, 0.5, 1);
    CHECK(d.value.is_zero());
    CHECK(d.zero_flag);
}

TEST_CASE("dt_iterate") {
    const auto fam = logistic_family();
    CHECK(dt_iterate(fam, 4.0, 0.5, 1).value == doctest::Approx(0.25));
    CHECK_THROWS_AS((void)dt_iterate(fam, 4.0, 0.5, 0), std::invalid_argument);

    // centred finite difference of f_t^3(0.3)
    auto iter = [&](double t) {
        double x = 0.3;
        for (int i = 0; i < 3; ++i) x = eval_map(fam, t, x);
        return x;
    };
    const double h = 1e-6;
    const double fd = (iter(3.7 + h) - iter(3.7 - h)) / (2 * h);
    CHECK(dt_iterate(fam, 3.7, 0.3, 3).value == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("dt_iterate switches to log form on overflow") {
    const auto fam = logistic_family();
    const auto d = dt_iterate(fam, 4.0, 0.3, 2000, 1e10);
    CHECK(d.overflow);
    CHECK(std::isfinite(d.log_value.log_mag));
    CHECK(d.log_value.log_mag > 100.0);
}

TEST_CASE("transversality sum at t=4") {
    // c_j = 0 for j >= 2 so only the j = 0, 1 terms survive: 1/4 + 0
    const auto J = transversality_sum(logistic_family(), 4.0, 40);
    CHECK(J.ok);
    CHECK(J.partial == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(J.tail_bound == 0.0);
}

TEST_CASE("transversality sum fails on a superstable parameter") {
    const auto J = transversality_sum(logistic_family(), 2.0, 10);
    CHECK_FALSE(J.ok);
}

TEST_CASE("Param keeps the low word") {
    const Param a(1.0, 1e-20);
    const Param b(1.0);
    CHECK(a.minus(b) == doctest::Approx(1e-20));
    const Param c = Param::from_quad(a.as_quad());
    CHECK(c.hi == 1.0);
    CHECK(c.lo == doctest::Approx(1e-20).epsilon(1e-12));
}
