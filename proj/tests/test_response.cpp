#include <doctest.h>

#include <cmath>

#include <srblab/response.hpp>

using namespace srblab;

namespace {
std::vector<double> logspace(double a, double b, std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(10.0, a + (b - a) * double(i) / double(n - 1));
    return x;
}

TowerResponseBase small_base(const Observable& A) {
    TransferOptions to;
    to.ground_cells = 1024;
    to.level_cells = 64;
    return tower_response_base(logistic_family(), 4.0, 36, to, A);
}
} // namespace

TEST_CASE("A_D shape") {
    const auto A = observable_AD(0.3, 0.05);
    CHECK(A(0.3) == doctest::Approx(0.8));
    CHECK(A.peak() == doctest::Approx(0.8));
    CHECK(A(0.25) == doctest::Approx(0.0));
    CHECK(A(0.35) == doctest::Approx(0.0));
    CHECK(A(0.2499) == 0.0);
    CHECK(A(0.3501) == 0.0);
    CHECK(A(0.1) == 0.0);
    CHECK(A(0.275) == doctest::Approx(0.4));
    CHECK(A(0.325) == doctest::Approx(0.4));
    double slope = 0.0;
    for (int i = 1; i < 2000; ++i) slope = std::max(slope, std::abs(A.deriv(0.25 + 0.1 * i / 2000.0)));
    CHECK(slope == doctest::Approx(1.0 / 0.05).epsilon(1e-9));
}

TEST_CASE("A_D derivative matches finite differences") {
    const auto A = observable_AD(0.5, 0.02);
    for (double x : {0.485, 0.49, 0.4999, 0.503, 0.516}) {
        const double h = 1e-7;
        CHECK(A.deriv(x) == doctest::Approx((A(x + h) - A(x - h)) / (2 * h)).epsilon(1e-5));
    }
}

TEST_CASE("A_D norms") {
    for (double D : {0.05, 0.01, 0.002}) {
        const auto A = observable_AD(0.5, D);
        CHECK(A.lq_norm(1.0) <= 2.0 * D);
        for (double q : {2.0, 4.0}) CHECK(A.lq_norm(q) <= std::pow(2.0 * D, 1.0 / q));
    }
    // plateau of height 0.8 on 0.8 D of each side plus symmetric ramps
    CHECK(observable_AD(0.5, 0.05).lq_norm(1.0) == doctest::Approx(0.04).epsilon(1e-9));
}

TEST_CASE("A_D argument checks") {
    CHECK_THROWS_AS((void)observable_AD(0.02, 0.05), DomainError);
    CHECK_THROWS_AS((void)observable_AD(0.98, 0.05), DomainError);
    CHECK_THROWS_AS((void)observable_AD(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)observable_AD(0.5, 0.05, 0.7), std::invalid_argument);
    CHECK_THROWS_AS((void)observable_AD(0.5, 0.05).lq_norm(0.5), std::invalid_argument);
}

TEST_CASE("estimator names round-trip") {
    for (auto e : {Estimator::birkhoff, Estimator::ulam, Estimator::both, Estimator::tower})
        CHECK(estimator_from_string(to_string(e)) == e);
    CHECK_THROWS_AS((void)estimator_from_string("mcmc"), std::invalid_argument);
}

TEST_CASE("exact square-root law") {
    const auto x = logspace(-8, -3, 12);
    std::vector<double> y;
    for (double v : x) y.push_back(std::sqrt(v));
    const auto f = fit_power_law(x, y);
    CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.decades == doctest::Approx(5.0));
    CHECK(f.ci_lo <= f.slope);
    CHECK(f.ci_hi >= f.slope);
}

TEST_CASE("linear law with a fifth-power log correction") {
    // d log y / d log x = 1 - 5/|log x| runs from 0.28 to 0.73 on this range;
    // 12 log-spaced points give 0.58381887 (numpy polyfit).
    const auto x = logspace(-8, -3, 12);
    std::vector<double> y;
    for (double v : x) y.push_back(v * std::pow(std::abs(std::log(v)), 5));
    const auto f = fit_power_law(x, y);
    CHECK(f.slope == doctest::Approx(0.58381887).epsilon(1e-7));
    CHECK(f.r2 < 1.0);
}

TEST_CASE("fit rejects short or narrow data") {
    CHECK_THROWS_AS((void)fit_power_law({1e-5, 1e-4, 1e-3, 1e-2}, {1, 2, 3, 4}), FitError);
    CHECK_THROWS_AS((void)fit_power_law({1e-5, 2e-5, 4e-5, 8e-5, 1e-4}, {1, 2, 3, 4, 5}), FitError);
    CHECK_THROWS_AS((void)fit_power_law({1e-5, 1e-4, 1e-3, 1e-2, 1e-1}, {1, 2, 3, 0, 5}), std::invalid_argument);
}

TEST_CASE("fit_holder_exponent drops noisy and excluded rows") {
    ResponseCurve c;
    for (double x : logspace(-8, -3, 8)) {
        ResponseRow r;
        r.abs_dt = x;
        r.deltaR = std::sqrt(x);
        c.rows.push_back(r);
    }
    c.rows[0].stderr_ = c.rows[0].deltaR;  // below 3 sigma
    c.rows[1].excluded = true;
    const auto f = fit_holder_exponent(c);
    CHECK(f.n == 6);
    CHECK_FALSE(c.rows[0].used_in_fit);
    CHECK_FALSE(c.rows[1].used_in_fit);
    CHECK(c.rows[2].used_in_fit);
    CHECK(f.slope == doctest::Approx(0.5));
}

TEST_CASE("ulam response vanishes at t0") {
    ResponseOptions o;
    o.estimator = Estimator::ulam;
    o.ulam_bins = 512;
    const auto A = observable_AD(0.3, 0.05);
    const auto c = response_curve(logistic_family(), 3.9, {{3.9, 0}, {3.91, 0}}, A.function(), o);
    REQUIRE(c.rows.size() == 2);
    CHECK(c.rows[0].deltaR == 0.0);
    CHECK(c.rows[1].deltaR != 0.0);
    CHECK_FALSE(c.fit.has_value());
    CHECK_FALSE(c.fit_error.empty());
}

TEST_CASE("tower response and spike vanish at t0") {
    const auto A = observable_AD(0.3, 0.05).function();
    const auto base = small_base(A);
    const auto op = perturbed_operator(base, 4.0, 8);
    CHECK(levels_shared(*base.op, op, 16));
    const auto phi = truncate(base.ep.phi, 8);
    CHECK(spike_displacement(*base.op, op, phi, A) == 0.0);
    ResponseOptions o;
    o.transfer = base.op->options();
    o.grid_error = false;
    const auto c = response_curve(logistic_family(), 4.0, {{4.0, 8}}, A, o);
    CHECK(c.rows[0].deltaR == 0.0);
    CHECK(c.R0 == doctest::Approx(base.R0));
}

TEST_CASE("tower spike needs shared levels") {
    const auto A = observable_AD(0.3, 0.05).function();
    const auto base = small_base(A);
    const auto op = perturbed_operator(base, 4.0 - 1e-6, 8);
    CHECK(levels_shared(*base.op, op, 16));
    CHECK_FALSE(levels_shared(*base.op, op, 17));
    CHECK_THROWS_AS((void)spike_displacement(*base.op, op, base.ep.phi, A), NotShared);
    const auto lv = spike_levels(*base.op, op, truncate(base.ep.phi, 8), A);
    CHECK(lv.size() == 9);
    double s = 0.0;
    for (const auto& l : lv) s += l.contribution;
    CHECK(s == doctest::Approx(spike_displacement(*base.op, op, truncate(base.ep.phi, 8), A)).epsilon(1e-12));
}

TEST_CASE("the three brackets telescope") {
    const auto A = observable_AD(0.3, 0.05).function();
    const auto base = small_base(A);
    const auto op = perturbed_operator(base, 4.0 - 1e-6, 8);
    const auto ep = leading_eigenpair(op, op.K());
    const auto d = decomposition_report(*base.op, base.ep, op, ep, 16, A);
    CHECK(d.residual < 1e-12);
    CHECK(d.direct == doctest::Approx(op.pair(A, ep.phi) - base.R0).epsilon(1e-12));
    CHECK_THROWS_AS((void)decomposition_report(*base.op, base.ep, op, ep, 17, A), NotShared);
}

TEST_CASE("response curve JSON carries the fit") {
    ResponseCurve c;
    for (double x : logspace(-8, -3, 6)) {
        ResponseRow r;
        r.abs_dt = x;
        r.dt = x;
        r.deltaR = std::sqrt(x);
        c.rows.push_back(r);
    }
    c.fit = fit_holder_exponent(c);
    const auto j = response_curve_to_json(c);
    CHECK(j.at("fit").at("slope").get<double>() == doctest::Approx(0.5));
    CHECK(j.at("rows").size() == 6);
}
