#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace srblab {

using quad = boost::multiprecision::cpp_bin_float_quad;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Neumaier variant of Kahan summation.
class KahanSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    KahanSum& operator+=(double v) { add(v); return *this; }
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// A real number stored as sign * exp(log_mag). log_mag == -inf encodes zero.
struct LogValue {
    double log_mag = 0.0;
    int sign = 1;

    [[nodiscard]] bool is_zero() const { return log_mag == kNegInf; }
    [[nodiscard]] double value() const { return is_zero() ? 0.0 : sign * std::exp(log_mag); }

    static LogValue from(double v) {
        if (v == 0.0) return {kNegInf, 1};
        return {std::log(std::abs(v)), v < 0 ? -1 : 1};
    }
    LogValue& operator*=(double v) {
        if (v == 0.0) { log_mag = kNegInf; sign = 1; return *this; }
        if (!is_zero()) log_mag += std::log(std::abs(v));
        if (v < 0) sign = -sign;
        return *this;
    }
};

// ---------------------------------------------------------------------------
// Order-7 smoothstep, C^3 at both ends.

inline double smoothstep7(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double x2 = x * x;
    return x2 * x2 * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x)));
}

inline double smoothstep7_deriv(double x, int order = 1) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    switch (order) {
    case 1: return 140.0 * x * x * x * std::pow(1.0 - x, 3);
    case 2: return 420.0 * x * x * std::pow(1.0 - x, 2) * (1.0 - 2.0 * x);
    case 3: return 840.0 * x * (1.0 - x) * (1.0 - 5.0 * x + 5.0 * x * x);
    default: throw std::invalid_argument("smoothstep7_deriv: order must be 1..3");
    }
}

// Antiderivative of smoothstep7, zero at 0; equals x - 1/2 for x >= 1.
inline double smoothstep7_integral(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return x - 0.5;
    double x5 = x * x * x * x * x;
    return x5 * (7.0 + x * (-14.0 + x * (10.0 - 2.5 * x)));
}

// ---------------------------------------------------------------------------
// Gauss-Legendre rule on [0,1].

template <std::size_t N>
struct GaussRule {
    std::array<double, N> x{};
    std::array<double, N> w{};
};

inline const GaussRule<4>& gauss4() {
    static const GaussRule<4> rule = [] {
        GaussRule<4> r;
        const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
        const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
        const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
        const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
        const double nodes[4] = {-b, -a, a, b};
        const double weights[4] = {wb, wa, wa, wb};
        for (int i = 0; i < 4; ++i) {
            r.x[i] = 0.5 * (nodes[i] + 1.0);
            r.w[i] = 0.5 * weights[i];
        }
        return r;
    }();
    return rule;
}

// ---------------------------------------------------------------------------
// Least squares y = slope * x + intercept.

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_stderr = 0.0;
    std::size_t n = 0;
};

inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need at least two paired points");
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LinearFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.slope * x[i] + f.intercept);
        sse += r * r;
    }
    f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    f.slope_stderr = n > 2 ? std::sqrt(sse / double(n - 2) / sxx) : 0.0;
    return f;
}

// Two-sided Student t quantile at 97.5% for the slope confidence interval.
inline double student_t975(std::size_t dof) {
    static const double table[] = {0,      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                                   2.306,  2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131,
                                   2.120,  2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069,
                                   2.064,  2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
    if (dof == 0) return std::numeric_limits<double>::infinity();
    if (dof <= 30) return table[dof];
    return 1.96 + 2.4 / double(dof);
}

// ---------------------------------------------------------------------------

// Bisection for a sign change of g on [a, b]; g(a) and g(b) must differ in sign.
template <class G>
double bisect(G&& g, double a, double b, double ga, int max_iter = 200) {
    for (int i = 0; i < max_iter; ++i) {
        double m = 0.5 * (a + b);
        if (m <= std::min(a, b) || m >= std::max(a, b)) break;
        double gm = g(m);
        if (gm == 0.0) return m;
        if ((gm < 0) == (ga < 0)) { a = m; ga = gm; }
        else b = m;
    }
    return 0.5 * (a + b);
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) { v[0] = a; return v; }
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * double(i) / double(n - 1);
    return v;
}

} // namespace srblab
