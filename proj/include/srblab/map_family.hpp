#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "numeric.hpp"

namespace srblab {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    [[nodiscard]] bool contains(double v) const { return v >= lo && v <= hi; }
    [[nodiscard]] double length() const { return hi - lo; }
};

// One-parameter family of unimodal maps of [0,1] with a fixed critical point c.
// The closures eval/dx/dxx/dt are mandatory. The optional ones let a family
// supply higher-accuracy kernels; generic fallbacks are used otherwise.
struct MapFamily {
    std::string name;
    double c = 0.5;
    Interval param_range{0.0, 0.0};

    std::function<double(double, double)> eval;
    std::function<double(double, double)> dx;
    std::function<double(double, double)> dxx;
    std::function<double(double, double)> dt;

    // X_t with dt(t, x) = X_t(f_t(x)).
    std::function<double(double, double)> vector_field;
    // f_t in extended precision, used for critical orbits and MT root finding.
    std::function<quad(const quad&, const quad&)> eval_quad;
    // f_t(x + e) - f_t(x) without cancellation.
    std::function<double(double, double, double)> diff_exact;
    // f_t'(x + e) when x + e cannot be formed without losing e.
    std::function<double(double, double, double)> dx_shift_exact;

    [[nodiscard]] double diff(double t, double x, double e) const {
        if (diff_exact) return diff_exact(t, x, e);
        if (std::abs(e) < 1e-5) return dx(t, x) * e + 0.5 * dxx(t, x) * e * e;
        return eval(t, x + e) - eval(t, x);
    }
    [[nodiscard]] double dx_shift(double t, double x, double e) const {
        if (dx_shift_exact) return dx_shift_exact(t, x, e);
        if (x + e == x) return dx(t, x) + dxx(t, x) * e;
        return dx(t, x + e);
    }
    [[nodiscard]] quad eval_q(const quad& t, const quad& x) const {
        if (eval_quad) return eval_quad(t, x);
        return quad(eval(static_cast<double>(t), static_cast<double>(x)));
    }
    [[nodiscard]] bool has_quad() const { return static_cast<bool>(eval_quad); }
};

// f_t(x) = t x (1 - x), t in [1, 4].
inline MapFamily logistic_family() {
    MapFamily f;
    f.name = "logistic";
    f.c = 0.5;
    f.param_range = {1.0, 4.0};
    f.eval = [](double t, double x) { return t * x * (1.0 - x); };
    f.dx = [](double t, double x) { return t * (1.0 - 2.0 * x); };
    f.dxx = [](double t, double) { return -2.0 * t; };
    f.dt = [](double, double x) { return x * (1.0 - x); };
    f.vector_field = [](double t, double x) { return x / t; };
    f.eval_quad = [](const quad& t, const quad& x) { return t * x * (1 - x); };
    f.diff_exact = [](double t, double x, double e) { return t * e * ((1.0 - 2.0 * x) - e); };
    f.dx_shift_exact = [](double t, double x, double e) { return t * ((1.0 - 2.0 * x) - 2.0 * e); };
    return f;
}

inline MapFamily custom_family(std::string name, double c, Interval range,
                               std::function<double(double, double)> eval,
                               std::function<double(double, double)> dx,
                               std::function<double(double, double)> dxx,
                               std::function<double(double, double)> dt) {
    if (!(c > 0.0 && c < 1.0)) throw DomainError("custom_family: critical point must lie in (0,1)");
    MapFamily f;
    f.name = std::move(name);
    f.c = c;
    f.param_range = range;
    f.eval = std::move(eval);
    f.dx = std::move(dx);
    f.dxx = std::move(dxx);
    f.dt = std::move(dt);
    return f;
}

inline void check_param(const MapFamily& fam, double t) {
    if (!fam.param_range.contains(t)) {
        std::ostringstream os;
        os << "parameter t=" << t << " outside [" << fam.param_range.lo << ", " << fam.param_range.hi << "]";
        throw DomainError(os.str());
    }
}

inline void check_point(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        std::ostringstream os;
        os << "point x=" << x << " outside [0,1]";
        throw DomainError(os.str());
    }
}

[[nodiscard]] inline double eval_map(const MapFamily& fam, double t, double x) {
    check_param(fam, t);
    check_point(x);
    return fam.eval(t, x);
}

// ---------------------------------------------------------------------------
// Parameters known beyond double precision are carried as hi + lo.

struct Param {
    double hi = 0.0;
    double lo = 0.0;

    Param() = default;
    Param(double h) : hi(h) {}  // NOLINT(google-explicit-constructor)
    Param(double h, double l) : hi(h), lo(l) {}
    static Param from_quad(const quad& q) {
        double h = static_cast<double>(q);
        double l = static_cast<double>(q - quad(h));
        return {h, l};
    }
    [[nodiscard]] quad as_quad() const { return quad(hi) + quad(lo); }
    // (this - other) without losing the low parts.
    [[nodiscard]] double minus(const Param& o) const {
        return static_cast<double>(as_quad() - o.as_quad());
    }
};

struct CriticalOrbit {
    Param t;
    std::vector<double> points;      // c_k, k = 0..N
    std::vector<double> offsets;     // c_k - c computed before rounding
    std::vector<double> log_derivs;  // log|(f^k)'(c_1)|, k = 0..N, entry 0 is 0
    std::vector<int> signs;          // sign of (f^k)'(c_1)
    bool zero_derivative = false;    // some factor vanished exactly
    std::size_t first_zero = 0;      // first k with log_derivs[k] = -inf

    [[nodiscard]] std::size_t size() const { return points.size(); }
    [[nodiscard]] LogValue deriv(std::size_t k) const { return {log_derivs.at(k), signs.at(k)}; }
};

// Critical orbit c_k = f_t^k(c) for k = 0..N. Points are iterated in extended
// precision when the family supplies it, so long orbits of MT parameters stay
// on their periodic cycle.
inline CriticalOrbit critical_orbit(const MapFamily& fam, const Param& t, std::size_t N) {
    if (N < 1) throw std::invalid_argument("critical_orbit: N must be >= 1");
    check_param(fam, t.hi);
    CriticalOrbit orb;
    orb.t = t;
    orb.points.resize(N + 1);
    orb.offsets.resize(N + 1);
    if (fam.has_quad()) {
        const quad tq = t.as_quad();
        const quad cq = fam.c;
        quad x = cq;
        for (std::size_t k = 0; k <= N; ++k) {
            orb.points[k] = static_cast<double>(x);
            orb.offsets[k] = static_cast<double>(x - cq);
            if (k < N) x = fam.eval_q(tq, x);
        }
    } else {
        double x = fam.c;
        for (std::size_t k = 0; k <= N; ++k) {
            orb.points[k] = x;
            orb.offsets[k] = x - fam.c;
            if (k < N) x = fam.eval(t.hi, x);
        }
    }
    orb.log_derivs.assign(N + 1, 0.0);
    orb.signs.assign(N + 1, 1);
    LogValue acc;
    for (std::size_t k = 1; k <= N; ++k) {
        acc *= fam.dx_shift(t.hi, fam.c, orb.offsets[k]);
        orb.log_derivs[k] = acc.log_mag;
        orb.signs[k] = acc.sign;
        if (acc.is_zero() && !orb.zero_derivative) {
            orb.zero_derivative = true;
            orb.first_zero = k;
        }
    }
    return orb;
}

inline CriticalOrbit critical_orbit(const MapFamily& fam, double t, std::size_t N) {
    return critical_orbit(fam, Param(t), N);
}

struct LogDeriv {
    LogValue value;
    bool zero_flag = false;
};

// (f_t^n)'(x) in (log-magnitude, sign) form.
[[nodiscard]] inline LogDeriv log_deriv_along(const MapFamily& fam, double t, double x, std::size_t n) {
    check_param(fam, t);
    check_point(x);
    LogDeriv out;
    for (std::size_t j = 0; j < n; ++j) {
        out.value *= fam.dx(t, x);
        if (out.value.is_zero()) { out.zero_flag = true; return out; }
        x = fam.eval(t, x);
    }
    return out;
}

struct DtIterate {
    double value = 0.0;      // valid unless overflow
    LogValue log_value;      // always valid
    bool overflow = false;   // |value| exceeded the cap
};

// d/dt f_t^k(x) via the recursion D_k = f'(x_{k-1}) D_{k-1} + (d_t f)(x_{k-1}),
// carried as an unevaluated sum (s + e) so the low-order part is propagated.
[[nodiscard]] inline DtIterate dt_iterate(const MapFamily& fam, double t, double x, std::size_t k,
                                          double cap = 1e300) {
    if (k < 1) throw std::invalid_argument("dt_iterate: k must be >= 1");
    check_param(fam, t);
    check_point(x);
    double s = 0.0, e = 0.0;
    double log_scale = 0.0;  // value = (s + e) * exp(log_scale)
    for (std::size_t j = 0; j < k; ++j) {
        const double d = fam.dx(t, x);
        s *= d;
        e *= d;
        const double add = fam.dt(t, x) * std::exp(-log_scale);
        double sum = s + add;
        double bp = sum - s;
        e += (s - (sum - bp)) + (add - bp);
        s = sum;
        if (std::abs(s) > cap) {
            const double sc = std::log(std::abs(s));
            s /= std::abs(s);
            e *= std::exp(-sc);
            log_scale += sc;
        }
        x = fam.eval(t, x);
    }
    DtIterate out;
    const double v = s + e;
    out.log_value = LogValue::from(v);
    if (!out.log_value.is_zero()) out.log_value.log_mag += log_scale;
    out.overflow = log_scale > 0.0;
    out.value = out.overflow ? (v < 0 ? -HUGE_VAL : HUGE_VAL) : v;
    return out;
}

struct TransversalitySum {
    double partial = 0.0;
    double tail_bound = 0.0;
    bool ok = true;        // false when (f^j)'(c_1) vanished
    std::size_t terms = 0;
};

// J = sum_{j>=0} d_t f(c_j) / (f^j)'(c_1); the tail bound uses the derivative
// growth observed over the second half of the computed terms.
[[nodiscard]] inline TransversalitySum transversality_sum(const MapFamily& fam, const Param& t1,
                                                          std::size_t n_terms) {
    if (n_terms < 1) throw std::invalid_argument("transversality_sum: n_terms must be >= 1");
    const CriticalOrbit orb = critical_orbit(fam, t1, n_terms);
    TransversalitySum out;
    out.terms = n_terms;
    KahanSum sum;
    double recent_max = 0.0;
    const std::size_t half = n_terms / 2;
    for (std::size_t j = 0; j < n_terms; ++j) {
        if (orb.log_derivs[j] == kNegInf) {
            out.ok = false;
            out.partial = std::numeric_limits<double>::quiet_NaN();
            out.tail_bound = std::numeric_limits<double>::infinity();
            return out;
        }
        const double num = fam.dt(t1.hi, orb.points[j]);
        const double term = num == 0.0 ? 0.0 : orb.signs[j] * num * std::exp(-orb.log_derivs[j]);
        sum += term;
        if (j >= half) recent_max = std::max(recent_max, std::abs(num));
    }
    out.partial = sum.value();
    if (recent_max == 0.0) {
        out.tail_bound = 0.0;
    } else if (n_terms >= 3 && n_terms - 1 > half) {
        const double rate = (orb.log_derivs[n_terms - 1] - orb.log_derivs[half]) / double(n_terms - 1 - half);
        if (rate > 0.0) {
            const double first = std::exp(-orb.log_derivs[n_terms - 1] - rate);
            out.tail_bound = recent_max * first / (1.0 - std::exp(-rate));
        } else {
            out.tail_bound = std::numeric_limits<double>::infinity();
        }
    } else {
        out.tail_bound = std::numeric_limits<double>::infinity();
    }
    return out;
}

inline TransversalitySum transversality_sum(const MapFamily& fam, double t1, std::size_t n_terms) {
    return transversality_sum(fam, Param(t1), n_terms);
}

} // namespace srblab
