#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "map_family.hpp"

namespace srblab {

// ---------------------------------------------------------------------------
// Goodness checks

struct GoodnessReport {
    double lambda_c = 0.0;
    std::size_t H0 = 1;
    double alpha = 0.0;
    std::size_t horizon = 0;

    bool ce_checked = false;
    bool ce_ok = false;
    bool superstable = false;
    double worst_ce_margin = 0.0;
    std::size_t worst_ce_k = 0;

    bool rec_checked = false;
    bool recurrence_ok = false;
    double worst_rec_margin = 0.0;
    std::size_t worst_rec_k = 0;
    double worst_distance = 0.0;  // min |c_k - c| over the window
};

// log|(f^k)'(c_1)| >= k log(lambda_c) for H0 <= k <= N, up to `tol` absorbing
// the rounding of the accumulated logarithms (t = 4 has margin exactly 0).
[[nodiscard]] inline GoodnessReport check_collet_eckmann(const MapFamily& fam, const Param& t, double lambda_c,
                                                         std::size_t H0, std::size_t N, double tol = 1e-12) {
    if (!(lambda_c > 1.0)) throw std::invalid_argument("check_collet_eckmann: lambda_c must exceed 1");
    if (H0 < 1 || H0 > N) throw std::invalid_argument("check_collet_eckmann: need 1 <= H0 <= N");
    GoodnessReport r;
    r.lambda_c = lambda_c;
    r.H0 = H0;
    r.horizon = N;
    r.ce_checked = true;
    const CriticalOrbit orb = critical_orbit(fam, t, N);
    const double ll = std::log(lambda_c);
    r.worst_ce_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = H0; k <= N; ++k) {
        const double m = orb.log_derivs[k] - double(k) * ll;
        if (m < r.worst_ce_margin) { r.worst_ce_margin = m; r.worst_ce_k = k; }
    }
    r.superstable = orb.zero_derivative && orb.first_zero <= N;
    r.ce_ok = !r.superstable && r.worst_ce_margin >= -tol;
    return r;
}

// |c_k - c| > C^{-1} k^{-alpha} for H0 <= k <= N; margin is log|c_k - c| + alpha log k + log C.
[[nodiscard]] inline GoodnessReport check_polynomial_recurrence(const MapFamily& fam, const Param& t, double alpha,
                                                                std::size_t H0, std::size_t N, double C = 1.0) {
    if (alpha < 0.0) throw std::invalid_argument("check_polynomial_recurrence: alpha must be >= 0");
    if (H0 < 1 || H0 > N) throw std::invalid_argument("check_polynomial_recurrence: need 1 <= H0 <= N");
    GoodnessReport r;
    r.alpha = alpha;
    r.H0 = H0;
    r.horizon = N;
    r.rec_checked = true;
    const CriticalOrbit orb = critical_orbit(fam, t, N);
    r.worst_rec_margin = std::numeric_limits<double>::infinity();
    r.worst_distance = std::numeric_limits<double>::infinity();
    for (std::size_t k = H0; k <= N; ++k) {
        const double d = std::abs(orb.offsets[k]);
        r.worst_distance = std::min(r.worst_distance, d);
        const double m = (d == 0.0 ? kNegInf : std::log(d)) + alpha * std::log(double(k)) + std::log(C);
        if (m < r.worst_rec_margin) { r.worst_rec_margin = m; r.worst_rec_k = k; }
    }
    r.recurrence_ok = r.worst_rec_margin > 0.0;
    return r;
}

struct ExpansionSample {
    double x = 0.0;
    std::size_t n = 0;                 // length of the segment avoiding the delta-neighbourhood
    double min_free_margin = 0.0;      // min over m <= n of log|(f^m)'(x)| - log(C0 delta rho^m)
    bool reentered = false;
    double reentry_margin = 0.0;       // log|(f^n)'(x)| - log(C0 rho^n) when f^n(x) re-enters
};

struct ExpansionReport {
    double rho = 0.0;
    double C0 = 0.0;
    double delta = 0.0;
    std::size_t max_n = 0;
    bool sampled = true;  // statistical statement, not a proof
    std::vector<ExpansionSample> samples;
    std::vector<double> min_log_deriv_per_n;  // over samples whose segment reaches n
    double worst_margin = 0.0;
    bool all_ok = false;
};

[[nodiscard]] inline ExpansionReport check_expansion_conditions(const MapFamily& fam, double t, double rho, double C0,
                                                                double delta, std::size_t trials,
                                                                std::uint64_t seed = 1, std::size_t max_n = 200) {
    if (!(rho > 1.0)) throw std::invalid_argument("check_expansion_conditions: rho must exceed 1");
    if (!(delta > 0.0)) throw std::invalid_argument("check_expansion_conditions: delta must be positive");
    check_param(fam, t);
    ExpansionReport rep;
    rep.rho = rho;
    rep.C0 = C0;
    rep.delta = delta;
    rep.max_n = max_n;
    rep.min_log_deriv_per_n.assign(max_n + 1, std::numeric_limits<double>::infinity());
    rep.worst_margin = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double lr = std::log(rho), lc = std::log(C0), ld = std::log(delta);
    for (std::size_t s = 0; s < trials; ++s) {
        ExpansionSample smp;
        smp.x = U(rng);
        double x = smp.x;
        double ld_acc = 0.0;
        smp.min_free_margin = -(lc + ld);  // m = 0
        rep.min_log_deriv_per_n[0] = std::min(rep.min_log_deriv_per_n[0], 0.0);
        std::size_t m = 0;
        while (m < max_n && std::abs(x - fam.c) > delta) {
            const double d = fam.dx(t, x);
            ld_acc += std::log(std::abs(d));
            x = fam.eval(t, x);
            ++m;
            rep.min_log_deriv_per_n[m] = std::min(rep.min_log_deriv_per_n[m], ld_acc);
            smp.min_free_margin = std::min(smp.min_free_margin, ld_acc - (lc + ld + double(m) * lr));
        }
        smp.n = m;
        if (m < max_n && std::abs(x - fam.c) <= delta && m > 0) {
            smp.reentered = true;
            smp.reentry_margin = ld_acc - (lc + double(m) * lr);
        }
        rep.worst_margin = std::min(rep.worst_margin, smp.min_free_margin);
        if (smp.reentered) rep.worst_margin = std::min(rep.worst_margin, smp.reentry_margin);
        rep.samples.push_back(smp);
    }
    rep.all_ok = rep.worst_margin >= 0.0;
    return rep;
}

// ---------------------------------------------------------------------------
// Misiurewicz-Thurston parameters

struct MTParameter {
    Param t;
    std::size_t preperiod = 0;
    std::size_t period = 1;
    double periodic_point = 0.0;
    double multiplier_log = 0.0;
    double residual = 0.0;
    double Lambda = 0.0;
    double min_critical_return = 0.0;  // min_{1<=k<=n+l0} |c_k - c|

    [[nodiscard]] bool repelling() const { return multiplier_log > 0.0; }
};

class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline quad iterate_q(const MapFamily& fam, const quad& t, quad x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x = fam.eval_q(t, x);
    return x;
}

// Periodic point of period l near `seed`, by secant iteration on f^l(p) - p.
inline quad periodic_point_q(const MapFamily& fam, const quad& t, const quad& seed, std::size_t l) {
    auto F = [&](const quad& p) { return iterate_q(fam, t, p, l) - p; };
    quad x0 = seed, x1 = seed + quad(1e-9);
    quad f0 = F(x0), f1 = F(x1);
    const quad eps = std::numeric_limits<quad>::epsilon();
    for (int it = 0; it < 200; ++it) {
        if (f1 == 0) return x1;
        if (f1 == f0) break;
        quad x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1; f0 = f1;
        x1 = x2; f1 = F(x1);
        if (abs(x1 - x0) <= 4 * eps * (1 + abs(x1))) break;
    }
    return x1;
}

inline double multiplier_log(const MapFamily& fam, double t, double p, std::size_t l) {
    LogValue d;
    double x = p;
    for (std::size_t i = 0; i < l; ++i) {
        d *= fam.dx(t, x);
        x = fam.eval(t, x);
    }
    return d.log_mag;
}

inline bool has_minimal_period(const MapFamily& fam, double t, double p, std::size_t l) {
    for (std::size_t d = 1; d < l; ++d) {
        if (l % d) continue;
        double x = p;
        for (std::size_t i = 0; i < d; ++i) x = fam.eval(t, x);
        if (std::abs(x - p) < 1e-9) return false;
    }
    return true;
}

} // namespace detail

// Default seed: the largest point of minimal period l at parameter t.
[[nodiscard]] inline double default_periodic_seed(const MapFamily& fam, double t, std::size_t l) {
    const std::size_t G = 4096;
    std::optional<double> best;
    auto F = [&](double x) {
        double y = x;
        for (std::size_t i = 0; i < l; ++i) y = fam.eval(t, y);
        return y - x;
    };
    double xa = 0.0, fa = F(xa);
    for (std::size_t i = 1; i <= G; ++i) {
        const double xb = double(i) / double(G);
        const double fb = F(xb);
        std::optional<double> root;
        if (fa == 0.0) root = xa;
        else if ((fa < 0) != (fb < 0) && fb != 0.0) root = bisect(F, xa, xb, fa);
        if (root && detail::has_minimal_period(fam, t, *root, l)) best = std::max(best.value_or(-1.0), *root);
        xa = xb;
        fa = fb;
    }
    if (fa == 0.0 && detail::has_minimal_period(fam, t, xa, l)) best = std::max(best.value_or(-1.0), xa);
    if (!best) throw BracketError("no periodic point of the requested period found");
    return *best;
}

struct MTSearchOptions {
    double tol = 1e-12;                     // on |f_t^n(c) - p_t|
    std::optional<double> periodic_seed;    // p at the lower bracket end
    int max_iter = 400;
};

// Gap g(t) = f_t^n(c) - p_t with p_t continued from `p_seed`.
struct GapFunction {
    const MapFamily* fam;
    std::size_t n;
    std::size_t l;
    quad operator()(const quad& t, quad& p_seed) const {
        p_seed = detail::periodic_point_q(*fam, t, p_seed, l);
        return detail::iterate_q(*fam, t, quad(fam->c), n) - p_seed;
    }
};

inline MTParameter finish_mt(const MapFamily& fam, const quad& tq, const quad& p, std::size_t n, std::size_t l) {
    MTParameter mt;
    mt.t = Param::from_quad(tq);
    mt.preperiod = n;
    mt.period = l;
    mt.periodic_point = static_cast<double>(p);
    mt.residual = static_cast<double>(abs(detail::iterate_q(fam, tq, quad(fam.c), n) - p));
    mt.multiplier_log = detail::multiplier_log(fam, mt.t.hi, mt.periodic_point, l);
    mt.Lambda = std::exp(mt.multiplier_log / double(l));
    quad x = fam.c;
    double mind = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= n + l; ++k) {
        x = fam.eval_q(tq, x);
        mind = std::min(mind, static_cast<double>(abs(x - quad(fam.c))));
    }
    mt.min_critical_return = mind;
    return mt;
}

[[nodiscard]] inline MTParameter find_misiurewicz_thurston(const MapFamily& fam, Interval bracket, std::size_t n,
                                                           std::size_t l0, const MTSearchOptions& opt = {}) {
    if (n < 1 || l0 < 1) throw std::invalid_argument("find_misiurewicz_thurston: need n, l0 >= 1");
    check_param(fam, bracket.lo);
    check_param(fam, bracket.hi);
    const double seed = opt.periodic_seed ? *opt.periodic_seed : default_periodic_seed(fam, bracket.lo, l0);
    GapFunction g{&fam, n, l0};
    quad a = bracket.lo, b = bracket.hi;
    quad pa = seed, pb = seed;
    quad ga = g(a, pa);
    pb = pa;
    quad gb = g(b, pb);
    quad root, proot;
    if (ga == 0) { root = a; proot = pa; }
    else if (gb == 0) { root = b; proot = pb; }
    else if ((ga < 0) == (gb < 0)) {
        std::ostringstream os;
        os << "no sign change of f_t^" << n << "(c) - p_t on [" << bracket.lo << ", " << bracket.hi << "]";
        throw BracketError(os.str());
    } else {
        // Illinois regula falsi with a bisection guard.
        int side = 0;
        root = a; proot = pa;
        const quad tol_t = std::numeric_limits<quad>::epsilon() * 8;
        for (int it = 0; it < opt.max_iter; ++it) {
            quad m = (a * gb - b * ga) / (gb - ga);
            if (!(m > a && m < b) || it % 8 == 7) m = (a + b) / 2;
            quad pm = abs(m - a) < abs(b - m) ? pa : pb;
            quad gm = g(m, pm);
            root = m; proot = pm;
            if (gm == 0 || abs(b - a) < tol_t * abs(m)) break;
            if ((gm < 0) == (ga < 0)) {
                a = m; ga = gm; pa = pm;
                if (side == -1) gb /= 2;
                side = -1;
            } else {
                b = m; gb = gm; pb = pm;
                if (side == 1) ga /= 2;
                side = 1;
            }
            if (abs(gm) < quad(opt.tol) * quad(1e-12)) break;
        }
    }
    MTParameter mt = finish_mt(fam, root, proot, n, l0);
    if (!mt.repelling()) {
        std::ostringstream os;
        os << "periodic point is not repelling: log multiplier " << mt.multiplier_log;
        throw BracketError(os.str());
    }
    if (mt.min_critical_return == 0.0) throw BracketError("critical point is periodic at the root");
    if (!(mt.residual < opt.tol)) {
        std::ostringstream os;
        os << "root finder residual " << mt.residual << " above tolerance " << opt.tol;
        throw BracketError(os.str());
    }
    return mt;
}

struct ShadowingReport {
    double shadow_point = 0.0;     // limit of the backward contraction started at c_n
    double landing_gap = 0.0;      // |c_n - shadow_point|
    double periodic_residual = 0.0;// |f^l(shadow) - shadow|
    std::size_t steps = 0;
    bool ok = false;
};

// Independent check of an MT parameter: pull c_n back `steps` times along the
// inverse branches of f^l that follow the periodic orbit. The backward map is a
// contraction near a repelling cycle, so the limit is the cycle point shadowed
// by the post-critical orbit.
[[nodiscard]] inline ShadowingReport verify_mt_shadowing(const MapFamily& fam, const MTParameter& mt,
                                                         std::size_t steps = 200, double tol = 1e-12) {
    const double t = mt.t.hi;
    std::vector<int> itinerary(mt.period);
    {
        double x = mt.periodic_point;
        for (std::size_t i = 0; i < mt.period; ++i) {
            itinerary[i] = x >= fam.c ? 1 : -1;
            x = fam.eval(t, x);
        }
    }
    auto inverse = [&](double y, int side) {
        double lo = side > 0 ? fam.c : 0.0, hi = side > 0 ? 1.0 : fam.c;
        auto G = [&](double x) { return fam.eval(t, x) - y; };
        const double glo = G(lo), ghi = G(hi);
        if (glo == 0.0) return lo;
        if (ghi == 0.0) return hi;
        if ((glo < 0) == (ghi < 0)) return std::abs(glo) < std::abs(ghi) ? lo : hi;
        return bisect(G, lo, hi, glo);
    };
    double cn = static_cast<double>(detail::iterate_q(fam, mt.t.as_quad(), quad(fam.c), mt.preperiod));
    double y = cn;
    for (std::size_t s = 0; s < steps; ++s) {
        for (std::size_t i = mt.period; i-- > 0;) y = inverse(y, itinerary[i]);
    }
    ShadowingReport rep;
    rep.steps = steps;
    rep.shadow_point = y;
    rep.landing_gap = std::abs(cn - y);
    double z = y;
    for (std::size_t i = 0; i < mt.period; ++i) z = fam.eval(t, z);
    rep.periodic_residual = std::abs(z - y);
    rep.ok = rep.landing_gap < tol && rep.periodic_residual < tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Admissible pairs

struct AdmissiblePair {
    Param t0;
    Param t;
    std::size_t M = 0;
    double Ca = 10.0;
    double alpha = 0.0;
    double beta = 0.0;
    double margin_at_M = 0.0;    // rhs - lhs at M (>= 0)
    double margin_at_M1 = 0.0;   // rhs - lhs at M+1 (< 0)
};

class NotAdmissible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

[[nodiscard]] inline AdmissiblePair admissible_M(const CriticalOrbit& orb0, const Param& t, double Ca, double alpha,
                                                 double beta) {
    const double dt = std::abs(t.minus(orb0.t));
    if (!(dt > 0.0)) throw NotAdmissible("pair not admissible: t equals t0");
    auto slack = [&](std::size_t M) {
        const double lhs = orb0.log_derivs.at(M) + std::log(dt);
        const double rhs = -std::log(Ca) - (alpha + beta) * std::log(double(M));
        return rhs - lhs;
    };
    if (orb0.size() < 3) throw std::invalid_argument("admissible_M: critical orbit too short");
    if (slack(1) < 0.0) throw NotAdmissible("pair not admissible: inequality fails at M=1");
    std::size_t M = 1;
    while (M + 1 < orb0.size() && slack(M + 1) >= 0.0) ++M;
    if (M + 1 >= orb0.size()) throw std::invalid_argument("admissible_M: critical orbit too short for this |t - t0|");
    AdmissiblePair pr;
    pr.t0 = orb0.t;
    pr.t = t;
    pr.M = M;
    pr.Ca = Ca;
    pr.alpha = alpha;
    pr.beta = beta;
    pr.margin_at_M = slack(M);
    pr.margin_at_M1 = slack(M + 1);
    return pr;
}

[[nodiscard]] inline AdmissiblePair admissible_M(const MapFamily& fam, const Param& t0, const Param& t, double Ca,
                                                 double alpha, double beta) {
    const double dt = std::abs(t.minus(t0));
    std::size_t N = 256;
    for (;;) {
        const CriticalOrbit orb = critical_orbit(fam, t0, N);
        try {
            return admissible_M(orb, t, Ca, alpha, beta);
        } catch (const std::invalid_argument&) {
            if (N > (1u << 16) || !(dt > 0.0)) throw;
            N *= 4;
        }
    }
}


// ---------------------------------------------------------------------------
// One-sided MT sequences accumulating at an MT parameter
//
// For each truncation level M the admissible window of |t - t0| is
// (1/(Ca |(f^{M+1})'(c_1)|), 1/(Ca |(f^M)'(c_1)|)]. Inside it we look for a
// parameter whose critical orbit lands on the continuation of the periodic
// cycle a bounded number of steps after M while staying away from c.

struct MTSequenceEntry {
    MTParameter mt;
    AdmissiblePair pair;
    double dt = 0.0;                 // t - t0
    double Lambda_ratio_M = 0.0;     // (Lambda_t / Lambda_t0)^M
    double postcritical_min = 0.0;   // min_k log|(f_t^{k-1})'(c_{1,t})| - k log Lambda_t
    double postcritical_max = 0.0;   // max of the same
    double closest_return = 0.0;     // min_{1<=i<=n} |c_{i,t} - c|
};

struct MTSequenceOptions {
    int side = 0;                    // -1 left, +1 right, 0 choose the side where landings exist
    double Ca = 10.0;
    double dt_max = 1e-3;
    double dt_min = 1e-8;
    std::size_t landing_lag = 40;    // landing step n ranges over M+1 .. M+landing_lag
    std::size_t scan_points = 4000;  // samples per admissible window
    double avoid_radius = 0.0;       // optional: post-critical orbit must avoid (c - r, c + r)
    double tol = 1e-11;
};

struct MTSequence {
    MTParameter t0;
    int side = 0;
    std::vector<MTSequenceEntry> entries;
    std::vector<std::string> warnings;
};

namespace detail {

inline double periodic_point_d(const MapFamily& fam, double t, double seed, std::size_t l) {
    auto F = [&](double x) {
        double y = x;
        for (std::size_t i = 0; i < l; ++i) y = fam.eval(t, y);
        return y - x;
    };
    double x0 = seed, x1 = seed + 1e-7, f0 = F(x0), f1 = F(x1);
    for (int it = 0; it < 60 && f1 != f0; ++it) {
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1; f0 = f1; x1 = x2; f1 = F(x1);
        if (std::abs(x1 - x0) < 1e-15) break;
    }
    return x1;
}

inline std::optional<quad> refine_landing(const MapFamily& fam, std::size_t n, std::size_t l, quad a, quad b,
                                          double p_seed) {
    GapFunction g{&fam, n, l};
    quad pa = p_seed, pb = p_seed;
    quad ga = g(a, pa), gb = g(b, pb);
    if (ga == 0) return a;
    if (gb == 0) return b;
    if ((ga < 0) == (gb < 0)) return std::nullopt;
    for (int it = 0; it < 300; ++it) {
        quad m = (a + b) / 2;
        if (it % 3 != 2) {
            quad s = (a * gb - b * ga) / (gb - ga);
            if (s > std::min(a, b) && s < std::max(a, b)) m = s;
        }
        quad pm = pa;
        quad gm = g(m, pm);
        if (gm == 0) return m;
        if ((gm < 0) == (ga < 0)) { a = m; ga = gm; pa = pm; }
        else { b = m; gb = gm; pb = pm; }
        if (abs(b - a) < std::numeric_limits<quad>::epsilon() * 8 * abs(m)) break;
    }
    return abs(ga) < abs(gb) ? a : b;
}

} // namespace detail

// Landing parameter inside the admissible window of level M, if any.
[[nodiscard]] inline std::optional<MTSequenceEntry> mt_landing_in_window(const MapFamily& fam, const MTParameter& t0,
                                                                         const CriticalOrbit& orb0, std::size_t M,
                                                                         int side, const MTSequenceOptions& opt,
                                                                         std::string* why = nullptr) {
    const double lCa = std::log(opt.Ca);
    if (orb0.log_derivs[M + 1] <= orb0.log_derivs[M]) {
        if (why) *why = "empty admissible window";
        return std::nullopt;
    }
    const double u_hi = std::exp(-lCa - orb0.log_derivs[M]);
    const double u_lo = std::exp(-lCa - orb0.log_derivs[M + 1]);
    const std::size_t S = opt.scan_points;
    const std::size_t n_lo = M + 1, n_hi = M + opt.landing_lag;
    const std::size_t l = t0.period;
    // gaps[i][n - n_lo] = c_{n,t_i} - p_{t_i}
    std::vector<std::vector<double>> gaps(S + 1, std::vector<double>(n_hi - n_lo + 1));
    std::vector<double> us(S + 1), ps(S + 1);
    double p = t0.periodic_point;
    for (std::size_t i = 0; i <= S; ++i) {
        // Open at u_lo, closed at u_hi.
        const double u = u_lo + (u_hi - u_lo) * (double(i) + 0.5) / double(S + 1) ;
        const double t = t0.t.hi + side * u;
        p = detail::periodic_point_d(fam, t, p, l);
        us[i] = u;
        ps[i] = p;
        double x = fam.c;
        for (std::size_t k = 1; k <= n_hi; ++k) {
            x = fam.eval(t, x);
            if (k >= n_lo) gaps[i][k - n_lo] = x - p;
        }
    }
    const quad T0 = t0.t.as_quad();
    std::size_t rejected = 0;
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
        for (std::size_t i = 1; i <= S; ++i) {
            const double ga = gaps[i - 1][n - n_lo], gb = gaps[i][n - n_lo];
            if ((ga < 0) == (gb < 0)) continue;
            auto r = detail::refine_landing(fam, n, l, T0 + quad(side) * quad(us[i - 1]),
                                            T0 + quad(side) * quad(us[i]), ps[i - 1]);
            if (!r) continue;
            quad pq = detail::periodic_point_q(fam, *r, quad(ps[i - 1]), l);
            MTParameter mt = finish_mt(fam, *r, pq, n, l);
            quad x = fam.c;
            std::size_t first = 0;
            double closest = std::numeric_limits<double>::infinity();
            for (std::size_t k = 1; k <= n; ++k) {
                x = fam.eval_q(*r, x);
                closest = std::min(closest, static_cast<double>(abs(x - quad(fam.c))));
                if (first == 0 && abs(x - pq) < quad(1e-20)) first = k;
            }
            if (first != n || !(mt.residual < opt.tol) || !mt.repelling() || closest < opt.avoid_radius) {
                ++rejected;
                continue;
            }
            AdmissiblePair pr = admissible_M(orb0, mt.t, opt.Ca, 0.0, 0.0);
            if (pr.M != M) { ++rejected; continue; }
            MTSequenceEntry e;
            e.mt = mt;
            e.pair = pr;
            e.dt = mt.t.minus(t0.t);
            e.closest_return = closest;
            return e;
        }
    }
    if (why) *why = rejected ? "only landings with close returns or earlier landings" : "no landing in window";
    return std::nullopt;
}

[[nodiscard]] inline MTSequence mt_sequence(const MapFamily& fam, const MTParameter& t0, std::size_t count,
                                            const MTSequenceOptions& opt = {}) {
    MTSequence seq;
    seq.t0 = t0;
    const double lCa = std::log(opt.Ca);
    const CriticalOrbit orb0 = critical_orbit(fam, t0.t, 512);
    std::size_t M_first = 1, M_last = 1;
    while (M_first + 2 < orb0.size() && std::exp(-lCa - orb0.log_derivs[M_first + 1]) > opt.dt_max) ++M_first;
    M_last = M_first;
    while (M_last + 2 < orb0.size() && std::exp(-lCa - orb0.log_derivs[M_last]) > opt.dt_min) ++M_last;
    if (M_last + opt.landing_lag + 2 >= orb0.size())
        throw std::invalid_argument("mt_sequence: dt_min too small for the orbit horizon");

    int side = opt.side;
    if (side == 0) {
        int hits_r = 0, hits_l = 0;
        for (std::size_t M = M_first; M < M_first + 6 && M <= M_last; ++M) {
            hits_r += mt_landing_in_window(fam, t0, orb0, M, +1, opt).has_value();
            hits_l += mt_landing_in_window(fam, t0, orb0, M, -1, opt).has_value();
        }
        if (hits_r == 0 && hits_l == 0) throw BracketError("mt_sequence: no landings found on either side of t0");
        side = hits_r >= hits_l ? +1 : -1;
    }
    seq.side = side;

    std::vector<MTSequenceEntry> found;
    for (std::size_t M = M_first; M <= M_last; ++M) {
        std::string why;
        auto e = mt_landing_in_window(fam, t0, orb0, M, side, opt, &why);
        if (!e) {
            seq.warnings.push_back("M=" + std::to_string(M) + ": " + why);
            continue;
        }
        const double adt = std::abs(e->dt);
        if (adt > opt.dt_max || adt < opt.dt_min) continue;
        found.push_back(*e);
    }
    // Keep `count` entries spread evenly through the found list.
    if (found.size() > count && count >= 2) {
        std::vector<MTSequenceEntry> pick;
        for (std::size_t i = 0; i < count; ++i)
            pick.push_back(found[(i * (found.size() - 1) + (count - 1) / 2) / (count - 1)]);
        found = std::move(pick);
    }
    if (found.size() < count) seq.warnings.push_back("fewer landings than requested in the dt window");

    const double lL0 = std::log(t0.Lambda);
    for (auto& e : found) {
        e.Lambda_ratio_M = std::exp(double(e.pair.M) * (std::log(e.mt.Lambda) - lL0));
        const std::size_t H = e.mt.preperiod + 8 * e.mt.period;
        const CriticalOrbit ot = critical_orbit(fam, e.mt.t, H + 1);
        const double lLt = std::log(e.mt.Lambda);
        e.postcritical_min = std::numeric_limits<double>::infinity();
        e.postcritical_max = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 2; k <= H; ++k) {
            const double v = ot.log_derivs[k - 1] - double(k) * lLt;
            e.postcritical_min = std::min(e.postcritical_min, v);
            e.postcritical_max = std::max(e.postcritical_max, v);
        }
        seq.entries.push_back(e);
    }
    return seq;
}

} // namespace srblab
