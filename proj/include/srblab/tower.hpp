#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "map_family.hpp"
#include "parallel.hpp"

namespace srblab {

class TowerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TowerOptions {
    double delta = 0.0;  // 0 selects the search for H(delta) >= max(2, H0) + 2
    double L = 8.0;
    double beta = 0.0;
    std::size_t K_max = 60;
    std::size_t H0 = 1;
};

// Tower over a unimodal map. Level k >= 1 lives on J_k, stored in the offset
// coordinate u = x - c of the ground point; the level-k point is f^k(c + u).
struct Tower {
    MapFamily fam;
    Param t;
    double delta = 0.0;
    double L = 8.0;
    double beta = 0.0;
    std::size_t K_max = 0;
    std::size_t H0 = 1;
    std::size_t H_delta = 0;
    std::size_t inherited = 0;  // levels whose J_k were copied from a reference tower

    CriticalOrbit orbit;            // c_k, k = 0..K_max + 2
    std::vector<double> b;          // level radii b_k, index 0 unused
    std::vector<double> r_minus;    // J_k = [-r_minus[k], r_plus[k]] in u
    std::vector<double> r_plus;
    std::vector<double> core_minus; // pullback of the core ball of radius k^-beta/(2L^3) around c_k
    std::vector<double> core_plus;
    std::vector<double> image_len;  // |f^k(J_{k-1})|
    bool radii_in_bounds = true;    // k^-beta/L^3 <= b_k <= k^-beta/L for every level
    std::size_t shrunk_levels = 0;  // levels whose radius was cut to keep c outside B_k

    [[nodiscard]] std::size_t levels() const { return K_max + 1; }
    [[nodiscard]] double tv() const { return t.hi; }
    [[nodiscard]] double center(std::size_t k) const { return orbit.points.at(k); }

    // f^k(c + u) - c_k, accumulated through offsets so that tiny u keep full precision.
    [[nodiscard]] double e(std::size_t k, double u) const {
        if (k == 0) return u;
        double ek = fam.diff(t.hi, fam.c, u);
        for (std::size_t l = 1; l < k; ++l) ek = fam.diff(t.hi, orbit.points[l], ek);
        return ek;
    }
    [[nodiscard]] double X(std::size_t k, double u) const { return center(k) + e(k, u); }

    // log|(f^k)'(c + u)| with the factors taken at shifted orbit points.
    [[nodiscard]] double log_deriv(std::size_t k, double u) const {
        double acc = 0.0, ek = u;
        for (std::size_t l = 0; l < k; ++l) {
            const double d = fam.dx_shift(t.hi, orbit.points[l], ek);
            if (d == 0.0) return kNegInf;
            acc += std::log(std::abs(d));
            ek = fam.diff(t.hi, orbit.points[l], ek);
        }
        return acc;
    }

    [[nodiscard]] Interval J(std::size_t k) const { return {-r_minus.at(k), r_plus.at(k)}; }
    [[nodiscard]] double J_length(std::size_t k) const { return r_minus.at(k) + r_plus.at(k); }
    // I_j = J_{j-1} \ J_j, split by side; empty sides have zero length.
    [[nodiscard]] Interval I_plus(std::size_t j) const { return {r_plus.at(j), r_plus.at(j - 1)}; }
    [[nodiscard]] Interval I_minus(std::size_t j) const { return {-r_minus.at(j - 1), -r_minus.at(j)}; }
    [[nodiscard]] bool I_empty(std::size_t j) const {
        return r_plus.at(j) >= r_plus.at(j - 1) && r_minus.at(j) >= r_minus.at(j - 1);
    }

    // Highest level reached by the ground point c + u (|u| <= delta) under the
    // deterministic tower map; K_max + 1 means it never fell within the tower.
    [[nodiscard]] std::size_t climb_levels(double u) const {
        if (std::abs(u) > delta) return 0;
        double ek = fam.diff(t.hi, fam.c, u);  // level 1 is automatic
        for (std::size_t k = 2; k <= K_max + 1; ++k) {
            ek = fam.diff(t.hi, orbit.points[k - 1], ek);
            if (std::abs(ek) > b[k]) return k - 1;
        }
        return K_max + 1;
    }
};

namespace detail {

inline double level_scale(std::size_t k, double beta) { return std::pow(double(k), -beta); }

// Largest u in [0, r] on side s with |e_k(s u)| <= target; |e_k| is increasing in u there.
inline double side_radius(const Tower& T, std::size_t k, int s, double r, double target) {
    if (r <= 0.0) return 0.0;
    if (std::abs(T.e(k, s * r)) <= target) return r;
    double lo = 0.0, hi = r;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        if (m <= lo || m >= hi) break;
        if (std::abs(T.e(k, s * m)) <= target) lo = m;
        else hi = m;
    }
    return lo;
}

inline void check_level_clear_of_c(const Tower& T, std::size_t k) {
    if (k >= T.H0 && std::abs(T.center(k) - T.fam.c) <= T.b[k]) {
        std::ostringstream os;
        os << "goodness violation: c lies in B_" << k << " (|c_k - c| = " << std::abs(T.center(k) - T.fam.c)
           << ", b_k = " << T.b[k] << ")";
        throw TowerError(os.str());
    }
}

// With shrink_near_c the radius is reduced to keep c outside B_k instead of
// failing; used above the shared levels of a tower built at a nearby parameter.
inline void fill_level(Tower& T, std::size_t k, bool shrink_near_c = false) {
    const double s = level_scale(k, T.beta);
    const double L2 = T.L * T.L;
    const double len = std::max(std::abs(T.e(k, T.r_plus[k - 1])), std::abs(T.e(k, -T.r_minus[k - 1])));
    T.image_len[k] = len;
    if (k == 1) {
        T.b[k] = s / L2;  // level 1 is entered unconditionally
    } else if (len >= s / L2 && len <= 2.0 * s / L2) {
        T.b[k] = s / (2.0 * L2);
    } else {
        T.b[k] = s / L2;
    }
    if (shrink_near_c && k >= T.H0) {
        const double gap = std::abs(T.center(k) - T.fam.c);
        if (gap <= T.b[k]) {
            T.b[k] = 0.5 * gap;
            ++T.shrunk_levels;
        }
    }
    check_level_clear_of_c(T, k);
    if (k == 1) {
        T.r_plus[k] = T.r_plus[0];
        T.r_minus[k] = T.r_minus[0];
    } else {
        T.r_plus[k] = side_radius(T, k, +1, T.r_plus[k - 1], T.b[k]);
        T.r_minus[k] = side_radius(T, k, -1, T.r_minus[k - 1], T.b[k]);
    }
    const double core = s / (2.0 * L2 * T.L);
    T.core_plus[k] = side_radius(T, k, +1, T.r_plus[k - 1], core);
    T.core_minus[k] = side_radius(T, k, -1, T.r_minus[k - 1], core);
}

inline void finish_tower(Tower& T) {
    T.H_delta = T.K_max;
    for (std::size_t k = 1; k <= T.K_max + 1; ++k) {
        if (T.r_plus[k] < T.r_plus[0] || T.r_minus[k] < T.r_minus[0]) {
            T.H_delta = k - 1;
            break;
        }
    }
    T.radii_in_bounds = true;
    for (std::size_t k = 1; k <= T.K_max + 1; ++k) {
        const double s = level_scale(k, T.beta);
        const double L3 = T.L * T.L * T.L;
        if (T.b[k] < s / L3 * (1 - 1e-12) || T.b[k] > s / T.L * (1 + 1e-12)) T.radii_in_bounds = false;
    }
}

inline Tower empty_tower(const MapFamily& fam, const Param& t, double delta, const TowerOptions& opt) {
    Tower T;
    T.fam = fam;
    T.t = t;
    T.delta = delta;
    T.L = opt.L;
    T.beta = opt.beta;
    T.K_max = opt.K_max;
    T.H0 = opt.H0;
    T.orbit = critical_orbit(fam, t, opt.K_max + 2);
    const std::size_t n = opt.K_max + 2;
    T.b.assign(n, 0.0);
    T.r_plus.assign(n, delta);
    T.r_minus.assign(n, delta);
    T.core_plus.assign(n, 0.0);
    T.core_minus.assign(n, 0.0);
    T.image_len.assign(n, 0.0);
    return T;
}

inline Tower build_with_delta(const MapFamily& fam, const Param& t, double delta, const TowerOptions& opt) {
    Tower T = empty_tower(fam, t, delta, opt);
    for (std::size_t k = 1; k <= opt.K_max + 1; ++k) fill_level(T, k);
    finish_tower(T);
    return T;
}

} // namespace detail

[[nodiscard]] inline Tower build_tower(const MapFamily& fam, const Param& t, TowerOptions opt = {}) {
    if (opt.L <= 1.0) throw std::invalid_argument("build_tower: L must exceed 1");
    if (opt.beta < 0.0) throw std::invalid_argument("build_tower: beta must be >= 0");
    if (opt.K_max < 3) throw std::invalid_argument("build_tower: K_max must be >= 3");
    check_param(fam, t.hi);
    const std::size_t need = std::max<std::size_t>(2, opt.H0);
    if (opt.delta > 0.0) {
        if (opt.delta >= std::min(fam.c, 1.0 - fam.c)) throw DomainError("build_tower: delta exceeds the interval");
        Tower T = detail::build_with_delta(fam, t, opt.delta, opt);
        if (T.H_delta < need) {
            std::ostringstream os;
            os << "delta too large: H(delta) = " << T.H_delta << " < " << need;
            throw TowerError(os.str());
        }
        return T;
    }
    double delta = std::min(0.05, 0.5 * std::min(fam.c, 1.0 - fam.c));
    for (int it = 0; it < 400; ++it) {
        Tower T = detail::build_with_delta(fam, t, delta, opt);
        if (T.H_delta >= need + 2) return T;
        delta *= 0.85;
    }
    throw TowerError("build_tower: no delta reaches the required H(delta)");
}

// Tower at t sharing J_k (and hence the cutoffs) with a reference tower for
// k <= copy_levels; above that the level recipe runs at t itself. Radii of
// copied levels are taken as |f_t^k(J_k)| when I_k is nonempty.
[[nodiscard]] inline Tower build_tower_like(const Tower& ref, const Param& t, std::size_t copy_levels,
                                            std::size_t K_max) {
    check_param(ref.fam, t.hi);
    TowerOptions opt{ref.delta, ref.L, ref.beta, K_max, ref.H0};
    Tower T = detail::empty_tower(ref.fam, t, ref.delta, opt);
    copy_levels = std::min({copy_levels, ref.K_max + 1, K_max + 1});
    T.inherited = copy_levels;
    for (std::size_t k = 1; k <= K_max + 1; ++k) {
        if (k <= copy_levels) {
            T.r_plus[k] = ref.r_plus[k];
            T.r_minus[k] = ref.r_minus[k];
            T.core_plus[k] = ref.core_plus[k];
            T.core_minus[k] = ref.core_minus[k];
            T.image_len[k] = std::max(std::abs(T.e(k, T.r_plus[k - 1])), std::abs(T.e(k, -T.r_minus[k - 1])));
            const double img = std::max(std::abs(T.e(k, T.r_plus[k])), std::abs(T.e(k, -T.r_minus[k])));
            T.b[k] = T.I_empty(k) ? std::max(ref.b[k], T.image_len[k]) : img;
        } else {
            detail::fill_level(T, k, true);
        }
    }
    detail::finish_tower(T);
    return T;
}

// ---------------------------------------------------------------------------
// Cutoffs

// xi_k on u: 1 on [-in_m, in_p], smoothstep down to 0 at -out_m and out_p.
struct Cutoff {
    enum class Kind { one, zero, indicator, smooth } kind = Kind::one;
    double in_m = 0, in_p = 0, out_m = 0, out_p = 0;
};

struct CutoffFamily {
    std::vector<Cutoff> xi;  // k = 0..K_max

    [[nodiscard]] double eval(std::size_t k, double u) const {
        const Cutoff& z = xi.at(k);
        switch (z.kind) {
        case Cutoff::Kind::one: return 1.0;
        case Cutoff::Kind::zero: return 0.0;
        case Cutoff::Kind::indicator: return (u >= -z.out_m && u <= z.out_p) ? 1.0 : 0.0;
        case Cutoff::Kind::smooth: break;
        }
        if (u >= 0) {
            if (u <= z.in_p) return 1.0;
            if (u >= z.out_p) return 0.0;
            return 1.0 - smoothstep7((u - z.in_p) / (z.out_p - z.in_p));
        }
        const double a = -u;
        if (a <= z.in_m) return 1.0;
        if (a >= z.out_m) return 0.0;
        return 1.0 - smoothstep7((a - z.in_m) / (z.out_m - z.in_m));
    }

    // r-th derivative in u, r = 1..3.
    [[nodiscard]] double deriv(std::size_t k, double u, int r) const {
        const Cutoff& z = xi.at(k);
        if (z.kind != Cutoff::Kind::smooth) return 0.0;
        if (u >= 0) {
            if (u <= z.in_p || u >= z.out_p) return 0.0;
            const double w = z.out_p - z.in_p;
            return -smoothstep7_deriv((u - z.in_p) / w, r) / std::pow(w, r);
        }
        const double a = -u;
        if (a <= z.in_m || a >= z.out_m) return 0.0;
        const double w = z.out_m - z.in_m;
        const double sgn = (r % 2 == 1) ? -1.0 : 1.0;  // chain rule through a = -u
        return -sgn * smoothstep7_deriv((a - z.in_m) / w, r) / std::pow(w, r);
    }

    // Integral of xi_k over [u0, u1].
    [[nodiscard]] double integral(std::size_t k, double u0, double u1) const {
        if (u1 <= u0) return 0.0;
        const Cutoff& z = xi.at(k);
        switch (z.kind) {
        case Cutoff::Kind::one: return u1 - u0;
        case Cutoff::Kind::zero: return 0.0;
        case Cutoff::Kind::indicator: {
            const double a = std::max(u0, -z.out_m), b = std::min(u1, z.out_p);
            return b > a ? b - a : 0.0;
        }
        case Cutoff::Kind::smooth: break;
        }
        // F(u) = integral of xi from 0 to u, odd-symmetric construction per side.
        auto Fp = [&](double u) {
            if (u <= z.in_p) return u;
            const double w = z.out_p - z.in_p;
            const double s = std::min((u - z.in_p) / w, 1.0);
            return z.in_p + w * (s - smoothstep7_integral(s));
        };
        auto Fm = [&](double a) {
            if (a <= z.in_m) return a;
            const double w = z.out_m - z.in_m;
            const double s = std::min((a - z.in_m) / w, 1.0);
            return z.in_m + w * (s - smoothstep7_integral(s));
        };
        auto F = [&](double u) { return u >= 0 ? Fp(u) : -Fm(-u); };
        return F(u1) - F(u0);
    }

    // {0 < xi_k < 1} as up to two intervals (minus side, plus side); empty when not smooth.
    [[nodiscard]] std::vector<Interval> partial_set(std::size_t k) const {
        const Cutoff& z = xi.at(k);
        if (z.kind != Cutoff::Kind::smooth) return {};
        std::vector<Interval> out;
        if (z.out_m > z.in_m) out.push_back({-z.out_m, -z.in_m});
        if (z.out_p > z.in_p) out.push_back({z.in_p, z.out_p});
        return out;
    }
};

struct CutoffOptions {
    double min_ratio = 1e-3;  // lower bound on |I_k| / |J_{k-1}| when a transition is needed
};

[[nodiscard]] inline CutoffFamily cutoff_family(const Tower& T, CutoffOptions opt = {}) {
    CutoffFamily cf;
    cf.xi.resize(T.K_max + 1);
    Cutoff& z0 = cf.xi[0];
    z0.kind = Cutoff::Kind::smooth;
    z0.in_m = z0.in_p = 0.5 * T.delta;
    z0.out_m = z0.out_p = T.delta;
    for (std::size_t k = 1; k <= T.K_max; ++k) {
        Cutoff& z = cf.xi[k];
        if (k == T.K_max) { z.kind = Cutoff::Kind::zero; continue; }
        z.out_m = T.r_minus[k + 1];
        z.out_p = T.r_plus[k + 1];
        const bool full = z.out_m >= T.r_minus[k] && z.out_p >= T.r_plus[k];
        if (T.I_empty(k + 2)) {
            z.kind = full ? Cutoff::Kind::one : Cutoff::Kind::indicator;
            continue;
        }
        const double ratio = (T.J_length(k + 1) - T.J_length(k + 2)) / T.J_length(k + 1);
        if (ratio < opt.min_ratio) {
            std::ostringstream os;
            os << "cutoff xi_" << k << ": |I_" << k + 2 << "|/|J_" << k + 1 << "| = " << ratio
               << " below the comparability threshold " << opt.min_ratio;
            throw TowerError(os.str());
        }
        z.kind = Cutoff::Kind::smooth;
        z.in_m = std::max(T.r_minus[k + 2], std::min(T.core_minus[k + 1], z.out_m));
        z.in_p = std::max(T.r_plus[k + 2], std::min(T.core_plus[k + 1], z.out_p));
    }
    return cf;
}

struct CutoffBounds {
    double C[3] = {0, 0, 0};  // max_k sup|d^r xi_k| * |J_{k+1}|^r
};

[[nodiscard]] inline CutoffBounds cutoff_derivative_bounds(const Tower& T, const CutoffFamily& cf) {
    CutoffBounds out;
    double smax[3] = {0, 0, 0};
    for (double x : linspace(0.0, 1.0, 4001))
        for (int r = 0; r < 3; ++r) smax[r] = std::max(smax[r], std::abs(smoothstep7_deriv(x, r + 1)));
    for (std::size_t k = 0; k < cf.xi.size(); ++k) {
        const Cutoff& z = cf.xi[k];
        if (z.kind != Cutoff::Kind::smooth) continue;
        const double len = k == 0 ? 2 * T.delta : T.J_length(k + 1);
        double w = std::numeric_limits<double>::infinity();
        if (z.out_p > z.in_p) w = std::min(w, z.out_p - z.in_p);
        if (z.out_m > z.in_m) w = std::min(w, z.out_m - z.in_m);
        for (int r = 0; r < 3; ++r) out.C[r] = std::max(out.C[r], smax[r] * std::pow(len / w, r + 1));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bound / free periods

struct BoundFreeTimes {
    double x = 0.0;
    std::size_t horizon = 0;
    std::vector<std::size_t> T;  // bound period starts
    std::vector<std::size_t> S;  // bound period ends; absent last entry means S = infinity
    bool hit_c = false;          // f^{T_i}(x) = c exactly
    bool top_reached = false;    // a bound period outlasted the finite tower
};

[[nodiscard]] inline BoundFreeTimes bound_free_times(const Tower& tw, double x, std::size_t horizon) {
    check_point(x);
    BoundFreeTimes out;
    out.x = x;
    out.horizon = horizon;
    std::size_t n = 0;
    double y = x;
    while (n < horizon) {
        const double u = y - tw.fam.c;
        if (std::abs(u) <= tw.delta) {
            out.T.push_back(n);
            if (u == 0.0) { out.hit_c = true; return out; }
            const std::size_t lv = tw.climb_levels(u);
            if (lv > tw.K_max) out.top_reached = true;
            const std::size_t j = lv + 1;
            for (std::size_t i = 0; i < j; ++i) y = tw.fam.eval(tw.tv(), y);
            n += j;
            out.S.push_back(n);
            continue;
        }
        y = tw.fam.eval(tw.tv(), y);
        ++n;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Distortion and key estimate

struct DistortionReport {
    std::size_t j = 0;
    double max_log_ratio = 0.0;
    double predicted_log_bound = 0.0;  // sum_l log(1 + sup|f''| |f^l(J_j)| / inf |f'| on f^l(J_j))
    std::size_t samples = 0;
};

[[nodiscard]] inline DistortionReport verify_distortion(const Tower& T, std::size_t j, std::size_t n_samples,
                                                        std::uint64_t seed = 7, unsigned threads = 1) {
    if (j < 1 || j > T.K_max) throw std::invalid_argument("verify_distortion: j out of range");
    DistortionReport rep;
    rep.j = j;
    rep.samples = n_samples;
    const double lo = -T.r_minus[j], hi = T.r_plus[j];
    std::vector<std::pair<double, double>> pairs(n_samples);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(lo, hi);
    for (auto& p : pairs) p = {U(rng), U(rng)};
    // Log-derivative profile of f^k at f(c + u) for k = 1..j.
    auto profile = [&](double u) {
        std::vector<double> acc(j + 1, 0.0);
        double ek = T.fam.diff(T.tv(), T.fam.c, u);
        for (std::size_t l = 1; l <= j; ++l) {
            acc[l] = acc[l - 1] + std::log(std::abs(T.fam.dx_shift(T.tv(), T.orbit.points[l], ek)));
            ek = T.fam.diff(T.tv(), T.orbit.points[l], ek);
        }
        return acc;
    };
    std::vector<double> worst(n_samples, 0.0);
    parallel_for(n_samples, threads, [&](std::size_t i) {
        const auto a = profile(pairs[i].first), b = profile(pairs[i].second);
        double w = 0.0;
        for (std::size_t k = 1; k <= j; ++k) w = std::max(w, std::abs(a[k] - b[k]));
        worst[i] = w;
    });
    for (double w : worst) rep.max_log_ratio = std::max(rep.max_log_ratio, w);
    double sup_dxx = 0.0;
    for (double x : linspace(0.0, 1.0, 257)) sup_dxx = std::max(sup_dxx, std::abs(T.fam.dxx(T.tv(), x)));
    for (std::size_t l = 1; l <= j; ++l) {
        const double e1 = T.e(l, hi), e2 = T.e(l, lo);
        const double spread = std::max(std::abs(e1), std::abs(e2));
        const double cl = T.orbit.points[l];
        const double dmin = std::min({std::abs(T.fam.dx(T.tv(), cl)), std::abs(T.fam.dx(T.tv(), cl + e1)),
                                      std::abs(T.fam.dx(T.tv(), cl + e2))});
        rep.predicted_log_bound += std::log1p(sup_dxx * spread / dmin);
    }
    return rep;
}

struct KeyEstimate {
    std::size_t j = 0;
    double partial_sum = 0.0;
    double tail = 0.0;
    double bound = 0.0;   // C * max(1, j^alpha)
    double margin = 0.0;  // bound - (partial_sum + tail)
    bool diverging = false;
};

// sum_{m=1}^{K_tail} 1/|(f^m)'(c_{j+1})| plus a geometric tail estimate.
[[nodiscard]] inline KeyEstimate key_estimate_check(const MapFamily& fam, const Param& t, std::size_t j,
                                                    std::size_t K_tail, double C = 1.0, double alpha = 0.0) {
    if (K_tail < 2) throw std::invalid_argument("key_estimate_check: K_tail must be >= 2");
    const CriticalOrbit orb = critical_orbit(fam, t, j + K_tail + 1);
    KeyEstimate out;
    out.j = j;
    KahanSum s;
    std::vector<double> logs(K_tail + 1, 0.0);
    for (std::size_t m = 1; m <= K_tail; ++m) {
        logs[m] = orb.log_derivs[j + m] - orb.log_derivs[j];
        if (logs[m] == kNegInf || std::isnan(logs[m])) {
            out.diverging = true;
            out.partial_sum = out.tail = std::numeric_limits<double>::infinity();
            out.bound = C * std::max(1.0, std::pow(double(j), alpha));
            out.margin = -std::numeric_limits<double>::infinity();
            return out;
        }
        s += std::exp(-logs[m]);
    }
    out.partial_sum = s.value();
    const std::size_t half = K_tail / 2;
    const double rate = (logs[K_tail] - logs[half]) / double(K_tail - half);
    if (rate <= 0.0) {
        out.diverging = true;
        out.tail = std::numeric_limits<double>::infinity();
    } else {
        const double q = std::exp(-rate);
        out.tail = std::exp(-logs[K_tail]) * q / (1.0 - q);
    }
    out.bound = C * std::max(1.0, std::pow(double(j), alpha));
    out.margin = out.bound - (out.partial_sum + out.tail);
    return out;
}

// Smallest C~ with |J_{j-1}| <= C~ j^{-beta/2} |(f^{j-2})'(c_1)|^{-1/2} over j = 3..K_max.
[[nodiscard]] inline double decay_constant(const Tower& T) {
    double c = 0.0;
    for (std::size_t j = 3; j <= T.K_max; ++j) {
        const double scale = std::pow(double(j), -T.beta / 2) * std::exp(-0.5 * T.orbit.log_derivs[j - 2]);
        c = std::max(c, T.J_length(j - 1) / scale);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Serialization

[[nodiscard]] inline nlohmann::json tower_to_json(const Tower& T) {
    nlohmann::json j;
    j["family"] = T.fam.name;
    j["t"] = T.t.hi;
    j["t_lo"] = T.t.lo;
    j["delta"] = T.delta;
    j["L"] = T.L;
    j["beta"] = T.beta;
    j["K_max"] = T.K_max;
    j["H0"] = T.H0;
    j["H_delta"] = T.H_delta;
    j["inherited_levels"] = T.inherited;
    j["radii_in_bounds"] = T.radii_in_bounds;
    j["shrunk_levels"] = T.shrunk_levels;
    nlohmann::json lv = nlohmann::json::array();
    for (std::size_t k = 1; k <= T.K_max; ++k) {
        nlohmann::json e;
        e["k"] = k;
        e["center"] = T.center(k);
        e["radius"] = T.b[k];
        e["J"] = {T.fam.c - T.r_minus[k], T.fam.c + T.r_plus[k]};
        e["I_minus"] = {T.fam.c + T.I_minus(k).lo, T.fam.c + T.I_minus(k).hi};
        e["I_plus"] = {T.fam.c + T.I_plus(k).lo, T.fam.c + T.I_plus(k).hi};
        e["I_empty"] = T.I_empty(k);
        lv.push_back(e);
    }
    j["levels"] = lv;
    return j;
}

} // namespace srblab
