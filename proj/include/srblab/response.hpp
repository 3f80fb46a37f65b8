#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "numeric.hpp"
#include "parallel.hpp"
#include "parameter_select.hpp"
#include "srb_estimate.hpp"
#include "tower.hpp"
#include "transfer_op.hpp"

namespace srblab {

// ---------------------------------------------------------------------------
// Bump observable A_D

namespace detail {

// Order-9 smoothstep and its antiderivative on [0,1].
inline double smoothstep9(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double x5 = x * x * x * x * x;
    return x5 * (126.0 + x * (-420.0 + x * (540.0 + x * (-315.0 + 70.0 * x))));
}

inline double smoothstep9_integral(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return x - 0.5;
    const double x6 = std::pow(x, 6);
    return x6 * (21.0 + x * (-60.0 + x * (67.5 + x * (-35.0 + 7.0 * x))));
}

} // namespace detail

// A(x) = G(1 - |x - center|/D) with G' = rho, rho a plateau bump on [0,1] whose
// ramps have width `ramp`. Hence sup|A'| = 1/D, A(center) = 1 - ramp and
// A(center +- D/2) = 1/2 - ramp/2.
struct ObservableAD {
    double center = 0.5;
    double D = 0.05;
    double ramp = 0.2;

    [[nodiscard]] double rho(double s) const {
        if (s <= 0.0 || s >= 1.0) return 0.0;
        if (s < ramp) return detail::smoothstep9(s / ramp);
        if (s > 1.0 - ramp) return detail::smoothstep9((1.0 - s) / ramp);
        return 1.0;
    }
    [[nodiscard]] double G(double s) const {
        if (s <= 0.0) return 0.0;
        if (s >= 1.0) return 1.0 - ramp;
        const double head = ramp * detail::smoothstep9_integral(1.0);  // = ramp / 2
        if (s <= ramp) return ramp * detail::smoothstep9_integral(s / ramp);
        if (s <= 1.0 - ramp) return head + (s - ramp);
        return head + (1.0 - 2.0 * ramp) + (head - ramp * detail::smoothstep9_integral((1.0 - s) / ramp));
    }
    [[nodiscard]] double operator()(double x) const { return G(1.0 - std::abs(x - center) / D); }
    [[nodiscard]] double deriv(double x) const {
        const double d = x - center;
        if (d == 0.0) return 0.0;
        return -(d > 0.0 ? 1.0 : -1.0) * rho(1.0 - std::abs(d) / D) / D;
    }
    [[nodiscard]] double peak() const { return 1.0 - ramp; }
    [[nodiscard]] Observable function() const {
        return [a = *this](double x) { return a(x); };
    }

    // ||A||_{L^q} by composite 4-point Gauss on the support.
    [[nodiscard]] double lq_norm(double q, std::size_t pieces = 512) const {
        if (!(q >= 1.0)) throw std::invalid_argument("ObservableAD::lq_norm: q must be >= 1");
        const auto& g = gauss4();
        const double a = center - D, h = 2.0 * D / double(pieces);
        KahanSum s;
        for (std::size_t i = 0; i < pieces; ++i)
            for (std::size_t j = 0; j < 4; ++j) s += g.w[j] * h * std::pow((*this)(a + (double(i) + g.x[j]) * h), q);
        return std::pow(s.value(), 1.0 / q);
    }
};

[[nodiscard]] inline ObservableAD observable_AD(double center, double D, double ramp = 0.2) {
    if (!(D > 0.0)) throw std::invalid_argument("observable_AD: D must be positive");
    if (!(ramp > 0.0 && ramp <= 0.5)) throw std::invalid_argument("observable_AD: ramp must lie in (0, 1/2]");
    if (!(center - D > 0.0 && center + D < 1.0))
        throw DomainError("observable_AD: support [center-D, center+D] escapes (0,1)");
    return {center, D, ramp};
}

// ---------------------------------------------------------------------------
// Response curves

enum class Estimator { birkhoff, ulam, both, tower };

[[nodiscard]] inline std::string to_string(Estimator e) {
    switch (e) {
    case Estimator::birkhoff: return "birkhoff";
    case Estimator::ulam: return "ulam";
    case Estimator::both: return "both";
    case Estimator::tower: return "tower";
    }
    return "?";
}

[[nodiscard]] inline Estimator estimator_from_string(const std::string& s) {
    if (s == "birkhoff") return Estimator::birkhoff;
    if (s == "ulam") return Estimator::ulam;
    if (s == "both") return Estimator::both;
    if (s == "tower") return Estimator::tower;
    throw std::invalid_argument("unknown estimator '" + s + "' (birkhoff, ulam, both, tower)");
}

struct ResponsePoint {
    Param t;
    std::size_t M = 0;  // admissible truncation level for (t0, t); 0 when unknown
};

struct ResponseRow {
    Param t;
    double dt = 0.0;
    double abs_dt = 0.0;
    std::size_t M = 0;
    double deltaR = 0.0;
    double stderr_ = 0.0;    // Birkhoff batch-means error, or the grid-halving difference for ulam/tower
    double alt_deltaR = std::numeric_limits<double>::quiet_NaN();  // second estimator in `both` mode
    bool flagged = false;    // estimators disagree beyond the combined tolerance
    bool excluded = false;   // disagreement beyond 5x the combined tolerance
    bool used_in_fit = false;
    std::string note;

    [[nodiscard]] double ratio_sqrt() const { return abs_dt > 0.0 ? std::abs(deltaR) / std::sqrt(abs_dt) : 0.0; }
};

struct HolderFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::size_t n = 0;
    double decades = 0.0;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ResponseCurve {
    Param t0;
    Estimator estimator = Estimator::tower;
    double R0 = 0.0;
    std::vector<ResponseRow> rows;
    std::optional<HolderFit> fit;
    std::string fit_error;
    double ratio_min = 0.0;   // over rows used in the fit
    double ratio_max = 0.0;

    [[nodiscard]] double band_factor() const { return ratio_min > 0.0 ? ratio_max / ratio_min : 0.0; }
};

// OLS of log y on log x with a 95% slope interval.
[[nodiscard]] inline HolderFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
    if (x.size() < 5) throw FitError("fit_holder_exponent: need at least 5 usable rows, have " + std::to_string(x.size()));
    std::vector<double> lx, ly;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::invalid_argument("fit_power_law: values must be positive");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
        lo = std::min(lo, x[i]);
        hi = std::max(hi, x[i]);
    }
    const double decades = std::log10(hi / lo);
    if (decades < 2.0) {
        std::ostringstream os;
        os << "fit_holder_exponent: rows span " << decades << " decades in |t - t0|, need >= 2";
        throw FitError(os.str());
    }
    const LinearFit f = fit_line(lx, ly);
    HolderFit h;
    h.slope = f.slope;
    h.intercept = f.intercept;
    h.r2 = f.r2;
    h.n = f.n;
    h.decades = decades;
    const double w = student_t975(f.n - 2) * f.slope_stderr;
    h.ci_lo = f.slope - w;
    h.ci_hi = f.slope + w;
    return h;
}

// Fits rows with |dR| > 3 stderr that are not excluded; marks them used_in_fit.
inline HolderFit fit_holder_exponent(ResponseCurve& curve) {
    std::vector<double> x, y;
    for (auto& r : curve.rows) {
        r.used_in_fit = !r.excluded && r.abs_dt > 0.0 && std::abs(r.deltaR) > 3.0 * r.stderr_;
        if (r.used_in_fit) {
            x.push_back(r.abs_dt);
            y.push_back(std::abs(r.deltaR));
        }
    }
    return fit_power_law(x, y);
}

struct ResponseOptions {
    Estimator estimator = Estimator::tower;
    unsigned threads = 1;
    // birkhoff
    std::size_t birkhoff_iters = 100000000;
    std::size_t birkhoff_chains = 8;
    std::uint64_t seed = 12345;
    double x0 = 0.3;
    // ulam
    std::size_t ulam_bins = 1u << 16;
    // tower
    TransferOptions transfer{};
    std::size_t K_extra = 20;   // tower height = 2 max(M) + K_extra
    bool grid_error = true;     // rerun at half resolution to estimate the discretization error
    EigenOptions eigen{};
    // optional replacement for leading_eigenpair(op, M, eigen), e.g. a cached solver
    std::function<Eigenpair(const TransferOperator&, std::size_t)> solver;
    // both
    double agree_factor = 3.0;  // flag when |dR_b - dR_u| > agree_factor * combined
};

// Base quantities at t0 for the tower estimator.
struct TowerResponseBase {
    Tower T0;
    std::shared_ptr<TransferOperator> op;
    Eigenpair ep;
    double R0 = 0.0;
};

using EigenSolver = std::function<Eigenpair(const TransferOperator&, std::size_t)>;

[[nodiscard]] inline TowerResponseBase tower_response_base(const MapFamily& fam, const Param& t0, std::size_t K,
                                                           const TransferOptions& to, const Observable& A,
                                                           const EigenOptions& eo = {},
                                                           const EigenSolver& solver = nullptr) {
    TowerOptions o;
    o.K_max = K;
    TowerResponseBase b{build_tower(fam, t0, o), nullptr, {}, 0.0};
    b.op = std::make_shared<TransferOperator>(b.T0, cutoff_family(b.T0), to);
    b.ep = solver ? solver(*b.op, K) : leading_eigenpair(*b.op, K, eo);
    b.R0 = b.op->pair(A, b.ep.phi);
    return b;
}

// Operator at t on a tower sharing the base levels up to 2M, with the base lambda.
[[nodiscard]] inline TransferOperator perturbed_operator(const TowerResponseBase& base, const Param& t, std::size_t M) {
    const Tower Tt = build_tower_like(base.T0, t, 2 * M, base.T0.K_max);
    TransferOptions to = base.op->options();
    to.lambda = base.op->lambda();
    return TransferOperator(Tt, cutoff_family(Tt), to);
}

namespace detail {

inline std::vector<double> tower_delta(const MapFamily& fam, const Param& t0, const std::vector<ResponsePoint>& pts,
                                       const Observable& A, const ResponseOptions& opt, const TransferOptions& to,
                                       double* R0_out) {
    std::size_t Mmax = 1;
    for (const auto& p : pts) Mmax = std::max(Mmax, p.M);
    const std::size_t K = 2 * Mmax + opt.K_extra;
    TransferOptions base_to = to;
    base_to.threads = opt.threads;
    const TowerResponseBase base = tower_response_base(fam, t0, K, base_to, A, opt.eigen, opt.solver);
    if (R0_out) *R0_out = base.R0;
    std::vector<double> out(pts.size(), 0.0);
    const unsigned outer = std::max(1u, std::min<unsigned>(opt.threads, unsigned(pts.size())));
    parallel_for(pts.size(), outer, [&](std::size_t i) {
        if (pts[i].t.minus(t0) == 0.0) return;
        if (pts[i].M == 0) throw std::invalid_argument("response_curve: tower estimator needs the admissible M per row");
        TransferOperator op = perturbed_operator(base, pts[i].t, pts[i].M);
        EigenOptions eo = opt.eigen;
        eo.init = nullptr;
        const Eigenpair ep = opt.solver ? opt.solver(op, K) : leading_eigenpair(op, K, eo);
        out[i] = op.pair(A, ep.phi) - base.R0;
    });
    return out;
}

} // namespace detail

// Rows of Delta R = R_A(t) - R_A(t0), sorted by |t - t0|.
[[nodiscard]] inline ResponseCurve response_curve(const MapFamily& fam, const Param& t0,
                                                  std::vector<ResponsePoint> pts, const Observable& A,
                                                  const ResponseOptions& opt = {}) {
    check_param(fam, t0.hi);
    for (const auto& p : pts) check_param(fam, p.t.hi);
    std::stable_sort(pts.begin(), pts.end(), [&](const ResponsePoint& a, const ResponsePoint& b) {
        return std::abs(a.t.minus(t0)) < std::abs(b.t.minus(t0));
    });
    ResponseCurve curve;
    curve.t0 = t0;
    curve.estimator = opt.estimator;
    curve.rows.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto& r = curve.rows[i];
        r.t = pts[i].t;
        r.dt = pts[i].t.minus(t0);
        r.abs_dt = std::abs(r.dt);
        r.M = pts[i].M;
    }
    const std::size_t n = pts.size();

    auto run_birkhoff = [&](std::vector<double>& d, std::vector<double>& se) {
        BirkhoffOptions bo;
        bo.chains = opt.birkhoff_chains;
        bo.seed = opt.seed;
        bo.threads = opt.threads;
        const BirkhoffResult b0 = birkhoff_average(fam, t0.hi, A, opt.birkhoff_iters, opt.x0, bo);
        d.assign(n, 0.0);
        se.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (curve.rows[i].abs_dt == 0.0) continue;
            const BirkhoffResult b = birkhoff_average(fam, pts[i].t.hi, A, opt.birkhoff_iters, opt.x0, bo);
            d[i] = b.mean - b0.mean;
            se[i] = std::hypot(b.stderr_, b0.stderr_);
        }
        return b0.mean;
    };
    auto run_ulam = [&](std::vector<double>& d, std::vector<double>& se) {
        auto at = [&](std::size_t bins, std::vector<double>& out) {
            const double r0 = integrate_observable(ulam_density(fam, t0.hi, bins, opt.threads), A);
            out.assign(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                if (curve.rows[i].abs_dt != 0.0)
                    out[i] = integrate_observable(ulam_density(fam, pts[i].t.hi, bins, opt.threads), A) - r0;
            return r0;
        };
        std::vector<double> half;
        const double r0 = at(opt.ulam_bins, d);
        at(opt.ulam_bins / 2, half);
        se.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) se[i] = std::abs(d[i] - half[i]);
        return r0;
    };

    std::vector<double> d, se;
    switch (opt.estimator) {
    case Estimator::birkhoff: curve.R0 = run_birkhoff(d, se); break;
    case Estimator::ulam: curve.R0 = run_ulam(d, se); break;
    case Estimator::tower: {
        d = detail::tower_delta(fam, t0, pts, A, opt, opt.transfer, &curve.R0);
        se.assign(n, 0.0);
        if (opt.grid_error) {
            TransferOptions half = opt.transfer;
            half.ground_cells /= 2;
            half.level_cells /= 2;
            const std::vector<double> h = detail::tower_delta(fam, t0, pts, A, opt, half, nullptr);
            for (std::size_t i = 0; i < n; ++i) se[i] = std::abs(d[i] - h[i]);
        }
        break;
    }
    case Estimator::both: {
        std::vector<double> du, su;
        curve.R0 = run_birkhoff(d, se);
        run_ulam(du, su);
        for (std::size_t i = 0; i < n; ++i) {
            auto& r = curve.rows[i];
            r.alt_deltaR = du[i];
            const double tol = std::hypot(se[i], su[i]);
            const double gap = std::abs(d[i] - du[i]);
            if (gap > opt.agree_factor * tol) {
                r.flagged = true;
                std::ostringstream os;
                os << "birkhoff and ulam differ by " << gap << " (combined tolerance " << tol << ")";
                r.note = os.str();
            }
            if (gap > 5.0 * opt.agree_factor * tol) {
                r.excluded = true;
                r.note += "; excluded";
            }
            se[i] = std::max(se[i], su[i]);
        }
        break;
    }
    }
    for (std::size_t i = 0; i < n; ++i) {
        curve.rows[i].deltaR = d[i];
        curve.rows[i].stderr_ = se[i];
    }
    try {
        curve.fit = fit_holder_exponent(curve);
    } catch (const FitError& e) {
        curve.fit_error = e.what();
    }
    bool any = false;
    for (const auto& r : curve.rows) {
        if (!r.used_in_fit) continue;
        const double q = r.ratio_sqrt();
        curve.ratio_min = any ? std::min(curve.ratio_min, q) : q;
        curve.ratio_max = any ? std::max(curve.ratio_max, q) : q;
        any = true;
    }
    return curve;
}

[[nodiscard]] inline std::vector<ResponsePoint> response_points(const MTSequence& seq) {
    std::vector<ResponsePoint> pts;
    for (const auto& e : seq.entries) pts.push_back({e.mt.t, e.pair.M});
    return pts;
}

// ---------------------------------------------------------------------------
// Spike displacement and the three-bracket decomposition

class NotShared : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// True when both operators use bit-identical grids on levels 0..M.
[[nodiscard]] inline bool levels_shared(const TransferOperator& a, const TransferOperator& b, std::size_t M) {
    const auto& ga = *a.grid();
    const auto& gb = *b.grid();
    if (M > a.K() || M > b.K()) return false;
    for (std::size_t k = 0; k <= M; ++k)
        if (ga.levels[k].edges != gb.levels[k].edges || ga.offset[k + 1] != gb.offset[k + 1]) return false;
    return a.lambda() == b.lambda();
}

[[nodiscard]] inline std::size_t top_level(const TowerFunction& psi) {
    for (std::size_t k = psi.grid->levels.size(); k-- > 0;) {
        auto lv = psi.level(k);
        if (std::any_of(lv.begin(), lv.end(), [](double x) { return x != 0.0; })) return k;
    }
    return 0;
}

// <A, (Pi_t - Pi) phi> for phi supported on levels shared by the two towers:
// sum_k lambda^k int (A(f_t^k(x)) - A(f^k(x))) phi_k(x) dx.
[[nodiscard]] inline double spike_displacement(const TransferOperator& op0, const TransferOperator& opt,
                                               const TowerFunction& phi, const Observable& A) {
    const std::size_t top = top_level(phi);
    if (!levels_shared(op0, opt, top))
        throw NotShared("spike_displacement: towers do not share levels up to " + std::to_string(top) +
                        " (pair not admissible for this truncation)");
    return opt.pair(A, phi) - op0.pair(A, phi);
}

struct SpikeLevel {
    std::size_t k = 0;
    double contribution = 0.0;
    std::size_t positive = 0;   // support cells with f_t^k > f^k
    std::size_t negative = 0;
    [[nodiscard]] bool coherent() const { return positive == 0 || negative == 0; }
};

// Per-level spike terms and the orientation of f_t^k - f^k on supp phi_k (cell midpoints).
[[nodiscard]] inline std::vector<SpikeLevel> spike_levels(const TransferOperator& op0, const TransferOperator& opt,
                                                          const TowerFunction& phi, const Observable& A) {
    const std::size_t top = top_level(phi);
    if (!levels_shared(op0, opt, top)) throw NotShared("spike_levels: towers do not share the support levels of phi");
    const std::vector<double> w0 = op0.observable_weights(A), wt = opt.observable_weights(A);
    const auto& G = *op0.grid();
    std::vector<SpikeLevel> out;
    for (std::size_t k = 0; k <= top; ++k) {
        SpikeLevel s;
        s.k = k;
        KahanSum acc;
        const auto& L = G.levels[k];
        for (std::size_t i = 0; i < L.cells(); ++i) {
            const std::size_t j = G.offset[k] + i;
            const double v = phi.v[j];
            if (v == 0.0) continue;
            acc += v * (wt[j] - w0[j]);
            if (k == 0) continue;
            const double u = 0.5 * (L.edges[i] + L.edges[i + 1]);
            const double d = opt.tower().X(k, u) - op0.tower().X(k, u);
            if (d > 0.0) ++s.positive;
            else if (d < 0.0) ++s.negative;
        }
        s.contribution = std::pow(op0.lambda(), double(k)) * acc.value();
        out.push_back(s);
    }
    return out;
}

struct Decomposition {
    std::size_t M = 0;           // truncation level used for the middle functions (2M in the MT case)
    double term1 = 0.0;          // <A, Pi_t(phi_t - phi_{t,M})> + <A, Pi(phi_M - phi)>
    double term2 = 0.0;          // <A, Pi_t(phi_{t,M} - phi_M)>
    double term3 = 0.0;          // <A, (Pi_t - Pi) phi_M>
    double total = 0.0;
    double direct = 0.0;         // <A, Pi_t phi_t> - <A, Pi phi>
    double residual = 0.0;       // |total - direct| / max |term|
    double kappa0 = 0.0;
    double kappat = 0.0;
};

[[nodiscard]] inline Decomposition decomposition_report(const TransferOperator& op0, const Eigenpair& ep0,
                                                        const TransferOperator& opt, const Eigenpair& ept,
                                                        std::size_t Mtr, const Observable& A,
                                                        const EigenOptions& eo = {}) {
    if (!levels_shared(op0, opt, Mtr))
        throw NotShared("decomposition_report: towers do not share levels up to " + std::to_string(Mtr));
    const Eigenpair e0 = leading_eigenpair(op0, Mtr, eo);
    const Eigenpair et = leading_eigenpair(opt, Mtr, eo);
    const std::vector<double> w0 = op0.observable_weights(A), wt = opt.observable_weights(A);
    const double Pt_full = opt.pair(wt, ept.phi), Pt_M = opt.pair(wt, et.phi);
    const double P0_full = op0.pair(w0, ep0.phi), P0_M = op0.pair(w0, e0.phi);
    const double PtOnP0M = opt.pair(wt, e0.phi);
    Decomposition d;
    d.M = Mtr;
    d.term1 = (Pt_full - Pt_M) + (P0_M - P0_full);
    d.term2 = Pt_M - PtOnP0M;
    d.term3 = PtOnP0M - P0_M;
    d.total = d.term1 + d.term2 + d.term3;
    d.direct = Pt_full - P0_full;
    const double big = std::max({std::abs(d.term1), std::abs(d.term2), std::abs(d.term3)});
    d.residual = big > 0.0 ? std::abs(d.total - d.direct) / big : std::abs(d.total - d.direct);
    d.kappa0 = e0.kappa;
    d.kappat = et.kappa;
    return d;
}

// ---------------------------------------------------------------------------
// Serialization

[[nodiscard]] inline nlohmann::json holder_fit_to_json(const HolderFit& f) {
    return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"ci_lo", f.ci_lo},
            {"ci_hi", f.ci_hi}, {"n", f.n},         {"decades", f.decades}};
}

[[nodiscard]] inline nlohmann::json response_curve_to_json(const ResponseCurve& c) {
    nlohmann::json j;
    j["t0"] = {c.t0.hi, c.t0.lo};
    j["estimator"] = to_string(c.estimator);
    j["R0"] = c.R0;
    if (c.fit) j["fit"] = holder_fit_to_json(*c.fit);
    else j["fit_error"] = c.fit_error;
    j["ratio_band"] = {{"min", c.ratio_min}, {"max", c.ratio_max}, {"factor", c.band_factor()}};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : c.rows) {
        nlohmann::json jr = {{"t", {r.t.hi, r.t.lo}}, {"dt", r.dt},   {"M", r.M},
                             {"deltaR", r.deltaR},     {"stderr", r.stderr_}, {"used_in_fit", r.used_in_fit},
                             {"flagged", r.flagged},   {"excluded", r.excluded}};
        if (!std::isnan(r.alt_deltaR)) jr["alt_deltaR"] = r.alt_deltaR;
        if (!r.note.empty()) jr["note"] = r.note;
        rows.push_back(jr);
    }
    j["rows"] = rows;
    return j;
}

[[nodiscard]] inline nlohmann::json decomposition_to_json(const Decomposition& d) {
    return {{"M", d.M},         {"term1", d.term1},   {"term2", d.term2},       {"term3", d.term3},
            {"total", d.total}, {"direct", d.direct}, {"residual", d.residual}, {"kappa0", d.kappa0},
            {"kappat", d.kappat}};
}

} // namespace srblab
