#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "map_family.hpp"
#include "parallel.hpp"

namespace srblab {

using Observable = std::function<double(double)>;

struct BinnedDensity {
    std::size_t bins = 0;
    std::vector<double> masses;  // per-bin probabilities on the uniform partition of [0,1]
    Interval support_hint{0.0, 1.0};

    [[nodiscard]] double bin_left(std::size_t i) const { return double(i) / double(bins); }
    [[nodiscard]] double bin_right(std::size_t i) const { return double(i + 1) / double(bins); }
    [[nodiscard]] double mid(std::size_t i) const { return (double(i) + 0.5) / double(bins); }
};

// Sparse row-stochastic matrix, CSR layout.
struct UlamMatrix {
    std::size_t n = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<std::uint32_t> cols;
    std::vector<double> vals;

    [[nodiscard]] double row_sum(std::size_t i) const {
        KahanSum s;
        for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += vals[k];
        return s.value();
    }
    [[nodiscard]] double at(std::size_t i, std::size_t j) const {
        for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            if (cols[k] == j) return vals[k];
        return 0.0;
    }
    // y = x P (push-forward of bin masses).
    [[nodiscard]] std::vector<double> push(const std::vector<double>& x) const {
        std::vector<double> y(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double xi = x[i];
            if (xi == 0.0) continue;
            for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) y[cols[k]] += xi * vals[k];
        }
        return y;
    }
};

// ---------------------------------------------------------------------------
// Birkhoff averages

struct BirkhoffResult {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t restarts = 0;  // orbit hit c or a fixed endpoint exactly
    std::size_t n = 0;
};

struct BirkhoffOptions {
    std::size_t burn_in = 10000;
    std::size_t batches = 100;
    std::size_t chains = 1;        // independent orbits, merged in chain order
    std::uint64_t seed = 12345;    // seeds the starting points of chains >= 1
    unsigned threads = 1;
};

namespace detail {

struct ChainOut {
    std::vector<double> batch_sums;
    std::vector<std::size_t> batch_counts;
    std::size_t restarts = 0;
};

inline ChainOut run_chain(const MapFamily& fam, double t, const Observable& A, std::size_t n, std::size_t burn_in,
                          double x0, std::size_t batches) {
    ChainOut out;
    out.batch_sums.assign(batches, 0.0);
    out.batch_counts.assign(batches, 0);
    double x = x0;
    std::size_t perturb = 0;
    auto restart_if_stuck = [&](double& y) {
        if (y == fam.c || y <= 0.0 || y >= 1.0) {
            ++out.restarts;
            ++perturb;
            y = x0 + 1e-9 * double(perturb);
            if (y >= 1.0) y = x0 - 1e-9 * double(perturb);
        }
    };
    for (std::size_t i = 0; i < burn_in; ++i) {
        x = fam.eval(t, x);
        restart_if_stuck(x);
    }
    const std::size_t per = (n + batches - 1) / batches;
    KahanSum acc;
    std::size_t b = 0, in_batch = 0;
    for (std::size_t i = 0; i < n; ++i) {
        x = fam.eval(t, x);
        restart_if_stuck(x);
        acc += A(x);
        if (++in_batch == per || i + 1 == n) {
            out.batch_sums[b] = acc.value();
            out.batch_counts[b] = in_batch;
            acc = KahanSum{};
            in_batch = 0;
            ++b;
        }
    }
    return out;
}

} // namespace detail

[[nodiscard]] inline BirkhoffResult birkhoff_average(const MapFamily& fam, double t, const Observable& A,
                                                     std::size_t n_iters, double x0,
                                                     const BirkhoffOptions& opt = {}) {
    if (n_iters < 10000) throw std::invalid_argument("birkhoff_average: n_iters must be >= 1e4");
    check_param(fam, t);
    if (!(x0 > 0.0 && x0 < 1.0)) throw DomainError("birkhoff_average: x0 must lie in (0,1)");
    const std::size_t chains = std::max<std::size_t>(1, opt.chains);
    std::vector<double> starts(chains, x0);
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> U(0.05, 0.95);
    for (std::size_t k = 1; k < chains; ++k) starts[k] = U(rng);
    const std::size_t per_chain = n_iters / chains;
    const std::size_t batches_per = std::max<std::size_t>(1, opt.batches / chains);
    std::vector<detail::ChainOut> outs(chains);
    parallel_for(chains, opt.threads, [&](std::size_t k) {
        const std::size_t nk = per_chain + (k + 1 == chains ? n_iters - per_chain * chains : 0);
        outs[k] = detail::run_chain(fam, t, A, nk, opt.burn_in, starts[k], batches_per);
    });
    BirkhoffResult r;
    std::vector<double> means;
    KahanSum total;
    std::size_t count = 0;
    for (const auto& o : outs) {
        r.restarts += o.restarts;
        for (std::size_t b = 0; b < o.batch_sums.size(); ++b) {
            if (o.batch_counts[b] == 0) continue;
            total += o.batch_sums[b];
            count += o.batch_counts[b];
            means.push_back(o.batch_sums[b] / double(o.batch_counts[b]));
        }
    }
    r.n = count;
    r.mean = total.value() / double(count);
    if (means.size() > 1) {
        double m = 0.0;
        for (double v : means) m += v;
        m /= double(means.size());
        double ss = 0.0;
        for (double v : means) ss += (v - m) * (v - m);
        r.stderr_ = std::sqrt(ss / double(means.size() - 1) / double(means.size()));
    }
    return r;
}

struct LyapunovResult {
    double value = 0.0;
    std::size_t zero_hits = 0;  // iterates with vanishing derivative, skipped
};

[[nodiscard]] inline LyapunovResult lyapunov(const MapFamily& fam, double t, std::size_t n_iters, double x0,
                                             std::size_t burn_in = 10000) {
    check_param(fam, t);
    double x = x0;
    for (std::size_t i = 0; i < burn_in; ++i) x = fam.eval(t, x);
    LyapunovResult r;
    KahanSum acc;
    std::size_t used = 0;
    for (std::size_t i = 0; i < n_iters; ++i) {
        const double d = std::abs(fam.dx(t, x));
        if (d == 0.0) ++r.zero_hits;
        else { acc += std::log(d); ++used; }
        x = fam.eval(t, x);
    }
    r.value = used ? acc.value() / double(used) : kNegInf;
    if (r.zero_hits > 0 && used == 0) r.value = kNegInf;
    return r;
}

// ---------------------------------------------------------------------------
// Ulam discretization

namespace detail {

// Exact row: Lebesgue measure of {x in [a,b] : f(x) in bin j} / (b - a).
inline void ulam_row_exact(const MapFamily& fam, double t, std::size_t n, double a, double b,
                           std::vector<std::pair<std::uint32_t, double>>& row) {
    row.clear();
    const double w = b - a;
    auto piece = [&](double pa, double pb) {
        if (pb <= pa) return;
        const double ya = fam.eval(t, pa), yb = fam.eval(t, pb);
        const bool inc = yb >= ya;
        const double lo = std::min(ya, yb), hi = std::max(ya, yb);
        auto bin_of = [&](double y) {
            long j = static_cast<long>(std::floor(y * double(n)));
            return static_cast<std::size_t>(std::clamp<long>(j, 0, long(n) - 1));
        };
        const std::size_t j0 = bin_of(lo), j1 = bin_of(hi);
        if (j0 == j1 || hi == lo) {
            row.emplace_back(std::uint32_t(j0), (pb - pa) / w);
            return;
        }
        // preimage of y inside [pa, pb]
        auto pre = [&](double y) {
            auto G = [&](double x) { return fam.eval(t, x) - y; };
            return bisect(G, pa, pb, ya - y, 80);
        };
        double prev_x = inc ? pa : pb;
        for (std::size_t j = j0; j <= j1; ++j) {
            const double edge_hi = double(j + 1) / double(n);
            double next_x;
            if (j == j1) next_x = inc ? pb : pa;
            else next_x = pre(edge_hi);
            const double len = std::abs(next_x - prev_x);
            if (len > 0.0) row.emplace_back(std::uint32_t(j), len / w);
            prev_x = next_x;
        }
    };
    if (a < fam.c && b > fam.c) {
        piece(a, fam.c);
        piece(fam.c, b);
    } else {
        piece(a, b);
    }
    // merge duplicate columns (both branches may hit the same bin)
    std::sort(row.begin(), row.end());
    std::vector<std::pair<std::uint32_t, double>> merged;
    for (const auto& e : row) {
        if (!merged.empty() && merged.back().first == e.first) merged.back().second += e.second;
        else merged.push_back(e);
    }
    row.swap(merged);
}

inline void ulam_row_sampled(const MapFamily& fam, double t, std::size_t n, double a, double b, std::size_t samples,
                             std::vector<std::pair<std::uint32_t, double>>& row) {
    std::vector<double> acc;
    std::vector<std::uint32_t> idx;
    row.clear();
    for (std::size_t s = 0; s < samples; ++s) {
        const double x = a + (b - a) * (double(s) + 0.5) / double(samples);
        const double y = fam.eval(t, x);
        long j = static_cast<long>(std::floor(y * double(n)));
        row.emplace_back(std::uint32_t(std::clamp<long>(j, 0, long(n) - 1)), 1.0 / double(samples));
    }
    std::sort(row.begin(), row.end());
    std::vector<std::pair<std::uint32_t, double>> merged;
    for (const auto& e : row) {
        if (!merged.empty() && merged.back().first == e.first) merged.back().second += e.second;
        else merged.push_back(e);
    }
    row.swap(merged);
}

} // namespace detail

// samples_per_bin == 0 selects the exact interval-image computation.
[[nodiscard]] inline UlamMatrix build_ulam(const MapFamily& fam, double t, std::size_t n_bins,
                                           std::size_t samples_per_bin = 0, unsigned threads = 1) {
    if (n_bins < 2) throw std::invalid_argument("build_ulam: need at least 2 bins");
    check_param(fam, t);
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(n_bins);
    const std::size_t chunk = 256;
    const std::size_t nchunks = (n_bins + chunk - 1) / chunk;
    parallel_for(nchunks, threads, [&](std::size_t ci) {
        for (std::size_t i = ci * chunk; i < std::min(n_bins, (ci + 1) * chunk); ++i) {
            const double a = double(i) / double(n_bins), b = double(i + 1) / double(n_bins);
            if (samples_per_bin == 0) detail::ulam_row_exact(fam, t, n_bins, a, b, rows[i]);
            else detail::ulam_row_sampled(fam, t, n_bins, a, b, samples_per_bin, rows[i]);
        }
    });
    UlamMatrix P;
    P.n = n_bins;
    P.row_ptr.assign(n_bins + 1, 0);
    for (std::size_t i = 0; i < n_bins; ++i) {
        // Renormalize away the roundoff of the preimage lengths.
        KahanSum s;
        for (const auto& e : rows[i]) s += e.second;
        const double tot = s.value();
        for (const auto& e : rows[i]) {
            P.cols.push_back(e.first);
            P.vals.push_back(e.second / tot);
        }
        P.row_ptr[i + 1] = P.cols.size();
    }
    return P;
}

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& msg, double residual)
        : std::runtime_error(msg), last_residual(residual) {}
    double last_residual;
};

// Stationary bin masses. Iterates the lazy chain rho <- (rho + rho P)/2, whose
// only unimodular eigenvalue is 1 even when P has eigenvalues at other roots of
// unity, so the iteration converges geometrically for non-mixing parameters too.
[[nodiscard]] inline BinnedDensity stationary_density(const UlamMatrix& P, double tol = 1e-13,
                                                      std::size_t max_iter = 200000) {
    std::vector<double> rho(P.n, 1.0 / double(P.n));
    double res = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        std::vector<double> nxt = P.push(rho);
        KahanSum diff, tot;
        for (std::size_t i = 0; i < P.n; ++i) {
            nxt[i] = 0.5 * (nxt[i] + rho[i]);
            tot += nxt[i];
        }
        const double z = tot.value();
        for (std::size_t i = 0; i < P.n; ++i) {
            nxt[i] /= z;
            diff += std::abs(nxt[i] - rho[i]);
        }
        rho.swap(nxt);
        res = diff.value();
        if (res < tol) {
            BinnedDensity d;
            d.bins = P.n;
            d.masses = std::move(rho);
            return d;
        }
    }
    std::ostringstream os;
    os << "stationary_density: no convergence after " << max_iter << " iterations, residual " << res;
    throw ConvergenceError(os.str(), res);
}

[[nodiscard]] inline double integrate_observable(const BinnedDensity& d, const Observable& A) {
    KahanSum s;
    for (std::size_t i = 0; i < d.bins; ++i)
        if (d.masses[i] != 0.0) s += d.masses[i] * A(d.mid(i));
    return s.value();
}

[[nodiscard]] inline BinnedDensity ulam_density(const MapFamily& fam, double t, std::size_t n_bins,
                                                unsigned threads = 1, double tol = 1e-13) {
    BinnedDensity d = stationary_density(build_ulam(fam, t, n_bins, 0, threads), tol);
    const CriticalOrbit orb = critical_orbit(fam, t, 2);
    d.support_hint = {orb.points[2], orb.points[1]};
    return d;
}

// Bin masses of the t = 4 invariant density 1/(pi sqrt(x(1-x))).
[[nodiscard]] inline std::vector<double> arcsine_bin_masses(std::size_t n) {
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = double(i) / double(n), b = double(i + 1) / double(n);
        m[i] = 2.0 / std::numbers::pi * (std::asin(std::sqrt(b)) - std::asin(std::sqrt(a)));
    }
    return m;
}

} // namespace srblab
