#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "parallel.hpp"
#include "tower.hpp"

namespace srblab {

// Cell partition of one tower level in the offset coordinate u = x - c.
struct LevelGrid {
    std::vector<double> edges;  // ascending, cells() + 1 entries

    [[nodiscard]] std::size_t cells() const { return edges.size() - 1; }
    [[nodiscard]] double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
    [[nodiscard]] double lo() const { return edges.front(); }
    [[nodiscard]] double hi() const { return edges.back(); }
};

struct TowerGrid {
    double c = 0.5;
    std::vector<LevelGrid> levels;
    std::vector<std::size_t> offset;  // offset[k] = first cell of level k; offset.back() = total

    [[nodiscard]] std::size_t total() const { return offset.back(); }
    [[nodiscard]] std::size_t K() const { return levels.size() - 1; }
};

// Piecewise-constant tower function; values are cell averages of psi_k in u.
struct TowerFunction {
    std::shared_ptr<const TowerGrid> grid;
    double lambda = 1.0;
    std::vector<double> v;

    [[nodiscard]] std::span<double> level(std::size_t k) {
        return {v.data() + grid->offset[k], grid->offset[k + 1] - grid->offset[k]};
    }
    [[nodiscard]] std::span<const double> level(std::size_t k) const {
        return {v.data() + grid->offset[k], grid->offset[k + 1] - grid->offset[k]};
    }
};

struct SparseMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<std::uint32_t> col;
    std::vector<double> val;

    struct Triplet {
        std::uint32_t r, c;
        double v;
    };

    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, const std::vector<std::vector<Triplet>>& parts) {
        SparseMatrix A;
        A.rows = rows;
        A.cols = cols;
        A.row_ptr.assign(rows + 1, 0);
        for (const auto& p : parts)
            for (const auto& t : p) ++A.row_ptr[t.r + 1];
        for (std::size_t i = 0; i < rows; ++i) A.row_ptr[i + 1] += A.row_ptr[i];
        A.col.resize(A.row_ptr.back());
        A.val.resize(A.row_ptr.back());
        std::vector<std::size_t> fill(A.row_ptr.begin(), A.row_ptr.end() - 1);
        for (const auto& p : parts)
            for (const auto& t : p) {
                A.col[fill[t.r]] = t.c;
                A.val[fill[t.r]++] = t.v;
            }
        return A;
    }

    // y[0..row_limit) = A x restricted to columns < col_limit; other rows zero.
    void multiply(const std::vector<double>& x, std::vector<double>& y, std::size_t row_limit,
                  std::size_t col_limit, unsigned threads) const {
        y.assign(rows, 0.0);
        const std::size_t chunk = 4096;
        const std::size_t nch = (row_limit + chunk - 1) / chunk;
        parallel_for(nch, threads, [&](std::size_t ci) {
            const std::size_t r1 = std::min(row_limit, (ci + 1) * chunk);
            for (std::size_t r = ci * chunk; r < r1; ++r) {
                double s = 0.0;
                for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
                    if (col[k] < col_limit) s += val[k] * x[col[k]];
                y[r] = s;
            }
        });
    }
};

struct TransferOptions {
    std::size_t ground_cells = 1u << 14;
    std::size_t level_cells = 1u << 10;  // per level k >= 1, split evenly between the sides of c
    double lambda = 0.0;                 // 0 selects Lambda^{1/4} from the critical orbit
    unsigned threads = 1;
};

// Exponential growth rate of |(f^k)'(c_1)| read off the second half of the orbit.
[[nodiscard]] inline double growth_rate(const Tower& T) {
    const auto& L = T.orbit.log_derivs;
    const std::size_t n = L.size() - 1, h = n / 2;
    if (L[n] == kNegInf) return 1.0;
    return std::exp((L[n] - L[h]) / double(n - h));
}

namespace detail {

inline LevelGrid side_split_grid(double rm, double rp, std::size_t n) {
    LevelGrid g;
    const std::size_t half = std::max<std::size_t>(1, n / 2);
    g.edges.reserve(2 * half + 1);
    for (std::size_t i = 0; i < half; ++i) g.edges.push_back(-rm + rm * double(i) / double(half));
    g.edges.push_back(0.0);
    for (std::size_t i = 1; i <= half; ++i) g.edges.push_back(rp * double(i) / double(half));
    g.edges.back() = rp;
    return g;
}

inline LevelGrid ground_grid(double c, std::size_t n) {
    LevelGrid g;
    for (std::size_t i = 0; i <= n; ++i) g.edges.push_back(double(i) / double(n) - c);
    if (!std::binary_search(g.edges.begin(), g.edges.end(), 0.0)) {
        g.edges.push_back(0.0);
        std::sort(g.edges.begin(), g.edges.end());
    }
    return g;
}

// Root of a monotone h on [a, b] with h(a), h(b) of opposite sign (Illinois).
template <class H>
double monotone_root(H&& h, double a, double b, double ha, double hb) {
    for (int it = 0; it < 100; ++it) {
        if (!(b - a > 4e-16 * std::max(std::abs(a), std::abs(b))) || b - a <= 0.0) break;
        double m = b - hb * (b - a) / (hb - ha);
        if (!(m > a && m < b)) m = 0.5 * (a + b);
        const double hm = h(m);
        if (hm == 0.0) return m;
        if ((hm < 0) == (hb < 0)) {
            b = m;
            hb = hm;
            ha *= 0.5;
        } else {
            a = m;
            ha = hm;
            hb *= 0.5;
        }
        if (it > 40) {  // slow convergence, finish by bisection
            const double mid = 0.5 * (a + b);
            const double hmid = h(mid);
            if ((hmid < 0) == (ha < 0)) { a = mid; ha = hmid; }
            else { b = mid; hb = hmid; }
        }
    }
    return 0.5 * (a + b);
}

// Splits the level-m cell [ua, ub] along the preimages of the x-edges under
// x = c_m + e_m(u) (monotone on the cell) and reports (bin, u0, u1) pieces.
template <class Emit>
void split_by_image(const Tower& T, std::size_t m, double ua, double ub, const std::vector<double>& xedges,
                    Emit&& emit) {
    const double cm = m == 0 ? T.fam.c : T.center(m);
    auto ex = [&](double u) { return m == 0 ? u : T.e(m, u); };
    const double ea = ex(ua), eb = ex(ub);
    const double xa = cm + ea, xb = cm + eb;
    const bool inc = xb >= xa;
    const double xlo = std::min(xa, xb), xhi = std::max(xa, xb);
    const std::size_t nb = xedges.size() - 1;
    auto bin_of = [&](double x) -> std::size_t {
        auto it = std::upper_bound(xedges.begin(), xedges.end(), x);
        std::size_t i = it == xedges.begin() ? 0 : std::size_t(it - xedges.begin()) - 1;
        return std::min(i, nb - 1);
    };
    const std::size_t b0 = bin_of(xlo), b1 = bin_of(xhi);
    if (b0 == b1) {
        emit(b0, ua, ub);
        return;
    }
    // walk bins in the direction of increasing u
    double prev = ua;
    if (inc) {
        for (std::size_t bi = b0; bi < b1; ++bi) {
            const double target = xedges[bi + 1] - cm;
            const double r = monotone_root([&](double u) { return ex(u) - target; }, prev, ub, ex(prev) - target,
                                           eb - target);
            emit(bi, prev, r);
            prev = r;
        }
        emit(b1, prev, ub);
    } else {
        for (std::size_t bi = b1; bi > b0; --bi) {
            const double target = xedges[bi] - cm;
            const double r = monotone_root([&](double u) { return ex(u) - target; }, prev, ub, ex(prev) - target,
                                           eb - target);
            emit(bi, prev, r);
            prev = r;
        }
        emit(b0, prev, ub);
    }
}

} // namespace detail

class TransferOperator {
public:
    TransferOperator(Tower tower, CutoffFamily cutoffs, TransferOptions opt = {})
        : tower_(std::move(tower)), xi_(std::move(cutoffs)), opt_(opt) {
        if (xi_.xi.size() != tower_.K_max + 1) throw std::invalid_argument("TransferOperator: cutoffs do not match tower");
        if (opt_.ground_cells < 4 || opt_.level_cells < 2) throw std::invalid_argument("TransferOperator: grid too small");
        lambda_ = opt_.lambda > 0.0 ? opt_.lambda : std::pow(growth_rate(tower_), 0.25);
        if (!(lambda_ > 1.0)) throw DomainError("TransferOperator: lambda must exceed 1");
        build_grid();
        build_matrix();
    }

    [[nodiscard]] const Tower& tower() const { return tower_; }
    [[nodiscard]] const CutoffFamily& cutoffs() const { return xi_; }
    [[nodiscard]] double lambda() const { return lambda_; }
    [[nodiscard]] std::size_t K() const { return tower_.K_max; }
    [[nodiscard]] const std::shared_ptr<const TowerGrid>& grid() const { return grid_; }
    [[nodiscard]] const TransferOptions& options() const { return opt_; }
    [[nodiscard]] const SparseMatrix& matrix() const { return A_; }

    [[nodiscard]] TowerFunction zero() const { return {grid_, lambda_, std::vector<double>(grid_->total(), 0.0)}; }

    // Cell averages of a pointwise function psi(k, u).
    [[nodiscard]] TowerFunction sample(const std::function<double(std::size_t, double)>& psi) const {
        TowerFunction f = zero();
        const auto& g = gauss4();
        for (std::size_t k = 0; k <= K(); ++k) {
            auto lv = f.level(k);
            const auto& G = grid_->levels[k];
            for (std::size_t i = 0; i < G.cells(); ++i) {
                double s = 0.0;
                for (std::size_t q = 0; q < 4; ++q) s += g.w[q] * psi(k, G.edges[i] + g.x[q] * G.width(i));
                lv[i] = s;
            }
        }
        return f;
    }

    // (T_M L T_M) psi; M >= K() applies the full operator.
    [[nodiscard]] TowerFunction apply(const TowerFunction& psi, std::size_t M = std::numeric_limits<std::size_t>::max()) const {
        check_compatible(psi);
        TowerFunction out = zero();
        const std::size_t lim = M >= K() ? grid_->total() : grid_->offset[M + 1];
        A_.multiply(psi.v, out.v, lim, lim, opt_.threads);
        return out;
    }

    // Mass leaving the truncated operator: lambda^M int xi_M psi_M.
    [[nodiscard]] double escape_mass(const TowerFunction& psi, std::size_t M) const {
        if (M >= K()) return 0.0;
        const auto& G = grid_->levels[M];
        auto lv = psi.level(M);
        KahanSum s;
        for (std::size_t i = 0; i < G.cells(); ++i) s += lv[i] * xi_.integral(M, G.edges[i], G.edges[i + 1]);
        return std::pow(lambda_, double(M)) * s.value();
    }

    // Densities (cell averages) of Pi psi on n_out uniform bins of [0,1].
    [[nodiscard]] std::vector<double> project(const TowerFunction& psi, std::size_t n_out) const {
        check_compatible(psi);
        const SparseMatrix& P = projection_matrix(n_out);
        std::vector<double> y;
        P.multiply(psi.v, y, P.rows, P.cols, opt_.threads);
        return y;
    }

    // Per-cell integrals a_S = int_S A(f^k(c + u)) du, so that <A, Pi psi> = sum_k lambda^k sum_S v_S a_S.
    [[nodiscard]] std::vector<double> observable_weights(const std::function<double(double)>& A) const {
        std::vector<double> a(grid_->total(), 0.0);
        const auto& g = gauss4();
        parallel_for(K() + 1, opt_.threads, [&](std::size_t k) {
            const auto& G = grid_->levels[k];
            for (std::size_t i = 0; i < G.cells(); ++i) {
                double s = 0.0;
                for (std::size_t q = 0; q < 4; ++q) {
                    const double u = G.edges[i] + g.x[q] * G.width(i);
                    s += g.w[q] * A(k == 0 ? tower_.fam.c + u : tower_.X(k, u));
                }
                a[grid_->offset[k] + i] = s * G.width(i);
            }
        });
        return a;
    }

    [[nodiscard]] double pair(const std::vector<double>& weights, const TowerFunction& psi) const {
        check_compatible(psi);
        KahanSum s;
        for (std::size_t k = 0; k <= K(); ++k) {
            KahanSum lvl;
            for (std::size_t i = grid_->offset[k]; i < grid_->offset[k + 1]; ++i) lvl += psi.v[i] * weights[i];
            s += std::pow(lambda_, double(k)) * lvl.value();
        }
        return s.value();
    }

    [[nodiscard]] double pair(const std::function<double(double)>& A, const TowerFunction& psi) const {
        return pair(observable_weights(A), psi);
    }

    void check_compatible(const TowerFunction& psi) const {
        if (psi.grid != grid_ && (psi.grid == nullptr || psi.grid->offset != grid_->offset))
            throw std::invalid_argument("tower function does not match the operator's grid");
    }

private:
    Tower tower_;
    CutoffFamily xi_;
    TransferOptions opt_;
    double lambda_ = 1.0;
    std::shared_ptr<const TowerGrid> grid_;
    SparseMatrix A_;
    mutable std::vector<std::pair<std::size_t, std::shared_ptr<SparseMatrix>>> proj_cache_;

    void build_grid() {
        auto g = std::make_shared<TowerGrid>();
        g->c = tower_.fam.c;
        g->levels.push_back(detail::ground_grid(tower_.fam.c, opt_.ground_cells));
        for (std::size_t k = 1; k <= tower_.K_max; ++k)
            g->levels.push_back(detail::side_split_grid(tower_.r_minus[k], tower_.r_plus[k], opt_.level_cells));
        g->offset.assign(1, 0);
        for (const auto& lv : g->levels) g->offset.push_back(g->offset.back() + lv.cells());
        grid_ = g;
    }

    void build_matrix() {
        const TowerGrid& G = *grid_;
        const std::size_t K = tower_.K_max;
        std::vector<double> ground_x(G.levels[0].edges);
        for (double& x : ground_x) x += G.c;
        const auto& g0 = G.levels[0];
        std::vector<std::vector<SparseMatrix::Triplet>> parts(2 * (K + 1));
        parallel_for(K + 1, opt_.threads, [&](std::size_t j) {
            // falls from level j to the ground
            auto& out = parts[j];
            const auto& Lj = G.levels[j];
            const double lj = std::pow(lambda_, double(j));
            for (std::size_t i = 0; i < Lj.cells(); ++i) {
                const double ua = Lj.edges[i], ub = Lj.edges[i + 1];
                if (ub - ua - xi_.integral(j, ua, ub) <= 0.0) continue;
                const std::uint32_t col = std::uint32_t(G.offset[j] + i);
                detail::split_by_image(tower_, j + 1, ua, ub, ground_x, [&](std::size_t bin, double u0, double u1) {
                    const double w = (u1 - u0) - xi_.integral(j, u0, u1);
                    if (w > 0.0) out.push_back({std::uint32_t(bin), col, lj * w / g0.width(bin)});
                });
            }
            // climb from level j - 1 to level j
            if (j == 0) return;
            auto& up = parts[K + 1 + j];
            const auto& P = G.levels[j - 1];
            std::size_t a = 0, b = 0;
            while (a < P.cells() && b < Lj.cells()) {
                const double lo = std::max(P.edges[a], Lj.edges[b]);
                const double hi = std::min(P.edges[a + 1], Lj.edges[b + 1]);
                if (hi > lo) {
                    const double w = xi_.integral(j - 1, lo, hi);
                    if (w > 0.0)
                        up.push_back({std::uint32_t(G.offset[j] + b), std::uint32_t(G.offset[j - 1] + a),
                                      w / (lambda_ * Lj.width(b))});
                }
                if (P.edges[a + 1] < Lj.edges[b + 1]) ++a;
                else ++b;
            }
        });
        A_ = SparseMatrix::from_triplets(G.total(), G.total(), parts);
    }

    const SparseMatrix& projection_matrix(std::size_t n_out) const {
        for (const auto& [n, m] : proj_cache_)
            if (n == n_out) return *m;
        const TowerGrid& G = *grid_;
        std::vector<double> xe(n_out + 1);
        for (std::size_t i = 0; i <= n_out; ++i) xe[i] = double(i) / double(n_out);
        std::vector<std::vector<SparseMatrix::Triplet>> parts(K() + 1);
        parallel_for(K() + 1, opt_.threads, [&](std::size_t k) {
            const auto& Lk = G.levels[k];
            const double lk = std::pow(lambda_, double(k));
            for (std::size_t i = 0; i < Lk.cells(); ++i) {
                const std::uint32_t col = std::uint32_t(G.offset[k] + i);
                detail::split_by_image(tower_, k, Lk.edges[i], Lk.edges[i + 1], xe,
                                       [&](std::size_t bin, double u0, double u1) {
                                           if (u1 > u0)
                                               parts[k].push_back({std::uint32_t(bin), col, lk * (u1 - u0) * double(n_out)});
                                       });
            }
        });
        auto m = std::make_shared<SparseMatrix>(SparseMatrix::from_triplets(n_out, G.total(), parts));
        proj_cache_.emplace_back(n_out, m);
        return *m;
    }
};

// ---------------------------------------------------------------------------
// Norms and functionals

[[nodiscard]] inline TowerFunction truncate(const TowerFunction& psi, std::size_t M) {
    TowerFunction out = psi;
    if (M + 1 < psi.grid->levels.size())
        std::fill(out.v.begin() + std::ptrdiff_t(psi.grid->offset[M + 1]), out.v.end(), 0.0);
    return out;
}

[[nodiscard]] inline double dual_mass(const TowerFunction& psi) {
    KahanSum s;
    for (std::size_t k = 0; k < psi.grid->levels.size(); ++k) {
        const auto& G = psi.grid->levels[k];
        auto lv = psi.level(k);
        KahanSum l;
        for (std::size_t i = 0; i < G.cells(); ++i) l += lv[i] * G.width(i);
        s += std::pow(psi.lambda, double(k)) * l.value();
    }
    return s.value();
}

enum class NormKind { W11, L1, Lp };

struct NormSpec {
    NormKind kind = NormKind::L1;
    double p = 2.0;
    double Lambda = 0.0;  // growth rate, required for Lp
};

// W11: sum_k of the total variation of psi_k extended by zero outside its support
// (the L1 norm of the distributional derivative). L1: sum_k lambda^k |psi_k|_1.
// Lp: sum_k lambda^{k r} |psi_k|_p with lambda^{1-r} = Lambda^{(1-1/p)/2}.
[[nodiscard]] inline double norm(const TowerFunction& psi, NormSpec spec = {}) {
    const auto& G = *psi.grid;
    KahanSum total;
    double r = 0.0;
    if (spec.kind == NormKind::Lp) {
        if (!(spec.p > 1.0)) throw std::invalid_argument("norm: Lp needs p > 1");
        if (!(spec.Lambda > 1.0)) throw std::invalid_argument("norm: Lp needs the growth rate Lambda");
        r = 1.0 - 0.5 * (1.0 - 1.0 / spec.p) * std::log(spec.Lambda) / std::log(psi.lambda);
    }
    for (std::size_t k = 0; k < G.levels.size(); ++k) {
        const auto& L = G.levels[k];
        auto lv = psi.level(k);
        KahanSum s;
        switch (spec.kind) {
        case NormKind::W11: {
            double prev = 0.0;
            for (std::size_t i = 0; i < L.cells(); ++i) { s += std::abs(lv[i] - prev); prev = lv[i]; }
            s += std::abs(prev);
            total += s.value();
            break;
        }
        case NormKind::L1:
            for (std::size_t i = 0; i < L.cells(); ++i) s += std::abs(lv[i]) * L.width(i);
            total += std::pow(psi.lambda, double(k)) * s.value();
            break;
        case NormKind::Lp:
            for (std::size_t i = 0; i < L.cells(); ++i) s += std::pow(std::abs(lv[i]), spec.p) * L.width(i);
            total += std::pow(psi.lambda, double(k) * r) * std::pow(s.value(), 1.0 / spec.p);
            break;
        }
    }
    return total.value();
}

// ---------------------------------------------------------------------------
// Leading eigenpair of the truncated operator

struct Eigenpair {
    std::size_t M = 0;
    double kappa = 0.0;
    TowerFunction phi;
    double residual = 0.0;   // |L_M phi - kappa phi| in the weak norm, phi nu-normalized
    double tau_M = 0.0;      // lambda^M |(f^M)'(c_1)|^{-1/2} M^{(alpha-beta)/2}
    double Theta0 = 0.0;     // min(sqrt(lambda_c)/lambda, lambda)
    std::size_t iterations = 0;
    std::vector<double> residual_history;  // every 50th iteration
};

class EigenError : public std::runtime_error {
public:
    EigenError(const std::string& msg, std::vector<double> hist) : std::runtime_error(msg), history(std::move(hist)) {}
    std::vector<double> history;
};

struct EigenOptions {
    double tol = 1e-12;
    std::size_t max_iter = 20000;
    double alpha = 0.0;      // goodness exponent for tau_M
    double lambda_c = 0.0;   // 0 takes the growth rate of the critical orbit
    const TowerFunction* init = nullptr;
};

[[nodiscard]] inline TowerFunction default_start(const TransferOperator& op) {
    const double lam = op.lambda();
    return op.sample([lam](std::size_t k, double) { return std::pow(lam, -double(k)); });
}

// Power iteration phi <- (L_M phi + kappa phi) / nu(.): the shift maps an
// eigenvalue -kappa (period-two rotation) to 0 while keeping kappa dominant.
[[nodiscard]] inline Eigenpair leading_eigenpair(const TransferOperator& op, std::size_t M, EigenOptions opt = {}) {
    Eigenpair ep;
    ep.M = std::min(M, op.K());
    TowerFunction phi = opt.init ? truncate(*opt.init, ep.M) : truncate(default_start(op), ep.M);
    double nu = dual_mass(phi);
    if (!(nu > 0.0)) throw std::invalid_argument("leading_eigenpair: initial vector has no mass");
    for (double& x : phi.v) x /= nu;
    double kappa = 1.0, res = 0.0;
    for (std::size_t it = 1; it <= opt.max_iter; ++it) {
        TowerFunction y = op.apply(phi, ep.M);
        kappa = 1.0 - op.escape_mass(phi, ep.M) / dual_mass(phi);
        TowerFunction d = y;
        for (std::size_t i = 0; i < d.v.size(); ++i) d.v[i] -= kappa * phi.v[i];
        res = norm(d);
        if (it % 50 == 0) ep.residual_history.push_back(res);
        if (res < opt.tol) {
            ep.iterations = it;
            break;
        }
        for (std::size_t i = 0; i < y.v.size(); ++i) y.v[i] += kappa * phi.v[i];
        const double m = dual_mass(y);
        for (double& x : y.v) x /= m;
        phi = std::move(y);
        if (it == opt.max_iter) {
            std::ostringstream os;
            os << "leading_eigenpair: residual " << res << " above tol " << opt.tol << " after " << it << " iterations";
            throw EigenError(os.str(), ep.residual_history);
        }
    }
    ep.kappa = kappa;
    ep.residual = res;
    ep.phi = std::move(phi);
    const Tower& T = op.tower();
    const double lam = op.lambda();
    const double lc = opt.lambda_c > 0.0 ? opt.lambda_c : growth_rate(T);
    const std::size_t Mi = std::min<std::size_t>(std::max<std::size_t>(ep.M, 1), T.orbit.log_derivs.size() - 1);
    ep.tau_M = std::pow(double(std::max<std::size_t>(ep.M, 1)), (opt.alpha - T.beta) / 2) *
               std::exp(double(ep.M) * std::log(lam) - 0.5 * T.orbit.log_derivs[Mi]);
    ep.Theta0 = std::min(std::sqrt(lc) / lam, lam);
    return ep;
}

// ---------------------------------------------------------------------------
// Serialization

[[nodiscard]] inline nlohmann::json tower_function_to_json(const TowerFunction& psi) {
    nlohmann::json j;
    j["lambda"] = psi.lambda;
    j["c"] = psi.grid->c;
    nlohmann::json lv = nlohmann::json::array();
    for (std::size_t k = 0; k < psi.grid->levels.size(); ++k) {
        auto s = psi.level(k);
        lv.push_back({{"k", k}, {"grid", psi.grid->levels[k].edges}, {"values", std::vector<double>(s.begin(), s.end())}});
    }
    j["levels"] = lv;
    return j;
}

[[nodiscard]] inline nlohmann::json eigenpair_to_json(const Eigenpair& ep) {
    nlohmann::json j = tower_function_to_json(ep.phi);
    j["M"] = ep.M;
    j["kappa"] = ep.kappa;
    j["residual"] = ep.residual;
    j["tau_M"] = ep.tau_M;
    j["Theta0"] = ep.Theta0;
    j["iterations"] = ep.iterations;
    return j;
}

} // namespace srblab
