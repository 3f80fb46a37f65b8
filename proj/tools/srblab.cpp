// srblab: command-line driver for the SRB response experiments.
//
// Every subcommand reads its parameters from the section of the same name in
// an optional config file; command-line flags override file values. Outputs go
// to --out (default ./out) together with meta.json.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <srblab/io.hpp>
#include <srblab/map_family.hpp>
#include <srblab/parameter_select.hpp>
#include <srblab/response.hpp>
#include <srblab/serialize.hpp>
#include <srblab/srb_estimate.hpp>
#include <srblab/tower.hpp>
#include <srblab/transfer_op.hpp>
#include <srblab/version.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace srblab;

namespace {

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Ctx {
    Config cfg;
    fs::path out = "out";
    unsigned threads = 1;
    Cache cache = Cache::from_env();
    json timings = json::object();
    std::string sec;  // active section

    std::string str(const std::string& k, const std::string& d) { return cfg.get_string(sec, k, d); }
    double num(const std::string& k, double d) { return cfg.get_double(sec, k, d); }
    std::size_t size(const std::string& k, std::size_t d) { return cfg.get_size(sec, k, d); }
    bool flag(const std::string& k, bool d) { return cfg.get_bool(sec, k, d); }
    std::vector<double> list(const std::string& k, const std::vector<double>& d) { return cfg.get_list(sec, k, d); }
};

class Timer {
public:
    Timer(Ctx& c, std::string name) : c_(c), name_(std::move(name)), t0_(std::chrono::steady_clock::now()) {}
    ~Timer() {
        c_.timings[name_] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    Ctx& c_;
    std::string name_;
    std::chrono::steady_clock::time_point t0_;
};

Param param_value(Ctx& c, const std::string& key, double def) {
    const auto v = c.list(key, {def});
    if (v.size() == 1) return Param(v[0]);
    if (v.size() == 2) return {v[0], v[1]};
    throw ValidationError(c.sec + "." + key + " must be one number or 'hi lo'");
}

// MT base parameter: from a JSON file written by find-mt, else found on the bracket.
MTParameter mt_value(Ctx& c, const MapFamily& fam) {
    const std::string from = c.str("t0_from", "");
    if (!from.empty()) return mt_from_json(read_json(from));
    const auto br = c.list("bracket", {3.6, 3.7});
    if (br.size() != 2 || !(br[0] < br[1])) throw ValidationError(c.sec + ".bracket must be 'lo hi' with lo < hi");
    return find_misiurewicz_thurston(fam, {br[0], br[1]}, c.size("preperiod", 3), c.size("period", 1));
}

Param t_value(Ctx& c, const MapFamily& fam) {
    if (!c.str("t0_from", "").empty()) return mt_value(c, fam).t;
    return param_value(c, "t", 4.0);
}

Observable observable_value(Ctx& c, const MTParameter* mt) {
    const std::string kind = c.str("observable", mt ? "AD" : "x");
    if (kind == "x") return [](double x) { return x; };
    if (kind == "AD") {
        const double center = c.num("center", mt ? mt->periodic_point : 0.5);
        return observable_AD(center, c.num("D", 0.05), c.num("ramp", 0.2)).function();
    }
    throw ValidationError("unknown observable '" + kind + "' (x, AD)");
}

TransferOptions transfer_value(Ctx& c) {
    TransferOptions to;
    to.ground_cells = c.size("ground_cells", to.ground_cells);
    to.level_cells = c.size("level_cells", to.level_cells);
    to.lambda = c.num("lambda", 0.0);
    to.threads = c.threads;
    return to;
}

MTSequence sequence_value(Ctx& c, const MapFamily& fam, const MTParameter& mt) {
    MTSequenceOptions so;
    so.Ca = c.num("Ca", so.Ca);
    so.dt_max = c.num("dt_max", so.dt_max);
    so.dt_min = c.num("dt_min", so.dt_min);
    so.side = int(c.num("side", 0));
    so.avoid_radius = c.num("avoid_radius", so.avoid_radius);
    return mt_sequence(fam, mt, c.size("count", 12), so);
}

// ---------------------------------------------------------------------------
// Subcommands

json cmd_check_ce(Ctx& c, const MapFamily& fam) {
    const Param t = t_value(c, fam);
    const auto r = check_collet_eckmann(fam, t, c.num("lambda_c", 4.0), c.size("H0", 1), c.size("horizon", 50));
    json j = goodness_to_json(r);
    j["t"] = param_to_json(t);
    write_json(c.out / "check_ce.json", j);
    return j;
}

json cmd_check_recurrence(Ctx& c, const MapFamily& fam) {
    const Param t = t_value(c, fam);
    const auto r = check_polynomial_recurrence(fam, t, c.num("alpha", 1.0), c.size("H0", 1), c.size("horizon", 50),
                                               c.num("C", 1.0));
    json j = goodness_to_json(r);
    j["t"] = param_to_json(t);
    write_json(c.out / "check_recurrence.json", j);
    return j;
}

json cmd_find_mt(Ctx& c, const MapFamily& fam) {
    MTParameter mt;
    {
        Timer tm(c, "find_mt");
        mt = mt_value(c, fam);
    }
    const auto sh = verify_mt_shadowing(fam, mt, c.size("shadow_steps", 200));
    const auto J = transversality_sum(fam, mt.t, c.size("transversality_terms", 200));
    json j = mt_to_json(mt);
    j["shadowing"] = {{"ok", sh.ok}, {"landing_gap", sh.landing_gap}, {"periodic_residual", sh.periodic_residual},
                      {"steps", sh.steps}};
    j["transversality"] = {{"sum", J.partial}, {"tail_bound", J.tail_bound}, {"terms", J.terms}, {"ok", J.ok}};
    write_json(c.out / "mt.json", j);
    return j;
}

json cmd_mt_sequence(Ctx& c, const MapFamily& fam) {
    const MTParameter mt = mt_value(c, fam);
    MTSequence s;
    {
        Timer tm(c, "mt_sequence");
        s = sequence_value(c, fam, mt);
    }
    write_text(c.out / "sequence.csv", sequence_csv(s));
    json j = sequence_to_json(s);
    write_json(c.out / "sequence.json", j);
    return {{"entries", s.entries.size()}, {"side", s.side}, {"warnings", s.warnings}};
}

json cmd_srb(Ctx& c, const MapFamily& fam) {
    const Param t = t_value(c, fam);
    const Observable A = observable_value(c, nullptr);
    const std::string method = c.str("method", "both");
    json j = {{"t", param_to_json(t)}, {"method", method}};
    if (method == "birkhoff" || method == "both") {
        Timer tm(c, "birkhoff");
        BirkhoffOptions bo;
        bo.burn_in = c.size("burn_in", bo.burn_in);
        bo.batches = c.size("batches", bo.batches);
        bo.chains = c.size("chains", 1);
        bo.seed = c.size("seed", bo.seed);
        bo.threads = c.threads;
        const auto r = birkhoff_average(fam, t.hi, A, c.size("n", 10000000), c.num("x0", 0.3), bo);
        j["birkhoff"] = {{"mean", r.mean}, {"stderr", r.stderr_}, {"n", r.n}, {"restarts", r.restarts}};
    }
    if (method == "ulam" || method == "both") {
        Timer tm(c, "ulam");
        const auto d = ulam_density(fam, t.hi, c.size("bins", 1u << 14), c.threads, c.num("tol", 1e-13));
        j["ulam"] = {{"mean", integrate_observable(d, A)}, {"bins", d.bins}};
        CsvWriter w({"x", "mass"});
        for (std::size_t i = 0; i < d.bins; ++i) w.row(std::vector<double>{d.mid(i), d.masses[i]});
        write_text(c.out / "density.csv", w.str());
    }
    if (method != "birkhoff" && method != "ulam" && method != "both")
        throw ValidationError("srb.method must be birkhoff, ulam or both");
    write_json(c.out / "srb.json", j);
    return j;
}

json cmd_lyapunov(Ctx& c, const MapFamily& fam) {
    const Param t = t_value(c, fam);
    const auto r = lyapunov(fam, t.hi, c.size("n", 10000000), c.num("x0", 0.3), c.size("burn_in", 10000));
    json j = {{"t", param_to_json(t)}, {"lyapunov", r.value}, {"zero_hits", r.zero_hits}};
    write_json(c.out / "lyapunov.json", j);
    return j;
}

Tower tower_value(Ctx& c, const MapFamily& fam, const Param& t, std::size_t K_default) {
    TowerOptions o;
    o.delta = c.num("delta", 0.0);
    o.L = c.num("L", o.L);
    o.beta = c.num("beta", o.beta);
    o.K_max = c.size("K", K_default);
    o.H0 = c.size("H0", o.H0);
    return build_tower(fam, t, o);
}

json cmd_tower(Ctx& c, const MapFamily& fam) {
    const Param t = t_value(c, fam);
    const Tower T = tower_value(c, fam, t, 60);
    json j = tower_to_json(T);
    write_json(c.out / "tower.json", j);
    return {{"delta", T.delta}, {"H_delta", T.H_delta}, {"K_max", T.K_max}, {"radii_in_bounds", T.radii_in_bounds}};
}

json cmd_eigenpair(Ctx& c, const MapFamily& fam) {
    const Param t = t_value(c, fam);
    const Tower T = tower_value(c, fam, t, 40);
    const TransferOperator op(T, cutoff_family(T), transfer_value(c));
    EigenOptions eo;
    eo.tol = c.num("tol", eo.tol);
    eo.alpha = c.num("alpha", 0.0);
    const auto Ms = c.list("M", {10, 15, 20, 25, 30});
    CsvWriter w({"M", "kappa", "one_minus_kappa", "tau_M", "Theta0", "residual", "iterations"});
    json rows = json::array();
    Eigenpair last;
    for (double Md : Ms) {
        if (!(Md >= 1.0) || Md != std::floor(Md)) throw ValidationError("eigenpair.M entries must be positive integers");
        Timer tm(c, "eigenpair_M" + std::to_string(std::size_t(Md)));
        last = cached_eigenpair(c.cache, op, std::size_t(Md), eo);
        w.row({std::to_string(last.M), fmt17(last.kappa), fmt17(1.0 - last.kappa), fmt17(last.tau_M),
               fmt17(last.Theta0), fmt17(last.residual), std::to_string(last.iterations)});
        rows.push_back({{"M", last.M}, {"kappa", last.kappa}, {"tau_M", last.tau_M}});
    }
    write_text(c.out / "eigenpairs.csv", w.str());
    if (c.flag("emit_phi", false)) write_json(c.out / "eigenfunction.json", eigenpair_to_json(last));
    const std::size_t n_out = c.size("density_bins", 1024);
    const auto dens = op.project(last.phi, n_out);
    CsvWriter dw({"x", "mass"});
    for (std::size_t i = 0; i < dens.size(); ++i) dw.row(std::vector<double>{(double(i) + 0.5) / double(n_out), dens[i]});
    write_text(c.out / "projected_density.csv", dw.str());
    return {{"rows", rows}, {"lambda", op.lambda()}};
}

struct SequenceRun {
    MTParameter mt;
    MTSequence seq;
    Observable A;
    TowerResponseBase base;
    std::size_t K = 0;
};

SequenceRun sequence_run(Ctx& c, const MapFamily& fam) {
    SequenceRun r;
    r.mt = mt_value(c, fam);
    r.seq = sequence_value(c, fam, r.mt);
    if (r.seq.entries.empty()) throw std::runtime_error("mt_sequence returned no entries");
    r.A = observable_value(c, &r.mt);
    std::size_t Mmax = 1;
    for (const auto& e : r.seq.entries) Mmax = std::max(Mmax, e.pair.M);
    r.K = 2 * Mmax + c.size("K_extra", 20);
    Timer tm(c, "base_eigenpair");
    const Cache& cache = c.cache;
    r.base = tower_response_base(fam, r.mt.t, r.K, transfer_value(c), r.A, {},
                                 [&cache](const TransferOperator& op, std::size_t M) { return cached_eigenpair(cache, op, M); });
    return r;
}

json cmd_spike(Ctx& c, const MapFamily& fam) {
    SequenceRun r = sequence_run(c, fam);
    Timer tm(c, "spike_rows");
    const std::size_t n = r.seq.entries.size();
    std::vector<double> sp(n);
    const Cache& cache = c.cache;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = r.seq.entries[i];
        const TransferOperator op = perturbed_operator(r.base, e.mt.t, e.pair.M);
        const Eigenpair e2 = cached_eigenpair(cache, *r.base.op, 2 * e.pair.M);
        sp[i] = spike_displacement(*r.base.op, op, e2.phi, r.A);
    }
    CsvWriter w({"t", "abs_dt", "M", "spike", "ratio_sqrt"});
    std::vector<double> x, y;
    double qmin = 0, qmax = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = r.seq.entries[i];
        const double q = std::abs(sp[i]) / std::sqrt(std::abs(e.dt));
        qmin = i ? std::min(qmin, q) : q;
        qmax = i ? std::max(qmax, q) : q;
        w.row({fmt17(e.mt.t.hi), fmt17(std::abs(e.dt)), std::to_string(e.pair.M), fmt17(sp[i]), fmt17(q)});
        x.push_back(std::abs(e.dt));
        y.push_back(std::abs(sp[i]));
    }
    write_text(c.out / "spike.csv", w.str());
    json j = {{"ratio_band", {{"min", qmin}, {"max", qmax}, {"factor", qmin > 0 ? qmax / qmin : 0.0}}}};
    try {
        j["fit"] = holder_fit_to_json(fit_power_law(x, y));
    } catch (const FitError& e) {
        j["fit_error"] = e.what();
    }
    write_json(c.out / "spike.json", j);
    return j;
}

json cmd_decompose(Ctx& c, const MapFamily& fam) {
    SequenceRun r = sequence_run(c, fam);
    Timer tm(c, "decompose_rows");
    const Cache& cache = c.cache;
    CsvWriter w({"t", "abs_dt", "M", "term1", "term2", "term3", "total", "direct", "residual"});
    json rows = json::array();
    for (const auto& e : r.seq.entries) {
        const TransferOperator op = perturbed_operator(r.base, e.mt.t, e.pair.M);
        const Eigenpair ep = cached_eigenpair(cache, op, r.K);
        const Decomposition d = decomposition_report(*r.base.op, r.base.ep, op, ep, 2 * e.pair.M, r.A);
        w.row({fmt17(e.mt.t.hi), fmt17(std::abs(e.dt)), std::to_string(e.pair.M), fmt17(d.term1), fmt17(d.term2),
               fmt17(d.term3), fmt17(d.total), fmt17(d.direct), fmt17(d.residual)});
        json jd = decomposition_to_json(d);
        jd["abs_dt"] = std::abs(e.dt);
        rows.push_back(jd);
    }
    write_text(c.out / "decompose.csv", w.str());
    write_json(c.out / "decompose.json", {{"rows", rows}});
    return {{"rows", rows.size()}};
}

json cmd_response(Ctx& c, const MapFamily& fam) {
    const MTParameter mt = mt_value(c, fam);
    const MTSequence seq = sequence_value(c, fam, mt);
    const Observable A = observable_value(c, &mt);
    ResponseOptions ro;
    ro.estimator = estimator_from_string(c.str("estimator", "tower"));
    ro.threads = c.threads;
    ro.birkhoff_iters = c.size("n", ro.birkhoff_iters);
    ro.birkhoff_chains = c.size("chains", ro.birkhoff_chains);
    ro.seed = c.size("seed", ro.seed);
    ro.ulam_bins = c.size("bins", ro.ulam_bins);
    ro.transfer = transfer_value(c);
    ro.K_extra = c.size("K_extra", ro.K_extra);
    ro.grid_error = c.flag("grid_error", true);
    const Cache& cache = c.cache;
    ro.solver = [&cache](const TransferOperator& op, std::size_t M) { return cached_eigenpair(cache, op, M); };
    ResponseCurve curve;
    {
        Timer tm(c, "response_rows");
        curve = response_curve(fam, mt.t, response_points(seq), A, ro);
    }
    CsvWriter w({"t", "abs_dt", "M", "deltaR", "stderr", "ratio_sqrt"});
    for (const auto& r : curve.rows)
        w.row({fmt17(r.t.hi), fmt17(r.abs_dt), std::to_string(r.M), fmt17(r.deltaR), fmt17(r.stderr_), fmt17(r.ratio_sqrt())});
    write_text(c.out / "response.csv", w.str());
    json fit = response_curve_to_json(curve);
    fit.erase("rows");
    write_json(c.out / "fit.json", fit);
    write_json(c.out / "response.json", response_curve_to_json(curve));
    if (c.flag("emit_svg", false)) {
        SvgSeries s{{}, {}, "|Delta R| (" + to_string(curve.estimator) + ")"};
        for (const auto& r : curve.rows) {
            s.x.push_back(r.abs_dt);
            s.y.push_back(std::abs(r.deltaR));
        }
        std::optional<std::pair<double, double>> line;
        double C = 0.0;
        if (curve.fit) {
            line = std::make_pair(curve.fit->slope, curve.fit->intercept);
            C = std::sqrt(std::max(curve.band_factor(), 1.0));
        }
        write_text(c.out / "response.svg", loglog_svg({s}, line, C, "|t - t0|", "|Delta R|"));
    }
    return fit;
}

json cmd_pipeline(Ctx& c, const MapFamily& fam) {
    json j;
    const fs::path base = c.out;
    c.sec = "find-mt";
    j["find-mt"] = cmd_find_mt(c, fam);
    const std::string mt_path = (base / "mt.json").string();
    for (const std::string s : {"mt-sequence", "response", "spike", "decompose"}) {
        if (!c.cfg.has(s, "t0_from")) c.cfg.set(s, "t0_from", mt_path);
        c.sec = s;
        if (s == "mt-sequence") j[s] = cmd_mt_sequence(c, fam);
        else if (s == "response") j[s] = cmd_response(c, fam);
        else if (s == "spike") j[s] = cmd_spike(c, fam);
        else j[s] = cmd_decompose(c, fam);
    }
    return j;
}

void emit_error(const fs::path& out, const std::string& kind, const std::string& msg) {
    const json j = {{"error", {{"kind", kind}, {"message", msg}}}};
    std::cerr << j.dump() << "\n";
    try {
        write_json(out / "error.json", j);
    } catch (...) {
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SRB measure response experiments for unimodal families"};
    app.require_subcommand(1);
    std::string config_path, out_dir = "out";
    int threads = 0;
    bool no_cache = false;
    app.add_option("--config", config_path, "TOML-like config file");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (default: available cores)");
    app.add_flag("--no-cache", no_cache, "disable the orbit/eigenpair cache");

    std::vector<std::tuple<std::string, std::string, std::string>> overrides;
    auto opt = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help, int nargs = 1) {
        const std::string sec = sub->get_name();
        if (nargs == 1) {
            sub->add_option_function<std::string>(flag, [&overrides, sec, key](const std::string& v) {
                overrides.emplace_back(sec, key, v);
            }, help);
        } else {
            sub->add_option_function<std::vector<std::string>>(flag, [&overrides, sec, key](const std::vector<std::string>& v) {
                std::string s;
                for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
                overrides.emplace_back(sec, key, s);
            }, help)->expected(nargs == 0 ? -1 : nargs);
        }
    };
    auto flag = [&](CLI::App* sub, const std::string& f, const std::string& key, const std::string& help) {
        const std::string sec = sub->get_name();
        sub->add_flag_callback(f, [&overrides, sec, key] { overrides.emplace_back(sec, key, "true"); }, help);
    };
    auto common_t = [&](CLI::App* s) {
        opt(s, "--t", "t", "parameter (one number, or hi lo)", 0);
        opt(s, "--t0-from", "t0_from", "MT parameter JSON written by find-mt");
    };
    auto common_mt = [&](CLI::App* s) {
        opt(s, "--t0-from", "t0_from", "MT parameter JSON written by find-mt");
        opt(s, "--bracket", "bracket", "parameter bracket lo hi", 2);
        opt(s, "--preperiod", "preperiod", "landing step n");
        opt(s, "--period", "period", "cycle period l");
    };
    auto common_seq = [&](CLI::App* s) {
        common_mt(s);
        opt(s, "--count", "count", "number of sequence parameters");
        opt(s, "--Ca", "Ca", "admissibility constant");
        opt(s, "--dt-max", "dt_max", "largest |t - t0|");
        opt(s, "--dt-min", "dt_min", "smallest |t - t0|");
        opt(s, "--side", "side", "-1, +1, or 0 for automatic");
    };
    auto common_grid = [&](CLI::App* s) {
        opt(s, "--ground-cells", "ground_cells", "cells on the ground level");
        opt(s, "--level-cells", "level_cells", "cells per tower level");
        opt(s, "--lambda", "lambda", "tower weight (0: growth rate^(1/4))");
    };
    auto common_obs = [&](CLI::App* s) {
        opt(s, "--observable", "observable", "x or AD");
        opt(s, "--D", "D", "half-width of A_D");
        opt(s, "--center", "center", "center of A_D (default: periodic point)");
    };

    auto* ce = app.add_subcommand("check-ce", "Collet-Eckmann check along the critical orbit");
    common_t(ce);
    opt(ce, "--lambda-c", "lambda_c", "CE rate");
    opt(ce, "--H0", "H0", "first checked step");
    opt(ce, "--horizon", "horizon", "last checked step");

    auto* rec = app.add_subcommand("check-recurrence", "polynomial recurrence check");
    common_t(rec);
    opt(rec, "--alpha", "alpha", "recurrence exponent");
    opt(rec, "--C", "C", "recurrence constant");
    opt(rec, "--H0", "H0", "first checked step");
    opt(rec, "--horizon", "horizon", "last checked step");

    auto* fmt = app.add_subcommand("find-mt", "find a Misiurewicz-Thurston parameter in a bracket");
    common_mt(fmt);

    auto* seq = app.add_subcommand("mt-sequence", "one-sided MT sequence accumulating at t0");
    common_seq(seq);

    auto* srb = app.add_subcommand("srb", "SRB statistics by Birkhoff averages and/or Ulam");
    common_t(srb);
    opt(srb, "--method", "method", "birkhoff, ulam or both");
    opt(srb, "--n", "n", "Birkhoff iterates");
    opt(srb, "--bins", "bins", "Ulam bins");
    opt(srb, "--chains", "chains", "independent Birkhoff chains");
    opt(srb, "--seed", "seed", "RNG seed");
    opt(srb, "--observable", "observable", "x or AD");
    opt(srb, "--D", "D", "half-width of A_D");
    opt(srb, "--center", "center", "center of A_D");

    auto* lya = app.add_subcommand("lyapunov", "Lyapunov exponent along a typical orbit");
    common_t(lya);
    opt(lya, "--n", "n", "iterates");
    opt(lya, "--x0", "x0", "initial point");

    auto* tw = app.add_subcommand("tower", "build the tower at t");
    common_t(tw);
    opt(tw, "--delta", "delta", "entry radius (0: automatic)");
    opt(tw, "--L", "L", "level constant");
    opt(tw, "--beta", "beta", "level exponent");
    opt(tw, "--K", "K", "top level");

    auto* eig = app.add_subcommand("eigenpair", "truncated leading eigenpairs on the tower");
    common_t(eig);
    common_grid(eig);
    opt(eig, "--M", "M", "truncation levels", 0);
    opt(eig, "--K", "K", "top level");
    flag(eig, "--emit-phi", "emit_phi", "write the last eigenfunction as JSON");

    auto* spk = app.add_subcommand("spike", "spike displacement along the MT sequence");
    common_seq(spk);
    common_grid(spk);
    common_obs(spk);

    auto* rsp = app.add_subcommand("response", "response curve along the MT sequence");
    common_seq(rsp);
    common_grid(rsp);
    common_obs(rsp);
    opt(rsp, "--estimator", "estimator", "tower, birkhoff, ulam or both");
    opt(rsp, "--n", "n", "Birkhoff iterates per row");
    opt(rsp, "--bins", "bins", "Ulam bins");
    flag(rsp, "--emit-svg", "emit_svg", "write a log-log SVG");

    auto* dec = app.add_subcommand("decompose", "three-bracket decomposition along the MT sequence");
    common_seq(dec);
    common_grid(dec);
    common_obs(dec);

    app.add_subcommand("pipeline", "find-mt, mt-sequence, response, spike and decompose from one config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error(out_dir, "validation", e.what());
        return 2;
    }

    Ctx c;
    c.out = out_dir;
    const auto t_start = std::chrono::steady_clock::now();
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    json result;
    try {
        if (!config_path.empty()) c.cfg = Config::load(config_path);
        for (const auto& [s, k, v] : overrides) c.cfg.set(s, k, v);
        const std::size_t def_threads = threads > 0 ? std::size_t(threads) : default_threads();
        if (threads > 0) c.cfg.set("", "threads", std::to_string(threads));
        c.threads = unsigned(std::max<std::size_t>(1, c.cfg.get_size("", "threads", def_threads)));
        const bool cache_on = !no_cache && c.cfg.get_bool("", "cache", true);
        c.cache = Cache::from_env(cache_on);
        fs::create_directories(c.out);
        const MapFamily fam = family_from_config(c.cfg);
        c.sec = name;
        if (name == "check-ce") result = cmd_check_ce(c, fam);
        else if (name == "check-recurrence") result = cmd_check_recurrence(c, fam);
        else if (name == "find-mt") result = cmd_find_mt(c, fam);
        else if (name == "mt-sequence") result = cmd_mt_sequence(c, fam);
        else if (name == "srb") result = cmd_srb(c, fam);
        else if (name == "lyapunov") result = cmd_lyapunov(c, fam);
        else if (name == "tower") result = cmd_tower(c, fam);
        else if (name == "eigenpair") result = cmd_eigenpair(c, fam);
        else if (name == "spike") result = cmd_spike(c, fam);
        else if (name == "response") result = cmd_response(c, fam);
        else if (name == "decompose") result = cmd_decompose(c, fam);
        else if (name == "pipeline") result = cmd_pipeline(c, fam);
    } catch (const ValidationError& e) {
        emit_error(c.out, "validation", e.what());
        return 2;
    } catch (const ConfigError& e) {
        emit_error(c.out, "validation", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        emit_error(c.out, "validation", e.what());
        return 2;
    } catch (const DomainError& e) {
        emit_error(c.out, "domain", e.what());
        return 2;
    } catch (const std::exception& e) {
        emit_error(c.out, "runtime", e.what());
        return 1;
    }
    c.timings["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    const json meta = {{"tool", "srblab"},        {"version", kVersion},   {"subcommand", name},
                       {"config", c.cfg.echo()},  {"timings_s", c.timings}, {"threads", c.threads},
                       {"cache_dir", c.cache.enabled() ? c.cache.dir().string() : ""}};
    write_json(c.out / "meta.json", meta);
    std::cout << result.dump(2) << "\n";
    return 0;
}
