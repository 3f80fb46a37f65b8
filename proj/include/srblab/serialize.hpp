#pragma once

#include <sstream>
#include <string>

#include <json.hpp>

#include "io.hpp"
#include "parameter_select.hpp"
#include "transfer_op.hpp"

namespace srblab {

[[nodiscard]] inline nlohmann::json param_to_json(const Param& t) { return nlohmann::json::array({t.hi, t.lo}); }

[[nodiscard]] inline Param param_from_json(const nlohmann::json& j) {
    if (j.is_number()) return Param(j.get<double>());
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError("parameter must be a number or [hi, lo]");
}

[[nodiscard]] inline nlohmann::json goodness_to_json(const GoodnessReport& r) {
    nlohmann::json j = {{"H0", r.H0}, {"horizon", r.horizon}};
    if (r.ce_checked) {
        j["lambda_c"] = r.lambda_c;
        j["ce_ok"] = r.ce_ok;
        j["superstable"] = r.superstable;
        j["margin"] = r.worst_ce_margin;
        j["worst_k"] = r.worst_ce_k;
    }
    if (r.rec_checked) {
        j["alpha"] = r.alpha;
        j["recurrence_ok"] = r.recurrence_ok;
        j["margin"] = r.worst_rec_margin;
        j["worst_k"] = r.worst_rec_k;
        j["min_distance"] = r.worst_distance;
    }
    return j;
}

[[nodiscard]] inline nlohmann::json mt_to_json(const MTParameter& mt) {
    return {{"t", param_to_json(mt.t)},
            {"t_decimal", fmt17(mt.t.hi)},
            {"preperiod", mt.preperiod},
            {"period", mt.period},
            {"periodic_point", mt.periodic_point},
            {"multiplier_log", mt.multiplier_log},
            {"repelling", mt.repelling()},
            {"residual", mt.residual},
            {"Lambda", mt.Lambda},
            {"min_critical_return", mt.min_critical_return}};
}

[[nodiscard]] inline MTParameter mt_from_json(const nlohmann::json& j) {
    const nlohmann::json& m = j.contains("mt") ? j.at("mt") : j;
    MTParameter mt;
    try {
        mt.t = param_from_json(m.at("t"));
        mt.preperiod = m.at("preperiod").get<std::size_t>();
        mt.period = m.at("period").get<std::size_t>();
        mt.periodic_point = m.at("periodic_point").get<double>();
        mt.multiplier_log = m.at("multiplier_log").get<double>();
        mt.residual = m.value("residual", 0.0);
        mt.Lambda = m.value("Lambda", 0.0);
        mt.min_critical_return = m.value("min_critical_return", 0.0);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed MT parameter JSON: ") + e.what());
    }
    return mt;
}

[[nodiscard]] inline nlohmann::json sequence_to_json(const MTSequence& s) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : s.entries)
        rows.push_back({{"mt", mt_to_json(e.mt)},
                        {"dt", e.dt},
                        {"M", e.pair.M},
                        {"Ca", e.pair.Ca},
                        {"Lambda_ratio_M", e.Lambda_ratio_M},
                        {"postcritical_min", e.postcritical_min},
                        {"postcritical_max", e.postcritical_max},
                        {"closest_return", e.closest_return}});
    return {{"t0", mt_to_json(s.t0)}, {"side", s.side}, {"entries", rows}, {"warnings", s.warnings}};
}

[[nodiscard]] inline std::string sequence_csv(const MTSequence& s) {
    CsvWriter w({"t", "t_lo", "dt", "abs_dt", "M", "preperiod", "closest_return", "postcritical_min", "postcritical_max"});
    for (const auto& e : s.entries)
        w.row({fmt17(e.mt.t.hi), fmt17(e.mt.t.lo), fmt17(e.dt), fmt17(std::abs(e.dt)), std::to_string(e.pair.M),
               std::to_string(e.mt.preperiod), fmt17(e.closest_return), fmt17(e.postcritical_min),
               fmt17(e.postcritical_max)});
    return w.str();
}

// Everything an eigenpair depends on, as a cache key input string.
[[nodiscard]] inline std::string eigen_inputs(const TransferOperator& op, std::size_t M, const EigenOptions& eo) {
    const Tower& T = op.tower();
    std::ostringstream os;
    os << T.fam.name << "|" << fmt17(T.t.hi) << "," << fmt17(T.t.lo) << "|delta=" << fmt17(T.delta) << "|L=" << fmt17(T.L)
       << "|beta=" << fmt17(T.beta) << "|K=" << T.K_max << "|H0=" << T.H0 << "|inherited=" << T.inherited
       << "|ground=" << op.options().ground_cells << "|level=" << op.options().level_cells
       << "|lambda=" << fmt17(op.lambda()) << "|M=" << M << "|tol=" << fmt17(eo.tol) << "|alpha=" << fmt17(eo.alpha)
       << "|lambda_c=" << fmt17(eo.lambda_c);
    // the copied radii identify the reference tower
    for (std::size_t k = 1; k <= T.K_max; ++k) os << "|" << fmt17(T.r_minus[k]) << "," << fmt17(T.r_plus[k]);
    return os.str();
}

// leading_eigenpair with a read-through cache; the stored doubles round-trip exactly.
[[nodiscard]] inline Eigenpair cached_eigenpair(const Cache& cache, const TransferOperator& op, std::size_t M,
                                                const EigenOptions& eo = {}) {
    const std::string inputs = eigen_inputs(op, M, eo);
    const std::string key = Cache::key("eigenpair", inputs);
    if (auto hit = cache.get(key, inputs)) {
        const auto& j = *hit;
        Eigenpair ep;
        ep.phi = op.zero();
        const auto v = j.at("v").get<std::vector<double>>();
        if (v.size() == ep.phi.v.size()) {
            ep.M = j.at("M").get<std::size_t>();
            ep.kappa = j.at("kappa").get<double>();
            ep.residual = j.at("residual").get<double>();
            ep.tau_M = j.at("tau_M").get<double>();
            ep.Theta0 = j.at("Theta0").get<double>();
            ep.iterations = j.at("iterations").get<std::size_t>();
            ep.residual_history = j.at("residual_history").get<std::vector<double>>();
            ep.phi.v = v;
            return ep;
        }
    }
    Eigenpair ep = leading_eigenpair(op, M, eo);
    cache.put(key, inputs,
              {{"M", ep.M}, {"kappa", ep.kappa}, {"residual", ep.residual}, {"tau_M", ep.tau_M}, {"Theta0", ep.Theta0},
               {"iterations", ep.iterations}, {"residual_history", ep.residual_history}, {"v", ep.phi.v}});
    return ep;
}

// critical_orbit with a read-through cache.
[[nodiscard]] inline CriticalOrbit cached_orbit(const Cache& cache, const MapFamily& fam, const Param& t, std::size_t N) {
    const std::string inputs = fam.name + "|" + fmt17(t.hi) + "," + fmt17(t.lo) + "|N=" + std::to_string(N);
    const std::string key = Cache::key("orbit", inputs);
    if (auto hit = cache.get(key, inputs)) {
        CriticalOrbit o;
        o.t = t;
        o.points = hit->at("points").get<std::vector<double>>();
        o.offsets = hit->at("offsets").get<std::vector<double>>();
        o.signs = hit->at("signs").get<std::vector<int>>();
        o.zero_derivative = hit->at("zero_derivative").get<bool>();
        o.first_zero = hit->at("first_zero").get<std::size_t>();
        for (const auto& x : hit->at("log_derivs")) o.log_derivs.push_back(x.is_null() ? kNegInf : x.get<double>());
        return o;
    }
    CriticalOrbit o = critical_orbit(fam, t, N);
    nlohmann::json ld = nlohmann::json::array();
    for (double x : o.log_derivs) ld.push_back(std::isinf(x) ? nlohmann::json(nullptr) : nlohmann::json(x));
    cache.put(key, inputs,
              {{"points", o.points}, {"offsets", o.offsets}, {"signs", o.signs}, {"log_derivs", ld},
               {"zero_derivative", o.zero_derivative}, {"first_zero", o.first_zero}});
    return o;
}

} // namespace srblab
