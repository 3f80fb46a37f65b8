#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "map_family.hpp"

namespace srblab {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Number formatting

[[nodiscard]] inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[nodiscard]] inline double parse_double(const std::string& s) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(*b))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(e[-1]))) --e;
    if (b < e && *b == '+') ++b;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) throw ConfigError("not a number: '" + s + "'");
    return v;
}

// ---------------------------------------------------------------------------
// TOML-like configuration: `key = value` lines, `[section]` headers, `#` comments.
// Values are kept as strings; typed getters record every value they hand out
// (including defaults) so the effective configuration can be echoed.

class Config {
public:
    Config() = default;

    static Config parse(const std::string& text, const std::string& origin = "<string>") {
        Config c;
        std::istringstream in(text);
        std::string line, section;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
            std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
            if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
            if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
            c.values_[qualify(section, key)] = val;
        }
        return c;
    }

    static Config load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot open config file '" + path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        return parse(ss.str(), path);
    }

    void set(const std::string& section, const std::string& key, const std::string& val) {
        values_[qualify(section, key)] = val;
    }
    [[nodiscard]] bool has(const std::string& section, const std::string& key) const {
        return values_.count(qualify(section, key)) != 0;
    }

    [[nodiscard]] std::string get_string(const std::string& section, const std::string& key, const std::string& def) {
        const auto it = values_.find(qualify(section, key));
        const std::string v = it == values_.end() ? def : it->second;
        used_[qualify(section, key)] = v;
        return v;
    }
    [[nodiscard]] double get_double(const std::string& section, const std::string& key, double def) {
        const auto it = values_.find(qualify(section, key));
        const double v = it == values_.end() ? def : parse_double(it->second);
        used_[qualify(section, key)] = fmt17(v);
        return v;
    }
    [[nodiscard]] std::size_t get_size(const std::string& section, const std::string& key, std::size_t def) {
        const double v = get_double(section, key, double(def));
        if (!(v >= 0.0) || v != std::floor(v)) throw ConfigError(qualify(section, key) + " must be a nonnegative integer");
        used_[qualify(section, key)] = std::to_string(std::size_t(v));
        return std::size_t(v);
    }
    [[nodiscard]] bool get_bool(const std::string& section, const std::string& key, bool def) {
        const std::string v = get_string(section, key, def ? "true" : "false");
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError(qualify(section, key) + " must be a boolean");
    }
    [[nodiscard]] std::vector<double> get_list(const std::string& section, const std::string& key,
                                               const std::vector<double>& def) {
        const auto it = values_.find(qualify(section, key));
        std::vector<double> out = def;
        if (it != values_.end()) {
            out.clear();
            std::string s = it->second;
            std::replace(s.begin(), s.end(), ',', ' ');
            std::erase(s, '[');
            std::erase(s, ']');
            std::istringstream in(s);
            std::string tok;
            while (in >> tok) out.push_back(parse_double(tok));
        }
        std::string echo;
        for (std::size_t i = 0; i < out.size(); ++i) echo += (i ? " " : "") + fmt17(out[i]);
        used_[qualify(section, key)] = echo;
        return out;
    }

    // Effective values handed out so far, as nested JSON.
    [[nodiscard]] nlohmann::json echo() const {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [k, v] : used_) {
            const auto dot = k.find('.');
            if (dot == std::string::npos) j[k] = v;
            else j[k.substr(0, dot)][k.substr(dot + 1)] = v;
        }
        return j;
    }
    [[nodiscard]] std::vector<std::string> sections() const {
        std::vector<std::string> s;
        for (const auto& [k, v] : values_) {
            const auto dot = k.find('.');
            std::string sec = dot == std::string::npos ? "" : k.substr(0, dot);
            if (std::find(s.begin(), s.end(), sec) == s.end()) s.push_back(sec);
        }
        return s;
    }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    }
    static std::string qualify(const std::string& section, const std::string& key) {
        return section.empty() ? key : section + "." + key;
    }
    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> used_;
};

// ---------------------------------------------------------------------------
// Families by name. `polynomial` is f_t(x) = t P(x) with P given by coefficients
// (constant term first); `sine` is f_t(x) = (t/4) sin(pi x).

[[nodiscard]] inline MapFamily polynomial_family(std::vector<double> coeffs, double c, Interval range) {
    if (coeffs.empty()) throw ConfigError("polynomial family needs coefficients");
    auto P = [coeffs](double x, int d) {
        double s = 0.0;
        for (std::size_t i = coeffs.size(); i-- > std::size_t(d);) {
            double f = coeffs[i];
            for (int j = 0; j < d; ++j) f *= double(i - std::size_t(j));
            s = s * x + f;
        }
        return s;
    };
    MapFamily f = custom_family(
        "polynomial", c, range, [P](double t, double x) { return t * P(x, 0); },
        [P](double t, double x) { return t * P(x, 1); }, [P](double t, double x) { return t * P(x, 2); },
        [P](double, double x) { return P(x, 0); });
    f.vector_field = [](double t, double x) { return x / t; };
    return f;
}

[[nodiscard]] inline MapFamily sine_family() {
    constexpr double pi = std::numbers::pi;
    MapFamily f = custom_family(
        "sine", 0.5, {0.0, 4.0}, [](double t, double x) { return 0.25 * t * std::sin(pi * x); },
        [](double t, double x) { return 0.25 * t * pi * std::cos(pi * x); },
        [](double t, double x) { return -0.25 * t * pi * pi * std::sin(pi * x); },
        [](double, double x) { return 0.25 * std::sin(pi * x); });
    f.vector_field = [](double t, double x) { return x / t; };
    return f;
}

[[nodiscard]] inline MapFamily family_from_config(Config& cfg) {
    const std::string id = cfg.get_string("family", "id", "logistic");
    if (id == "logistic") return logistic_family();
    if (id == "sine") return sine_family();
    if (id == "polynomial") {
        const auto coeffs = cfg.get_list("family", "coeffs", {});
        const double c = cfg.get_double("family", "c", 0.5);
        const auto range = cfg.get_list("family", "range", {0.0, 4.0});
        if (range.size() != 2) throw ConfigError("family.range needs two numbers");
        return polynomial_family(coeffs, c, {range[0], range[1]});
    }
    throw ConfigError("unknown family id '" + id + "' (logistic, sine, polynomial)");
}

// ---------------------------------------------------------------------------
// Output files

inline void write_text(const std::filesystem::path& p, const std::string& s) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
    f << s;
}

inline void write_json(const std::filesystem::path& p, const nlohmann::json& j) { write_text(p, j.dump(2) + "\n"); }

[[nodiscard]] inline nlohmann::json read_json(const std::filesystem::path& p) {
    std::ifstream f(p);
    if (!f) throw ConfigError("cannot open '" + p.string() + "'");
    return nlohmann::json::parse(f);
}

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : cols_(header.size()) {
        for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
        out_ << "\n";
    }
    CsvWriter& row(const std::vector<std::string>& cells) {
        if (cells.size() != cols_) throw std::invalid_argument("CsvWriter: wrong number of cells");
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
        return *this;
    }
    CsvWriter& row(const std::vector<double>& cells) {
        std::vector<std::string> s;
        for (double v : cells) s.push_back(fmt17(v));
        return row(s);
    }
    [[nodiscard]] std::string str() const { return out_.str(); }

private:
    std::size_t cols_;
    std::ostringstream out_;
};

// Log-log scatter with a fitted line y = exp(b) x^a and a band [y/C, y*C].
struct SvgSeries {
    std::vector<double> x, y;
    std::string label;
};

[[nodiscard]] inline std::string loglog_svg(const std::vector<SvgSeries>& series, std::optional<std::pair<double, double>> fit,
                                            double band_C, const std::string& xlabel, const std::string& ylabel) {
    double x0 = 1e300, x1 = 0.0, y0 = 1e300, y1 = 0.0;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0 && s.y[i] > 0.0)) continue;
            x0 = std::min(x0, s.x[i]); x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]); y1 = std::max(y1, s.y[i]);
        }
    if (!(x1 > 0.0)) { x0 = 1e-8; x1 = 1.0; y0 = 1e-8; y1 = 1.0; }
    const double lx0 = std::floor(std::log10(x0)), lx1 = std::ceil(std::log10(x1));
    double ly0 = std::floor(std::log10(y0)), ly1 = std::ceil(std::log10(y1));
    if (band_C > 1.0) { ly0 -= std::ceil(std::log10(band_C)); ly1 += std::ceil(std::log10(band_C)); }
    const double W = 640, H = 480, L = 70, R = 20, T = 20, B = 50;
    auto px = [&](double x) { return L + (std::log10(x) - lx0) / std::max(lx1 - lx0, 1.0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (std::log10(y) - ly0) / std::max(ly1 - ly0, 1.0) * (H - T - B); };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double e = lx0; e <= lx1; e += 1.0)
        o << "<text x=\"" << px(std::pow(10.0, e)) << "\" y=\"" << H - B + 15 << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
    for (double e = ly0; e <= ly1; e += 1.0)
        o << "<text x=\"" << L - 5 << "\" y=\"" << py(std::pow(10.0, e)) + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
    o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    o << "<text x=\"15\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 15 " << (T + H - B) / 2
      << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
    if (fit) {
        auto line = [&](double scale, const char* style) {
            const double a = fit->first, b = fit->second;
            const double xa = std::pow(10.0, lx0), xb = std::pow(10.0, lx1);
            o << "<line x1=\"" << px(xa) << "\" y1=\"" << py(scale * std::exp(b) * std::pow(xa, a)) << "\" x2=\"" << px(xb)
              << "\" y2=\"" << py(scale * std::exp(b) * std::pow(xb, a)) << "\" " << style << "/>\n";
        };
        line(1.0, "stroke=\"black\"");
        if (band_C > 1.0) {
            line(band_C, "stroke=\"gray\" stroke-dasharray=\"4 3\"");
            line(1.0 / band_C, "stroke=\"gray\" stroke-dasharray=\"4 3\"");
        }
    }
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    for (std::size_t s = 0; s < series.size(); ++s) {
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            if (!(series[s].x[i] > 0.0 && series[s].y[i] > 0.0)) continue;
            o << "<circle cx=\"" << px(series[s].x[i]) << "\" cy=\"" << py(series[s].y[i]) << "\" r=\"3\" fill=\""
              << colors[s % 4] << "\"/>\n";
        }
        o << "<text x=\"" << L + 10 << "\" y=\"" << T + 15 + 14 * double(s) << "\" fill=\"" << colors[s % 4] << "\">"
          << series[s].label << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

// ---------------------------------------------------------------------------
// On-disk cache of JSON documents keyed by a hash of their inputs.

[[nodiscard]] inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

class Cache {
public:
    explicit Cache(std::filesystem::path dir, bool enabled = true) : dir_(std::move(dir)), enabled_(enabled) {}

    // SRBLAB_CACHE_DIR, else ./.srblab_cache.
    static Cache from_env(bool enabled = true) {
        const char* env = std::getenv("SRBLAB_CACHE_DIR");
        return Cache(env && *env ? std::filesystem::path(env) : std::filesystem::path(".srblab_cache"), enabled);
    }

    [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }
    [[nodiscard]] bool enabled() const { return enabled_; }

    [[nodiscard]] static std::string key(const std::string& kind, const std::string& inputs) {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(kind + "|" + inputs)));
        return kind + "-" + buf;
    }

    [[nodiscard]] std::optional<nlohmann::json> get(const std::string& k, const std::string& inputs) const {
        if (!enabled_) return std::nullopt;
        const auto p = dir_ / (k + ".json");
        std::ifstream f(p);
        if (!f) return std::nullopt;
        try {
            nlohmann::json j = nlohmann::json::parse(f);
            if (j.value("inputs", std::string()) != inputs) return std::nullopt;  // hash collision
            return j.at("value");
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }

    void put(const std::string& k, const std::string& inputs, const nlohmann::json& value) const {
        if (!enabled_) return;
        std::filesystem::create_directories(dir_);
        const auto tmp = dir_ / (k + ".tmp");
        write_text(tmp, nlohmann::json{{"inputs", inputs}, {"value", value}}.dump());
        std::filesystem::rename(tmp, dir_ / (k + ".json"));
    }

private:
    std::filesystem::path dir_;
    bool enabled_ = true;
};

} // namespace srblab
