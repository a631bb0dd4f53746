#pragma once

// Run configuration: a flat TOML subset (key = value, '#' comments, strings,
// numbers, booleans, one-level arrays) plus validation.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "frx/core.hpp"
#include "frx/refelem.hpp"

namespace frx {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CaseKind { icv, tgv, remainder };

inline std::string to_string(CaseKind c) {
    switch (c) {
    case CaseKind::icv: return "icv";
    case CaseKind::tgv: return "tgv";
    case CaseKind::remainder: return "remainder";
    }
    return "?";
}

struct RunConfig {
    CaseKind kind = CaseKind::tgv;
    std::vector<Scheme> schemes{Scheme::A, Scheme::B, Scheme::C, Scheme::D};
    int p = 4;
    std::optional<std::array<int, 3>> elements;  // case default when unset
    double re = 400.0;
    double ma = 0.08;
    double beta = 5.0;
    Precision precision = Precision::fp64;
    std::optional<double> tEnd;  // case default when unset
    std::optional<double> dt;    // overrides cfl when set
    double cfl = 0.4;
    std::string output = "out";
    bool profile = false;
    int profileSteps = 3;
    unsigned long seed = 0;
    double gamma = 1.4;
    double pr = 0.71;
    int threads = 0;  // 0: runtime default
    int sampleEvery = 10;
    int pMin = 2, pMax = 5, samples = 100;  // remainder sweep

    std::array<int, 3> grid() const {
        if (elements) return *elements;
        return kind == CaseKind::icv ? std::array<int, 3>{8, 8, 1} : std::array<int, 3>{4, 4, 4};
    }
    double end_time() const {
        if (tEnd) return *tEnd;
        return kind == CaseKind::icv ? 10.0 : 20.0;
    }
};

inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "case",  "scheme", "p",      "elements", "re",      "ma",      "beta",         "precision",
        "tend",  "dt",     "cfl",    "output",   "profile", "seed",    "gamma",        "pr",
        "threads", "sample_every", "p_min", "p_max", "samples", "profile_steps"};
    return keys;
}

namespace detail {

using ConfigScalar = std::variant<double, bool, std::string>;

struct ConfigValue {
    std::vector<ConfigScalar> items;
    bool isArray = false;
};

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::string strip_comment(const std::string& line) {
    char quoted = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' || line[i] == '\'') {
            if (!quoted) quoted = line[i];
            else if (quoted == line[i]) quoted = 0;
        }
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

inline ConfigScalar parse_scalar(const std::string& raw, const std::string& where) {
    const std::string t = trim(raw);
    if (t.empty()) throw ConfigError(where + ": missing value");
    if (t.front() == '"' || t.front() == '\'') {
        if (t.size() < 2 || t.back() != t.front()) throw ConfigError(where + ": unterminated string");
        return t.substr(1, t.size() - 2);
    }
    if (t == "true") return true;
    if (t == "false") return false;
    std::string num = t;
    num.erase(std::remove(num.begin(), num.end(), '_'), num.end());
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(num, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != num.size() || num.empty())
        throw ConfigError(where + ": cannot parse value '" + t + "' (strings need quotes)");
    return v;
}

inline ConfigValue parse_value(const std::string& raw, const std::string& where) {
    const std::string t = trim(raw);
    ConfigValue out;
    if (!t.empty() && t.front() == '[') {
        if (t.back() != ']') throw ConfigError(where + ": unterminated array");
        out.isArray = true;
        const std::string body = t.substr(1, t.size() - 2);
        std::string cur;
        char quoted = 0;
        for (char ch : body) {
            if ((ch == '"' || ch == '\'') && (!quoted || quoted == ch)) quoted = quoted ? 0 : ch;
            if (ch == ',' && !quoted) {
                if (!trim(cur).empty()) out.items.push_back(parse_scalar(cur, where));
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (!trim(cur).empty()) out.items.push_back(parse_scalar(cur, where));
        return out;
    }
    out.items.push_back(parse_scalar(t, where));
    return out;
}

inline std::string join_keys() {
    std::string s;
    for (const auto& k : config_keys()) s += (s.empty() ? "" : ", ") + k;
    return s;
}

inline double as_number(const ConfigValue& v, const std::string& key) {
    if (v.isArray || v.items.size() != 1 || !std::holds_alternative<double>(v.items[0]))
        throw ConfigError("'" + key + "' must be a number");
    return std::get<double>(v.items[0]);
}

inline int as_int(const ConfigValue& v, const std::string& key) {
    const double d = as_number(v, key);
    if (d != std::floor(d) || std::abs(d) > 2e9) throw ConfigError("'" + key + "' must be an integer");
    return static_cast<int>(d);
}

inline std::string as_string(const ConfigScalar& s, const std::string& key) {
    if (!std::holds_alternative<std::string>(s)) throw ConfigError("'" + key + "' must be a string");
    return std::get<std::string>(s);
}

inline bool as_bool(const ConfigValue& v, const std::string& key) {
    if (v.isArray || v.items.size() != 1 || !std::holds_alternative<bool>(v.items[0]))
        throw ConfigError("'" + key + "' must be true or false");
    return std::get<bool>(v.items[0]);
}

}  // namespace detail

inline CaseKind parse_case(const std::string& s) {
    if (s == "icv") return CaseKind::icv;
    if (s == "tgv") return CaseKind::tgv;
    if (s == "remainder") return CaseKind::remainder;
    throw ConfigError("case: unknown value '" + s + "', expected one of {icv, tgv, remainder}");
}

inline Scheme parse_scheme(const std::string& s) {
    if (s == "A") return Scheme::A;
    if (s == "B") return Scheme::B;
    if (s == "C") return Scheme::C;
    if (s == "D") return Scheme::D;
    throw ConfigError("scheme: unknown value '" + s + "', expected one of {A, B, C, D}");
}

inline std::vector<Scheme> parse_scheme_list(const std::string& s) {
    std::vector<Scheme> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_scheme(detail::trim(item)));
    if (out.empty()) throw ConfigError("scheme: empty list");
    return out;
}

inline Precision parse_precision(const std::string& s) {
    if (s == "fp32") return Precision::fp32;
    if (s == "fp64") return Precision::fp64;
    throw ConfigError("precision: unknown value '" + s + "', expected one of {fp32, fp64}");
}

inline std::array<int, 3> parse_elements(const std::string& s) {
    std::array<int, 3> n{};
    std::stringstream ss(s);
    std::string item;
    int k = 0;
    while (std::getline(ss, item, ',')) {
        if (k == 3) throw ConfigError("elements: expected NX,NY,NZ");
        try {
            std::size_t used = 0;
            n[k] = std::stoi(detail::trim(item), &used);
            if (used != detail::trim(item).size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("elements: '" + item + "' is not an integer");
        }
        ++k;
    }
    if (k != 3) throw ConfigError("elements: expected NX,NY,NZ");
    return n;
}

/// Applies one key; shared by the file parser and tests.
inline void apply_config_value(RunConfig& cfg, const std::string& key, const detail::ConfigValue& v) {
    using namespace detail;
    if (key == "case") {
        cfg.kind = parse_case(as_string(v.items.at(0), key));
    } else if (key == "scheme") {
        if (v.items.empty()) throw ConfigError("scheme: empty list");
        cfg.schemes.clear();
        for (const auto& s : v.items) cfg.schemes.push_back(parse_scheme(as_string(s, key)));
    } else if (key == "p") {
        cfg.p = as_int(v, key);
    } else if (key == "elements") {
        if (!v.isArray || v.items.size() != 3) throw ConfigError("elements: expected [nx, ny, nz]");
        std::array<int, 3> n{};
        for (int k = 0; k < 3; ++k) {
            ConfigValue one;
            one.items = {v.items[k]};
            n[k] = as_int(one, key);
        }
        cfg.elements = n;
    } else if (key == "re") {
        cfg.re = as_number(v, key);
    } else if (key == "ma") {
        cfg.ma = as_number(v, key);
    } else if (key == "beta") {
        cfg.beta = as_number(v, key);
    } else if (key == "precision") {
        cfg.precision = parse_precision(as_string(v.items.at(0), key));
    } else if (key == "tend") {
        cfg.tEnd = as_number(v, key);
    } else if (key == "dt") {
        cfg.dt = as_number(v, key);
    } else if (key == "cfl") {
        cfg.cfl = as_number(v, key);
    } else if (key == "output") {
        cfg.output = as_string(v.items.at(0), key);
    } else if (key == "profile") {
        cfg.profile = as_bool(v, key);
    } else if (key == "seed") {
        const int s = as_int(v, key);
        if (s < 0) throw ConfigError("seed: out of range, must be >= 0");
        cfg.seed = static_cast<unsigned long>(s);
    } else if (key == "gamma") {
        cfg.gamma = as_number(v, key);
    } else if (key == "pr") {
        cfg.pr = as_number(v, key);
    } else if (key == "threads") {
        cfg.threads = as_int(v, key);
    } else if (key == "sample_every") {
        cfg.sampleEvery = as_int(v, key);
    } else if (key == "p_min") {
        cfg.pMin = as_int(v, key);
    } else if (key == "p_max") {
        cfg.pMax = as_int(v, key);
    } else if (key == "samples") {
        cfg.samples = as_int(v, key);
    } else if (key == "profile_steps") {
        cfg.profileSteps = as_int(v, key);
    } else {
        throw ConfigError("unknown key '" + key + "'; valid keys: " + join_keys());
    }
}

/// Range checks; messages name the field and its bounds.
inline void validate(const RunConfig& c) {
    auto range = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    range(c.p >= 0 && c.p <= kMaxOrder,
          "p: out of range, must be in [0, " + std::to_string(kMaxOrder) + "], got " + std::to_string(c.p));
    for (int n : c.grid()) range(n >= 1, "elements: out of range, each count must be >= 1");
    range(c.re > 0.0, "re: out of range, must be > 0");
    range(c.ma > 0.0, "ma: out of range, must be > 0");
    range(c.beta > 0.0, "beta: out of range, must be > 0");
    range(c.end_time() >= 0.0, "tend: out of range, must be >= 0");
    if (c.dt) range(*c.dt > 0.0, "dt: out of range, must be > 0");
    range(c.cfl > 0.0 && c.cfl <= 2.0, "cfl: out of range, must be in (0, 2]");
    range(c.gamma > 1.0, "gamma: out of range, must be > 1");
    range(c.pr > 0.0, "pr: out of range, must be > 0");
    range(c.threads >= 0, "threads: out of range, must be >= 0 (0 = default)");
    range(c.sampleEvery >= 1, "sample_every: out of range, must be >= 1");
    range(c.profileSteps >= 1, "profile_steps: out of range, must be >= 1");
    range(c.pMin >= 1 && c.pMin <= kMaxOrder,
          "p_min: out of range, must be in [1, " + std::to_string(kMaxOrder) + "]");
    range(c.pMax >= c.pMin && c.pMax <= kMaxOrder,
          "p_max: out of range, must be in [p_min, " + std::to_string(kMaxOrder) + "]");
    range(c.samples >= 1, "samples: out of range, must be >= 1");
    range(!c.schemes.empty(), "scheme: at least one scheme is required");
    range(!c.output.empty(), "output: must not be empty");
}

/// Parses config text without validating, so flag overrides can follow.
inline RunConfig parse_config_text(const std::string& text, const std::string& source = "config") {
    RunConfig cfg;
    std::stringstream in(text);
    std::string line;
    int lineNo = 0;
    std::map<std::string, int> seen;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string where = source + ":" + std::to_string(lineNo);
        const std::string t = detail::trim(detail::strip_comment(line));
        if (t.empty()) continue;
        if (t.front() == '[') throw ConfigError(where + ": tables are not supported, use top-level keys");
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string key = detail::trim(t.substr(0, eq));
        if (seen.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
        seen[key] = lineNo;
        const auto value = detail::parse_value(t.substr(eq + 1), where);
        try {
            apply_config_value(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
    return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

}  // namespace frx
