#pragma once

// Flat key=value scenario files. One assignment per line, '#' starts a
// comment. Model keys are required; numerics and initial-data keys default.
// A value of the form start:stop:count declares a sweep axis instead of a
// scalar (only for numeric keys).

#include "impcomp/errors.hpp"
#include "impcomp/model.hpp"
#include "impcomp/stefan_solver.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace impcomp {

struct SweepAxis {
    std::string key;
    double start = 0.0;
    double stop = 0.0;
    int count = 1;

    double at(int i) const {
        return count == 1 ? start : start + (stop - start) * static_cast<double>(i) / (count - 1);
    }
};

struct Scenario {
    ModelParams params;
    SolverConfig solver;
    InitialData ic;
    std::vector<SweepAxis> grid;
};

namespace config_detail {

inline const std::vector<std::string>& model_keys() {
    static const std::vector<std::string> keys = {"D",  "gamma", "alpha", "beta", "k",      "h",      "mu1",     "mu2",
                                                  "r0", "s0",    "tau",   "sigma1", "sigma2", "pulse_u", "pulse_v"};
    return keys;
}

inline const std::vector<std::string>& optional_keys() {
    // c1, c2 are shorthands for linear pulse_u, pulse_v.
    static const std::vector<std::string> keys = {"N",          "dt",        "t_end", "snapshot_every", "L_max",
                                                  "eps_vanish", "eps_stall", "ic_u",  "ic_v",           "c1",
                                                  "c2"};
    return keys;
}

inline bool known_key(const std::string& k) {
    const auto& a = model_keys();
    const auto& b = optional_keys();
    return std::find(a.begin(), a.end(), k) != a.end() || std::find(b.begin(), b.end(), k) != b.end();
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& text) {
    double x = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last || !std::isfinite(x)) {
        throw ValidationError("malformed number for " + key + ": '" + text + "'");
    }
    return x;
}

inline int parse_int(const std::string& key, const std::string& text) {
    int x = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ValidationError("malformed integer for " + key + ": '" + text + "'");
    }
    return x;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace config_detail

/// "identity", "linear:c", "bh:a,b".
inline PulseMap parse_pulse(const std::string& key, const std::string& text) {
    using config_detail::parse_double;
    if (text == "identity") return PulseMap::identity();
    if (text.rfind("linear:", 0) == 0) return PulseMap::linear(parse_double(key, text.substr(7)));
    if (text.rfind("bh:", 0) == 0) {
        const auto parts = config_detail::split(text.substr(3), ',');
        if (parts.size() != 2) throw ValidationError("malformed Beverton-Holt pulse for " + key + ": '" + text + "'");
        return PulseMap::beverton_holt(parse_double(key, parts[0]), parse_double(key, parts[1]));
    }
    throw ValidationError("unknown pulse map for " + key + ": '" + text + "' (identity, linear:c, bh:a,b)");
}

/// "cos:A" or "quartic:A".
inline InitialProfile parse_profile(const std::string& key, const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ValidationError("malformed profile for " + key + ": '" + text + "'");
    const std::string kind = text.substr(0, colon);
    InitialProfile p;
    if (kind == "cos") {
        p.kind = ProfileKind::cosine;
    } else if (kind == "quartic") {
        p.kind = ProfileKind::quartic;
    } else {
        throw ValidationError("unknown profile for " + key + ": '" + kind + "' (cos, quartic)");
    }
    p.amplitude = config_detail::parse_double(key, text.substr(colon + 1));
    if (!(p.amplitude > 0.0)) throw ValidationError(key + ": profile amplitude must be > 0");
    return p;
}

/// Sets one key. Throws ValidationError for unknown keys or bad values.
inline void apply_setting(Scenario& sc, const std::string& key, const std::string& value) {
    using config_detail::parse_double;
    using config_detail::parse_int;
    ModelParams& p = sc.params;
    SolverConfig& c = sc.solver;
    if (key == "D") p.D = parse_double(key, value);
    else if (key == "gamma") p.gamma = parse_double(key, value);
    else if (key == "alpha") p.alpha = parse_double(key, value);
    else if (key == "beta") p.beta = parse_double(key, value);
    else if (key == "k") p.k = parse_double(key, value);
    else if (key == "h") p.h = parse_double(key, value);
    else if (key == "mu1") p.mu1 = parse_double(key, value);
    else if (key == "mu2") p.mu2 = parse_double(key, value);
    else if (key == "r0") p.r0 = parse_double(key, value);
    else if (key == "s0") p.s0 = parse_double(key, value);
    else if (key == "tau") p.tau = parse_double(key, value);
    else if (key == "sigma1") p.sigma1 = parse_double(key, value);
    else if (key == "sigma2") p.sigma2 = parse_double(key, value);
    else if (key == "pulse_u") p.pulse_u = parse_pulse(key, value);
    else if (key == "pulse_v") p.pulse_v = parse_pulse(key, value);
    else if (key == "c1") p.pulse_u = PulseMap::linear(parse_double(key, value));
    else if (key == "c2") p.pulse_v = PulseMap::linear(parse_double(key, value));
    else if (key == "N") c.N = parse_int(key, value);
    else if (key == "dt") c.dt = parse_double(key, value);
    else if (key == "t_end") c.t_end = parse_double(key, value);
    else if (key == "snapshot_every") c.snapshot_every = parse_int(key, value);
    else if (key == "L_max") c.L_max = parse_double(key, value);
    else if (key == "eps_vanish") c.eps_vanish = parse_double(key, value);
    else if (key == "eps_stall") c.eps_stall = parse_double(key, value);
    else if (key == "ic_u") sc.ic.u = parse_profile(key, value);
    else if (key == "ic_v") sc.ic.v = parse_profile(key, value);
    else throw ValidationError("unknown key '" + key + "'");
}

namespace config_detail {

/// Recognizes start:stop:count with numeric parts.
inline bool parse_axis(const std::string& key, const std::string& value, SweepAxis& out) {
    const auto parts = split(value, ':');
    if (parts.size() != 3) return false;
    for (const auto& s : parts) {
        if (s.empty() || !(std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-' || s[0] == '+' || s[0] == '.')) {
            return false;
        }
    }
    out.key = key;
    out.start = parse_double(key, parts[0]);
    out.stop = parse_double(key, parts[1]);
    out.count = parse_int(key, parts[2]);
    if (out.count < 1) throw ValidationError("sweep axis " + key + ": count must be >= 1");
    return true;
}

inline std::pair<std::string, std::string> split_assignment(const std::string& line, const std::string& where) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(where + ": expected key=value, got '" + line + "'");
    return {trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1))};
}

}  // namespace config_detail

/// Parses config text, then applies overrides ("key=value") in order, then
/// checks required keys and the parameter invariants.
inline Scenario parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {},
                                  const std::string& origin = "config") {
    Scenario sc;
    sc.params = ModelParams{};
    std::set<std::string> seen;
    auto assign = [&](const std::string& key, const std::string& value, const std::string& where) {
        if (!config_detail::known_key(key)) throw ValidationError(where + ": unknown key '" + key + "'");
        SweepAxis axis;
        if (config_detail::parse_axis(key, value, axis)) {
            if (key == "pulse_u" || key == "pulse_v" || key == "ic_u" || key == "ic_v") {
                throw ValidationError(where + ": key '" + key + "' cannot be swept");
            }
            sc.grid.erase(std::remove_if(sc.grid.begin(), sc.grid.end(),
                                         [&](const SweepAxis& a) { return a.key == key; }),
                          sc.grid.end());
            sc.grid.push_back(axis);
            apply_setting(sc, key, config_detail::split(value, ':')[0]);
        } else {
            apply_setting(sc, key, value);
        }
        seen.insert(key);
        if (key == "c1") seen.insert("pulse_u");
        if (key == "c2") seen.insert("pulse_v");
    };

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = config_detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        const auto [key, value] = config_detail::split_assignment(line, where);
        assign(key, value, where);
    }
    for (const auto& o : overrides) {
        const auto [key, value] = config_detail::split_assignment(o, "--set");
        assign(key, value, "--set");
    }

    std::string missing;
    for (const auto& k : config_detail::model_keys()) {
        if (!seen.count(k)) missing += (missing.empty() ? "" : ", ") + k;
    }
    if (!missing.empty()) throw ValidationError("missing required keys: " + missing);

    const ValidationReport rep = validate_params(sc.params);
    if (!rep.empty()) throw ValidationError(format_report(rep));
    validate_config(sc.solver, sc.params.tau);
    return sc;
}

inline Scenario parse_config(const std::string& path, const std::vector<std::string>& overrides = {}) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), overrides, path);
}

/// Config text reproducing a scenario (sweep axes omitted).
inline std::string format_config(const Scenario& sc) {
    const ModelParams& p = sc.params;
    const SolverConfig& c = sc.solver;
    std::ostringstream os;
    os.precision(17);
    os << "D=" << p.D << "\ngamma=" << p.gamma << "\nalpha=" << p.alpha << "\nbeta=" << p.beta << "\nk=" << p.k
       << "\nh=" << p.h << "\nmu1=" << p.mu1 << "\nmu2=" << p.mu2 << "\nr0=" << p.r0 << "\ns0=" << p.s0
       << "\ntau=" << p.tau << "\nsigma1=" << p.sigma1 << "\nsigma2=" << p.sigma2
       << "\npulse_u=" << p.pulse_u.to_string() << "\npulse_v=" << p.pulse_v.to_string() << "\nN=" << c.N
       << "\ndt=" << c.dt << "\nt_end=" << c.t_end << "\nsnapshot_every=" << c.snapshot_every
       << "\nL_max=" << c.L_max << "\neps_vanish=" << c.eps_vanish << "\neps_stall=" << c.eps_stall
       << "\nic_u=" << sc.ic.u.to_string() << "\nic_v=" << sc.ic.v.to_string() << "\n";
    return os.str();
}

}  // namespace impcomp
