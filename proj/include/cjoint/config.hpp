// Key-value joint configuration with unit-suffixed keys.
//
//   # reference joint
//   r_mm        = 20.24
//   d_mm        = 27.68
//   K_N_per_m   = 81
//   I_kg_m2     = 3.1e-5
//   zetaI_N_m_s = 2.2e-4   # divided by I on load
//   Q0I_N_m     = 1e-4     # divided by I on load
//
//   [wake]
//   flow_speed_m_s = 0.3
//   ...
//
// Every key carries its unit; values are converted to SI on load and each
// conversion is recorded in the audit trail.
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cjoint/core_model.hpp"
#include "cjoint/errors.hpp"
#include "cjoint/wake_forcing.hpp"

namespace cjoint {

struct AuditEntry {
    std::string key;   ///< key as written in the file
    double raw = 0.0;  ///< value as written
    std::string field; ///< SI field it feeds
    double si = 0.0;   ///< converted value
    std::string rule;  ///< conversion applied
};

struct LoadedConfig {
    JointParams joint;
    std::optional<double> Q0; ///< specific forcing amplitude [rad/s^2]
    std::optional<WakeParams> wake;
    std::optional<WakeCalibration> calibration;
    std::vector<AuditEntry> audit;
};

namespace detail {

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string &key, const std::string &text) {
    double v = 0.0;
    const char *first = text.data();
    const char *last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw ConfigError("config key '" + key + "': '" + text + "' is not a finite number");
    }
    return v;
}

} // namespace detail

/// Parse config text; `origin` is used in error messages.
inline LoadedConfig parse_config(const std::string &text, const std::string &origin = "<config>") {
    std::map<std::string, std::pair<double, std::string>> values; // qualified key -> (value, key as written)
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
            }
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "wake") {
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown section '" + section + "'");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string qualified = section.empty() ? key : section + "." + key;
        if (values.count(qualified)) throw ConfigError("config key '" + qualified + "' given twice");
        values[qualified] = {detail::parse_number(qualified, detail::trim(line.substr(eq + 1))), key};
    }

    static const std::set<std::string> known{
        "r_mm", "r_m", "d_mm", "d_m", "K_N_per_m", "I_kg_m2", "zetaI_N_m_s", "zeta_per_s", "Q0I_N_m",
        "Q0_rad_per_s2", "wake.flow_speed_m_s", "wake.vorticity_per_s", "wake.vortex_spacing_m",
        "wake.fluid_density_kg_per_m3", "wake.phase_offset_rad", "wake.c_omega", "wake.c_amp"};
    for (const auto &kv : values) {
        if (!known.count(kv.first)) throw ConfigError("config key '" + kv.first + "' is not recognised");
    }

    LoadedConfig cfg;
    auto take = [&](const std::string &key) -> std::optional<double> {
        const auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        return it->second.first;
    };
    auto record = [&](const std::string &key, double raw, const std::string &field, double si,
                      const std::string &rule) { cfg.audit.push_back(AuditEntry{key, raw, field, si, rule}); };
    // One of several unit spellings for a required quantity.
    auto length = [&](const std::string &name) {
        const auto mm = take(name + "_mm");
        const auto m = take(name + "_m");
        if (mm && m) throw ConfigError("config key '" + name + "_mm' conflicts with '" + name + "_m'");
        if (mm) {
            record(name + "_mm", *mm, name, *mm * 1e-3, "mm -> m");
            return *mm * 1e-3;
        }
        if (m) {
            record(name + "_m", *m, name, *m, "m");
            return *m;
        }
        throw ConfigError("config key '" + name + "_mm' is missing");
    };

    cfg.joint.r = length("r");
    cfg.joint.d = length("d");
    if (const auto K = take("K_N_per_m")) {
        cfg.joint.K = *K;
        record("K_N_per_m", *K, "K", *K, "N/m");
    } else {
        throw ConfigError("config key 'K_N_per_m' is missing");
    }
    if (const auto I = take("I_kg_m2")) {
        if (!(*I > 0.0)) throw ConfigError("config key 'I_kg_m2' must be > 0");
        cfg.joint.inertia = *I;
        record("I_kg_m2", *I, "inertia", *I, "kg m^2");
    } else {
        throw ConfigError("config key 'I_kg_m2' is missing");
    }
    {
        const auto zi = take("zetaI_N_m_s");
        const auto z = take("zeta_per_s");
        if (zi && z) throw ConfigError("config key 'zetaI_N_m_s' conflicts with 'zeta_per_s'");
        if (zi) {
            cfg.joint.zeta = *zi / cfg.joint.inertia;
            record("zetaI_N_m_s", *zi, "zeta", cfg.joint.zeta, "zetaI_N_m_s / I_kg_m2 -> 1/s");
        } else if (z) {
            cfg.joint.zeta = *z;
            record("zeta_per_s", *z, "zeta", *z, "1/s");
        } else {
            throw ConfigError("config key 'zetaI_N_m_s' is missing");
        }
    }
    {
        const auto qi = take("Q0I_N_m");
        const auto q = take("Q0_rad_per_s2");
        if (qi && q) throw ConfigError("config key 'Q0I_N_m' conflicts with 'Q0_rad_per_s2'");
        if (qi) {
            cfg.Q0 = *qi / cfg.joint.inertia;
            record("Q0I_N_m", *qi, "Q0", *cfg.Q0, "Q0I_N_m / I_kg_m2 -> rad/s^2");
        } else if (q) {
            cfg.Q0 = *q;
            record("Q0_rad_per_s2", *q, "Q0", *q, "rad/s^2");
        }
    }

    const bool any_wake = std::any_of(values.begin(), values.end(),
                                      [](const auto &kv) { return kv.first.rfind("wake.", 0) == 0; });
    if (any_wake) {
        auto need = [&](const std::string &key, const std::string &unit) {
            const auto v = take("wake." + key);
            if (!v) throw ConfigError("config key 'wake." + key + "' is missing");
            record("wake." + key, *v, key, *v, unit);
            return *v;
        };
        WakeParams w;
        w.flow_speed = need("flow_speed_m_s", "m/s");
        w.vorticity = need("vorticity_per_s", "1/s");
        w.vortex_spacing = need("vortex_spacing_m", "m");
        w.fluid_density = need("fluid_density_kg_per_m3", "kg/m^3");
        w.phase_offset = take("wake.phase_offset_rad").value_or(0.0);
        record("wake.phase_offset_rad", w.phase_offset, "phase_offset", w.phase_offset, "rad");
        WakeCalibration c;
        c.c_omega = need("c_omega", "dimensionless");
        c.c_amp = need("c_amp", "rad/s^2 per (kg/m^3 s^-2)");
        cfg.wake = w;
        cfg.calibration = c;
    }

    try {
        validate(cfg.joint);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

inline LoadedConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

/// Reference joint and forcing as a LoadedConfig.
inline LoadedConfig reference_config() {
    return parse_config("r_mm = 20.24\n"
                        "d_mm = 27.68\n"
                        "K_N_per_m = 81\n"
                        "I_kg_m2 = 3.1e-5\n"
                        "zetaI_N_m_s = 2.2e-4\n"
                        "Q0I_N_m = 1e-4\n",
                        "<reference>");
}

} // namespace cjoint
