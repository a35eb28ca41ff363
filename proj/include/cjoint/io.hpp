// CSV/JSON writers for surfaces, maxima lines, spectra and trajectories, plus
// the JSON manifest that accompanies every output file.
#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cjoint/config.hpp"
#include "cjoint/core_model.hpp"
#include "cjoint/format.hpp"
#include "cjoint/harmonic_balance.hpp"
#include "cjoint/simulator.hpp"
#include "cjoint/version.hpp"
#include "cjoint/volterra.hpp"

namespace cjoint::io {

using json = nlohmann::ordered_json;

/// Minimal CSV table: header row plus pre-formatted cells.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row) {
        if (row.size() != header_.size()) throw std::logic_error("csv: row width does not match header");
        rows_.push_back(std::move(row));
    }

    std::size_t size() const { return rows_.size(); }

    void write(std::ostream &out) const {
        write_row(out, header_);
        for (const auto &r : rows_) write_row(out, r);
    }

    std::string str() const {
        std::ostringstream s;
        write(s);
        return s.str();
    }

private:
    static void write_row(std::ostream &out, const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline std::string fmt_int(long long v) { return std::to_string(v); }

inline json joint_json(const JointParams &j) {
    return json{{"r_m", j.r}, {"d_m", j.d}, {"K_N_per_m", j.K}, {"I_kg_m2", j.inertia}, {"zeta_per_s", j.zeta}};
}

inline json audit_json(const std::vector<AuditEntry> &audit) {
    json out = json::array();
    for (const auto &e : audit) {
        out.push_back(json{{"key", e.key}, {"value", e.raw}, {"field", e.field}, {"si", e.si}, {"rule", e.rule}});
    }
    return out;
}

// ---- surfaces and maxima ------------------------------------------------

inline CsvTable surface_csv(const AmplitudeSurface &s) {
    CsvTable t({"F_N", "Omega_rad_s", "amplitude_rad", "n_roots", "stable_flag"});
    for (std::size_t i = 0; i < s.F_grid.size(); ++i) {
        for (std::size_t j = 0; j < s.Omega_grid.size(); ++j) {
            const auto idx = s.index(i, j);
            t.add_row({fmt_sci(s.F_grid[i]), fmt_sci(s.Omega_grid[j]), fmt_sci(s.amplitudes[idx]),
                       fmt_int(s.multiplicity[idx]), fmt_int(s.stable[idx] ? 1 : 0)});
        }
    }
    return t;
}

inline json surface_json(const AmplitudeSurface &s, const JointParams &joint) {
    return json{{"grid",
                 {{"F_N", {{"min", s.F_grid.front()}, {"max", s.F_grid.back()}, {"count", s.F_grid.size()}}},
                  {"Omega_rad_s",
                   {{"min", s.Omega_grid.front()}, {"max", s.Omega_grid.back()}, {"count", s.Omega_grid.size()}}}}},
                {"Q0_rad_per_s2", s.Q0},
                {"stiffness_model", s.model == StiffnessModel::cubic ? "cubic" : "linear_surrogate"},
                {"joint", joint_json(joint)},
                {"version", kVersion}};
}

/// Maxima line in the surface column layout: amplitude at F_max, n_roots
/// and stable_flag re-evaluated there.
inline CsvTable maxima_csv(const std::vector<MaximaPoint> &line, const AmplitudeSurface &s, const JointParams &joint) {
    CsvTable t({"F_N", "Omega_rad_s", "amplitude_rad", "n_roots", "stable_flag", "degenerate"});
    for (const auto &p : line) {
        const auto cell = surface_cell(p.F_max, p.Omega, s.Q0, joint, s.model);
        t.add_row({fmt_sci(p.F_max), fmt_sci(p.Omega), fmt_sci(p.amplitude), fmt_int(cell.n_roots),
                   fmt_int(cell.has_stable ? 1 : 0), fmt_int(p.degenerate ? 1 : 0)});
    }
    return t;
}

// ---- spectra --------------------------------------------------------------

/// Total lines carry order 0; per-order contributions follow in ascending order.
inline CsvTable spectrum_csv(const OutputSpectrum &spec) {
    CsvTable t({"harmonic_index", "freq_rad_s", "re", "im", "order"});
    for (const auto &l : spec.lines) {
        t.add_row({fmt_int(l.harmonic_index), fmt_sci(l.frequency), fmt_sci(l.X.real()), fmt_sci(l.X.imag()), "0"});
    }
    for (const auto &[order, lines] : spec.per_order_contributions) {
        for (const auto &l : lines) {
            t.add_row({fmt_int(l.harmonic_index), fmt_sci(l.frequency), fmt_sci(l.X.real()), fmt_sci(l.X.imag()),
                       fmt_int(order)});
        }
    }
    return t;
}

inline json spectrum_json(const OutputSpectrum &spec) {
    auto lines_json = [](const std::vector<SpectrumLine> &lines) {
        json arr = json::array();
        for (const auto &l : lines) {
            arr.push_back(json{{"harmonic_index", l.harmonic_index},
                               {"freq_rad_s", l.frequency},
                               {"re", l.X.real()},
                               {"im", l.X.imag()}});
        }
        return arr;
    };
    json per_order = json::object();
    for (const auto &[order, lines] : spec.per_order_contributions) per_order[std::to_string(order)] = lines_json(lines);
    return json{{"base_frequency_rad_s", spec.base_frequency},
                {"lines", lines_json(spec.lines)},
                {"per_order", per_order}};
}

// ---- trajectories ---------------------------------------------------------

inline CsvTable trajectory_csv(const Trajectory &traj) {
    CsvTable t({"t_s", "theta_rad", "theta_dot_rad_s"});
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        t.add_row({fmt_sci(traj.times[i]), fmt_sci(traj.theta[i]), fmt_sci(traj.theta_dot[i])});
    }
    return t;
}

/// Post-transient envelope on the trajectory time axis; `interior` marks
/// samples outside the guard bands.
inline CsvTable envelope_csv(const Trajectory &traj, const SteadyStateEstimate &est) {
    CsvTable t({"t_s", "envelope_rad", "interior"});
    const double dt = traj.config.dt;
    const std::size_t first = steady_first_index(traj);
    for (std::size_t i = 0; i < est.envelope.size(); ++i) {
        const bool inside = i >= est.guard && i + est.guard < est.envelope.size();
        t.add_row({fmt_sci(dt * static_cast<double>(first + i)), fmt_sci(est.envelope[i]), inside ? "1" : "0"});
    }
    return t;
}

inline json sim_config_json(const ResolvedSimConfig &c, const std::string &model) {
    return json{{"model", model},
                {"abs_tol", c.abs_tol},
                {"rel_tol", c.rel_tol},
                {"t_end_s", c.t_end},
                {"transient_cut_s", c.transient_cut},
                {"max_step_s", c.max_step},
                {"dt_s", c.dt},
                {"samples_per_period", c.samples_per_period},
                {"theta0_rad", c.theta0},
                {"theta_dot0_rad_s", c.theta_dot0}};
}

// ---- manifest -------------------------------------------------------------

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Run metadata written as `<output>.json` next to each data file.
struct RunManifest {
    std::string command;
    json config;     ///< resolved SI configuration
    json parameters; ///< command-specific inputs and derived values
    std::vector<std::string> outputs;
    std::string version = kVersion;
    std::string timestamp = utc_timestamp();

    json to_json() const {
        return json{{"command", command},   {"version", version}, {"timestamp", timestamp},
                    {"config", config},     {"parameters", parameters}, {"outputs", outputs}};
    }
};

inline void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

inline std::filesystem::path sidecar_path(const std::filesystem::path &data) {
    auto p = data;
    p += ".json";
    return p;
}

} // namespace cjoint::io
