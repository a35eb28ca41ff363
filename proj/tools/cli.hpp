// Command-line front end. `run_cli` is kept separate from main() so the
// dispatch can be exercised in-process by the tests.
#pragma once

#include <cmath>
#include <exception>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <regex>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "cjoint/config.hpp"
#include "cjoint/core_model.hpp"
#include "cjoint/errors.hpp"
#include "cjoint/format.hpp"
#include "cjoint/harmonic_balance.hpp"
#include "cjoint/io.hpp"
#include "cjoint/simulator.hpp"
#include "cjoint/version.hpp"
#include "cjoint/volterra.hpp"
#include "cjoint/wake_forcing.hpp"

namespace cjoint::cli {

namespace fs = std::filesystem;
using io::CsvTable;
using io::json;

struct GridSize {
    std::size_t n_first = kDefaultSurfaceResolution;
    std::size_t n_second = kDefaultSurfaceResolution;
};

inline GridSize parse_grid(const std::string &text) {
    static const std::regex re(R"(^\s*(\d+)\s*[xX]\s*(\d+)\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw std::invalid_argument("--grid: expected NxM, got '" + text + "'");
    GridSize g{std::stoul(m[1].str()), std::stoul(m[2].str())};
    if (g.n_first < 2 || g.n_second < 2) throw std::invalid_argument("--grid: both sizes must be >= 2");
    return g;
}

inline double hz_to_rad(double hz) { return 2.0 * std::numbers::pi * hz; }

/// Collected outputs of one run; written together so every sidecar lists
/// the full set.
class Run {
public:
    Run(std::string command, LoadedConfig config, std::string config_origin, fs::path out_dir)
        : command_(std::move(command)), config_(std::move(config)), origin_(std::move(config_origin)),
          out_dir_(std::move(out_dir)) {}

    const LoadedConfig &config() const { return config_; }
    const JointParams &joint() const { return config_.joint; }
    json &parameters() { return parameters_; }

    double Q0() const {
        if (!config_.Q0) throw ConfigError("config key 'Q0I_N_m' is missing (needed for forced response)");
        return *config_.Q0;
    }

    void add(std::string file_name, CsvTable table) { tables_.emplace_back(std::move(file_name), std::move(table)); }

    std::vector<fs::path> write() const {
        fs::create_directories(out_dir_);
        std::vector<std::string> names;
        for (const auto &[name, _] : tables_) {
            names.push_back(name);
            names.push_back(name + ".json");
        }
        io::RunManifest manifest;
        manifest.command = command_;
        manifest.config = json{{"source", origin_},
                               {"joint", io::joint_json(config_.joint)},
                               {"Q0_rad_per_s2", config_.Q0 ? json(*config_.Q0) : json(nullptr)},
                               {"audit", io::audit_json(config_.audit)}};
        manifest.parameters = parameters_;
        manifest.outputs = names;
        std::vector<fs::path> written;
        for (const auto &[name, table] : tables_) {
            const auto path = out_dir_ / name;
            io::write_text(path, table.str());
            io::write_text(io::sidecar_path(path), manifest.to_json().dump(2) + "\n");
            written.push_back(path);
            written.push_back(io::sidecar_path(path));
        }
        return written;
    }

private:
    std::string command_;
    LoadedConfig config_;
    std::string origin_;
    fs::path out_dir_;
    json parameters_ = json::object();
    std::vector<std::pair<std::string, CsvTable>> tables_;
};

inline double resolve_tension(double value, const std::string &relative_to, const JointParams &joint) {
    const double F = relative_to == "fstar" ? value * critical_tension(joint) : value;
    if (!(F > 0.0)) throw std::invalid_argument("tension must be > 0");
    return F;
}

inline const char *regime(double c1, double c3) {
    if (std::abs(c3) <= 1e-9 * std::abs(c1)) return "linear";
    return c3 > 0.0 ? "hardening" : "softening";
}

// ---- subcommands ----------------------------------------------------------

struct TorqueCurveArgs {
    std::vector<double> tensions;
    std::string relative_to = "none";
    double theta_max = std::numbers::pi / 2.0;
    int points = 201;
};

inline void torque_curve(Run &run, const TorqueCurveArgs &args) {
    const auto &joint = run.joint();
    const double f_star = critical_tension(joint);
    std::vector<double> tensions;
    if (args.tensions.empty()) {
        for (double r : {0.5, 0.9, 1.0, 1.5}) tensions.push_back(r * f_star);
    } else {
        for (double v : args.tensions) tensions.push_back(resolve_tension(v, args.relative_to, joint));
    }
    if (args.points < 2) throw std::invalid_argument("--points must be >= 2");
    if (!(args.theta_max > 0.0)) throw std::invalid_argument("--theta-max must be > 0");

    CsvTable t({"F_N", "F_over_Fstar", "theta_rad", "torque_N_m", "cubic_torque_N_m"});
    json curves = json::array();
    for (double F : tensions) {
        const double c1 = linear_coefficient(F, joint);
        const double c3 = cubic_coefficient(F, joint);
        curves.push_back(json{{"F_N", F}, {"F_over_Fstar", F / f_star}, {"c1_N_m_per_rad", c1},
                              {"c3_N_m_per_rad3", c3}, {"regime", regime(c1, c3)}});
        for (int i = 0; i < args.points; ++i) {
            const double theta = -args.theta_max + 2.0 * args.theta_max * i / (args.points - 1);
            t.add_row({fmt_sci(F), fmt_sci(F / f_star), fmt_sci(theta), fmt_sci(torque(theta, F, joint)),
                       fmt_sci(cubic_torque(theta, F, joint))});
        }
    }
    run.parameters() = json{{"F_star_N", f_star}, {"theta_max_rad", args.theta_max}, {"curves", curves}};
    run.add("torque_curve.csv", std::move(t));
}

struct TaylorArgs {
    std::vector<double> tensions;
    std::string relative_to = "none";
    double window = kDefaultTaylorWindow;
};

inline void taylor(Run &run, const TaylorArgs &args) {
    const auto &joint = run.joint();
    std::vector<double> tensions;
    if (args.tensions.empty()) {
        for (int i = 1; i <= 15; ++i) tensions.push_back(0.1 * i);
    } else {
        for (double v : args.tensions) tensions.push_back(resolve_tension(v, args.relative_to, joint));
    }
    CsvTable t({"F_N", "c1", "c3", "c5", "c7", "c1_closed_form", "c3_closed_form"});
    for (double F : tensions) {
        const auto s = taylor_coeffs(F, joint, args.window);
        t.add_row({fmt_sci(F), fmt_sci(s.c1()), fmt_sci(s.c3()), fmt_sci(s.c5()), fmt_sci(s.c7()),
                   fmt_sci(linear_coefficient(F, joint)), fmt_sci(cubic_coefficient(F, joint))});
    }
    run.parameters() = json{{"window_rad", args.window},
                            {"fit_nodes", kTaylorFitNodes},
                            {"units", "c_n in N m / rad^n"},
                            {"F_star_N", critical_tension(joint)}};
    run.add("taylor.csv", std::move(t));
}

struct ErrorMapArgs {
    std::string grid = "200x200";
    double delta_F = 0.05;
    double f_max_rel = 2.0;
};

/// |tau - cubic| over (F, theta) plus the validity angle on the same F grid.
inline void error_map(Run &run, const ErrorMapArgs &args) {
    const auto &joint = run.joint();
    const auto g = parse_grid(args.grid);
    const ValidityConfig vcfg{args.delta_F};
    const double dtau = vcfg.reference_torque_error(joint);
    const auto F_grid = GridRange::open_at_zero(args.f_max_rel * critical_tension(joint), g.n_first).points();
    const auto theta_grid = GridRange::open_at_zero(kValidityLimit, g.n_second).points();

    CsvTable map({"F_N", "theta_rad", "torque_error_N_m", "within_reference"});
    CsvTable angle({"F_N", "validity_angle_rad", "beyond_limit"});
    for (double F : F_grid) {
        for (double theta : theta_grid) {
            const double e = std::abs(torque(theta, F, joint) - cubic_torque(theta, F, joint));
            map.add_row({fmt_sci(F), fmt_sci(theta), fmt_sci(e), e < dtau ? "1" : "0"});
        }
        const auto va = validity_angle(F, joint, vcfg);
        angle.add_row({fmt_sci(F), va ? fmt_sci(*va) : "nan", va ? "0" : "1"});
    }
    run.parameters() = json{{"delta_F_N", args.delta_F},
                            {"reference_torque_error_N_m", dtau},
                            {"F_N", {{"min", F_grid.front()}, {"max", F_grid.back()}, {"count", F_grid.size()}}},
                            {"theta_rad",
                             {{"min", theta_grid.front()}, {"max", theta_grid.back()}, {"count", theta_grid.size()}}}};
    run.add("error_map.csv", std::move(map));
    run.add("validity_angle.csv", std::move(angle));
}

struct SurfaceArgs {
    std::string grid = "200x200";
    bool surrogate = false;
    double f_max_rel = 1.5;
    double freq_max_hz = kDefaultMaxFrequencyHz;
};

inline AmplitudeSurface compute_surface(Run &run, const SurfaceArgs &args) {
    const auto g = parse_grid(args.grid);
    const double f_star = critical_tension(run.joint());
    return response_surface(run.joint(), run.Q0(), GridRange::open_at_zero(args.f_max_rel * f_star, g.n_first),
                            GridRange::open_at_zero(hz_to_rad(args.freq_max_hz), g.n_second),
                            args.surrogate ? StiffnessModel::linear_surrogate : StiffnessModel::cubic);
}

inline void hb_surface(Run &run, const SurfaceArgs &args) {
    const auto s = compute_surface(run, args);
    run.parameters() = io::surface_json(s, run.joint());
    run.parameters()["freq_max_hz"] = args.freq_max_hz;
    run.add("hb_surface.csv", io::surface_csv(s));
}

inline void maxima_line(Run &run, const SurfaceArgs &args) {
    const auto s = compute_surface(run, args);
    const auto line = cjoint::line_of_maxima(s, run.joint());
    run.parameters() = io::surface_json(s, run.joint());
    run.parameters()["freq_max_hz"] = args.freq_max_hz;
    run.parameters()["refinement_tol_N"] = 1e-4;
    run.add("maxima_line.csv", io::maxima_csv(line, s, run.joint()));
}

struct OperatingPointArgs {
    double freq_hz = 1.5;
    std::optional<double> tension;
    std::string relative_to = "none";
    double phase = 0.0;
};

inline double operating_tension(const Run &run, const OperatingPointArgs &args) {
    return args.tension ? resolve_tension(*args.tension, args.relative_to, run.joint()) : critical_tension(run.joint());
}

inline json operating_point_json(double F, const Forcing &f, double freq_hz, const JointParams &joint) {
    const auto c = duffing_coeffs(F, joint);
    return json{{"F_N", F},
                {"F_over_Fstar", F / critical_tension(joint)},
                {"freq_hz", freq_hz},
                {"Omega_rad_s", f.Omega},
                {"Q0_rad_per_s2", f.Q0},
                {"phi_rad", f.phi},
                {"k_per_s2", c.k},
                {"a_per_s2_rad2", c.a},
                {"zeta_per_s", c.zeta}};
}

inline json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline void volterra_response(Run &run, const OperatingPointArgs &args, int max_order) {
    const double F = operating_tension(run, args);
    const Forcing f{run.Q0(), hz_to_rad(args.freq_hz), args.phase};
    const auto c = duffing_coeffs(F, run.joint());
    const auto single = single_tone_response(c, f, max_order);
    const auto input = single_tone_lines(f);
    const auto spec = multi_tone_spectrum(c, input, max_order);

    json orders = json::object();
    for (int i = 0; i < 4 && 2 * i + 1 <= max_order; ++i) {
        orders[std::to_string(2 * i + 1)] = complex_json(single.orders[static_cast<std::size_t>(i)]);
    }
    const auto hb = solve_amplitudes(c, f);
    run.parameters() = operating_point_json(F, f, args.freq_hz, run.joint());
    run.parameters()["max_order"] = max_order;
    run.parameters()["single_tone"] = json{{"Y", complex_json(single.Y)},
                                           {"amplitude_rad", single.amplitude},
                                           {"calibration", kAmplitudeCalibration},
                                           {"orders", orders},
                                           {"diverging", max_order == 7 && std::abs(single.orders[3]) >
                                                                                std::abs(single.orders[0])}};
    run.parameters()["hb_amplitude_rad"] = hb.empty() ? json(nullptr) : json(hb.back().amplitude);
    run.add("volterra_spectrum.csv", io::spectrum_csv(spec));
}

struct SimulateArgs {
    OperatingPointArgs point;
    std::string model = "exact";
    std::optional<double> t_end;
    double abs_tol = 1e-6;
    double rel_tol = 1e-6;
    double theta0 = 0.0;
    bool envelope = false;
};

inline void simulate_cmd(Run &run, const SimulateArgs &args) {
    const double F = operating_tension(run, args.point);
    const Forcing f{run.Q0(), hz_to_rad(args.point.freq_hz), args.point.phase};
    SimConfig cfg;
    cfg.model = parse_torque_model(args.model);
    cfg.t_end = args.t_end;
    cfg.abs_tol = args.abs_tol;
    cfg.rel_tol = args.rel_tol;
    cfg.theta0 = args.theta0;
    const auto traj = simulate(run.joint(), F, f, cfg);

    run.parameters() = operating_point_json(F, f, args.point.freq_hz, run.joint());
    run.parameters()["simulation"] = io::sim_config_json(traj.config, traj.model);
    run.parameters()["steps"] = json{{"accepted", traj.stats.accepted}, {"rejected", traj.stats.rejected}};
    try {
        const auto est = estimate_steady_state(traj, f);
        run.parameters()["steady_amplitude_rad"] = est.amplitude;
        run.parameters()["envelope_spread"] = est.spread;
        run.parameters()["steady"] = est.spread <= kMaxEnvelopeSpread;
        if (args.envelope) run.add("envelope.csv", io::envelope_csv(traj, est));
    } catch (const std::invalid_argument &e) {
        run.parameters()["steady_amplitude_rad"] = nullptr;
        run.parameters()["steady_note"] = e.what();
        if (args.envelope) throw;
    }
    run.add("trajectory.csv", io::trajectory_csv(traj));
}

struct CompareArgs {
    double freq_hz = 1.5;
    int points = 25;
    double f_lo_rel = 0.5;
    double f_hi_rel = 1.5;
    std::string model = "exact";
    double abs_tol = 1e-6;
    double rel_tol = 1e-6;
};

/// Harmonic balance, Volterra and simulation on one frequency cut.
inline void compare(Run &run, const CompareArgs &args, int max_order) {
    if (args.points < 2) throw std::invalid_argument("--points must be >= 2");
    const auto &joint = run.joint();
    const double f_star = critical_tension(joint);
    const Forcing f{run.Q0(), hz_to_rad(args.freq_hz), 0.0};
    SimConfig cfg;
    cfg.model = parse_torque_model(args.model);
    cfg.abs_tol = args.abs_tol;
    cfg.rel_tol = args.rel_tol;

    CsvTable t({"F_N", "Omega_rad_s", "hb_amplitude_rad", "volterra_amplitude_rad", "sim_amplitude_rad"});
    double worst = 0.0;
    json unsteady = json::array();
    const auto F_grid = GridRange{args.f_lo_rel * f_star, args.f_hi_rel * f_star,
                                  static_cast<std::size_t>(args.points)}.points();
    for (double F : F_grid) {
        const auto c = duffing_coeffs(F, joint);
        const auto roots = solve_amplitudes(c, f);
        double hb = 0.0;
        for (const auto &r : roots) {
            if (r.stable) hb = std::max(hb, r.amplitude);
        }
        const double vt = single_tone_response(c, f, max_order).amplitude;
        const auto traj = simulate(joint, F, f, cfg);
        const auto est = estimate_steady_state(traj, f);
        if (est.spread > kMaxEnvelopeSpread) unsteady.push_back(F);
        const double sim = est.amplitude;
        worst = std::max({worst, std::abs(hb - sim) / sim, std::abs(vt - sim) / sim, std::abs(hb - vt) / sim});
        t.add_row({fmt_sci(F), fmt_sci(f.Omega), fmt_sci(hb), fmt_sci(vt), fmt_sci(sim)});
    }
    run.parameters() = json{{"freq_hz", args.freq_hz},
                            {"Omega_rad_s", f.Omega},
                            {"Q0_rad_per_s2", f.Q0},
                            {"F_star_N", f_star},
                            {"F_range_rel", {args.f_lo_rel, args.f_hi_rel}},
                            {"points", args.points},
                            {"max_order", max_order},
                            {"sim_model", args.model},
                            {"max_relative_disagreement", worst},
                            {"unsteady_tensions_N", unsteady}};
    run.add("compare.csv", std::move(t));
}

inline void wake_forcing(Run &run, std::ostream &out) {
    const auto &cfg = run.config();
    if (!cfg.wake || !cfg.calibration) throw ConfigError("config section [wake] is missing");
    const auto f = wake_to_forcing(*cfg.wake, *cfg.calibration);
    const double hz = f.Omega / (2.0 * std::numbers::pi);
    out << "Q0    = " << fmt_sci(f.Q0) << " rad/s^2\n"
        << "Omega = " << fmt_sci(f.Omega) << " rad/s (" << fmt_sci(hz) << " Hz)\n"
        << "phi   = " << fmt_sci(f.phi) << " rad\n";
    CsvTable t({"Q0_rad_per_s2", "Omega_rad_s", "freq_hz", "phi_rad"});
    t.add_row({fmt_sci(f.Q0), fmt_sci(f.Omega), fmt_sci(hz), fmt_sci(f.phi)});
    run.parameters() = json{{"flow_speed_m_s", cfg.wake->flow_speed},
                            {"vorticity_per_s", cfg.wake->vorticity},
                            {"vortex_spacing_m", cfg.wake->vortex_spacing},
                            {"fluid_density_kg_per_m3", cfg.wake->fluid_density},
                            {"c_omega", cfg.calibration->c_omega},
                            {"c_amp", cfg.calibration->c_amp}};
    run.add("wake_forcing.csv", std::move(t));
}

// ---- dispatch ---------------------------------------------------------------

/// First argument that is neither an option nor the value of a global option.
inline std::optional<std::string> leading_word(int argc, const char *const *argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" || a == "--out-dir") {
            ++i;
            continue;
        }
        if (!a.empty() && a.front() != '-') return a;
    }
    return std::nullopt;
}

inline int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Cable-driven compliant joint: torque model, harmonic balance, Volterra series and simulation",
                 "cjoint"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    std::string config_path;
    std::string out_dir = ".";
    app.add_option("--config", config_path, "joint config file (unit-suffixed keys); default: reference joint");
    app.add_option("--out-dir", out_dir, "directory for CSV outputs and JSON sidecars");

    const std::vector<std::string> relative_choices{"none", "fstar"};
    const std::vector<std::string> model_choices{"exact", "cubic"};
    int max_order = 7;
    auto add_max_order = [&](CLI::App *sub) {
        sub->add_option("--max-order", max_order, "Volterra truncation order")->check(CLI::IsMember({1, 3, 5, 7}));
    };
    auto add_point = [&](CLI::App *sub, OperatingPointArgs &p) {
        sub->add_option("--freq-hz", p.freq_hz, "forcing frequency [Hz]")->check(CLI::PositiveNumber);
        sub->add_option("--tension-n", p.tension, "tension [N] (default F*)");
        sub->add_option("--relative-to", p.relative_to, "interpret tensions as multiples of F*")
            ->check(CLI::IsMember(relative_choices));
        sub->add_option("--phase-rad", p.phase, "forcing phase [rad]");
    };

    TorqueCurveArgs tc;
    auto *cmd_tc = app.add_subcommand("torque-curve", "exact and cubic torque over theta for a family of tensions");
    cmd_tc->add_option("--tensions", tc.tensions, "comma-separated tensions (default 0.5,0.9,1.0,1.5 F*)")
        ->delimiter(',');
    cmd_tc->add_option("--relative-to", tc.relative_to, "interpret tensions as multiples of F*")
        ->check(CLI::IsMember(relative_choices));
    cmd_tc->add_option("--theta-max", tc.theta_max, "half-width of the angle range [rad]");
    cmd_tc->add_option("--points", tc.points, "angle samples per curve");

    TaylorArgs ta;
    auto *cmd_ta = app.add_subcommand("taylor", "fitted odd Taylor coefficients c1..c7");
    cmd_ta->add_option("--tensions", ta.tensions, "comma-separated tensions (default 0.1..1.5 N)")->delimiter(',');
    cmd_ta->add_option("--tension-n", ta.tensions, "single tension [N]");
    cmd_ta->add_option("--relative-to", ta.relative_to, "interpret tensions as multiples of F*")
        ->check(CLI::IsMember(relative_choices));
    cmd_ta->add_option("--window", ta.window, "fit half-window [rad]")->check(CLI::PositiveNumber);

    ErrorMapArgs em;
    auto *cmd_em = app.add_subcommand("error-map", "cubic-model torque error over (F, theta) and validity angle");
    cmd_em->add_option("--grid", em.grid, "F x theta grid, NxM");
    cmd_em->add_option("--delta-f", em.delta_F, "force resolution [N]")->check(CLI::PositiveNumber);
    cmd_em->add_option("--f-max-rel", em.f_max_rel, "upper tension as a multiple of F*")->check(CLI::PositiveNumber);

    SurfaceArgs sa;
    auto add_surface = [&](CLI::App *sub) {
        sub->add_option("--grid", sa.grid, "F x Omega grid, NxM");
        sub->add_flag("--surrogate", sa.surrogate, "force a = 0 at every tension");
        sub->add_option("--f-max-rel", sa.f_max_rel, "upper tension as a multiple of F*")->check(CLI::PositiveNumber);
        sub->add_option("--freq-max-hz", sa.freq_max_hz, "upper forcing frequency [Hz]")->check(CLI::PositiveNumber);
    };
    auto *cmd_hb = app.add_subcommand("hb-surface", "harmonic-balance amplitude over the (F, Omega) plane");
    add_surface(cmd_hb);
    auto *cmd_ml = app.add_subcommand("maxima-line", "tension of maximum amplitude per forcing frequency");
    add_surface(cmd_ml);

    OperatingPointArgs vr;
    auto *cmd_vr = app.add_subcommand("volterra-response", "Volterra output spectrum for a single-tone input");
    add_point(cmd_vr, vr);
    add_max_order(cmd_vr);

    SimulateArgs si;
    auto *cmd_si = app.add_subcommand("simulate", "time-domain simulation of the forced joint");
    add_point(cmd_si, si.point);
    cmd_si->add_option("--model", si.model, "torque law")->check(CLI::IsMember(model_choices));
    cmd_si->add_option("--t-end", si.t_end, "end time [s]")->check(CLI::PositiveNumber);
    cmd_si->add_option("--abs-tol", si.abs_tol, "absolute tolerance")->check(CLI::PositiveNumber);
    cmd_si->add_option("--rel-tol", si.rel_tol, "relative tolerance")->check(CLI::PositiveNumber);
    cmd_si->add_option("--theta0", si.theta0, "initial angle [rad]");
    cmd_si->add_flag("--envelope", si.envelope, "also write the post-transient envelope");

    CompareArgs co;
    auto *cmd_co = app.add_subcommand("compare", "harmonic balance vs Volterra vs simulation along F");
    cmd_co->add_option("--freq-hz", co.freq_hz, "forcing frequency [Hz]")->check(CLI::PositiveNumber);
    cmd_co->add_option("--points", co.points, "tensions in the cut");
    cmd_co->add_option("--f-lo-rel", co.f_lo_rel, "lower tension as a multiple of F*")->check(CLI::PositiveNumber);
    cmd_co->add_option("--f-hi-rel", co.f_hi_rel, "upper tension as a multiple of F*")->check(CLI::PositiveNumber);
    cmd_co->add_option("--model", co.model, "torque law for the simulation")->check(CLI::IsMember(model_choices));
    cmd_co->add_option("--abs-tol", co.abs_tol, "absolute tolerance")->check(CLI::PositiveNumber);
    cmd_co->add_option("--rel-tol", co.rel_tol, "relative tolerance")->check(CLI::PositiveNumber);
    add_max_order(cmd_co);

    auto *cmd_wf = app.add_subcommand("wake-forcing", "forcing (Q0, Omega, phi) from the config's [wake] section");

    for (auto *sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (const auto word = leading_word(argc, argv); word && !app.get_subcommand_no_throw(*word)) {
            err << "error: unknown subcommand '" << *word << "'\n" << app.help();
            return 2;
        }
        return app.exit(e, out, err);
    }

    try {
        LoadedConfig cfg = config_path.empty() ? reference_config() : load_config(config_path);
        const auto *sub = app.get_subcommands().front();
        Run run(sub->get_name(), std::move(cfg), config_path.empty() ? "<reference>" : config_path, out_dir);
        if (sub == cmd_tc) torque_curve(run, tc);
        else if (sub == cmd_ta) taylor(run, ta);
        else if (sub == cmd_em) error_map(run, em);
        else if (sub == cmd_hb) hb_surface(run, sa);
        else if (sub == cmd_ml) maxima_line(run, sa);
        else if (sub == cmd_vr) volterra_response(run, vr, max_order);
        else if (sub == cmd_si) simulate_cmd(run, si);
        else if (sub == cmd_co) compare(run, co, max_order);
        else if (sub == cmd_wf) wake_forcing(run, out);
        for (const auto &p : run.write()) out << p.string() << '\n';
        return 0;
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace cjoint::cli
