// Time-domain integration of the forced joint and steady-state amplitude
// extraction.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cjoint/core_model.hpp"
#include "cjoint/errors.hpp"
#include "cjoint/harmonic_balance.hpp"
#include "cjoint/ode.hpp"
#include "cjoint/signal_analysis.hpp"

namespace cjoint {

enum class TorqueModel {
    exact, ///< full cable-geometry torque law
    cubic, ///< kappa theta + alpha theta^3
};

inline const char *to_string(TorqueModel m) { return m == TorqueModel::exact ? "exact" : "cubic"; }

inline TorqueModel parse_torque_model(const std::string &s) {
    if (s == "exact") return TorqueModel::exact;
    if (s == "cubic") return TorqueModel::cubic;
    throw std::invalid_argument("unknown torque model '" + s + "' (expected exact|cubic)");
}

inline constexpr double kDefaultTransientPeriods = 20.0;
inline constexpr double kDefaultTransientDecays = 10.0; // in units of 1/zeta
inline constexpr int kDefaultAnalysisPeriods = 16;
inline constexpr int kMinSamplesPerPeriod = 64;
inline constexpr double kMinSteadyPeriods = 10.0;
inline constexpr double kMaxEnvelopeSpread = 0.05;

struct SimConfig {
    double abs_tol = 1e-6;
    double rel_tol = 1e-6;
    std::optional<double> t_end;         ///< default: transient_cut + 16 periods
    std::optional<double> transient_cut; ///< default: max(10/zeta, 20 periods), rounded up to whole periods
    std::optional<double> max_step;      ///< default: period / 8
    TorqueModel model = TorqueModel::exact;
    int samples_per_period = kMinSamplesPerPeriod;
    double theta0 = 0.0;
    double theta_dot0 = 0.0;
};

/// SimConfig with every default filled in for a given forcing and damping.
struct ResolvedSimConfig {
    double abs_tol = 0.0;
    double rel_tol = 0.0;
    double t_end = 0.0;
    double transient_cut = 0.0;
    double max_step = 0.0;
    double dt = 0.0;
    int samples_per_period = 0;
    double theta0 = 0.0;
    double theta_dot0 = 0.0;
};

inline ResolvedSimConfig resolve(const SimConfig &cfg, const Forcing &forcing, double zeta) {
    validate(forcing);
    if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0)) {
        throw std::invalid_argument("sim config: tolerances must be > 0");
    }
    if (cfg.samples_per_period < kMinSamplesPerPeriod) {
        throw std::invalid_argument("sim config: need at least 64 samples per forcing period");
    }
    const double T = forcing.period();
    ResolvedSimConfig r;
    r.abs_tol = cfg.abs_tol;
    r.rel_tol = cfg.rel_tol;
    r.samples_per_period = cfg.samples_per_period;
    r.dt = T / cfg.samples_per_period;
    if (cfg.transient_cut) {
        r.transient_cut = *cfg.transient_cut;
    } else {
        double cut = kDefaultTransientPeriods * T;
        if (zeta > 0.0) cut = std::max(cut, kDefaultTransientDecays / zeta);
        r.transient_cut = std::ceil(cut / T - 1e-9) * T;
    }
    r.t_end = cfg.t_end ? *cfg.t_end : r.transient_cut + kDefaultAnalysisPeriods * T;
    if (!(r.transient_cut >= 0.0 && r.transient_cut < r.t_end)) {
        throw std::invalid_argument("sim config: need 0 <= transient_cut < t_end");
    }
    r.max_step = cfg.max_step ? *cfg.max_step : T / 8.0;
    if (!(r.max_step > 0.0)) throw std::invalid_argument("sim config: max_step must be > 0");
    r.theta0 = cfg.theta0;
    r.theta_dot0 = cfg.theta_dot0;
    return r;
}

struct Trajectory {
    std::vector<double> times;     ///< [s], uniform grid from 0
    std::vector<double> theta;     ///< [rad]
    std::vector<double> theta_dot; ///< [rad/s]
    Forcing forcing;
    std::string model;
    ResolvedSimConfig config;
    ode::IntegrationStats stats;
};

namespace detail {

template <typename Restoring>
Trajectory run_simulation(Restoring &&restoring, double zeta, const Forcing &forcing, const SimConfig &cfg,
                          std::string model_tag) {
    const auto rc = resolve(cfg, forcing, zeta);
    Trajectory traj;
    traj.forcing = forcing;
    traj.model = std::move(model_tag);
    traj.config = rc;

    const auto n_samples = static_cast<std::size_t>(std::floor(rc.t_end / rc.dt + 1e-9)) + 1;
    traj.times.reserve(n_samples);
    traj.theta.reserve(n_samples);
    traj.theta_dot.reserve(n_samples);

    auto rhs = [&](double t, const ode::State<2> &y) {
        return ode::State<2>{y[1], -zeta * y[1] - restoring(y[0]) + forcing.Q0 * std::sin(forcing.Omega * t + forcing.phi)};
    };
    ode::Tolerances tol;
    tol.abs_tol = rc.abs_tol;
    tol.rel_tol = rc.rel_tol;
    tol.max_step = rc.max_step;

    std::size_t next = 0;
    auto push = [&](double t, const ode::State<2> &y) {
        if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
            throw IntegrationError("simulate: non-finite state at t = " + std::to_string(t));
        }
        traj.times.push_back(t);
        traj.theta.push_back(y[0]);
        traj.theta_dot.push_back(y[1]);
    };
    push(0.0, {rc.theta0, rc.theta_dot0});
    next = 1;
    auto on_step = [&](const ode::DenseStep<2> &step) {
        const double end = step.t0 + step.h;
        while (next < n_samples) {
            const double t = rc.dt * static_cast<double>(next);
            if (t > end * (1.0 + 1e-12)) break;
            push(t, step(t));
            ++next;
        }
    };
    traj.stats = ode::integrate<2>(rhs, 0.0, rc.dt * static_cast<double>(n_samples - 1),
                                   ode::State<2>{rc.theta0, rc.theta_dot0}, tol, on_step);
    if (traj.times.size() != n_samples) {
        throw IntegrationError("simulate: dense output did not cover the sample grid");
    }
    return traj;
}

} // namespace detail

/// Integrate theta'' = -zeta theta' - tau(theta, F)/I + Q0 sin(Omega t + phi)
/// with the exact or cubic torque law. Samples lie on t_i = i T / samples_per_period.
inline Trajectory simulate(const JointParams &joint, double F, const Forcing &forcing, const SimConfig &cfg = {}) {
    validate(joint);
    if (cfg.model == TorqueModel::exact) {
        if (!(F >= 0.0)) throw std::invalid_argument("simulate: tension must be >= 0");
        const double inv_i = 1.0 / joint.inertia;
        return detail::run_simulation([&](double th) { return torque(th, F, joint) * inv_i; }, joint.zeta, forcing,
                                      cfg, "exact");
    }
    const auto c = duffing_coeffs(F, joint);
    return detail::run_simulation([&](double th) { return c.k * th + c.a * th * th * th; }, c.zeta, forcing, cfg,
                                  "cubic");
}

/// Same integration for an arbitrary Duffing reduction (e.g. the a = 0 surrogate).
inline Trajectory simulate_duffing(const DuffingCoeffs &c, const Forcing &forcing, const SimConfig &cfg = {}) {
    validate(c);
    return detail::run_simulation([&](double th) { return c.k * th + c.a * th * th * th; }, c.zeta, forcing, cfg,
                                  "duffing");
}

/// Index of the first sample at or after the transient cut.
inline std::size_t steady_first_index(const Trajectory &traj) {
    return static_cast<std::size_t>(std::ceil(traj.config.transient_cut / traj.config.dt - 1e-9));
}

/// Post-transient part of a trajectory as a uniform signal, cut to whole
/// forcing periods (the sample at t_end repeats the phase of the first).
inline SampledSignal steady_segment(const Trajectory &traj) {
    const double dt = traj.config.dt;
    const auto first = steady_first_index(traj);
    if (first >= traj.theta.size()) throw std::invalid_argument("steady_segment: transient covers the whole record");
    if (traj.config.samples_per_period <= 0) throw std::invalid_argument("steady_segment: samples_per_period not set");
    const auto spp = static_cast<std::size_t>(traj.config.samples_per_period);
    const std::size_t count = (traj.theta.size() - first) / spp * spp;
    if (count == 0) throw std::invalid_argument("steady_segment: less than one forcing period after the transient");
    const auto begin = traj.theta.begin() + static_cast<std::ptrdiff_t>(first);
    return SampledSignal{std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(count)), dt};
}

struct SteadyStateEstimate {
    double amplitude = 0.0;
    double spread = 0.0; ///< (max - min) / median of the per-period envelope means
    std::vector<double> envelope;
    std::size_t guard = 0; ///< samples dropped at each end of `envelope`
};

/// Envelope-based steady amplitude with its per-period spread. Does not throw
/// on a large spread; see steady_state_amplitude.
inline SteadyStateEstimate estimate_steady_state(const Trajectory &traj, const Forcing &forcing) {
    const auto seg = steady_segment(traj);
    const double T = forcing.period();
    if (seg.duration() < kMinSteadyPeriods * T * (1.0 - 1e-9)) {
        throw std::invalid_argument("steady_state_amplitude: need at least 10 forcing periods after the transient");
    }
    SteadyStateEstimate est;
    est.envelope = analytic_envelope(seg);
    const auto inner = interior(est.envelope);
    est.guard = static_cast<std::size_t>(inner.data() - est.envelope.data());
    est.amplitude = median(inner);

    const auto per_period = static_cast<std::size_t>(std::llround(T / seg.dt));
    std::vector<double> means;
    for (std::size_t start = 0; start + per_period <= inner.size(); start += per_period) {
        double acc = 0.0;
        for (std::size_t i = 0; i < per_period; ++i) acc += inner[start + i];
        means.push_back(acc / static_cast<double>(per_period));
    }
    if (!means.empty() && est.amplitude > 0.0) {
        const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
        est.spread = (*hi - *lo) / est.amplitude;
    }
    return est;
}

/// Median analytic-signal envelope of the post-transient response with 10%
/// guard bands removed. Throws NotSteadyError when the per-period envelope
/// means differ by more than 5%.
inline double steady_state_amplitude(const Trajectory &traj, const Forcing &forcing) {
    const auto est = estimate_steady_state(traj, forcing);
    if (est.spread > kMaxEnvelopeSpread) {
        throw NotSteadyError("steady_state_amplitude: envelope spread " + std::to_string(est.spread) +
                             " exceeds 5% (response not periodic)");
    }
    return est.amplitude;
}

inline double steady_state_amplitude(const Trajectory &traj) { return steady_state_amplitude(traj, traj.forcing); }

} // namespace cjoint
