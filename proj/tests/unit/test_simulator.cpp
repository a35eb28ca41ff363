#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cjoint/simulator.hpp"
#include "cjoint/volterra.hpp"

using namespace cjoint;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Forcing reference_forcing(double hz) { return Forcing{reference_specific_forcing(), kTwoPi * hz, 0.0}; }

Trajectory synthetic(const Forcing &f, double A, double beat = 0.0) {
    Trajectory t;
    t.forcing = f;
    t.config.dt = f.period() / 64.0;
    t.config.samples_per_period = 64;
    t.config.transient_cut = 0.0;
    const int n = 64 * 20;
    for (int i = 0; i < n; ++i) {
        const double time = t.config.dt * i;
        t.times.push_back(time);
        t.theta.push_back(A * (1.0 + beat * std::sin(0.1 * f.Omega * time)) * std::sin(f.Omega * time));
        t.theta_dot.push_back(0.0);
    }
    return t;
}

} // namespace

TEST(Simulate, RestStaysAtRest) {
    const auto j = reference_joint();
    const auto traj = simulate(j, 0.5, Forcing{0.0, kTwoPi, 0.0});
    for (double th : traj.theta) EXPECT_EQ(th, 0.0);
}

TEST(Simulate, UniformSampleGrid) {
    const auto j = reference_joint();
    const auto f = reference_forcing(1.5);
    const auto traj = simulate(j, 0.5, f);
    ASSERT_GT(traj.times.size(), 64u * 16u);
    const double dt = f.period() / 64.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        EXPECT_DOUBLE_EQ(traj.times[i], dt * static_cast<double>(i));
        EXPECT_TRUE(std::isfinite(traj.theta[i]));
    }
    EXPECT_EQ(traj.model, "exact");
    EXPECT_NEAR(traj.config.t_end, traj.config.transient_cut + 16.0 * f.period(), 1e-9);
}

TEST(Simulate, DefaultTransientCut) {
    const auto j = reference_joint();
    // 20 periods at 1.5 Hz (13.3 s) exceed 10 / zeta (1.4 s).
    const auto r15 = resolve(SimConfig{}, reference_forcing(1.5), j.zeta);
    EXPECT_NEAR(r15.transient_cut, 20.0 / 1.5, 1e-9);
    const auto r_fast = resolve(SimConfig{}, Forcing{1.0, kTwoPi * 100.0, 0.0}, j.zeta);
    EXPECT_GE(r_fast.transient_cut, 10.0 / j.zeta);
    EXPECT_NEAR(std::remainder(r_fast.transient_cut, 0.01), 0.0, 1e-9);
}

TEST(Simulate, ConfigValidation) {
    const auto f = reference_forcing(1.5);
    SimConfig c;
    c.abs_tol = 0.0;
    EXPECT_THROW(resolve(c, f, 1.0), std::invalid_argument);
    c = SimConfig{};
    c.samples_per_period = 32;
    EXPECT_THROW(resolve(c, f, 1.0), std::invalid_argument);
    c = SimConfig{};
    c.t_end = 1.0;
    c.transient_cut = 2.0;
    EXPECT_THROW(resolve(c, f, 1.0), std::invalid_argument);
    EXPECT_THROW(resolve(SimConfig{}, Forcing{1.0, 0.0, 0.0}, 1.0), std::invalid_argument);
    EXPECT_THROW(simulate(reference_joint(), -0.1, f), std::invalid_argument);
}

TEST(Simulate, FreeDecayMatchesDampedSolution) {
    // At F* the cubic coefficient vanishes, so the free response is the
    // linear damped oscillator theta = A0 e^{-zeta t/2} (cos wd t + zeta/(2 wd) sin wd t).
    const auto j = reference_joint();
    const double fs = critical_tension(j);
    const Forcing f{0.0, kTwoPi * 1.5, 0.0};
    SimConfig cfg;
    cfg.model = TorqueModel::cubic;
    cfg.theta0 = 0.05;
    cfg.transient_cut = 0.0;
    cfg.t_end = 1.0;
    cfg.abs_tol = 1e-10;
    cfg.rel_tol = 1e-10;
    cfg.samples_per_period = 256;
    const auto traj = simulate(j, fs, f, cfg);
    const auto c = duffing_coeffs(fs, j);
    const double wd = std::sqrt(c.k - 0.25 * c.zeta * c.zeta);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const double expected =
            0.05 * std::exp(-0.5 * c.zeta * t) * (std::cos(wd * t) + 0.5 * c.zeta / wd * std::sin(wd * t));
        EXPECT_NEAR(traj.theta[i], expected, 1e-8) << "t = " << t;
    }
}

TEST(Simulate, LinearSurrogateSteadyAmplitude) {
    const auto j = reference_joint();
    for (double hz : {0.5, 1.5, 3.0}) {
        const auto f = reference_forcing(hz);
        auto c = duffing_coeffs(0.4, j);
        c.a = 0.0;
        const auto traj = simulate_duffing(c, f);
        EXPECT_NEAR(steady_state_amplitude(traj), f.Q0 * std::abs(h1(f.Omega, c)), 5e-3 * f.Q0 * std::abs(h1(f.Omega, c)));
    }
}

TEST(Simulate, PhaseShiftLeavesAmplitude) {
    const auto j = reference_joint();
    auto f = reference_forcing(1.5);
    const double a0 = steady_state_amplitude(simulate(j, 0.4, f));
    f.phi = std::numbers::pi;
    const auto shifted = simulate(j, 0.4, f);
    EXPECT_NEAR(steady_state_amplitude(shifted), a0, 1e-6);
}

TEST(Simulate, ExactAndCubicAgreeAtSmallAmplitude) {
    const auto j = reference_joint();
    const auto f = reference_forcing(1.5);
    SimConfig exact, cubic;
    cubic.model = TorqueModel::cubic;
    const auto te = simulate(j, 0.4, f, exact);
    const auto tc = simulate(j, 0.4, f, cubic);
    ASSERT_EQ(te.theta.size(), tc.theta.size());
    double peak = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < te.theta.size(); ++i) {
        peak = std::max(peak, std::abs(te.theta[i]));
        diff = std::max(diff, std::abs(te.theta[i] - tc.theta[i]));
    }
    ASSERT_LT(peak, *validity_angle(0.4, j));
    EXPECT_LT(diff, 1e-3 * peak);
}

TEST(Simulate, ToleranceHalvingIsStable) {
    const auto j = reference_joint();
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> F(0.3, 0.9), hz(1.0, 3.0);
    for (int i = 0; i < 4; ++i) {
        const auto f = reference_forcing(hz(rng));
        const double tension = F(rng);
        SimConfig c1, c2;
        c2.abs_tol = c2.rel_tol = 0.5e-6;
        const double a1 = steady_state_amplitude(simulate(j, tension, f, c1));
        const double a2 = steady_state_amplitude(simulate(j, tension, f, c2));
        EXPECT_LT(std::abs(a1 - a2), 1e-3 * a2);
    }
}

TEST(SteadyState, SegmentSpansWholePeriods) {
    const auto j = reference_joint();
    const auto f = reference_forcing(1.5);
    const auto traj = simulate(j, 0.4, f);
    const auto seg = steady_segment(traj);
    EXPECT_EQ(seg.samples.size(), 16u * 64u);
    EXPECT_EQ(seg.samples.front(), traj.theta[steady_first_index(traj)]);
}

TEST(SteadyState, ThirdHarmonicMatchesVolterraLine) {
    // Hardening operating points of the cubic model; the 3 Omega line of the
    // output spectrum converts to a time amplitude as |X| / pi.
    const auto j = reference_joint();
    const double fs = critical_tension(j);
    SimConfig cfg;
    cfg.model = TorqueModel::cubic;
    cfg.abs_tol = cfg.rel_tol = 1e-11;
    for (double rel_F : {0.1, 0.2, 0.3}) {
        for (double hz : {0.5, 1.0, 1.5}) {
            const auto f = reference_forcing(hz);
            const double F = rel_F * fs;
            const auto h = harmonic_amplitudes(steady_segment(simulate(j, F, f, cfg)), f.Omega, 3);
            const auto spec = multi_tone_spectrum(duffing_coeffs(F, j), single_tone_lines(f));
            const double line3 = std::abs(spec.line(3)) / std::numbers::pi;
            EXPECT_NEAR(h[2], line3, 0.05 * line3) << "F = " << F << " hz = " << hz;
            EXPECT_NEAR(h[1], 0.0, 1e-3 * h[0]);
        }
    }
}

TEST(SteadyState, PureToneRecovery) {
    const auto f = reference_forcing(1.5);
    EXPECT_NEAR(steady_state_amplitude(synthetic(f, 0.03), f), 0.03, 1e-4);
}

TEST(SteadyState, BeatingSignalIsNotSteady) {
    const auto f = reference_forcing(1.5);
    EXPECT_THROW(steady_state_amplitude(synthetic(f, 0.03, 0.3), f), NotSteadyError);
}

TEST(SteadyState, NeedsTenPeriods) {
    const auto j = reference_joint();
    const auto f = reference_forcing(1.5);
    SimConfig c;
    c.transient_cut = 0.0;
    c.t_end = 5.0 * f.period();
    EXPECT_THROW(steady_state_amplitude(simulate(j, 0.4, f, c)), std::invalid_argument);
}

TEST(SteadyState, HarmonicBalanceAgreesWithSimulation) {
    // A = sqrt(u) of the largest stable root against the simulated amplitude
    // wherever the cubic model is valid.
    const auto j = reference_joint();
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> F(0.15, 1.5 * critical_tension(j)), hz(1.0, 3.0), q(0.25, 4.0);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        const double tension = F(rng);
        const Forcing f{q(rng) * reference_specific_forcing(), kTwoPi * hz(rng), 0.0};
        const auto roots = solve_amplitudes(duffing_coeffs(tension, j), f);
        double hb = 0.0;
        for (const auto &r : roots) {
            if (r.stable) hb = std::max(hb, r.amplitude);
        }
        const auto va = validity_angle(tension, j);
        if (va && hb >= *va) continue;
        ++checked;
        const double sim = steady_state_amplitude(simulate(j, tension, f));
        EXPECT_NEAR(hb, sim, 0.05 * sim) << "F = " << tension << " Omega = " << f.Omega << " Q0 = " << f.Q0;
    }
    EXPECT_GT(checked, 50);
}

TEST(TorqueModel, ParseRoundTrip) {
    EXPECT_EQ(parse_torque_model("exact"), TorqueModel::exact);
    EXPECT_EQ(parse_torque_model("cubic"), TorqueModel::cubic);
    EXPECT_STREQ(to_string(TorqueModel::cubic), "cubic");
    EXPECT_THROW(parse_torque_model("quintic"), std::invalid_argument);
}
