#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "cjoint/ode.hpp"

using namespace cjoint;

namespace {

// x'' + 2 c x' + w0^2 x = 0, x(0) = 1, x'(0) = 0.
struct DampedOscillator {
    double c = 0.1;
    double w0 = 2.0;

    double wd() const { return std::sqrt(w0 * w0 - c * c); }
    double x(double t) const { return std::exp(-c * t) * (std::cos(wd() * t) + c / wd() * std::sin(wd() * t)); }
    double v(double t) const { return -std::exp(-c * t) * (w0 * w0 / wd()) * std::sin(wd() * t); }

    ode::State<2> operator()(double, const ode::State<2> &y) const {
        return {y[1], -2.0 * c * y[1] - w0 * w0 * y[0]};
    }
};

} // namespace

TEST(Dopri5, DampedOscillatorEndpoint) {
    const DampedOscillator osc;
    ode::Tolerances tol;
    tol.abs_tol = 1e-11;
    tol.rel_tol = 1e-11;
    ode::State<2> last{};
    double t_last = 0.0;
    const auto stats = ode::integrate<2>(osc, 0.0, 10.0, ode::State<2>{1.0, 0.0}, tol, [&](const ode::DenseStep<2> &s) {
        t_last = s.t0 + s.h;
        last = s(t_last);
    });
    EXPECT_DOUBLE_EQ(t_last, 10.0);
    EXPECT_NEAR(last[0], osc.x(10.0), 1e-9);
    EXPECT_NEAR(last[1], osc.v(10.0), 1e-9);
    EXPECT_GT(stats.accepted, 10u);
}

TEST(Dopri5, DenseOutputBetweenSteps) {
    const DampedOscillator osc;
    ode::Tolerances tol;
    tol.abs_tol = 1e-10;
    tol.rel_tol = 1e-10;
    double worst = 0.0;
    ode::integrate<2>(osc, 0.0, 8.0, ode::State<2>{1.0, 0.0}, tol, [&](const ode::DenseStep<2> &s) {
        for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const double t = s.t0 + frac * s.h;
            worst = std::max(worst, std::abs(s(t)[0] - osc.x(t)));
        }
    });
    EXPECT_LT(worst, 1e-8);
}

TEST(Dopri5, ToleranceControlsError) {
    auto f = [](double, const ode::State<1> &y) { return ode::State<1>{y[0]}; };
    double prev_err = 1.0;
    for (double eps : {1e-4, 1e-7, 1e-10}) {
        ode::Tolerances tol;
        tol.abs_tol = eps;
        tol.rel_tol = eps;
        double end = 0.0;
        ode::integrate<1>(f, 0.0, 2.0, ode::State<1>{1.0}, tol, [&](const ode::DenseStep<1> &s) { end = s(s.t0 + s.h)[0]; });
        const double err = std::abs(end - std::exp(2.0));
        EXPECT_LT(err, prev_err);
        EXPECT_LT(err, 1e3 * eps * std::exp(2.0));
        prev_err = err;
    }
}

TEST(Dopri5, MaxStepIsRespected) {
    const DampedOscillator osc;
    ode::Tolerances tol;
    tol.max_step = 0.01;
    ode::integrate<2>(osc, 0.0, 1.0, ode::State<2>{1.0, 0.0}, tol,
                      [&](const ode::DenseStep<2> &s) { EXPECT_LE(s.h, 0.01 * (1.0 + 1e-12)); });
}

TEST(Dopri5, NonFiniteStateFails) {
    auto f = [](double, const ode::State<1> &) { return ode::State<1>{std::numeric_limits<double>::quiet_NaN()}; };
    EXPECT_THROW(ode::integrate<1>(f, 0.0, 1.0, ode::State<1>{1.0}, ode::Tolerances{}, [](const auto &) {}),
                 IntegrationError);
}

TEST(Dopri5, FiniteTimeBlowUpFails) {
    // y' = y^2, y(0) = 1 blows up at t = 1.
    auto f = [](double, const ode::State<1> &y) { return ode::State<1>{y[0] * y[0]}; };
    EXPECT_THROW(ode::integrate<1>(f, 0.0, 2.0, ode::State<1>{1.0}, ode::Tolerances{}, [](const auto &) {}),
                 IntegrationError);
}

TEST(Dopri5, StepBudget) {
    const DampedOscillator osc;
    ode::Tolerances tol;
    tol.max_step = 1e-3;
    tol.max_steps = 10;
    EXPECT_THROW(ode::integrate<2>(osc, 0.0, 1.0, ode::State<2>{1.0, 0.0}, tol, [](const auto &) {}),
                 IntegrationError);
}
