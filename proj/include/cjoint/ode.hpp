// Dormand-Prince 5(4) with PI step-size control and the 4th-order continuous
// extension for dense output.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "cjoint/errors.hpp"

namespace cjoint::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Tolerances {
    double abs_tol = 1e-6;
    double rel_tol = 1e-6;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0; ///< 0 picks a starting step automatically
    std::size_t max_steps = 50'000'000;
};

/// Dense-output polynomial valid on one accepted step [t0, t0 + h].
template <std::size_t N>
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    std::array<State<N>, 5> r{};

    State<N> operator()(double t) const {
        const double s = (t - t0) / h;
        const double s1 = 1.0 - s;
        State<N> y;
        for (std::size_t i = 0; i < N; ++i) {
            y[i] = r[0][i] + s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i])));
        }
        return y;
    }
};

struct IntegrationStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// Integrate y' = f(t, y) from t0 to t1, calling `on_step(const DenseStep&)`
/// after each accepted step.
template <std::size_t N, typename Rhs, typename OnStep>
IntegrationStats integrate(Rhs &&f, double t0, double t1, State<N> y, const Tolerances &tol, OnStep &&on_step) {
    // Butcher tableau.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                     a76 = 11.0 / 84;
    // Error coefficients: 5th-order minus embedded 4th-order weights.
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    // Continuous extension.
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
    // PI controller (Hairer & Wanner, dopri5 defaults).
    constexpr double safety = 0.9, fac_min = 0.2, fac_max = 10.0, beta = 0.04, alpha = 0.2 - 0.75 * beta;

    IntegrationStats stats;
    double t = t0;
    State<N> k1 = f(t, y);
    auto err_norm_of = [&](const State<N> &a, const State<N> &b, const State<N> &e) {
        double acc = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = tol.abs_tol + tol.rel_tol * std::max(std::abs(a[i]), std::abs(b[i]));
            acc += (e[i] / sc) * (e[i] / sc);
        }
        return std::sqrt(acc / static_cast<double>(N));
    };

    double h = tol.initial_step;
    if (h <= 0.0) {
        // Hairer's starting-step heuristic, first-order version.
        const double d0 = err_norm_of(y, y, y);
        const double d1n = err_norm_of(y, y, k1);
        h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    }
    h = std::min({h, tol.max_step, t1 - t0});
    double err_prev = 1e-4;

    while (t < t1) {
        if (stats.accepted + stats.rejected >= tol.max_steps) {
            throw IntegrationError("integrate: step budget exhausted at t = " + std::to_string(t));
        }
        const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
        if (t1 - t <= h_min) break;
        if (h < h_min) {
            throw IntegrationError("integrate: step size underflow at t = " + std::to_string(t));
        }
        const bool last = t + h >= t1;
        if (last) h = t1 - t;

        State<N> tmp;
        auto stage = [&](auto &&combine) {
            for (std::size_t i = 0; i < N; ++i) tmp[i] = combine(i);
        };
        stage([&](std::size_t i) { return y[i] + h * a21 * k1[i]; });
        const State<N> k2 = f(t + c2 * h, tmp);
        stage([&](std::size_t i) { return y[i] + h * (a31 * k1[i] + a32 * k2[i]); });
        const State<N> k3 = f(t + c3 * h, tmp);
        stage([&](std::size_t i) { return y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]); });
        const State<N> k4 = f(t + c4 * h, tmp);
        stage([&](std::size_t i) { return y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]); });
        const State<N> k5 = f(t + c5 * h, tmp);
        stage([&](std::size_t i) {
            return y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        });
        const State<N> k6 = f(t + h, tmp);
        State<N> y_new;
        for (std::size_t i = 0; i < N; ++i) {
            y_new[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        }
        const State<N> k7 = f(t + h, y_new);
        State<N> err;
        for (std::size_t i = 0; i < N; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        }
        const double err_norm = err_norm_of(y, y_new, err);
        if (!std::isfinite(err_norm)) {
            throw IntegrationError("integrate: non-finite state at t = " + std::to_string(t));
        }

        if (err_norm <= 1.0) {
            DenseStep<N> dense;
            dense.t0 = t;
            dense.h = h;
            for (std::size_t i = 0; i < N; ++i) {
                const double dy = y_new[i] - y[i];
                const double bspl = h * k1[i] - dy;
                dense.r[0][i] = y[i];
                dense.r[1][i] = dy;
                dense.r[2][i] = bspl;
                dense.r[3][i] = dy - h * k7[i] - bspl;
                dense.r[4][i] =
                    h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            t = last ? t1 : t + h;
            y = y_new;
            k1 = k7;
            ++stats.accepted;
            on_step(dense);

            const double e = std::max(err_norm, 1e-10);
            double fac = safety * std::pow(e, -alpha) * std::pow(err_prev, beta);
            fac = std::clamp(fac, fac_min, fac_max);
            err_prev = e;
            h = std::min(h * fac, tol.max_step);
        } else {
            ++stats.rejected;
            const double fac = std::max(fac_min, safety * std::pow(err_norm, -alpha));
            h *= fac;
        }
    }
    return stats;
}

} // namespace cjoint::ode
