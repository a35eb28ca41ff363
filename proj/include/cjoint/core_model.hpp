// Cable-driven rotational compliant joint: exact torque law, odd polynomial
// reduction and tension-tuning analyses.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "cjoint/golden_section.hpp"

namespace cjoint {

/// Physical joint description in SI units.
///
/// `zeta` is the specific damping (1/s). Datasheets that quote zeta*I must be
/// divided by `inertia` before construction (see config.hpp).
struct JointParams {
    double r = 0.0;       ///< appendage radius [m]
    double d = 0.0;       ///< spring anchor distance [m]
    double K = 0.0;       ///< linear-spring stiffness [N/m]
    double inertia = 0.0; ///< moment of inertia [kg m^2]
    double zeta = 0.0;    ///< specific damping [1/s]
};

inline void validate(const JointParams &joint) {
    if (!(joint.r > 0.0)) throw std::invalid_argument("joint: r must be > 0");
    if (!(joint.d > joint.r)) throw std::invalid_argument("joint: d must be > r (degenerate geometry)");
    if (!(joint.K > 0.0)) throw std::invalid_argument("joint: K must be > 0");
    if (!(joint.inertia > 0.0)) throw std::invalid_argument("joint: inertia must be > 0");
    if (!(joint.zeta >= 0.0)) throw std::invalid_argument("joint: zeta must be >= 0");
}

/// Reference joint: r = 20.24 mm, d = 27.68 mm, K = 81 N/m, I = 3.1e-5 kg m^2,
/// zeta*I = 2.2e-4 N m s.
inline JointParams reference_joint() {
    constexpr double inertia = 3.1e-5;
    return JointParams{20.24e-3, 27.68e-3, 81.0, inertia, 2.2e-4 / inertia};
}

/// Specific forcing amplitude of the reference setup, Q0*I = 1e-4 N m.
inline double reference_specific_forcing() { return 1e-4 / reference_joint().inertia; }

struct DerivedGeometry {
    double epsilon = 0.0; ///< d - r [m]
    double S = 0.0;       ///< r * d [m^2]
};

inline DerivedGeometry derive_geometry(const JointParams &joint) {
    validate(joint);
    return DerivedGeometry{joint.d - joint.r, joint.r * joint.d};
}

/// Restoring torque [N m] at deflection `theta` [rad] and tension `F` [N].
///
///   tau = (K (q - eps) + F) / q * S sin(theta),  q = sqrt(eps^2 + 4 S sin^2(theta/2))
///
/// Odd in theta, and linear in F at fixed theta.
inline double torque(double theta, double F, const JointParams &joint) {
    if (!(F >= 0.0)) throw std::invalid_argument("torque: tension must be >= 0");
    const auto g = derive_geometry(joint);
    const double s_half = std::sin(0.5 * theta);
    const double q = std::sqrt(g.epsilon * g.epsilon + 4.0 * g.S * s_half * s_half);
    return (joint.K * (q - g.epsilon) + F) / q * g.S * std::sin(theta);
}

/// Closed-form linear torque coefficient kappa(F) = S F / eps [N m/rad].
inline double linear_coefficient(double F, const JointParams &joint) {
    const auto g = derive_geometry(joint);
    return g.S * F / g.epsilon;
}

/// Closed-form cubic torque coefficient alpha(F) [N m/rad^3].
inline double cubic_coefficient(double F, const JointParams &joint) {
    const auto g = derive_geometry(joint);
    // Written in the form that stays finite at F = 0:
    //   (S F/eps) [S/(2 eps^2) (eps K/F - 1) - 1/6]
    const double lead = g.S / g.epsilon;
    return lead * (g.S / (2.0 * g.epsilon * g.epsilon) * (g.epsilon * joint.K - F) - F / 6.0);
}

/// Cubic reduction of the torque: kappa theta + alpha theta^3.
inline double cubic_torque(double theta, double F, const JointParams &joint) {
    return linear_coefficient(F, joint) * theta + cubic_coefficient(F, joint) * theta * theta * theta;
}

/// Odd-power torque coefficients c1, c3, c5, c7 at one tension.
struct TaylorSeries {
    double tension = 0.0;
    std::array<double, 4> coeffs{}; ///< c1, c3, c5, c7 [N m/rad^n]
    double window = 0.0;            ///< half-width of the fit window [rad]

    double c1() const { return coeffs[0]; }
    double c3() const { return coeffs[1]; }
    double c5() const { return coeffs[2]; }
    double c7() const { return coeffs[3]; }

    double operator()(double theta) const {
        const double t2 = theta * theta;
        return theta * (coeffs[0] + t2 * (coeffs[1] + t2 * (coeffs[2] + t2 * coeffs[3])));
    }
};

inline constexpr double kDefaultTaylorWindow = 0.01;
inline constexpr int kTaylorFitNodes = 64;

/// Least-squares odd degree-7 fit of the exact torque on [-window, window].
///
/// Samples sit on the 64 Chebyshev-Gauss nodes, where T1, T3, T5, T7 are
/// discretely orthogonal, so the fit is a projection followed by a change of
/// basis. For small windows the result converges to the Taylor coefficients.
inline TaylorSeries taylor_coeffs(double F, const JointParams &joint,
                                  double window = kDefaultTaylorWindow) {
    if (!(F > 0.0)) throw std::invalid_argument("taylor_coeffs: tension must be > 0");
    if (!(window > 0.0)) throw std::invalid_argument("taylor_coeffs: window must be > 0");
    validate(joint);

    // Chebyshev coefficients b1, b3, b5, b7 in the scaled variable x = theta / window.
    std::array<double, 4> b{};
    for (int j = 0; j < kTaylorFitNodes; ++j) {
        const double angle = std::numbers::pi * (j + 0.5) / kTaylorFitNodes;
        const double x = std::cos(angle);
        const double f = torque(window * x, F, joint);
        for (int n = 0; n < 4; ++n) {
            b[n] += f * std::cos((2 * n + 1) * angle);
        }
    }
    for (double &v : b) v *= 2.0 / kTaylorFitNodes;

    // T1 = x, T3 = 4x^3 - 3x, T5 = 16x^5 - 20x^3 + 5x, T7 = 64x^7 - 112x^5 + 56x^3 - 7x
    const std::array<double, 4> mono{
        b[0] - 3.0 * b[1] + 5.0 * b[2] - 7.0 * b[3],
        4.0 * b[1] - 20.0 * b[2] + 56.0 * b[3],
        16.0 * b[2] - 112.0 * b[3],
        64.0 * b[3],
    };
    TaylorSeries out;
    out.tension = F;
    out.window = window;
    double scale = window;
    for (int n = 0; n < 4; ++n) {
        out.coeffs[n] = mono[n] / scale;
        scale *= window * window;
    }
    return out;
}

/// Tension at which the cubic coefficient vanishes:
///   F* = eps K / (eps^2 / (3 S) + 1)
inline double critical_tension(const JointParams &joint) {
    const auto g = derive_geometry(joint);
    return g.epsilon * joint.K / (g.epsilon * g.epsilon / (3.0 * g.S) + 1.0);
}

/// Largest deviation from the local linear law over |theta| <= theta_ref.
///
///   J(F) = max |tau(theta, F) - kappa(F) theta|
///
/// The deviation is odd, so only [0, theta_ref] is scanned; the best sample is
/// then polished with a golden-section search on its two neighbouring cells.
inline double linearity_objective(double F, const JointParams &joint, double theta_ref) {
    constexpr int kSamples = 2048;
    const double c1 = linear_coefficient(F, joint);
    auto deviation = [&](double theta) { return std::abs(torque(theta, F, joint) - c1 * theta); };
    const double h = theta_ref / kSamples;
    int best = 0;
    double best_val = 0.0;
    for (int i = 0; i <= kSamples; ++i) {
        const double v = deviation(i * h);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    const double lo = std::max(0.0, (best - 1) * h);
    const double hi = std::min(theta_ref, (best + 1) * h);
    if (hi > lo) {
        const auto polished =
            golden_section_minimize([&](double t) { return -deviation(t); }, lo, hi, 1e-10 * theta_ref);
        best_val = std::max(best_val, -polished.value);
    }
    return best_val;
}

struct TensionOptimum {
    double tension = 0.0;   ///< F0 [N]
    double objective = 0.0; ///< J(F0) [N m]
    GoldenSectionResult search;
};

/// Tension minimising the linearity objective, bracketed in [0.5 F*, 1.5 F*].
inline TensionOptimum optimal_linear_tension(const JointParams &joint, double theta_ref = 0.5) {
    if (!(theta_ref > 0.0)) throw std::invalid_argument("optimal_linear_tension: theta_ref must be > 0");
    const double f_star = critical_tension(joint);
    auto objective = [&](double F) { return linearity_objective(F, joint, theta_ref); };
    TensionOptimum out;
    out.search = golden_section_minimize(objective, 0.5 * f_star, 1.5 * f_star, 1e-6 * f_star, 200);
    out.tension = out.search.x;
    out.objective = out.search.value;
    return out;
}

struct ValidityConfig {
    double delta_F = 0.05; ///< force resolution [N]

    /// Reference torque error r * delta_F [N m].
    double reference_torque_error(const JointParams &joint) const { return joint.r * delta_F; }
};

inline constexpr double kValidityScanStep = 0.01;
inline constexpr double kValidityLimit = std::numbers::pi / 2.0;

/// Smallest theta > 0 at which |tau - (kappa theta + alpha theta^3)| reaches
/// r * delta_F.
///
/// Returns std::nullopt when no crossing exists below pi/2: the cubic model is
/// valid beyond pi/2 at this tension.
inline std::optional<double> validity_angle(double F, const JointParams &joint,
                                            const ValidityConfig &cfg = {}) {
    if (!(F > 0.0)) throw std::invalid_argument("validity_angle: tension must be > 0");
    if (!(cfg.delta_F > 0.0)) throw std::invalid_argument("validity_angle: delta_F must be > 0");
    const double dtau = cfg.reference_torque_error(joint);
    const double c1 = linear_coefficient(F, joint);
    const double c3 = cubic_coefficient(F, joint);
    auto excess = [&](double theta) {
        return std::abs(torque(theta, F, joint) - (c1 * theta + c3 * theta * theta * theta)) - dtau;
    };

    double lo = 0.0;
    double f_lo = excess(lo);
    while (lo < kValidityLimit) {
        const double hi = std::min(lo + kValidityScanStep, kValidityLimit);
        const double f_hi = excess(hi);
        if (f_lo < 0.0 && f_hi >= 0.0) {
            double a = lo;
            double b = hi;
            while (b - a > 1e-10) {
                const double m = 0.5 * (a + b);
                if (excess(m) < 0.0) {
                    a = m;
                } else {
                    b = m;
                }
            }
            return 0.5 * (a + b);
        }
        lo = hi;
        f_lo = f_hi;
    }
    return std::nullopt;
}

} // namespace cjoint
