// Periodic-response amplitudes of the Duffing reduction
//
//   theta'' + zeta theta' + k theta + a theta^3 = Q0 sin(Omega t + phi)
//
// via the single-harmonic amplitude polynomial, with fold stability and
// (F, Omega) sweeps.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cjoint/core_model.hpp"
#include "cjoint/errors.hpp"
#include "cjoint/golden_section.hpp"

namespace cjoint {

/// Reduced model per unit inertia.
struct DuffingCoeffs {
    double k = 0.0;    ///< specific stiffness [1/s^2]
    double a = 0.0;    ///< specific cubic coefficient [1/(s^2 rad^2)]; > 0 hardening, < 0 softening
    double zeta = 0.0; ///< specific damping [1/s]
};

inline void validate(const DuffingCoeffs &c) {
    if (!(c.k > 0.0)) throw std::invalid_argument("duffing coeffs: k must be > 0");
    if (!(c.zeta >= 0.0)) throw std::invalid_argument("duffing coeffs: zeta must be >= 0");
    if (!std::isfinite(c.a)) throw std::invalid_argument("duffing coeffs: a must be finite");
}

/// Harmonic drive Q0 sin(Omega t + phi).
struct Forcing {
    double Q0 = 0.0;    ///< specific torque amplitude [rad/s^2]
    double Omega = 0.0; ///< angular frequency [rad/s]
    double phi = 0.0;   ///< phase [rad]

    double period() const { return 2.0 * std::numbers::pi / Omega; }
};

inline void validate(const Forcing &f) {
    if (!(f.Q0 >= 0.0)) throw std::invalid_argument("forcing: Q0 must be >= 0");
    if (!(f.Omega > 0.0)) throw std::invalid_argument("forcing: Omega must be > 0");
}

/// k = kappa(F)/I, a = alpha(F)/I, zeta from the joint.
inline DuffingCoeffs duffing_coeffs(double F, const JointParams &joint) {
    if (!(F > 0.0)) throw std::invalid_argument("duffing_coeffs: tension must be > 0");
    return DuffingCoeffs{linear_coefficient(F, joint) / joint.inertia,
                         cubic_coefficient(F, joint) / joint.inertia, joint.zeta};
}

/// P(u) = p3 u^3 + p2 u^2 + p1 u + p0 in the squared amplitude u = A^2.
///
/// Identical to ((k - W^2 + 3/4 a u)^2 + zeta^2 W^2) u - Q0^2.
struct AmplitudePolynomial {
    double p3 = 0.0;
    double p2 = 0.0;
    double p1 = 0.0;
    double p0 = 0.0;

    double operator()(double u) const { return ((p3 * u + p2) * u + p1) * u + p0; }
    double derivative(double u) const { return (3.0 * p3 * u + 2.0 * p2) * u + p1; }
};

inline AmplitudePolynomial amplitude_polynomial(const DuffingCoeffs &c, const Forcing &f) {
    const double w2 = f.Omega * f.Omega;
    return AmplitudePolynomial{
        9.0 * c.a * c.a / 16.0,
        1.5 * (c.k - w2) * c.a,
        (w2 + c.zeta * c.zeta - 2.0 * c.k) * w2 + c.k * c.k,
        -f.Q0 * f.Q0,
    };
}

struct AmplitudeRoot {
    double amplitude = 0.0; ///< A = sqrt(u) [rad]
    bool stable = false;    ///< dP/du > 0 at the root
};

namespace detail {

// Root of a monotone stretch of P with P(lo) and P(hi) of opposite sign.
inline double bracketed_root(const AmplitudePolynomial &p, double lo, double hi) {
    double f_lo = p(lo);
    for (int it = 0; it < 400 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = p(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    double u = 0.5 * (lo + hi);
    // Newton polish, kept inside the final bracket.
    for (int it = 0; it < 3; ++it) {
        const double dp = p.derivative(u);
        if (dp == 0.0) break;
        const double next = u - p(u) / dp;
        if (!(next >= lo && next <= hi)) break;
        u = next;
    }
    return u;
}

// Real roots of the quadratic c2 x^2 + c1 x + c0 in ascending order.
inline std::vector<double> quadratic_roots(double c2, double c1, double c0) {
    std::vector<double> out;
    if (c2 == 0.0) {
        if (c1 != 0.0) out.push_back(-c0 / c1);
        return out;
    }
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) return out;
    const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
    if (q != 0.0) {
        out.push_back(q / c2);
        out.push_back(c0 / q);
    } else {
        out.push_back(0.0);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

/// All non-negative real roots u of P, ascending.
///
/// P' = 0 splits [0, inf) into monotone stretches; each stretch holds at most
/// one root, found by bisection. For u < 0 and Q0 > 0 P is strictly negative,
/// so no root is lost.
inline std::vector<double> amplitude_polynomial_roots(const AmplitudePolynomial &p) {
    std::vector<double> knots{0.0};
    for (double c : detail::quadratic_roots(3.0 * p.p3, 2.0 * p.p2, p.p1)) {
        if (c > 0.0 && std::isfinite(c)) knots.push_back(c);
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    std::vector<double> roots;
    auto add = [&](double u) {
        if (roots.empty() || u > roots.back()) roots.push_back(u);
    };
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const double lo = knots[i];
        const double f_lo = p(lo);
        if (f_lo == 0.0) {
            add(lo);
            continue;
        }
        double hi;
        if (i + 1 < knots.size()) {
            hi = knots[i + 1];
        } else {
            // Last stretch: P tends to +inf for p3 > 0 or to sign(p1) when p3 = 0.
            const double lead = p.p3 > 0.0 ? p.p3 : (p.p2 != 0.0 ? p.p2 : p.p1);
            if ((lead > 0.0) == (f_lo > 0.0)) continue;
            hi = std::max(2.0 * lo, 1e-300);
            int guard = 0;
            while ((p(hi) > 0.0) == (f_lo > 0.0)) {
                hi *= 2.0;
                if (++guard > 4000 || !std::isfinite(hi)) {
                    throw std::logic_error("amplitude_polynomial_roots: failed to bracket the outer root");
                }
            }
        }
        const double f_hi = p(hi);
        if (f_hi == 0.0) {
            // An interior knot is picked up as the next stretch's left end.
            if (i + 1 >= knots.size()) add(hi);
            continue;
        }
        if ((f_lo > 0.0) != (f_hi > 0.0)) add(detail::bracketed_root(p, lo, hi));
    }
    return roots;
}

/// Harmonic-balance amplitudes, ascending, each tagged with fold stability.
inline std::vector<AmplitudeRoot> solve_amplitudes(const DuffingCoeffs &c, const Forcing &f) {
    validate(c);
    validate(f);
    const auto p = amplitude_polynomial(c, f);
    if (p.p3 == 0.0 && p.p1 == 0.0) {
        throw ResonanceSingularity("solve_amplitudes: undamped linear resonance (zeta = 0, Omega^2 = k, a = 0)");
    }
    std::vector<AmplitudeRoot> out;
    for (double u : amplitude_polynomial_roots(p)) {
        out.push_back(AmplitudeRoot{std::sqrt(u), p.derivative(u) > 0.0});
    }
    if (f.Q0 > 0.0 && out.empty()) {
        throw std::logic_error("solve_amplitudes: P(0) < 0 with non-negative leading term must have a root");
    }
    return out;
}

/// Which Duffing coefficients a surface uses at each tension.
enum class StiffnessModel {
    cubic,            ///< k(F), a(F) from the closed forms
    linear_surrogate, ///< k(F) with a forced to 0
};

inline DuffingCoeffs surface_coeffs(double F, const JointParams &joint, StiffnessModel model) {
    auto c = duffing_coeffs(F, joint);
    if (model == StiffnessModel::linear_surrogate) c.a = 0.0;
    return c;
}

/// Largest stable amplitude and real-root count at one (F, Omega).
struct SurfaceCell {
    double amplitude = 0.0;
    int n_roots = 0;
    bool has_stable = false;
};

inline SurfaceCell surface_cell(double F, double Omega, double Q0, const JointParams &joint,
                                StiffnessModel model) {
    const auto roots = solve_amplitudes(surface_coeffs(F, joint, model), Forcing{Q0, Omega, 0.0});
    SurfaceCell cell;
    cell.n_roots = static_cast<int>(roots.size());
    for (const auto &r : roots) {
        if (r.stable && r.amplitude >= cell.amplitude) {
            cell.amplitude = r.amplitude;
            cell.has_stable = true;
        }
    }
    return cell;
}

/// Closed interval [lo, hi] sampled at `count` evenly spaced points.
struct GridRange {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;

    std::vector<double> points() const {
        if (count == 0 || !(lo > 0.0) || !(hi >= lo)) {
            throw std::invalid_argument("grid range: need count > 0 and 0 < lo <= hi");
        }
        std::vector<double> out(count);
        if (count == 1) {
            out[0] = hi;
            return out;
        }
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        }
        return out;
    }

    /// (0, hi] sampled as hi/count, 2 hi/count, ..., hi.
    static GridRange open_at_zero(double hi, std::size_t count) {
        return GridRange{hi / static_cast<double>(count), hi, count};
    }
};

inline constexpr std::size_t kDefaultSurfaceResolution = 200;
inline constexpr double kDefaultMaxFrequencyHz = 3.0;

struct AmplitudeSurface {
    std::vector<double> F_grid;     ///< tensions [N]
    std::vector<double> Omega_grid; ///< angular frequencies [rad/s]
    std::vector<double> amplitudes; ///< row-major (F index, Omega index) [rad]
    std::vector<int> multiplicity;  ///< real-root counts, same layout
    std::vector<char> stable;       ///< 1 when a stable root exists
    double Q0 = 0.0;
    StiffnessModel model = StiffnessModel::cubic;

    std::size_t index(std::size_t i, std::size_t j) const { return i * Omega_grid.size() + j; }
    double amplitude(std::size_t i, std::size_t j) const { return amplitudes[index(i, j)]; }
};

/// Largest stable harmonic-balance amplitude over an (F, Omega) grid.
inline AmplitudeSurface response_surface(const JointParams &joint, double Q0, const GridRange &F_range,
                                         const GridRange &Omega_range,
                                         StiffnessModel model = StiffnessModel::cubic) {
    validate(joint);
    AmplitudeSurface s;
    s.F_grid = F_range.points();
    s.Omega_grid = Omega_range.points();
    s.Q0 = Q0;
    s.model = model;
    const std::size_t n = s.F_grid.size() * s.Omega_grid.size();
    s.amplitudes.resize(n);
    s.multiplicity.resize(n);
    s.stable.resize(n);
    for (std::size_t i = 0; i < s.F_grid.size(); ++i) {
        for (std::size_t j = 0; j < s.Omega_grid.size(); ++j) {
            const auto cell = surface_cell(s.F_grid[i], s.Omega_grid[j], Q0, joint, model);
            s.amplitudes[s.index(i, j)] = cell.amplitude;
            s.multiplicity[s.index(i, j)] = cell.n_roots;
            s.stable[s.index(i, j)] = cell.has_stable ? 1 : 0;
        }
    }
    return s;
}

/// Default sweep: F in (0, 1.5 F*], Omega/2pi in (0, 3] Hz, 200 x 200.
inline AmplitudeSurface default_response_surface(const JointParams &joint, double Q0,
                                                 std::size_t n_F = kDefaultSurfaceResolution,
                                                 std::size_t n_Omega = kDefaultSurfaceResolution,
                                                 StiffnessModel model = StiffnessModel::cubic) {
    const double f_star = critical_tension(joint);
    return response_surface(joint, Q0, GridRange::open_at_zero(1.5 * f_star, n_F),
                            GridRange::open_at_zero(2.0 * std::numbers::pi * kDefaultMaxFrequencyHz, n_Omega),
                            model);
}

struct MaximaPoint {
    double Omega = 0.0;     ///< [rad/s]
    double F_max = 0.0;     ///< tension maximising the amplitude [N]
    double amplitude = 0.0; ///< amplitude at F_max [rad]
    bool degenerate = false; ///< flat row, leftmost maximiser reported
};

/// Tension of maximum response for every frequency column of the surface,
/// refined by golden-section between neighbouring grid tensions.
inline std::vector<MaximaPoint> line_of_maxima(const AmplitudeSurface &surface, const JointParams &joint,
                                               double tol_N = 1e-4) {
    if (surface.F_grid.empty() || surface.Omega_grid.empty()) {
        throw std::invalid_argument("line_of_maxima: empty surface");
    }
    const std::size_t nF = surface.F_grid.size();
    std::vector<MaximaPoint> line;
    line.reserve(surface.Omega_grid.size());
    for (std::size_t j = 0; j < surface.Omega_grid.size(); ++j) {
        const double Omega = surface.Omega_grid[j];
        std::size_t best = 0;
        double lo_val = surface.amplitude(0, j);
        double hi_val = lo_val;
        for (std::size_t i = 1; i < nF; ++i) {
            const double v = surface.amplitude(i, j);
            if (v > hi_val) {
                hi_val = v;
                best = i;
            }
            lo_val = std::min(lo_val, v);
        }
        MaximaPoint pt{Omega, surface.F_grid[best], hi_val, hi_val == lo_val};
        if (!pt.degenerate && nF > 1) {
            const double a = surface.F_grid[best == 0 ? 0 : best - 1];
            const double b = surface.F_grid[std::min(best + 1, nF - 1)];
            auto neg_amp = [&](double F) {
                return -surface_cell(F, Omega, surface.Q0, joint, surface.model).amplitude;
            };
            const auto refined = golden_section_minimize(neg_amp, a, b, tol_N);
            if (-refined.value > pt.amplitude) {
                pt.F_max = refined.x;
                pt.amplitude = -refined.value;
            }
        }
        line.push_back(pt);
    }
    return line;
}

} // namespace cjoint
