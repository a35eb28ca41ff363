// Simplified vortex-street wake mapped to a harmonic forcing.
#pragma once

#include <stdexcept>

#include "cjoint/harmonic_balance.hpp"

namespace cjoint {

struct WakeParams {
    double flow_speed = 0.0;     ///< [m/s]
    double vorticity = 0.0;      ///< per vortex, all equal [1/s]
    double vortex_spacing = 0.0; ///< [m]
    double fluid_density = 0.0;  ///< [kg/m^3]
    double phase_offset = 0.0;   ///< [rad]
};

/// Proportionality constants of the wake model. Never defaulted: they depend
/// on the wake geometry and must come from the user.
struct WakeCalibration {
    double c_omega = 0.0; ///< frequency factor
    double c_amp = 0.0;   ///< maps rho * vorticity^2 to a specific torque [rad/s^2]
};

inline void validate(const WakeParams &w) {
    if (!(w.flow_speed >= 0.0)) throw std::invalid_argument("wake: flow_speed must be >= 0");
    if (!(w.vorticity >= 0.0)) throw std::invalid_argument("wake: vorticity must be >= 0");
    if (!(w.vortex_spacing > 0.0)) throw std::invalid_argument("wake: vortex_spacing must be > 0");
    if (!(w.fluid_density >= 0.0)) throw std::invalid_argument("wake: fluid_density must be >= 0");
}

inline void validate(const WakeCalibration &c) {
    if (!(c.c_omega > 0.0)) throw std::invalid_argument("wake calibration: c_omega must be > 0");
    if (!(c.c_amp > 0.0)) throw std::invalid_argument("wake calibration: c_amp must be > 0");
}

/// Omega = c_omega (U / spacing + vorticity), Q0 = c_amp rho vorticity^2,
/// phi = phase_offset.
inline Forcing wake_to_forcing(const WakeParams &wake, const WakeCalibration &calib) {
    validate(wake);
    validate(calib);
    Forcing f;
    f.Omega = calib.c_omega * (wake.flow_speed / wake.vortex_spacing + wake.vorticity);
    f.Q0 = calib.c_amp * wake.fluid_density * wake.vorticity * wake.vorticity;
    f.phi = wake.phase_offset;
    validate(f);
    return f;
}

} // namespace cjoint
