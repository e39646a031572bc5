#pragma once

#include "focsim/errors.hpp"
#include "focsim/transforms.hpp"

namespace focsim {

/// Upper-leg gate commands of the two-level inverter; the lower legs are
/// strictly complementary (no dead time modeled).
struct SwitchState {
    bool a = false;
    bool b = false;
    bool c = false;

    bool operator==(const SwitchState&) const = default;
};

struct HysteresisConfig {
    double band = 3.5;  // ampere

    void validate() const;
};

struct CarrierConfig {
    double frequency = 10e3;  // Hz

    void validate() const;
};

/// Discontinuous-PWM shaping angles: delta shifts the clamp pattern, phi
/// accounts for load power factor (0 = unity).
struct DpwmConfig {
    double delta = 0.0;  // rad
    double phi = 0.0;    // rad
};

/// SVPWM dwell times for one switching period: t1 on the sector's leading
/// active vector, t2 on the trailing one, t0 split across both zero
/// vectors. t1 + t2 + t0 reproduces the switching period exactly.
struct SvpwmTimes {
    double t1 = 0.0;
    double t2 = 0.0;
    double t0 = 0.0;
    int sector = 1;

    double period() const { return (t1 + t2) + t0; }
};

struct PhaseDuties {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Per-phase bang-bang comparator: error >= +band turns the upper leg on,
/// error <= -band the lower leg; inside the band the previous state holds.
SwitchState hysteresis_step(const AbcVector& i_ref, const AbcVector& i_meas, double band,
                            SwitchState prev);

/// Symmetric triangle in [-1, 1]: -1 at each period start, +1 at half
/// period.
double triangular_carrier(double t, const CarrierConfig& cfg);

/// Carrier comparison, one gate per phase. References at or above +1 stay
/// on through the carrier peak (rail saturation); references at -1 never
/// fire because the comparison is strict.
SwitchState spwm_step(const AbcVector& v_ref_norm, double carrier);

/// Zero-sequence injection that clamps one phase per interval to a DC
/// rail: alpha = (1 + sgn(cos 3(wt + delta + phi)))/2 picks the rail, the
/// clamped phase is set to exactly +/-1. Inputs are normalized to
/// half-bus; outputs feed spwm_step.
AbcVector dpwm_modified_refs(const AbcVector& v_ref_norm, double omega_t,
                             const DpwmConfig& cfg);

/// Sector 1..6 of the reference vector, 60-degree bins from the alpha
/// axis; the zero vector maps to sector 1.
int svpwm_sector(const AlphaBetaVector& v);

/// Active-vector dwell times over period t_s for a reference in volts.
/// Throws OverModulationError (carrying the re-entry scale factor) when
/// the reference leaves the hexagon.
SvpwmTimes svpwm_times(const AlphaBetaVector& v, double v_dc, double t_s, int sector);

/// Symmetric seven-segment duty split: t0 shared equally by V0 and V7,
/// active vectors ordered so consecutive segments differ in one leg.
PhaseDuties svpwm_duties(const SvpwmTimes& times);

/// Line-to-neutral voltages of the ideal two-level inverter driving an
/// isolated-neutral load.
inline AbcVector vsi_phase_voltages(const SwitchState& s, double v_dc) {
    const double sa = s.a ? 1.0 : 0.0;
    const double sb = s.b ? 1.0 : 0.0;
    const double sc = s.c ? 1.0 : 0.0;
    const double third = v_dc / 3.0;
    return AbcVector{
        third * (2.0 * sa - sb - sc),
        third * (2.0 * sb - sc - sa),
        third * (2.0 * sc - sa - sb),
    };
}

}  // namespace focsim
