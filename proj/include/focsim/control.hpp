#pragma once

#include <limits>

#include "focsim/errors.hpp"
#include "focsim/machines.hpp"
#include "focsim/transforms.hpp"

namespace focsim {

/// Discrete PI regulator with output clamping and conditional-integration
/// anti-windup: while the unsaturated output is outside the clamp range
/// the integrator is frozen.
struct PiController {
    double k_p = 0.0;
    double k_i = 0.0;  // per second
    double integrator = 0.0;
    double out_min = -std::numeric_limits<double>::max();
    double out_max = std::numeric_limits<double>::max();
};

/// One forward-Euler PI update. The output uses the integrator as
/// accumulated so far; the integrator then advances by k_i*error*dt
/// unless the output clamped this step.
double pi_step(PiController& c, double error, double dt);

/// Plain gain pair used when configuring the loops.
struct PiGains {
    double k_p = 0.0;
    double k_i = 0.0;
};

/// Settings for the cascaded speed (outer) and current (inner) loops.
/// v_limit and control_period of 0 mean "resolve from the modulator rule"
/// (see harness).
struct FocConfig {
    double i_d_ref = 0.0;
    double i_q_limit = 20.0;   // ampere
    double v_limit = 0.0;      // volt, dq magnitude cap
    bool decoupling_enabled = true;
    PiGains speed_pi;
    PiGains id_pi;
    PiGains iq_pi;
    double control_period = 0.0;  // seconds

    void validate() const;
};

/// Pole-zero-cancellation current loops (K_p = L*w_cc, K_i = r_s*w_cc) and
/// an inertia-scaled speed loop. Bandwidths must satisfy
/// f_sc <= f_cc/10 and f_cc <= 1/(10*t_pwm).
FocConfig compute_default_gains(const SpmsmParams& params, double f_cc_hz, double f_sc_hz,
                                double t_pwm = 100e-6);

/// Cascaded speed/current regulator state for one simulation run.
class FocController {
public:
    FocController(const FocConfig& cfg, const SpmsmParams& params);

    /// Outer loop: speed error -> q-axis current reference, clamped to
    /// +/- i_q_limit. Call once per control period.
    double speed_loop_step(double omega_ref, double omega_m, double dt);

    /// Inner loops: dq current errors -> dq voltage reference. Adds the
    /// cross-coupling/back-EMF feedforward when decoupling is enabled,
    /// then limits the magnitude to v_limit preserving the angle.
    DqVector current_loop_step(const DqVector& i_dq_ref, const DqVector& i_dq,
                               double omega_e, double dt);

    const FocConfig& config() const { return cfg_; }
    const PiController& speed_pi() const { return speed_; }
    const PiController& id_pi() const { return id_; }
    const PiController& iq_pi() const { return iq_; }

private:
    FocConfig cfg_;
    SpmsmParams params_;
    PiController speed_;
    PiController id_;
    PiController iq_;
};

}  // namespace focsim
