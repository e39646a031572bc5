#include "focsim/control.hpp"

#include <cmath>

namespace focsim {

double pi_step(PiController& c, double error, double dt) {
    if (!(dt > 0.0)) {
        throw ConfigError("pi_step: dt must be positive");
    }
    const double u = c.k_p * error + c.integrator;
    if (u > c.out_max) {
        return c.out_max;
    }
    if (u < c.out_min) {
        return c.out_min;
    }
    c.integrator += c.k_i * error * dt;
    return u;
}

void FocConfig::validate() const {
    if (!(i_q_limit > 0.0)) throw ConfigError("FocConfig: i_q_limit must be positive");
    if (v_limit < 0.0) throw ConfigError("FocConfig: v_limit must be non-negative");
    if (control_period < 0.0) throw ConfigError("FocConfig: control_period must be non-negative");
}

FocConfig compute_default_gains(const SpmsmParams& params, double f_cc_hz, double f_sc_hz,
                                double t_pwm) {
    params.validate();
    if (f_cc_hz < 0.0 || f_sc_hz < 0.0) {
        throw ConfigError("compute_default_gains: bandwidths must be non-negative");
    }
    if (f_sc_hz > f_cc_hz / 10.0) {
        throw ConfigError("compute_default_gains: requires f_sc <= f_cc/10");
    }
    if (t_pwm > 0.0 && f_cc_hz > 1.0 / (10.0 * t_pwm)) {
        throw ConfigError("compute_default_gains: requires f_cc <= 1/(10*t_pwm)");
    }
    const double w_cc = 2.0 * M_PI * f_cc_hz;
    const double w_sc = 2.0 * M_PI * f_sc_hz;

    FocConfig cfg;
    cfg.id_pi = PiGains{params.L * w_cc, params.r_s * w_cc};
    cfg.iq_pi = cfg.id_pi;
    const double torque_gain = 1.5 * static_cast<double>(params.pole_pairs) * params.lambda_m;
    const double k_p_speed = params.J * w_sc / torque_gain;
    cfg.speed_pi = PiGains{k_p_speed, k_p_speed * w_sc / 5.0};
    return cfg;
}

FocController::FocController(const FocConfig& cfg, const SpmsmParams& params)
    : cfg_(cfg), params_(params) {
    cfg_.validate();
    params_.validate();
    speed_ = PiController{cfg_.speed_pi.k_p, cfg_.speed_pi.k_i, 0.0, -cfg_.i_q_limit,
                          cfg_.i_q_limit};
    // The current-loop PIs are limited as a vector (magnitude cap preserving
    // the angle), so the per-axis clamps stay open and anti-windup is keyed
    // on the vector clamp instead.
    id_ = PiController{cfg_.id_pi.k_p, cfg_.id_pi.k_i, 0.0};
    iq_ = PiController{cfg_.iq_pi.k_p, cfg_.iq_pi.k_i, 0.0};
}

double FocController::speed_loop_step(double omega_ref, double omega_m, double dt) {
    return pi_step(speed_, omega_ref - omega_m, dt);
}

DqVector FocController::current_loop_step(const DqVector& i_dq_ref, const DqVector& i_dq,
                                          double omega_e, double dt) {
    const double integ_d = id_.integrator;
    const double integ_q = iq_.integrator;
    double v_d = pi_step(id_, i_dq_ref.d - i_dq.d, dt);
    double v_q = pi_step(iq_, i_dq_ref.q - i_dq.q, dt);
    if (cfg_.decoupling_enabled) {
        v_d -= omega_e * params_.L * i_dq.q;
        v_q += omega_e * params_.L * i_dq.d + omega_e * params_.lambda_m;
    }
    if (cfg_.v_limit > 0.0) {
        const double mag = std::hypot(v_d, v_q);
        if (mag > cfg_.v_limit) {
            const double scale = cfg_.v_limit / mag;
            v_d *= scale;
            v_q *= scale;
            // Saturated: suppress this step's integrator advance.
            id_.integrator = integ_d;
            iq_.integrator = integ_q;
        }
    }
    return DqVector{v_d, v_q};
}

}  // namespace focsim
