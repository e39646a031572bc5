#pragma once

#include <complex>
#include <string>
#include <vector>

#include "focsim/errors.hpp"
#include "focsim/transforms.hpp"

namespace focsim {

/// Surface-mounted PMSM constants. L is the (equal d- and q-axis) stator
/// inductance; lambda_m the rotor magnet flux linkage.
struct SpmsmParams {
    double r_s = 0.675;      // ohm
    double L = 0.000835;     // henry
    int pole_pairs = 4;
    double lambda_m = 0.11;  // weber
    double J = 0.01;         // kg m^2
    double B = 0.001;        // N m s/rad

    void validate() const;
};

/// Continuous machine state. theta_e is the electrical angle, kept in
/// [0, 2*pi) between integration steps.
struct SpmsmState {
    double i_d = 0.0;
    double i_q = 0.0;
    double omega_m = 0.0;   // mechanical rad/s
    double theta_e = 0.0;   // electrical rad
};

/// Time derivatives of SpmsmState, same field layout.
struct SpmsmRates {
    double i_d = 0.0;
    double i_q = 0.0;
    double omega_m = 0.0;
    double theta_e = 0.0;
};

/// Electromagnetic torque, (3/2)*pole_pairs*(lambda_d*i_q - lambda_q*i_d).
/// With equal axis inductances the cross terms cancel and the torque
/// depends on i_q alone.
inline double spmsm_torque(const DqVector& i_dq, const SpmsmParams& p) {
    const double lambda_d = p.lambda_m + p.L * i_dq.d;
    const double lambda_q = p.L * i_dq.q;
    return 1.5 * static_cast<double>(p.pole_pairs) * (lambda_d * i_dq.q - lambda_q * i_dq.d);
}

/// Synchronous-frame stator dynamics plus the mechanical equation, with
/// the dq voltages and load torque treated as held inputs.
inline SpmsmRates spmsm_derivatives(const SpmsmState& s, const DqVector& v_dq,
                                    double load_torque, const SpmsmParams& p) {
    const double omega_e = static_cast<double>(p.pole_pairs) * s.omega_m;
    const double t_e = spmsm_torque(DqVector{s.i_d, s.i_q}, p);
    return SpmsmRates{
        (v_dq.d - p.r_s * s.i_d + omega_e * p.L * s.i_q) / p.L,
        (v_dq.q - p.r_s * s.i_q - omega_e * p.L * s.i_d - omega_e * p.lambda_m) / p.L,
        (t_e - load_torque - p.B * s.omega_m) / p.J,
        omega_e,
    };
}

/// Induction machine per-phase equivalent-circuit constants
/// (rotor quantities stator-referred).
struct ImParams {
    double R = 1.0;      // stator resistance, ohm
    double R_r = 1.0;    // rotor resistance, ohm
    double L_ls = 5e-3;  // stator leakage, henry
    double L_lr = 5e-3;  // rotor leakage, henry
    double L_m = 0.2;    // magnetizing inductance, henry
    int pole_pairs = 2;

    void validate() const;
};

/// Slip S = (omega_e - pole_pairs*omega_r) / omega_e. Throws DomainError
/// when omega_e is zero.
double im_slip(double omega_e, double omega_r, int pole_pairs);

struct ImCircuitSolution {
    std::complex<double> stator_current;  // I
    std::complex<double> rotor_current;   // I_r
};

/// Solves the stator/rotor mesh equations for (I, I_r) at slip S.
/// Requires 0 < S <= 1 and omega_e > 0.
ImCircuitSolution im_solve_circuit(std::complex<double> v_s, double omega_e, double slip,
                                   const ImParams& p);

struct ImOutput {
    double p_out = 0.0;  // watt
    double t_e = 0.0;    // N m, defined here as P_out / omega_e
};

/// Air-gap branch output power 3*|I_r|^2*R_r*(1-S)/S and the associated
/// torque. The torque divides by the electrical speed, matching the
/// source convention this model follows; a mechanical-speed variant would
/// differ by the pole-pair ratio.
ImOutput im_output(std::complex<double> rotor_current, double slip, double r_r,
                   double omega_e);

struct ImCurveRow {
    double slip = 0.0;
    double t_e = 0.0;
    double p_out = 0.0;
    double stator_current_mag = 0.0;
};

/// One circuit solve + output evaluation per grid point. Slip values must
/// lie in (0, 1]; element failures carry the offending slip.
std::vector<ImCurveRow> im_torque_slip_curve(const ImParams& p, double v_s, double omega_e,
                                             const std::vector<double>& slip_grid);

/// CSV form with header `S,Te,Pout,I_mag`.
void write_csv(const std::vector<ImCurveRow>& rows, const std::string& path);

}  // namespace focsim
