#include "focsim/machines.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace focsim {

void SpmsmParams::validate() const {
    if (!(r_s > 0.0)) throw ConfigError("SpmsmParams: r_s must be positive");
    if (!(L > 0.0)) throw ConfigError("SpmsmParams: L must be positive");
    if (pole_pairs < 1) throw ConfigError("SpmsmParams: pole_pairs must be >= 1");
    if (!(lambda_m > 0.0)) throw ConfigError("SpmsmParams: lambda_m must be positive");
    if (!(J > 0.0)) throw ConfigError("SpmsmParams: J must be positive");
    if (B < 0.0) throw ConfigError("SpmsmParams: B must be non-negative");
}

void ImParams::validate() const {
    if (!(R > 0.0 && R_r > 0.0)) throw ConfigError("ImParams: resistances must be positive");
    if (!(L_ls > 0.0 && L_lr > 0.0 && L_m > 0.0)) {
        throw ConfigError("ImParams: inductances must be positive");
    }
    if (pole_pairs < 1) throw ConfigError("ImParams: pole_pairs must be >= 1");
}

double im_slip(double omega_e, double omega_r, int pole_pairs) {
    if (omega_e == 0.0) {
        throw DomainError("im_slip: omega_e must be nonzero");
    }
    return (omega_e - static_cast<double>(pole_pairs) * omega_r) / omega_e;
}

ImCircuitSolution im_solve_circuit(std::complex<double> v_s, double omega_e, double slip,
                                   const ImParams& p) {
    p.validate();
    if (!(slip > 0.0 && slip <= 1.0)) {
        std::ostringstream msg;
        msg << "im_solve_circuit: slip " << slip << " outside motoring range (0, 1]";
        throw DomainError(msg.str());
    }
    if (!(omega_e > 0.0)) {
        throw DomainError("im_solve_circuit: omega_e must be positive");
    }
    const std::complex<double> j(0.0, 1.0);
    const std::complex<double> z_m = j * omega_e * p.L_m;
    const std::complex<double> z11 = p.R + j * omega_e * p.L_ls + z_m;
    const std::complex<double> z22 = p.R_r / slip + j * omega_e * p.L_lr + z_m;
    // Forward elimination on the 2x2 mesh system; z11 has a resistive part
    // so no pivoting is needed.
    if (std::abs(z11) == 0.0) {
        throw DomainError("im_solve_circuit: singular system (z11 = 0)");
    }
    const std::complex<double> m = z_m / z11;
    const std::complex<double> z22_reduced = z22 - m * z_m;
    if (std::abs(z22_reduced) == 0.0) {
        throw DomainError("im_solve_circuit: singular system");
    }
    const std::complex<double> i_r = (-m * v_s) / z22_reduced;
    const std::complex<double> i = (v_s - z_m * i_r) / z11;
    return ImCircuitSolution{i, i_r};
}

ImOutput im_output(std::complex<double> rotor_current, double slip, double r_r,
                   double omega_e) {
    if (!(slip > 0.0 && slip <= 1.0)) {
        throw DomainError("im_output: slip outside motoring range (0, 1]");
    }
    const double i_mag2 = std::norm(rotor_current);
    const double p_out = 3.0 * i_mag2 * r_r * (1.0 - slip) / slip;
    return ImOutput{p_out, p_out / omega_e};
}

std::vector<ImCurveRow> im_torque_slip_curve(const ImParams& p, double v_s, double omega_e,
                                             const std::vector<double>& slip_grid) {
    std::vector<ImCurveRow> rows;
    rows.reserve(slip_grid.size());
    for (double s : slip_grid) {
        try {
            const ImCircuitSolution sol = im_solve_circuit({v_s, 0.0}, omega_e, s, p);
            const ImOutput out = im_output(sol.rotor_current, s, p.R_r, omega_e);
            rows.push_back(ImCurveRow{s, out.t_e, out.p_out, std::abs(sol.stator_current)});
        } catch (const SimError& e) {
            std::ostringstream msg;
            msg << "im_torque_slip_curve: at S = " << s << ": " << e.what();
            throw DomainError(msg.str());
        }
    }
    return rows;
}

void write_csv(const std::vector<ImCurveRow>& rows, const std::string& path) {
    std::ofstream f(path);
    if (!f) {
        throw SimError("cannot open " + path + " for writing");
    }
    f << "S,Te,Pout,I_mag\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g\n", r.slip, r.t_e, r.p_out,
                      r.stator_current_mag);
        f << buf;
    }
}

}  // namespace focsim
