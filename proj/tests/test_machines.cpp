#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "focsim/machines.hpp"
#include "focsim/sim_core.hpp"

using namespace focsim;
using Catch::Approx;

namespace {

// Cramer-rule solve of the stator/rotor mesh equations, kept independent
// of the library's elimination path.
ImCircuitSolution cramer_solve(std::complex<double> v_s, double omega_e, double slip,
                               const ImParams& p) {
    const std::complex<double> j(0.0, 1.0);
    const std::complex<double> z_m = j * omega_e * p.L_m;
    const std::complex<double> z11 = p.R + j * omega_e * p.L_ls + z_m;
    const std::complex<double> z22 = p.R_r / slip + j * omega_e * p.L_lr + z_m;
    const std::complex<double> det = z11 * z22 - z_m * z_m;
    return ImCircuitSolution{v_s * z22 / det, -z_m * v_s / det};
}

std::array<double, 4> pack(const SpmsmState& s) {
    return {s.i_d, s.i_q, s.omega_m, s.theta_e};
}

}  // namespace

TEST_CASE("spmsm_derivatives is at rest at the origin") {
    const SpmsmParams p;
    const SpmsmRates r = spmsm_derivatives(SpmsmState{}, DqVector{0.0, 0.0}, 0.0, p);
    CHECK(r.i_d == 0.0);
    CHECK(r.i_q == 0.0);
    CHECK(r.omega_m == 0.0);
    CHECK(r.theta_e == 0.0);
}

TEST_CASE("spmsm_derivatives electrical steady state from the voltage balance") {
    const SpmsmParams p;
    const double i_q = 3.0;
    const double omega_m = 50.0;
    const double omega_e = p.pole_pairs * omega_m;
    SpmsmState s;
    s.i_q = i_q;
    s.omega_m = omega_m;
    const DqVector v{-omega_e * p.L * i_q, p.r_s * i_q + omega_e * p.lambda_m};
    const double t_e = spmsm_torque(DqVector{0.0, i_q}, p);
    const SpmsmRates r = spmsm_derivatives(s, v, t_e - p.B * omega_m, p);
    CHECK(r.i_d == Approx(0.0).margin(1e-10));
    CHECK(r.i_q == Approx(0.0).margin(1e-10));
    CHECK(r.omega_m == Approx(0.0).margin(1e-10));
    CHECK(r.theta_e == Approx(omega_e).margin(1e-12));
}

TEST_CASE("spmsm torque balances a 5 N m load at the matching current") {
    SpmsmParams p;
    p.B = 0.0;
    const double i_q = 5.0 / (1.5 * p.pole_pairs * p.lambda_m);  // 7.5758 A
    CHECK(i_q == Approx(7.5758).margin(1e-4));
    SpmsmState s;
    s.i_q = i_q;
    s.omega_m = 100.0;
    const SpmsmRates r = spmsm_derivatives(s, DqVector{0.0, 0.0}, 5.0, p);
    CHECK(spmsm_torque(DqVector{0.0, i_q}, p) == Approx(5.0).margin(1e-12));
    CHECK(r.omega_m == Approx(0.0).margin(1e-10));
}

TEST_CASE("spmsm_torque examples") {
    const SpmsmParams p;
    CHECK(spmsm_torque(DqVector{12.0, 0.0}, p) == 0.0);
    CHECK(spmsm_torque(DqVector{0.0, 10.0}, p) == Approx(6.6).margin(1e-12));
    // The inductance cross terms cancel exactly.
    CHECK(spmsm_torque(DqVector{5.0, 5.0}, p) ==
          Approx(spmsm_torque(DqVector{0.0, 5.0}, p)).margin(1e-12));
}

TEST_CASE("spmsm_torque is linear in i_q and independent of i_d") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> cur(-30.0, 30.0);
    const SpmsmParams p;
    for (int i = 0; i < 200; ++i) {
        const double i_d = cur(rng), i_q = cur(rng), k = cur(rng) / 10.0;
        CHECK(spmsm_torque(DqVector{i_d, i_q}, p) ==
              Approx(spmsm_torque(DqVector{0.0, i_q}, p)).margin(1e-9));
        CHECK(spmsm_torque(DqVector{0.0, k * i_q}, p) ==
              Approx(k * spmsm_torque(DqVector{0.0, i_q}, p)).margin(1e-9));
    }
}

TEST_CASE("spmsm energy bookkeeping along a trajectory") {
    SpmsmParams p;
    p.B = 0.0;
    const DqVector v{10.0, 20.0};
    const double dt = 1e-6;
    SpmsmState s;

    const auto energy = [&p](const SpmsmState& st) {
        return 1.5 * 0.5 * p.L * (st.i_d * st.i_d + st.i_q * st.i_q) +
               0.5 * p.J * st.omega_m * st.omega_m;
    };
    const auto deriv = [&](const std::array<double, 4>& x) {
        const SpmsmRates r =
            spmsm_derivatives(SpmsmState{x[0], x[1], x[2], x[3]}, v, 0.0, p);
        return std::array<double, 4>{r.i_d, r.i_q, r.omega_m, r.theta_e};
    };

    double net_in = 0.0;  // trapezoid of 1.5*(v.i - r*i^2)
    double prev_power = 0.0;
    double input_energy = 0.0;
    double prev_input = 0.0;
    const double e0 = energy(s);
    const int n = 10000;  // 10 ms
    for (int k = 0; k < n; ++k) {
        const double power =
            1.5 * (v.d * s.i_d + v.q * s.i_q - p.r_s * (s.i_d * s.i_d + s.i_q * s.i_q));
        const double input = 1.5 * (v.d * s.i_d + v.q * s.i_q);
        if (k > 0) {
            net_in += 0.5 * (power + prev_power) * dt;
            input_energy += 0.5 * (input + prev_input) * dt;
        }
        prev_power = power;
        prev_input = input;
        const auto x = rk4_step(deriv, pack(s), dt);
        s = SpmsmState{x[0], x[1], x[2], x[3]};
    }
    // One trailing half step to close the trapezoid at the final state.
    const double power_end =
        1.5 * (v.d * s.i_d + v.q * s.i_q - p.r_s * (s.i_d * s.i_d + s.i_q * s.i_q));
    const double input_end = 1.5 * (v.d * s.i_d + v.q * s.i_q);
    net_in += 0.5 * (prev_power + power_end) * dt;
    input_energy += 0.5 * (prev_input + input_end) * dt;

    const double stored = energy(s) - e0;
    CHECK(std::abs(stored - net_in) < 1e-3 * std::abs(input_energy));
}

TEST_CASE("unforced spmsm with friction decays in the energy norm") {
    SpmsmParams p;
    p.B = 0.01;
    SpmsmState s;
    s.i_q = 5.0;
    s.omega_m = 50.0;
    const auto energy = [&p](const SpmsmState& st) {
        return 1.5 * 0.5 * p.L * (st.i_d * st.i_d + st.i_q * st.i_q) +
               0.5 * p.J * st.omega_m * st.omega_m;
    };
    const auto deriv = [&](const std::array<double, 4>& x) {
        const SpmsmRates r =
            spmsm_derivatives(SpmsmState{x[0], x[1], x[2], x[3]}, DqVector{0.0, 0.0}, 0.0, p);
        return std::array<double, 4>{r.i_d, r.i_q, r.omega_m, r.theta_e};
    };
    const double dt = 1e-5;
    double prev = energy(s);
    for (int block = 0; block < 20; ++block) {
        for (int k = 0; k < 100; ++k) {
            const auto x = rk4_step(deriv, pack(s), dt);
            s = SpmsmState{x[0], x[1], x[2], x[3]};
        }
        const double e = energy(s);
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("im_slip examples") {
    CHECK(im_slip(2.0 * M_PI * 50.0, 0.0, 2) == 1.0);
    CHECK(im_slip(2.0 * M_PI * 50.0, 2.0 * M_PI * 50.0 / 2.0, 2) == Approx(0.0).margin(1e-15));
    CHECK(im_slip(2.0 * M_PI * 50.0, 150.0, 2) == Approx(0.04507).margin(1e-5));
    CHECK_THROWS_AS(im_slip(0.0, 10.0, 2), DomainError);
}

TEST_CASE("im_solve_circuit returns zero for zero drive") {
    const ImParams p;
    const ImCircuitSolution sol = im_solve_circuit({0.0, 0.0}, 2.0 * M_PI * 50.0, 0.05, p);
    CHECK(std::abs(sol.stator_current) == 0.0);
    CHECK(std::abs(sol.rotor_current) == 0.0);
}

TEST_CASE("im_solve_circuit satisfies the mesh equations and the Cramer oracle") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> res(0.1, 5.0);
    std::uniform_real_distribution<double> leak(1e-3, 2e-2);
    std::uniform_real_distribution<double> mag(0.05, 0.5);
    std::uniform_real_distribution<double> freq(10.0, 100.0);
    std::uniform_real_distribution<double> slip(0.001, 1.0);
    std::uniform_real_distribution<double> volt(10.0, 500.0);

    for (int i = 0; i < 1000; ++i) {
        ImParams p;
        p.R = res(rng);
        p.R_r = res(rng);
        p.L_ls = leak(rng);
        p.L_lr = leak(rng);
        p.L_m = mag(rng);
        const double omega_e = 2.0 * M_PI * freq(rng);
        const double s = slip(rng);
        const std::complex<double> v_s(volt(rng), 0.0);

        const ImCircuitSolution sol = im_solve_circuit(v_s, omega_e, s, p);

        const std::complex<double> j(0.0, 1.0);
        const std::complex<double> z_m = j * omega_e * p.L_m;
        const std::complex<double> r1 = (p.R + j * omega_e * p.L_ls) * sol.stator_current +
                                        z_m * (sol.stator_current + sol.rotor_current) - v_s;
        const std::complex<double> r2 =
            (p.R_r / s + j * omega_e * p.L_lr) * sol.rotor_current +
            z_m * (sol.stator_current + sol.rotor_current);
        CHECK(std::abs(r1) < 1e-10 * std::abs(v_s));
        CHECK(std::abs(r2) < 1e-10 * std::abs(v_s));

        const ImCircuitSolution oracle = cramer_solve(v_s, omega_e, s, p);
        const double scale = std::max(std::abs(oracle.stator_current), 1e-30);
        CHECK(std::abs(sol.stator_current - oracle.stator_current) < 1e-10 * scale);
        CHECK(std::abs(sol.rotor_current - oracle.rotor_current) < 1e-10 * scale);
    }
}

TEST_CASE("im_solve_circuit rejects out-of-range slip") {
    const ImParams p;
    CHECK_THROWS_AS(im_solve_circuit({100.0, 0.0}, 314.0, 0.0, p), DomainError);
    CHECK_THROWS_AS(im_solve_circuit({100.0, 0.0}, 314.0, -0.1, p), DomainError);
    CHECK_THROWS_AS(im_solve_circuit({100.0, 0.0}, 314.0, 1.5, p), DomainError);
}

TEST_CASE("im_output examples") {
    const ImOutput standstill = im_output({10.0, 0.0}, 1.0, 0.5, 314.159);
    CHECK(standstill.p_out == 0.0);
    CHECK(standstill.t_e == 0.0);

    const ImOutput run = im_output({10.0, 0.0}, 0.05, 0.5, 314.159);
    CHECK(run.p_out == Approx(2850.0).margin(1e-9));
    CHECK(run.t_e * 314.159 == Approx(run.p_out).margin(1e-9));
}

TEST_CASE("im_torque_slip_curve composes the per-point operations") {
    const ImParams p;
    const double omega_e = 2.0 * M_PI * 50.0;

    const auto single = im_torque_slip_curve(p, 230.0, omega_e, {1.0});
    REQUIRE(single.size() == 1);
    CHECK(single[0].t_e == 0.0);
    CHECK(single[0].p_out == 0.0);

    std::vector<double> grid;
    for (int i = 1; i <= 100; ++i) {
        grid.push_back(static_cast<double>(i) / 100.0);
    }
    const auto rows = im_torque_slip_curve(p, 230.0, omega_e, grid);
    REQUIRE(rows.size() == 100);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto one = im_torque_slip_curve(p, 230.0, omega_e, {grid[i]});
        CHECK(rows[i].t_e == one[0].t_e);
        CHECK(rows[i].p_out == one[0].p_out);
        CHECK(rows[i].stator_current_mag == one[0].stator_current_mag);
        CHECK(rows[i].slip == grid[i]);
        const ImCircuitSolution oracle = cramer_solve({230.0, 0.0}, omega_e, grid[i], p);
        CHECK(rows[i].stator_current_mag ==
              Approx(std::abs(oracle.stator_current)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(im_torque_slip_curve(p, 230.0, omega_e, {0.5, -0.1}), DomainError);
}

TEST_CASE("parameter validation") {
    SpmsmParams bad;
    bad.L = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    ImParams badim;
    badim.L_m = -1.0;
    CHECK_THROWS_AS(badim.validate(), ConfigError);
}
