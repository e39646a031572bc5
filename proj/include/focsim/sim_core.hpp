#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "focsim/errors.hpp"

namespace focsim {

/// Fixed-step time base shared by the whole simulation. The switching
/// period `t_pwm` must land exactly on the dt grid.
struct SimClock {
    double t = 0.0;
    double dt = 1e-6;
    double t_pwm = 100e-6;

    /// Number of dt steps per carrier period.
    std::size_t pwm_steps() const;

    /// Validates dt > 0 and t_pwm = k*dt, throws ConfigError otherwise.
    static SimClock make(double dt, double t_pwm);
};

/// Uniformly sampled signal record.
struct TimeSeries {
    std::string label;
    double dt = 0.0;
    double t0 = 0.0;
    std::vector<double> samples;

    double time_at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }

    /// One past the last sample instant, i.e. t0 + n*dt.
    double t_end() const { return t0 + static_cast<double>(samples.size()) * dt; }
};

/// Contiguous sub-series covering [t_start, t_end). The first sample is the
/// one at or immediately after t_start. Throws RangeError when the window
/// falls outside the recorded range.
TimeSeries extract_window(const TimeSeries& series, double t_start, double t_end);

/// CSV form: header `t,<label>`, one row per sample, time printed with
/// 12 significant digits.
void write_csv(const TimeSeries& series, std::ostream& out);
void write_csv(const TimeSeries& series, const std::string& path);

namespace detail {

template <std::size_t N>
void check_finite(const std::array<double, N>& v, const char* what) {
    for (std::size_t i = 0; i < N; ++i) {
        if (!std::isfinite(v[i])) {
            throw DivergedError(std::string("simulation diverged: non-finite ") + what +
                                    " in state component " + std::to_string(i),
                                i);
        }
    }
}

}  // namespace detail

/// One classic explicit fourth-order Runge-Kutta step. Inputs captured
/// inside `deriv` are frozen over the step (zero-order hold). Throws
/// DivergedError naming the offending component when the state or the
/// update turns non-finite.
template <std::size_t N, typename F>
std::array<double, N> rk4_step(F&& deriv, const std::array<double, N>& x, double dt) {
    if (!(dt > 0.0)) {
        throw ConfigError("rk4_step: dt must be positive");
    }
    detail::check_finite(x, "value");

    const std::array<double, N> k1 = deriv(x);
    std::array<double, N> tmp;

    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    const std::array<double, N> k2 = deriv(tmp);

    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    const std::array<double, N> k3 = deriv(tmp);

    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + dt * k3[i];
    const std::array<double, N> k4 = deriv(tmp);

    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    detail::check_finite(out, "derivative or value");
    return out;
}

}  // namespace focsim
