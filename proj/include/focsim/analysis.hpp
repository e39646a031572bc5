#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "focsim/errors.hpp"
#include "focsim/sim_core.hpp"

namespace focsim {

/// One-sided magnitude spectrum in the peak-amplitude convention: a pure
/// sinusoid of amplitude A landing on a bin reports A.
struct Spectrum {
    double f0 = 0.0;  // bin width, Hz
    std::vector<double> magnitudes;  // bins 0 .. n_samples/2
    std::size_t n_samples = 0;

    double nyquist() const { return f0 * static_cast<double>(n_samples / 2); }
};

/// Discrete Fourier transform of a uniformly sampled record. Uses a
/// radix-2 transform for power-of-two lengths and the Bluestein chirp
/// construction otherwise, so any window length is exact.
Spectrum dft(const TimeSeries& samples);

/// Total harmonic distortion: RMS of harmonics 2..n_harmonics over the
/// fundamental magnitude. Each harmonic is measured as its group (the
/// surrounding inter-harmonic bins, shared edges half-weighted), so
/// asynchronous switching sidebands are counted rather than sampled by
/// leakage. f1 must land on a spectrum bin; content above the Nyquist bin
/// is excluded.
double thd(const Spectrum& spec, double f1, int n_harmonics);

/// Electrical fundamental implied by the mechanical speed.
double fundamental_frequency(double omega_m, int pole_pairs);

/// Step-response figures for a speed trace. Metrics that the trace never
/// exhibits are absent rather than zero.
struct SpeedMetrics {
    std::optional<double> rise_time;            // 10% -> 90% of the step, seconds
    std::optional<double> settling_time;        // into the +/-2% band, seconds from the step
    std::optional<double> overshoot;            // fraction of the step size
    std::optional<double> steady_state_error;   // fraction of the final reference
};

SpeedMetrics speed_metrics(const TimeSeries& trace, double ref_before, double ref_after,
                           double t_step);

/// extract_window -> dft -> thd over an exact whole number of fundamental
/// cycles ending at t_end. The window length is rounded to the sample
/// grid and f1 re-derived from it, so the fundamental is bin-aligned.
double thd_at_window(const TimeSeries& current_trace, double t_end, double f1, int n_cycles,
                     int n_harmonics);

/// CSV form with header `f_hz,magnitude`.
void write_csv(const Spectrum& spec, const std::string& path);

}  // namespace focsim
