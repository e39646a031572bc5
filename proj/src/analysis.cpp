#include "focsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace focsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Cplx = std::complex<double>;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// In-place iterative radix-2 transform; `inverse` omits the 1/N scaling.
void fft_pow2(std::vector<Cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const Cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Cplx u = a[i + k];
                const Cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

/// Arbitrary-length DFT via the Bluestein chirp identity
/// jk = (j^2 + k^2 - (j-k)^2)/2, turning the transform into a circular
/// convolution evaluated with power-of-two FFTs. Chirp phases are reduced
/// modulo 2n in exact integer arithmetic before the trig call.
std::vector<Cplx> dft_bluestein(const std::vector<Cplx>& x) {
    const std::size_t n = x.size();
    const auto n2 = static_cast<long long>(2 * n);
    std::vector<Cplx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const long long r = (static_cast<long long>(k) * static_cast<long long>(k)) % n2;
        const double ang = kPi * static_cast<double>(r) / static_cast<double>(n);
        chirp[k] = Cplx(std::cos(ang), std::sin(ang));
    }

    const std::size_t m = next_pow2(2 * n - 1);
    std::vector<Cplx> a(m, Cplx(0.0, 0.0));
    std::vector<Cplx> b(m, Cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * std::conj(chirp[k]);
    b[0] = chirp[0];
    for (std::size_t k = 1; k < n; ++k) {
        b[k] = chirp[k];
        b[m - k] = chirp[k];
    }
    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_pow2(a, true);
    const double inv_m = 1.0 / static_cast<double>(m);

    std::vector<Cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = std::conj(chirp[k]) * (a[k] * inv_m);
    return out;
}

std::vector<Cplx> dft_complex(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    if (is_pow2(n)) {
        std::vector<Cplx> a(n);
        for (std::size_t k = 0; k < n; ++k) a[k] = Cplx(samples[k], 0.0);
        fft_pow2(a, false);
        return a;
    }
    std::vector<Cplx> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = Cplx(samples[k], 0.0);
    return dft_bluestein(x);
}

}  // namespace

Spectrum dft(const TimeSeries& samples) {
    const std::size_t n = samples.samples.size();
    if (n < 2) {
        throw RangeError("dft: need at least 2 samples");
    }
    if (!(samples.dt > 0.0)) {
        throw ConfigError("dft: series has no sample spacing");
    }
    const std::vector<Cplx> bins = dft_complex(samples.samples);

    Spectrum spec;
    spec.n_samples = n;
    spec.f0 = 1.0 / (static_cast<double>(n) * samples.dt);
    const std::size_t half = n / 2;
    spec.magnitudes.resize(half + 1);
    const double inv_n = 1.0 / static_cast<double>(n);
    spec.magnitudes[0] = std::abs(bins[0]) * inv_n;
    for (std::size_t k = 1; k < half; ++k) {
        spec.magnitudes[k] = 2.0 * std::abs(bins[k]) * inv_n;
    }
    if (half >= 1) {
        // For even n the Nyquist bin has no mirror image.
        spec.magnitudes[half] =
            (n % 2 == 0) ? std::abs(bins[half]) * inv_n : 2.0 * std::abs(bins[half]) * inv_n;
    }
    return spec;
}

double thd(const Spectrum& spec, double f1, int n_harmonics) {
    if (n_harmonics < 2) {
        throw ConfigError("thd: n_harmonics must be >= 2");
    }
    if (!(spec.f0 > 0.0) || spec.magnitudes.empty()) {
        throw ConfigError("thd: empty spectrum");
    }
    const double bin_f = f1 / spec.f0;
    const auto k1 = static_cast<long long>(std::llround(bin_f));
    if (k1 < 1 || std::abs(static_cast<double>(k1) - bin_f) > 1e-6 * std::max(1.0, bin_f)) {
        std::ostringstream msg;
        msg << "thd: fundamental " << f1 << " Hz is not aligned to the " << spec.f0
            << " Hz bin grid";
        throw DomainError(msg.str());
    }
    const auto last_bin = static_cast<long long>(spec.magnitudes.size()) - 1;
    if (k1 > last_bin) {
        throw DomainError("thd: fundamental lies above the Nyquist bin");
    }
    const double m1 = spec.magnitudes[static_cast<std::size_t>(k1)];
    if (!(m1 > 0.0)) {
        throw DomainError("thd: fundamental magnitude is zero");
    }
    // Harmonic groups in the power-quality convention: the bins between
    // harmonics belong to the nearest harmonic, with shared edge bins
    // half-weighted. Carrier sidebands of an asynchronous switching
    // frequency are interharmonic, so single-bin sampling would miss them.
    const long long half = k1 / 2;
    double sum_sq = 0.0;
    for (int h = 2; h <= n_harmonics; ++h) {
        const long long center = k1 * static_cast<long long>(h);
        if (center > last_bin) break;
        for (long long o = -half; o <= half; ++o) {
            const long long bin = center + o;
            if (bin < 1 || bin > last_bin) continue;
            const double w = (std::llabs(o) == half && k1 % 2 == 0) ? 0.5 : 1.0;
            const double m = spec.magnitudes[static_cast<std::size_t>(bin)];
            sum_sq += w * m * m;
        }
    }
    return std::sqrt(sum_sq) / m1;
}

double fundamental_frequency(double omega_m, int pole_pairs) {
    if (omega_m < 0.0) {
        throw DomainError("fundamental_frequency: omega_m must be non-negative");
    }
    return static_cast<double>(pole_pairs) * omega_m / (2.0 * kPi);
}

SpeedMetrics speed_metrics(const TimeSeries& trace, double ref_before, double ref_after,
                           double t_step) {
    if (ref_after == ref_before) {
        throw ConfigError("speed_metrics: step size must be nonzero");
    }
    SpeedMetrics m;
    const double step = ref_after - ref_before;
    const double sign = step > 0.0 ? 1.0 : -1.0;

    // First sample at or after the step instant.
    std::size_t start = 0;
    while (start < trace.samples.size() && trace.time_at(start) < t_step - 1e-12) ++start;
    if (start >= trace.samples.size()) {
        return m;
    }

    const double v10 = ref_before + 0.10 * step;
    const double v90 = ref_before + 0.90 * step;
    std::optional<double> t10, t90;
    for (std::size_t i = start; i < trace.samples.size(); ++i) {
        const double v = trace.samples[i];
        if (!t10 && sign * (v - v10) >= 0.0) t10 = trace.time_at(i);
        if (sign * (v - v90) >= 0.0) {
            t90 = trace.time_at(i);
            break;
        }
    }
    if (t10 && t90) {
        m.rise_time = *t90 - *t10;
    }

    // Settling: last excursion outside the +/-2% band.
    const double band = 0.02 * std::abs(step);
    std::optional<std::size_t> last_outside;
    for (std::size_t i = start; i < trace.samples.size(); ++i) {
        if (std::abs(trace.samples[i] - ref_after) > band) last_outside = i;
    }
    if (!last_outside) {
        m.settling_time = 0.0;
    } else if (*last_outside + 1 < trace.samples.size()) {
        m.settling_time = trace.time_at(*last_outside + 1) - t_step;
    }
    // else: never settles within the trace -> absent.

    // Overshoot beyond the new reference, in the step direction.
    double peak = 0.0;
    for (std::size_t i = start; i < trace.samples.size(); ++i) {
        peak = std::max(peak, sign * (trace.samples[i] - ref_after));
    }
    m.overshoot = peak / std::abs(step);

    // Steady-state error over the last tenth of the trace.
    const std::size_t n = trace.samples.size() - start;
    if (n > 0) {
        const std::size_t tail = std::max<std::size_t>(1, n / 10);
        double acc = 0.0;
        for (std::size_t i = trace.samples.size() - tail; i < trace.samples.size(); ++i) {
            acc += trace.samples[i];
        }
        const double mean = acc / static_cast<double>(tail);
        const double denom = ref_after != 0.0 ? std::abs(ref_after) : std::abs(step);
        m.steady_state_error = std::abs(mean - ref_after) / denom;
    }
    return m;
}

double thd_at_window(const TimeSeries& current_trace, double t_end, double f1, int n_cycles,
                     int n_harmonics) {
    if (n_cycles < 1) {
        throw ConfigError("thd_at_window: n_cycles must be >= 1");
    }
    if (!(f1 > 0.0)) {
        throw DomainError("thd_at_window: f1 must be positive");
    }
    const auto n = std::llround(static_cast<double>(n_cycles) / (f1 * current_trace.dt));
    if (n < 2) {
        throw RangeError("thd_at_window: window too short");
    }
    const double t_start = t_end - static_cast<double>(n) * current_trace.dt;
    const TimeSeries window = extract_window(current_trace, t_start, t_end);
    // Exact cycle count on the sample grid: the fundamental sits on bin
    // n_cycles by construction.
    const double f1_exact =
        static_cast<double>(n_cycles) / (static_cast<double>(window.samples.size()) * window.dt);
    return thd(dft(window), f1_exact, n_harmonics);
}

void write_csv(const Spectrum& spec, const std::string& path) {
    std::ofstream f(path);
    if (!f) {
        throw SimError("cannot open " + path + " for writing");
    }
    f << "f_hz,magnitude\n";
    char buf[80];
    for (std::size_t k = 0; k < spec.magnitudes.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", spec.f0 * static_cast<double>(k),
                      spec.magnitudes[k]);
        f << buf;
    }
}

}  // namespace focsim
