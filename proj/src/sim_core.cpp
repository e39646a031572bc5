#include "focsim/sim_core.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace focsim {

std::size_t SimClock::pwm_steps() const {
    return static_cast<std::size_t>(std::llround(t_pwm / dt));
}

SimClock SimClock::make(double dt, double t_pwm) {
    if (!(dt > 0.0)) {
        throw ConfigError("SimClock: dt must be positive");
    }
    const long long k = std::llround(t_pwm / dt);
    if (k < 1 || std::abs(static_cast<double>(k) * dt - t_pwm) > 1e-9 * t_pwm) {
        throw ConfigError("SimClock: t_pwm must be a positive integer multiple of dt");
    }
    return SimClock{0.0, dt, t_pwm};
}

TimeSeries extract_window(const TimeSeries& series, double t_start, double t_end) {
    if (!(series.dt > 0.0)) {
        throw ConfigError("extract_window: series has no sample spacing");
    }
    if (!(t_start < t_end)) {
        throw RangeError("extract_window: t_start must precede t_end");
    }
    const auto n = static_cast<long long>(series.samples.size());
    // Index-space tolerance absorbs representation error of t = t0 + k*dt.
    const double guard = 1e-6;
    const auto lo = static_cast<long long>(std::ceil((t_start - series.t0) / series.dt - guard));
    const auto hi = static_cast<long long>(std::ceil((t_end - series.t0) / series.dt - guard));
    if (lo < 0 || hi > n || lo >= hi) {
        std::ostringstream msg;
        msg << "extract_window: window [" << t_start << ", " << t_end
            << ") outside recorded range [" << series.t0 << ", " << series.t_end() << ")";
        throw RangeError(msg.str());
    }
    TimeSeries out;
    out.label = series.label;
    out.dt = series.dt;
    out.t0 = series.time_at(static_cast<std::size_t>(lo));
    out.samples.assign(series.samples.begin() + lo, series.samples.begin() + hi);
    return out;
}

void write_csv(const TimeSeries& series, std::ostream& out) {
    out << "t," << series.label << "\n";
    char buf[64];
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.9g\n", series.time_at(i), series.samples[i]);
        out << buf;
    }
}

void write_csv(const TimeSeries& series, const std::string& path) {
    std::ofstream f(path);
    if (!f) {
        throw SimError("cannot open " + path + " for writing");
    }
    write_csv(series, f);
}

}  // namespace focsim
