#include "focsim/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace focsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt3 = 1.7320508075688772935274463415059;

bool phase_gate(double err, double band, bool prev) {
    if (err >= band) return true;
    if (err <= -band) return false;
    return prev;
}

}  // namespace

void HysteresisConfig::validate() const {
    if (!(band > 0.0)) throw ConfigError("HysteresisConfig: band must be positive");
}

void CarrierConfig::validate() const {
    if (!(frequency > 0.0)) throw ConfigError("CarrierConfig: frequency must be positive");
}

SwitchState hysteresis_step(const AbcVector& i_ref, const AbcVector& i_meas, double band,
                            SwitchState prev) {
    if (!(band > 0.0)) {
        throw ConfigError("hysteresis_step: band must be positive");
    }
    return SwitchState{
        phase_gate(i_ref.a - i_meas.a, band, prev.a),
        phase_gate(i_ref.b - i_meas.b, band, prev.b),
        phase_gate(i_ref.c - i_meas.c, band, prev.c),
    };
}

double triangular_carrier(double t, const CarrierConfig& cfg) {
    cfg.validate();
    const double cycles = t * cfg.frequency;
    const double x = cycles - std::floor(cycles);  // position in [0, 1)
    return x < 0.5 ? -1.0 + 4.0 * x : 3.0 - 4.0 * x;
}

SwitchState spwm_step(const AbcVector& v_ref_norm, double carrier) {
    auto gate = [carrier](double v) { return v >= 1.0 || v > carrier; };
    return SwitchState{gate(v_ref_norm.a), gate(v_ref_norm.b), gate(v_ref_norm.c)};
}

AbcVector dpwm_modified_refs(const AbcVector& v_ref_norm, double omega_t,
                             const DpwmConfig& cfg) {
    // sgn(0) := +1, so alpha is 1 exactly on the switching boundaries.
    const double arg = std::cos(3.0 * (omega_t + cfg.delta + cfg.phi));
    const bool clamp_to_positive = arg >= 0.0;

    const double v_max = std::max({v_ref_norm.a, v_ref_norm.b, v_ref_norm.c});
    const double v_min = std::min({v_ref_norm.a, v_ref_norm.b, v_ref_norm.c});
    const double v_zs = clamp_to_positive ? 1.0 - v_max : -1.0 - v_min;

    AbcVector out{v_ref_norm.a + v_zs, v_ref_norm.b + v_zs, v_ref_norm.c + v_zs};
    // Pin the clamped phase to the rail exactly so a clamped carrier
    // period produces no transitions.
    if (clamp_to_positive) {
        if (v_ref_norm.a == v_max) out.a = 1.0;
        else if (v_ref_norm.b == v_max) out.b = 1.0;
        else out.c = 1.0;
    } else {
        if (v_ref_norm.a == v_min) out.a = -1.0;
        else if (v_ref_norm.b == v_min) out.b = -1.0;
        else out.c = -1.0;
    }
    return out;
}

int svpwm_sector(const AlphaBetaVector& v) {
    double angle = std::atan2(v.beta, v.alpha);
    if (angle < 0.0) angle += 2.0 * kPi;
    int sector = 1 + static_cast<int>(angle / (kPi / 3.0));
    return std::clamp(sector, 1, 6);
}

SvpwmTimes svpwm_times(const AlphaBetaVector& v, double v_dc, double t_s, int sector) {
    if (!(v_dc > 0.0)) throw ConfigError("svpwm_times: v_dc must be positive");
    if (!(t_s > 0.0)) throw ConfigError("svpwm_times: t_s must be positive");
    if (sector < 1 || sector > 6) throw ConfigError("svpwm_times: sector must be 1..6");

    const double mag = std::hypot(v.alpha, v.beta);
    double theta = std::atan2(v.beta, v.alpha);
    if (theta < 0.0) theta += 2.0 * kPi;

    const double scale = kSqrt3 * t_s * mag / v_dc;
    const double n = static_cast<double>(sector);
    double t1 = scale * std::sin(n * kPi / 3.0 - theta);
    double t2 = scale * std::sin(theta - (n - 1.0) * kPi / 3.0);

    const double slack = 1e-9 * t_s;
    if (t1 < -slack || t2 < -slack) {
        std::ostringstream msg;
        msg << "svpwm_times: reference angle " << theta << " rad not in sector " << sector;
        throw DomainError(msg.str());
    }
    t1 = std::max(t1, 0.0);
    t2 = std::max(t2, 0.0);

    const double active = t1 + t2;
    if (active > t_s * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "svpwm_times: over-modulation, |v| = " << mag << " V exceeds the hexagon; "
            << "scale by " << t_s / active << " to re-enter";
        throw OverModulationError(msg.str(), t_s / active);
    }

    // Close (t1 + t2) + t0 onto t_s exactly. The real sum can land on a
    // half-ulp rounding tie of t_s, which round-to-even never resolves, so
    // the exact sub-ulp residual (TwoSum) is parked in the larger active
    // dwell, whose grid sits at least one binade finer than t_s.
    double t0 = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        const double s12 = t1 + t2;
        t0 = t_s - s12;
        if (t0 < 0.0) t0 = 0.0;
        const double sum = s12 + t0;
        if (sum == t_s) break;
        const double z = sum - s12;
        const double err = (s12 - (sum - z)) + (t0 - z);
        const double delta = (sum - t_s) + err;  // real (s12 + t0) - t_s
        if (t2 >= t1 && t2 - delta >= 0.0) {
            t2 -= delta;
        } else if (t1 - delta >= 0.0) {
            t1 -= delta;
        } else {
            break;
        }
    }
    return SvpwmTimes{t1, t2, t0, sector};
}

PhaseDuties svpwm_duties(const SvpwmTimes& times) {
    const double t_s = times.period();
    if (!(t_s > 0.0)) throw ConfigError("svpwm_duties: period must be positive");
    const double half_zero = 0.5 * times.t0;
    const double high = (times.t1 + times.t2 + half_zero) / t_s;
    const double low = half_zero / t_s;
    const double mid_leading = (times.t1 + half_zero) / t_s;    // on during V_n only
    const double mid_trailing = (times.t2 + half_zero) / t_s;   // on during V_{n+1} only

    switch (times.sector) {
        case 1: return PhaseDuties{high, mid_trailing, low};
        case 2: return PhaseDuties{mid_leading, high, low};
        case 3: return PhaseDuties{low, high, mid_trailing};
        case 4: return PhaseDuties{low, mid_leading, high};
        case 5: return PhaseDuties{mid_trailing, low, high};
        case 6: return PhaseDuties{high, low, mid_leading};
        default: throw ConfigError("svpwm_duties: sector must be 1..6");
    }
}

}  // namespace focsim
