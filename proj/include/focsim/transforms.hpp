#pragma once

#include <cmath>

namespace focsim {

struct AbcVector {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

struct AlphaBetaVector {
    double alpha = 0.0;
    double beta = 0.0;
    double zero = 0.0;
};

struct DqVector {
    double d = 0.0;
    double q = 0.0;
};

// Amplitude-invariant scaling: alpha-beta/dq magnitudes equal the phase
// peak values (pairs with the 3/2 factor in the torque expression).
inline constexpr double kClarkeGain = 2.0 / 3.0;
inline constexpr double kSqrt3Over2 = 0.8660254037844386467637231707529;
inline constexpr double kInvSqrt2 = 0.7071067811865475244008443621048;

/// abc -> alpha-beta-zero, stationary frame.
inline AlphaBetaVector clarke(const AbcVector& v) {
    return AlphaBetaVector{
        kClarkeGain * (v.a - 0.5 * v.b - 0.5 * v.c),
        kClarkeGain * kSqrt3Over2 * (v.b - v.c),
        kClarkeGain * kInvSqrt2 * (v.a + v.b + v.c),
    };
}

/// Exact left-inverse of clarke, including the zero-sequence row.
inline AbcVector inverse_clarke(const AlphaBetaVector& v) {
    const double z = kInvSqrt2 * v.zero;
    return AbcVector{
        v.alpha + z,
        -0.5 * v.alpha + kSqrt3Over2 * v.beta + z,
        -0.5 * v.alpha - kSqrt3Over2 * v.beta + z,
    };
}

/// alpha-beta -> dq: rotation by -theta_e (theta_e measured from the
/// alpha axis to the d axis).
inline DqVector park(const AlphaBetaVector& v, double theta_e) {
    const double c = std::cos(theta_e);
    const double s = std::sin(theta_e);
    return DqVector{c * v.alpha + s * v.beta, -s * v.alpha + c * v.beta};
}

/// dq -> alpha-beta: rotation by +theta_e. Zero-sequence is zero.
inline AlphaBetaVector inverse_park(const DqVector& v, double theta_e) {
    const double c = std::cos(theta_e);
    const double s = std::sin(theta_e);
    return AlphaBetaVector{c * v.d - s * v.q, s * v.d + c * v.q, 0.0};
}

}  // namespace focsim
