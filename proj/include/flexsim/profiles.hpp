#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace flexsim {

/// Time law of a rest-to-rest scalar trajectory.
enum class ProfileShape {
    Sine,             ///< sinusoidal velocity, half-cosine displacement
    Polynomial,       ///< quintic, zero rate and acceleration at both ends
    GaussianVelocity, ///< bell-shaped velocity, error-function displacement
    Parabolic         ///< quadratic time law (surface rotation only)
};

struct ProfileSample {
    double value = 0.0; ///< rad
    double rate = 0.0;  ///< rad/s
    double accel = 0.0; ///< rad/s^2
};

/// Scalar trajectory generator: angle, rate and acceleration over [0, duration].
struct MotionProfile {
    ProfileShape shape = ProfileShape::Sine;
    double start_value = 0.0; ///< rad
    double end_value = 0.0;   ///< rad
    double duration = 1.0;    ///< s
};

/// Evaluate the profile and its first two analytic time derivatives.
/// Throws std::domain_error for t outside [0, duration].
inline ProfileSample evaluate_profile(const MotionProfile& p, double t) {
    if (!(p.duration > 0.0))
        throw std::domain_error("MotionProfile: duration must be positive");
    if (t < 0.0 || t > p.duration)
        throw std::domain_error("MotionProfile: t = " + std::to_string(t) +
                                " outside [0, " + std::to_string(p.duration) + "]");

    const double T = p.duration;
    const double delta = p.end_value - p.start_value;
    const double s = t / T;
    ProfileSample out;

    switch (p.shape) {
    case ProfileShape::Sine: {
        const double k = std::numbers::pi / T;
        out.value = p.start_value + 0.5 * delta * (1.0 - std::cos(k * t));
        out.rate = 0.5 * delta * k * std::sin(k * t);
        out.accel = 0.5 * delta * k * k * std::cos(k * t);
        break;
    }
    case ProfileShape::Polynomial: {
        out.value = p.start_value + delta * (s * s * s * (10.0 + s * (-15.0 + 6.0 * s)));
        out.rate = delta * (s * s * (30.0 + s * (-60.0 + 30.0 * s))) / T;
        out.accel = delta * (s * (60.0 + s * (-180.0 + 120.0 * s))) / (T * T);
        break;
    }
    case ProfileShape::GaussianVelocity: {
        // Bell-shaped velocity with the endpoint tail value subtracted so the
        // rate is exactly zero at t = 0 and t = T. The subtraction keeps the
        // rate nonnegative on [0, T] (for delta > 0) and the displacement has
        // a closed form via the error function.
        const double sigma = T / 6.0;
        const double c = 0.5 * T;
        const double inv_s2 = 1.0 / (sigma * std::numbers::sqrt2);
        const double tail = std::exp(-0.5 * (c / sigma) * (c / sigma));
        const double area = sigma * std::sqrt(2.0 * std::numbers::pi) * std::erf(c * inv_s2) -
                            tail * T;
        const double amp = delta / area;
        const double u = t - c;
        const double bell = std::exp(-0.5 * (u / sigma) * (u / sigma));
        out.value = p.start_value +
                    amp * (sigma * std::sqrt(0.5 * std::numbers::pi) *
                               (std::erf(u * inv_s2) + std::erf(c * inv_s2)) -
                           tail * t);
        out.rate = amp * (bell - tail);
        out.accel = -amp * (u / (sigma * sigma)) * bell;
        break;
    }
    case ProfileShape::Parabolic:
        out.value = p.start_value + delta * s * s;
        out.rate = 2.0 * delta * s / T;
        out.accel = 2.0 * delta / (T * T);
        break;
    }
    return out;
}

inline const char* to_string(ProfileShape s) {
    switch (s) {
    case ProfileShape::Sine: return "sine";
    case ProfileShape::Polynomial: return "polynomial";
    case ProfileShape::GaussianVelocity: return "gaussian";
    case ProfileShape::Parabolic: return "parabolic";
    }
    return "?";
}

} // namespace flexsim
