#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "flexsim/profiles.hpp"

using namespace flexsim;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<ProfileShape> kAllShapes{ProfileShape::Sine, ProfileShape::Polynomial,
                                           ProfileShape::GaussianVelocity,
                                           ProfileShape::Parabolic};
const std::vector<ProfileShape> kRestToRest{ProfileShape::Sine, ProfileShape::Polynomial,
                                            ProfileShape::GaussianVelocity};

MotionProfile surface_angle_profile(ProfileShape shape) {
    return {shape, 2.0 * kPi / 3.0, 5.0 * kPi / 6.0, 5.0};
}

} // namespace

TEST_CASE("profile endpoint values are reproduced exactly") {
    for (const ProfileShape shape : kAllShapes) {
        const MotionProfile p = surface_angle_profile(shape);
        CAPTURE(to_string(shape));
        CHECK(std::abs(evaluate_profile(p, 0.0).value - p.start_value) < 1e-12);
        CHECK(std::abs(evaluate_profile(p, p.duration).value - p.end_value) < 1e-12);

        const MotionProfile q{shape, -1.2, 0.7, 3.0};
        CHECK(std::abs(evaluate_profile(q, 0.0).value + 1.2) < 1e-12);
        CHECK(std::abs(evaluate_profile(q, 3.0).value - 0.7) < 1e-12);
    }
}

TEST_CASE("rest-to-rest shapes start and end at zero rate") {
    for (const ProfileShape shape : kRestToRest) {
        const MotionProfile p = surface_angle_profile(shape);
        CAPTURE(to_string(shape));
        CHECK(std::abs(evaluate_profile(p, 0.0).rate) < 1e-9);
        CHECK(std::abs(evaluate_profile(p, p.duration).rate) < 1e-9);
    }
}

TEST_CASE("sine profile midpoint by odd symmetry") {
    const MotionProfile p = surface_angle_profile(ProfileShape::Sine);
    CHECK(evaluate_profile(p, 2.5).value == Approx(0.75 * kPi).margin(1e-12));
}

TEST_CASE("parabolic profile reaches the target angle") {
    const MotionProfile p = surface_angle_profile(ProfileShape::Parabolic);
    const ProfileSample end = evaluate_profile(p, 5.0);
    CHECK(end.value == Approx(5.0 * kPi / 6.0).margin(1e-12));
    CHECK(end.value == Approx(2.61799).margin(1e-5));
    // Parabolic is the one shape allowed a nonzero terminal rate.
    CHECK(end.rate == Approx(2.0 * (p.end_value - p.start_value) / 5.0).margin(1e-12));
}

TEST_CASE("rates and accelerations match finite differences of the values") {
    const double h = 1e-6;
    for (const ProfileShape shape : kAllShapes) {
        const MotionProfile p = surface_angle_profile(shape);
        CAPTURE(to_string(shape));
        double peak_rate = 0.0;
        for (int i = 1; i <= 9; ++i)
            peak_rate = std::max(peak_rate,
                                 std::abs(evaluate_profile(p, 0.5 * i).rate));
        for (int i = 1; i <= 9; ++i) {
            const double t = 0.5 * i;
            const ProfileSample s = evaluate_profile(p, t);
            const double fd_rate = (evaluate_profile(p, t + h).value -
                                    evaluate_profile(p, t - h).value) / (2.0 * h);
            const double fd_accel = (evaluate_profile(p, t + h).rate -
                                     evaluate_profile(p, t - h).rate) / (2.0 * h);
            CAPTURE(t);
            CHECK(std::abs(s.rate - fd_rate) <= 1e-4 * std::max(std::abs(s.rate), 1e-3 * peak_rate));
            CHECK(std::abs(s.accel - fd_accel) <=
                  1e-4 * std::max(std::abs(s.accel), 1e-3 * peak_rate));
        }
    }
}

TEST_CASE("profiles are monotone when the target exceeds the start") {
    for (const ProfileShape shape :
         {ProfileShape::Sine, ProfileShape::Polynomial, ProfileShape::Parabolic}) {
        const MotionProfile p = surface_angle_profile(shape);
        CAPTURE(to_string(shape));
        double prev = evaluate_profile(p, 0.0).value;
        for (int i = 1; i <= 100; ++i) {
            const double v = evaluate_profile(p, 5.0 * i / 100.0).value;
            CHECK(v >= prev - 1e-13);
            prev = v;
        }
    }
}

TEST_CASE("evaluation outside the duration is a domain error") {
    const MotionProfile p = surface_angle_profile(ProfileShape::Sine);
    CHECK_THROWS_AS(evaluate_profile(p, -1e-3), std::domain_error);
    CHECK_THROWS_AS(evaluate_profile(p, 5.0 + 1e-3), std::domain_error);
    CHECK_THROWS_AS(evaluate_profile({ProfileShape::Sine, 0.0, 1.0, 0.0}, 0.0),
                    std::domain_error);
}

TEST_CASE("gaussian velocity profile keeps its bell shape") {
    const MotionProfile p = surface_angle_profile(ProfileShape::GaussianVelocity);
    // Peak rate in the middle, symmetric, nonnegative.
    const double mid = evaluate_profile(p, 2.5).rate;
    for (int i = 0; i <= 50; ++i) {
        const double t = 5.0 * i / 50.0;
        const double r = evaluate_profile(p, t).rate;
        CHECK(r >= -1e-15);
        CHECK(r <= mid + 1e-12);
        CHECK(r == Approx(evaluate_profile(p, 5.0 - t).rate).margin(1e-12));
    }
    // Acceleration is odd about the midpoint.
    CHECK(evaluate_profile(p, 1.0).accel ==
          Approx(-evaluate_profile(p, 4.0).accel).margin(1e-12));
}
