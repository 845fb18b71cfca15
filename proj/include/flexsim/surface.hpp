#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "flexsim/errors.hpp"
#include "flexsim/linalg.hpp"
#include "flexsim/profiles.hpp"

namespace flexsim {

/// Nearest surface point to a query, with the local tangent direction.
struct ContactPoint {
    Vec2 r;                     ///< contact coordinates, m
    double s = 0.0;             ///< surface parameter (base-parabola abscissa), m
    double tangent_angle = 0.0; ///< tangent angle with the horizontal, (-pi/2, pi/2]
    double gap = 0.0;           ///< signed distance, m; positive on the left-normal
                                ///< side (concave side of an upward-opening base)
};

/// Parabolic contact surface y = a0 x^2 + b0 x + c0 rotated rigidly about a
/// pivot by the angle profile alpha(t) - alpha(0). A stationary surface keeps
/// the base shape for all t.
struct RotatingParabola {
    double a0 = 0.5;            ///< 1/m
    double b0 = 0.0;            ///< dimensionless
    double c0 = 0.0;            ///< m
    Vec2 pivot;                 ///< rotation center, m
    MotionProfile alpha_profile;///< surface angle alpha(t), rad
    bool stationary = false;

    Vec2 base_point(double s) const { return {s, (a0 * s + b0) * s + c0}; }
    Vec2 base_tangent(double s) const { return {1.0, 2.0 * a0 * s + b0}; }
};

/// Surface angle alpha(t); a stationary surface reports its initial angle.
inline double surface_angle(const RotatingParabola& surf, double t) {
    if (surf.stationary) return evaluate_profile(surf.alpha_profile, 0.0).value;
    return evaluate_profile(surf.alpha_profile, t).value;
}

/// Rigid rotation angle relative to the initial orientation.
inline double rotation_angle(const RotatingParabola& surf, double t) {
    if (surf.stationary) return 0.0;
    return evaluate_profile(surf.alpha_profile, t).value -
           evaluate_profile(surf.alpha_profile, 0.0).value;
}

/// Point of the (possibly rotated) surface at parameter s and time t.
inline Vec2 surface_point(const RotatingParabola& surf, double s, double t) {
    const Vec2 p0 = surf.base_point(s);
    const double phi = rotation_angle(surf, t);
    if (phi == 0.0) return p0;
    return rotate(p0 - surf.pivot, phi) + surf.pivot;
}

/// Tangent vector of the rotated surface at parameter s (not normalized).
inline Vec2 surface_tangent(const RotatingParabola& surf, double s, double t) {
    return rotate(surf.base_tangent(s), rotation_angle(surf, t));
}

namespace detail {

// Derivative of the squared distance (halved): F(s) = (P(s) - q) . P'(s).
// P'' is constant: (0, 2 a0) rotated.
inline double closest_point_objective(const RotatingParabola& surf, Vec2 query, double t,
                                      double s, double* dF = nullptr) {
    const Vec2 p = surface_point(surf, s, t);
    const Vec2 d1 = surface_tangent(surf, s, t);
    const Vec2 diff = p - query;
    if (dF) {
        const Vec2 d2 = rotate({0.0, 2.0 * surf.a0}, rotation_angle(surf, t));
        *dF = d1.dot(d1) + diff.dot(d2);
    }
    return diff.dot(d1);
}

} // namespace detail

/// Nearest point on the surface to `query` at time t. Newton iteration on the
/// stationarity condition, seeded by a bracketing grid of 64 samples, with
/// bisection whenever a Newton step leaves its bracket. Throws NumericalError
/// if no candidate converges within 100 iterations.
inline ContactPoint contact_point(const RotatingParabola& surf, Vec2 query, double t) {
    if (!std::isfinite(query.x) || !std::isfinite(query.y))
        throw NumericalError("contact_point: non-finite query");

    // Any bracket this wide must contain the global minimizer: the base
    // abscissa of a surface point moves at most its distance to the pivot.
    const double d_query = (query - surf.pivot).norm();
    const double d_anchor = (surf.base_point(surf.pivot.x) - surf.pivot).norm();
    const double half_width = 2.0 * (d_query + d_anchor) + 1.0;
    const double s_lo = surf.pivot.x - half_width;
    const double s_hi = surf.pivot.x + half_width;

    constexpr int n_seeds = 64;
    constexpr int max_iter = 100;

    std::array<double, n_seeds> grid_s{};
    std::array<double, n_seeds> grid_f{};
    for (int i = 0; i < n_seeds; ++i) {
        grid_s[static_cast<std::size_t>(i)] =
            s_lo + (s_hi - s_lo) * i / static_cast<double>(n_seeds - 1);
        grid_f[static_cast<std::size_t>(i)] =
            detail::closest_point_objective(surf, query, t, grid_s[static_cast<std::size_t>(i)]);
    }

    double best_s = std::numeric_limits<double>::quiet_NaN();
    double best_d2 = std::numeric_limits<double>::infinity();
    bool converged = false;

    auto consider = [&](double s) {
        const Vec2 diff = surface_point(surf, s, t) - query;
        const double d2 = diff.dot(diff);
        if (d2 < best_d2) {
            best_d2 = d2;
            best_s = s;
        }
    };

    for (int i = 0; i + 1 < n_seeds; ++i) {
        double fa = grid_f[static_cast<std::size_t>(i)];
        double fb = grid_f[static_cast<std::size_t>(i + 1)];
        if (fa == 0.0) {
            consider(grid_s[static_cast<std::size_t>(i)]);
            converged = true;
            continue;
        }
        if (fa * fb > 0.0) continue;
        double a = grid_s[static_cast<std::size_t>(i)];
        double b = grid_s[static_cast<std::size_t>(i + 1)];
        double s = 0.5 * (a + b);
        bool ok = false;
        for (int it = 0; it < max_iter; ++it) {
            double dF = 0.0;
            const double F = detail::closest_point_objective(surf, query, t, s, &dF);
            if (F == 0.0 || std::abs(b - a) < 1e-14 * (1.0 + std::abs(s))) {
                ok = true;
                break;
            }
            if (fa * F < 0.0)
                b = s;
            else {
                a = s;
                fa = F;
            }
            double step = (dF != 0.0) ? s - F / dF : std::numeric_limits<double>::quiet_NaN();
            s = (std::isfinite(step) && step > a && step < b) ? step : 0.5 * (a + b);
        }
        if (!ok) {
            // Bisection shrinks the bracket every pass; reaching here means
            // the objective is not finite on this bracket.
            continue;
        }
        converged = true;
        consider(s);
    }

    // Window endpoints guard queries whose minimizer sits outside every
    // sign-change bracket (cannot happen with the width above, but cheap).
    consider(s_lo);
    consider(s_hi);

    if (!converged)
        throw NumericalError("contact_point: no converged candidate at t = " +
                             std::to_string(t));

    ContactPoint cp;
    cp.s = best_s;
    cp.r = surface_point(surf, best_s, t);
    const Vec2 tan = surface_tangent(surf, best_s, t);
    double ang = std::atan2(tan.y, tan.x);
    if (ang > 0.5 * std::numbers::pi) ang -= std::numbers::pi;
    if (ang <= -0.5 * std::numbers::pi) ang += std::numbers::pi;
    cp.tangent_angle = ang;
    const Vec2 normal{-tan.y, tan.x};
    const Vec2 offset = query - cp.r;
    const double side = normal.dot(offset);
    cp.gap = (side >= 0.0 ? 1.0 : -1.0) * offset.norm();
    return cp;
}

/// Least-squares quadratic refit y = a x^2 + b x + c of the rotated surface
/// over a window of the parameter s, from 32 samples. Reporting aid only; the
/// parametric form stays the ground truth. Throws NonGraphError when the
/// rotated surface is not a graph over the window.
inline std::array<double, 3> coefficients_at(const RotatingParabola& surf, double t,
                                             double s_min, double s_max) {
    if (!(s_max > s_min)) throw ConfigError("coefficients_at: degenerate window");
    constexpr int n_samples = 32;
    std::vector<double> xs(n_samples), ys(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double s = s_min + (s_max - s_min) * i / static_cast<double>(n_samples - 1);
        const Vec2 p = surface_point(surf, s, t);
        xs[static_cast<std::size_t>(i)] = p.x;
        ys[static_cast<std::size_t>(i)] = p.y;
    }
    // A graph needs dX/ds bounded away from zero with one orientation; a
    // near-vertical tangent collapses the abscissa spacing to rounding noise.
    const double ds = (s_max - s_min) / (n_samples - 1);
    const double dx0 = xs[1] - xs[0];
    for (int i = 0; i + 1 < n_samples; ++i) {
        const double dx = xs[static_cast<std::size_t>(i + 1)] - xs[static_cast<std::size_t>(i)];
        if (std::abs(dx) <= 1e-8 * ds || dx * dx0 <= 0.0)
            throw NonGraphError("coefficients_at: surface is not a graph over the window");
    }

    // Normal equations in centered coordinates for conditioning.
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n_samples;
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0, b0 = 0, b1 = 0, b2 = 0;
    for (int i = 0; i < n_samples; ++i) {
        const double u = xs[static_cast<std::size_t>(i)] - mean;
        const double y = ys[static_cast<std::size_t>(i)];
        const double u2 = u * u;
        s1 += u;
        s2 += u2;
        s3 += u2 * u;
        s4 += u2 * u2;
        b0 += y;
        b1 += u * y;
        b2 += u2 * y;
    }
    const double n = n_samples;
    const auto sol = solve3({{{s4, s3, s2}, {s3, s2, s1}, {s2, s1, n}}}, {b2, b1, b0});
    const double a = sol[0];
    const double b = sol[1] - 2.0 * a * mean;
    const double c = sol[2] - sol[1] * mean + a * mean * mean;
    return {a, b, c};
}

} // namespace flexsim
