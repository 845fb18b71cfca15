#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "flexsim/errors.hpp"

namespace flexsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

/// 2x2 matrix, row-major.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    Vec2 operator*(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
};

/// Rotate v by angle (counterclockwise).
inline Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Solve a 3x3 linear system with partial pivoting. Used by the small
/// least-squares fits; not a general-purpose solver.
inline std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> a,
                                    std::array<double, 3> b) {
    for (std::size_t col = 0; col < 3; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) throw NumericalError("solve3: singular matrix");
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = col + 1; r < 3; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double s = b[static_cast<std::size_t>(r)];
        for (std::size_t c = static_cast<std::size_t>(r) + 1; c < 3; ++c)
            s -= a[static_cast<std::size_t>(r)][c] * x[c];
        x[static_cast<std::size_t>(r)] = s / a[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
    }
    return x;
}

} // namespace flexsim
