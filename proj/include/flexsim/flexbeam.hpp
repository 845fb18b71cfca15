#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "flexsim/params.hpp"
#include "flexsim/profiles.hpp"
#include "flexsim/quadrature.hpp"

namespace flexsim {

/// Cubic polynomial c0 + c1 x + c2 x^2 + c3 x^3.
struct Poly3 {
    std::array<double, 4> c{};

    double value(double x) const { return c[0] + x * (c[1] + x * (c[2] + x * c[3])); }
    double deriv1(double x) const { return c[1] + x * (2.0 * c[2] + 3.0 * x * c[3]); }
    double deriv2(double x) const { return 2.0 * c[2] + 6.0 * x * c[3]; }
    double deriv3() const { return 6.0 * c[3]; }
};

/// Lowest-order polynomials absorbing the three non-homogeneous boundary
/// conditions of the beam: `rotation` carries the end displacement l2*theta2,
/// `root` a unit curvature at x = 0, `tip` a unit curvature at x = l2. Each
/// vanishes at both ends except rotation, and each contributes zero curvature
/// at the other end.
struct BoundaryShapes {
    double l2 = 0.0;
    Poly3 rotation; ///< x
    Poly3 root;     ///< -(1/3) l2 x + x^2/2 - x^3/(6 l2)
    Poly3 tip;      ///< -(1/6) l2 x + x^3/(6 l2)
};

inline BoundaryShapes shape_functions(double l2) {
    if (!(l2 > 0.0)) throw std::domain_error("shape_functions: l2 must be positive");
    BoundaryShapes s;
    s.l2 = l2;
    s.rotation.c = {0.0, 1.0, 0.0, 0.0};
    s.root.c = {0.0, -l2 / 3.0, 0.5, -1.0 / (6.0 * l2)};
    s.tip.c = {0.0, -l2 / 6.0, 0.0, 1.0 / (6.0 * l2)};
    return s;
}

/// Pinned-pinned sine basis of the flexible link, density-orthonormal:
/// integral of rho2 * v_m * v_n over [0, l2] equals delta_mn.
struct ModalBasis {
    int n_modes = 3;
    double l2 = 0.75;
    double rho2 = 1.0;
    double EI = 2.4507;
    std::vector<double> omega; ///< natural frequencies, rad/s, ascending
};

/// omega_n = (n pi / l2)^2 sqrt(EI / rho2).
inline double natural_frequency(const ModalBasis& b, int n) {
    if (n < 1) throw std::domain_error("natural_frequency: n must be >= 1");
    const double k = n * std::numbers::pi / b.l2;
    return k * k * std::sqrt(b.EI / b.rho2);
}

inline ModalBasis make_modal_basis(int n_modes, double l2, double rho2, double EI) {
    ModalBasis b;
    b.n_modes = n_modes;
    b.l2 = l2;
    b.rho2 = rho2;
    b.EI = EI;
    b.omega.resize(static_cast<std::size_t>(n_modes));
    for (int n = 1; n <= n_modes; ++n)
        b.omega[static_cast<std::size_t>(n - 1)] = natural_frequency(b, n);
    return b;
}

inline ModalBasis make_modal_basis(const SystemParams& p) {
    return make_modal_basis(p.n_modes, p.l2, p.rho2, p.EI);
}

inline void check_mode_index(const ModalBasis& b, int n) {
    if (n < 1 || n > b.n_modes)
        throw std::domain_error("mode index outside [1, n_modes]");
}

/// v_n(x) = sqrt(2 / (rho2 l2)) sin(n pi x / l2).
inline double eigenfunction(const ModalBasis& b, int n, double x) {
    check_mode_index(b, n);
    if (x < 0.0 || x > b.l2) throw std::domain_error("eigenfunction: x outside [0, l2]");
    return std::sqrt(2.0 / (b.rho2 * b.l2)) * std::sin(n * std::numbers::pi * x / b.l2);
}

/// d v_n / dx.
inline double eigenfunction_slope(const ModalBasis& b, int n, double x) {
    check_mode_index(b, n);
    if (x < 0.0 || x > b.l2) throw std::domain_error("eigenfunction_slope: x outside [0, l2]");
    const double k = n * std::numbers::pi / b.l2;
    return std::sqrt(2.0 / (b.rho2 * b.l2)) * k * std::cos(k * x);
}

/// Projections of the boundary shape functions on the modal basis. The mass
/// projections weight by rho2; the stiffness projections take the shape
/// derivatives that enter the reporting identities (second for rotation,
/// third for root and tip) and multiply nothing in the assembled solution.
struct ModalConstants {
    std::vector<double> mass_rotation; ///< rho2-weighted, closed form
    std::vector<double> mass_root;     ///< quadrature
    std::vector<double> mass_tip;      ///< quadrature
    std::vector<double> stiff_rotation;///< identically zero
    std::vector<double> stiff_root;
    std::vector<double> stiff_tip;
};

/// Integral of v_n over [0, l2]; vanishes for even n.
inline double eigenfunction_integral(const ModalBasis& b, int n) {
    check_mode_index(b, n);
    const double sign = (n % 2 == 0) ? 0.0 : 2.0;
    return std::sqrt(2.0 / (b.rho2 * b.l2)) * b.l2 * sign / (n * std::numbers::pi);
}

inline ModalConstants modal_constants(const ModalBasis& b, const BoundaryShapes& s,
                                      const GaussLegendre& quad) {
    ModalConstants mc;
    const auto nm = static_cast<std::size_t>(b.n_modes);
    mc.mass_rotation.resize(nm);
    mc.mass_root.resize(nm);
    mc.mass_tip.resize(nm);
    mc.stiff_rotation.assign(nm, 0.0);
    mc.stiff_root.resize(nm);
    mc.stiff_tip.resize(nm);
    const double scale = std::sqrt(2.0 / (b.rho2 * b.l2));
    for (int n = 1; n <= b.n_modes; ++n) {
        const auto i = static_cast<std::size_t>(n - 1);
        const double alt = (n % 2 == 0) ? -1.0 : 1.0; // (-1)^(n+1)
        mc.mass_rotation[i] = b.rho2 * scale * b.l2 * b.l2 * alt / (n * std::numbers::pi);
        mc.mass_root[i] =
            quad.integrate([&](double x) { return eigenfunction(b, n, x) * b.rho2 * s.root.value(x); });
        mc.mass_tip[i] =
            quad.integrate([&](double x) { return eigenfunction(b, n, x) * b.rho2 * s.tip.value(x); });
        // Constant third derivatives reduce the starred integrals to the
        // eigenfunction integral.
        mc.stiff_root[i] = s.root.deriv3() * eigenfunction_integral(b, n);
        mc.stiff_tip[i] = s.tip.deriv3() * eigenfunction_integral(b, n);
    }
    return mc;
}

struct BoundaryTerm {
    double value = 0.0;
    double rate = 0.0;
    double accel = 0.0;
};

/// The three time functions multiplying the boundary shapes at one instant.
struct BoundaryData {
    BoundaryTerm rotation;       ///< theta2(t)
    BoundaryTerm root_curvature; ///< -tau2_rigid(t) / EI
    BoundaryTerm tip_curvature;  ///< omega_ref^2 v_ref'(l2) I3(t)
};

/// Same three terms sampled over the whole time grid. Rotation derivatives
/// are analytic; root and tip use central differences on the grid with
/// one-sided stencils at the endpoints.
struct BoundarySeries {
    std::vector<double> t;
    std::vector<double> rotation, rotation_rate, rotation_accel;
    std::vector<double> root, root_rate, root_accel;
    std::vector<double> tip, tip_rate, tip_accel;

    BoundaryData at(std::size_t k) const {
        BoundaryData bd;
        bd.rotation = {rotation[k], rotation_rate[k], rotation_accel[k]};
        bd.root_curvature = {root[k], root_rate[k], root_accel[k]};
        bd.tip_curvature = {tip[k], tip_rate[k], tip_accel[k]};
        return bd;
    }
};

namespace detail {

inline void finite_difference_series(const std::vector<double>& f, double dt,
                                     std::vector<double>& rate, std::vector<double>& accel) {
    const std::size_t n = f.size();
    rate.assign(n, 0.0);
    accel.assign(n, 0.0);
    if (n < 3) return;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        rate[k] = (f[k + 1] - f[k - 1]) / (2.0 * dt);
        accel[k] = (f[k + 1] - 2.0 * f[k] + f[k - 1]) / (dt * dt);
    }
    rate[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt);
    rate[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dt);
    if (n >= 4) {
        accel[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (dt * dt);
        accel[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / (dt * dt);
    } else {
        accel[0] = accel[1];
        accel[n - 1] = accel[1];
    }
}

} // namespace detail

/// Build the boundary time functions from the joint profile and the rigid
/// torque series. `ref_mode` selects which natural frequency and end slope
/// feed the tip-curvature term (dominant-mode convention).
inline BoundarySeries boundary_series(const SystemParams& p, const ModalBasis& basis,
                                      const MotionProfile& theta2_profile,
                                      std::span<const double> tau2_rigid,
                                      std::span<const double> tgrid, int ref_mode = 1) {
    if (tau2_rigid.size() != tgrid.size())
        throw std::invalid_argument("boundary_series: series/grid size mismatch");
    const std::size_t n = tgrid.size();
    if (n < 2) throw std::invalid_argument("boundary_series: need at least 2 samples");
    BoundarySeries bs;
    bs.t.assign(tgrid.begin(), tgrid.end());
    bs.rotation.resize(n);
    bs.rotation_rate.resize(n);
    bs.rotation_accel.resize(n);
    bs.root.resize(n);
    bs.tip.resize(n);

    const double omega_ref = natural_frequency(basis, ref_mode);
    const double slope_ref = eigenfunction_slope(basis, ref_mode, basis.l2);
    for (std::size_t k = 0; k < n; ++k) {
        const ProfileSample th2 = evaluate_profile(theta2_profile, tgrid[k]);
        bs.rotation[k] = th2.value;
        bs.rotation_rate[k] = th2.rate;
        bs.rotation_accel[k] = th2.accel;
        bs.root[k] = -tau2_rigid[k] / p.EI;
        bs.tip[k] = omega_ref * omega_ref * slope_ref * tip_inertia(p, tgrid[k]);
    }
    const double dt = tgrid[1] - tgrid[0];
    detail::finite_difference_series(bs.root, dt, bs.root_rate, bs.root_accel);
    detail::finite_difference_series(bs.tip, dt, bs.tip_rate, bs.tip_accel);
    return bs;
}

/// Single-instant view of boundary_series (same construction, indexed).
inline BoundaryData boundary_data(const BoundarySeries& series, std::size_t k) {
    return series.at(k);
}

/// Modal load N_n at one instant: boundary accelerations projected on the
/// basis plus the base-motion excitation of link 1, which is spatially
/// constant and integrates against v_n in closed form.
inline double modal_forcing(const SystemParams& p, const ModalBasis& basis,
                            const ModalConstants& mc, const BoundaryData& bd, double theta1,
                            double dtheta1, double ddtheta1, double theta2, int n) {
    check_mode_index(basis, n);
    const auto i = static_cast<std::size_t>(n - 1);
    const double boundary = mc.mass_rotation[i] * bd.rotation.accel +
                            mc.mass_root[i] * bd.root_curvature.accel +
                            mc.mass_tip[i] * bd.tip_curvature.accel;
    const double rel = theta2 - theta1;
    const double base = p.rho2 * p.l1 *
                        (ddtheta1 * std::cos(rel) + dtheta1 * dtheta1 * std::sin(rel)) *
                        eigenfunction_integral(basis, n);
    return -boundary - base;
}

/// Modal coordinate and its first two time derivatives on the grid.
struct OscillatorResponse {
    std::vector<double> value;
    std::vector<double> rate;
    std::vector<double> accel;
};

/// Convolution of the forcing with the sin(omega (t - tau)) / omega kernel,
/// i.e. the response of the undamped oscillator q'' + omega^2 q = N from
/// rest. The forcing is taken piecewise linear between grid samples and each
/// step advances the exact solution of that segment, so the sweep is O(n)
/// and stays well behaved even when omega * dt is large (very stiff beams on
/// the production grid).
inline OscillatorResponse duhamel(std::span<const double> forcing, double omega, double dt) {
    if (!(omega > 0.0)) throw std::domain_error("duhamel: omega must be positive");
    if (!(dt > 0.0)) throw std::domain_error("duhamel: dt must be positive");
    const std::size_t n = forcing.size();
    OscillatorResponse r;
    r.value.assign(n, 0.0);
    r.rate.assign(n, 0.0);
    r.accel.assign(n, 0.0);
    if (n == 0) return r;

    const double w2 = omega * omega;
    const double cw = std::cos(omega * dt);
    const double sw = std::sin(omega * dt);
    double z = 0.0;  // modal coordinate
    double zd = 0.0; // its rate
    r.accel[0] = forcing[0];
    for (std::size_t k = 1; k < n; ++k) {
        const double slope = (forcing[k] - forcing[k - 1]) / dt;
        // particular solution (N_0 + slope s) / w2 plus the free oscillation
        const double osc = z - forcing[k - 1] / w2;
        const double osc_rate = (zd - slope / w2) / omega;
        z = forcing[k] / w2 + osc * cw + osc_rate * sw;
        zd = slope / w2 + omega * (osc_rate * cw - osc * sw);
        r.value[k] = z;
        r.rate[k] = zd;
        r.accel[k] = forcing[k] - w2 * z;
    }
    return r;
}

/// The beam solution on a space-time grid plus everything needed to evaluate
/// it at arbitrary x: w is the transverse deflection measured from the
/// virtual link, y = w + x theta2 the total displacement.
struct DeflectionField {
    std::vector<double> t; ///< time samples
    std::vector<double> x; ///< spatial samples on [0, l2]
    // Row-major over (t, x): index k * x.size() + i.
    std::vector<double> y, w, w_dot, w_ddot;

    ModalBasis basis;
    BoundaryShapes shapes;
    BoundarySeries bounds;
    std::vector<OscillatorResponse> modes;

    std::size_t steps() const { return t.size(); }

    double w_at(double xx, std::size_t k) const {
        double v = shapes.root.value(xx) * bounds.root[k] + shapes.tip.value(xx) * bounds.tip[k];
        for (int n = 1; n <= basis.n_modes; ++n)
            v += eigenfunction(basis, n, xx) * modes[static_cast<std::size_t>(n - 1)].value[k];
        return v;
    }
    double w_rate_at(double xx, std::size_t k) const {
        double v = shapes.root.value(xx) * bounds.root_rate[k] +
                   shapes.tip.value(xx) * bounds.tip_rate[k];
        for (int n = 1; n <= basis.n_modes; ++n)
            v += eigenfunction(basis, n, xx) * modes[static_cast<std::size_t>(n - 1)].rate[k];
        return v;
    }
    double w_accel_at(double xx, std::size_t k) const {
        double v = shapes.root.value(xx) * bounds.root_accel[k] +
                   shapes.tip.value(xx) * bounds.tip_accel[k];
        for (int n = 1; n <= basis.n_modes; ++n)
            v += eigenfunction(basis, n, xx) * modes[static_cast<std::size_t>(n - 1)].accel[k];
        return v;
    }
    double y_at(double xx, std::size_t k) const {
        return w_at(xx, k) + shapes.rotation.value(xx) * bounds.rotation[k];
    }
    /// Spatial curvature of y; the sine modes contribute -(n pi / l2)^2 v_n.
    double y_curvature_at(double xx, std::size_t k) const {
        double v = shapes.root.deriv2(xx) * bounds.root[k] + shapes.tip.deriv2(xx) * bounds.tip[k];
        for (int n = 1; n <= basis.n_modes; ++n) {
            const double kn = n * std::numbers::pi / basis.l2;
            v -= kn * kn * eigenfunction(basis, n, xx) *
                 modes[static_cast<std::size_t>(n - 1)].value[k];
        }
        return v;
    }
};

/// Sample the modal series and boundary terms onto a uniform spatial grid.
inline DeflectionField assemble_field(const ModalBasis& basis, const BoundaryShapes& shapes,
                                      BoundarySeries bounds, std::vector<OscillatorResponse> modes,
                                      int n_x = 41) {
    if (n_x < 2) throw std::invalid_argument("assemble_field: n_x must be >= 2");
    if (modes.size() != static_cast<std::size_t>(basis.n_modes))
        throw std::invalid_argument("assemble_field: mode count mismatch");
    DeflectionField f;
    f.basis = basis;
    f.shapes = shapes;
    f.bounds = std::move(bounds);
    f.modes = std::move(modes);
    f.t = f.bounds.t;
    f.x.resize(static_cast<std::size_t>(n_x));
    for (int i = 0; i < n_x; ++i)
        f.x[static_cast<std::size_t>(i)] = basis.l2 * i / static_cast<double>(n_x - 1);

    const std::size_t nk = f.t.size();
    const std::size_t nx = f.x.size();
    f.y.resize(nk * nx);
    f.w.resize(nk * nx);
    f.w_dot.resize(nk * nx);
    f.w_ddot.resize(nk * nx);
    for (std::size_t k = 0; k < nk; ++k) {
        for (std::size_t i = 0; i < nx; ++i) {
            const double xx = f.x[i];
            const std::size_t idx = k * nx + i;
            f.w[idx] = f.w_at(xx, k);
            f.w_dot[idx] = f.w_rate_at(xx, k);
            f.w_ddot[idx] = f.w_accel_at(xx, k);
            f.y[idx] = f.w[idx] + xx * f.bounds.rotation[k];
        }
    }
    return f;
}

/// Full beam solve for the inverse-dynamics pipeline: boundary terms from the
/// joint profile and rigid torque, modal loads, Duhamel responses, assembly.
inline DeflectionField solve_deflection(const SystemParams& p, const MotionProfile& theta1_profile,
                                        const MotionProfile& theta2_profile,
                                        std::span<const double> tau2_rigid,
                                        std::span<const double> tgrid, int n_x = 41,
                                        int ref_mode = 1) {
    const ModalBasis basis = make_modal_basis(p);
    const BoundaryShapes shapes = shape_functions(p.l2);
    const GaussLegendre quad(p.n_quad, 0.0, p.l2);
    const ModalConstants mc = modal_constants(basis, shapes, quad);
    BoundarySeries bounds = boundary_series(p, basis, theta2_profile, tau2_rigid, tgrid, ref_mode);

    const std::size_t nk = tgrid.size();
    const double dt = tgrid[1] - tgrid[0];
    std::vector<OscillatorResponse> modes;
    modes.reserve(static_cast<std::size_t>(basis.n_modes));
    std::vector<double> forcing(nk);
    for (int n = 1; n <= basis.n_modes; ++n) {
        for (std::size_t k = 0; k < nk; ++k) {
            const ProfileSample th1 = evaluate_profile(theta1_profile, tgrid[k]);
            forcing[k] = modal_forcing(p, basis, mc, bounds.at(k), th1.value, th1.rate, th1.accel,
                                       bounds.rotation[k], n);
        }
        modes.push_back(duhamel(forcing, basis.omega[static_cast<std::size_t>(n - 1)], dt));
    }
    return assemble_field(basis, shapes, std::move(bounds), std::move(modes), n_x);
}

} // namespace flexsim
