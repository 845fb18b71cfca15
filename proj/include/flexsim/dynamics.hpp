#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "flexsim/flexbeam.hpp"
#include "flexsim/linalg.hpp"
#include "flexsim/params.hpp"
#include "flexsim/profiles.hpp"
#include "flexsim/quadrature.hpp"
#include "flexsim/surface.hpp"

namespace flexsim {

struct JointState {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double dtheta1 = 0.0;
    double dtheta2 = 0.0;
    double ddtheta1 = 0.0;
    double ddtheta2 = 0.0;
    double t = 0.0;
};

/// Uniform grid over [0, T]; the final sample lands exactly on T when dt
/// divides the duration.
inline std::vector<double> make_time_grid(double T, double dt) {
    const auto steps = static_cast<std::size_t>(std::floor(T / dt + 1e-9));
    std::vector<double> t(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) t[k] = static_cast<double>(k) * dt;
    if (std::abs(t[steps] - T) <= 1e-9 * std::max(1.0, T)) t[steps] = T;
    return t;
}

struct JointTrajectory {
    std::vector<double> t;
    std::vector<JointState> states;
};

inline JointTrajectory sample_trajectory(const MotionProfile& theta1_profile,
                                         const MotionProfile& theta2_profile,
                                         std::span<const double> tgrid) {
    JointTrajectory traj;
    traj.t.assign(tgrid.begin(), tgrid.end());
    traj.states.resize(tgrid.size());
    for (std::size_t k = 0; k < tgrid.size(); ++k) {
        const ProfileSample a = evaluate_profile(theta1_profile, tgrid[k]);
        const ProfileSample b = evaluate_profile(theta2_profile, tgrid[k]);
        traj.states[k] = {a.value, b.value, a.rate, b.rate, a.accel, b.accel, tgrid[k]};
    }
    return traj;
}

/// Spatial integrals of the deflection field entering the equations of
/// motion. Zero-initialized defaults give the rigid expressions.
struct FieldIntegrals {
    double w = 0.0;         ///< int w dx
    double w_sq = 0.0;      ///< int w^2 dx
    double w_rate = 0.0;    ///< int w_dot dx
    double w_accel = 0.0;   ///< int w_ddot dx
    double x_w_accel = 0.0; ///< int x w_ddot dx
    double w_w_rate = 0.0;  ///< int w w_dot dx
};

inline FieldIntegrals field_integrals(const DeflectionField& field, std::size_t k,
                                      const GaussLegendre& quad) {
    FieldIntegrals fi;
    const auto& xs = quad.nodes();
    const auto& ws = quad.weights();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double w = field.w_at(xs[i], k);
        const double wd = field.w_rate_at(xs[i], k);
        const double wdd = field.w_accel_at(xs[i], k);
        fi.w += ws[i] * w;
        fi.w_sq += ws[i] * w * w;
        fi.w_rate += ws[i] * wd;
        fi.w_accel += ws[i] * wdd;
        fi.x_w_accel += ws[i] * xs[i] * wdd;
        fi.w_w_rate += ws[i] * w * wd;
    }
    return fi;
}

/// Manipulator inertia matrix. The deflection integrals add the flexible
/// coupling; with zero integrals this is the rigid matrix.
inline Mat2 inertia_matrix(const SystemParams& p, const JointState& st,
                           const FieldIntegrals& fi = {}) {
    const double m3 = tip_mass(p, st.t);
    const double rel = st.theta2 - st.theta1;
    Mat2 m;
    m.a11 = p.I1 + p.Ih1 + p.m2() * p.l1 * p.l1 + m3 * p.l1 * p.l1;
    m.a12 = (p.m2() * p.l1 * p.xbar2 + m3 * p.l1 * p.l2) * std::cos(rel) -
            p.rho2 * p.l1 * std::sin(rel) * fi.w;
    m.a21 = m.a12;
    m.a22 = p.I2() + p.Ih2 + m3 * p.l2 * p.l2 + p.rho2 * fi.w_sq;
    return m;
}

/// Coriolis and centripetal column, including the deflection-rate terms.
inline Vec2 coriolis(const SystemParams& p, const JointState& st, const FieldIntegrals& fi = {}) {
    const double m3 = tip_mass(p, st.t);
    const double rel = st.theta2 - st.theta1;
    const double srel = std::sin(rel);
    const double crel = std::cos(rel);
    const double mix = p.m2() * p.l1 * p.xbar2 + m3 * p.l1 * p.l2;
    Vec2 v;
    v.x = -mix * st.dtheta2 * st.dtheta2 * srel +
          p.rho2 * p.l1 *
              ((fi.w_accel - fi.w * st.dtheta2 * st.dtheta2) * crel -
               2.0 * fi.w_rate * st.dtheta2 * srel);
    v.y = mix * st.dtheta1 * st.dtheta1 * srel +
          p.rho2 * (-2.0 * fi.w_w_rate * st.dtheta2 + fi.x_w_accel +
                    p.l1 * fi.w * st.dtheta1 * st.dtheta1 * crel);
    return v;
}

/// Transpose Jacobian mapping tip force to joint torques. Row 1 is the
/// derivative of the tip position with respect to a hub-1 rotation carrying
/// link 2 along; row 2 with respect to the relative hub-2 rotation.
inline Mat2 jacobian_transpose(const SystemParams& p, const JointState& st) {
    const double s1 = std::sin(st.theta1), c1 = std::cos(st.theta1);
    const double s2 = std::sin(st.theta2), c2 = std::cos(st.theta2);
    Mat2 jt;
    jt.a11 = -p.l1 * s1 - p.l2 * s2;
    jt.a12 = p.l1 * c1 + p.l2 * c2;
    jt.a21 = -p.l2 * s2;
    jt.a22 = p.l2 * c2;
    return jt;
}

/// Rigid end-effector position in the virtual-link coordinates.
inline Vec2 rigid_tip(const SystemParams& p, double theta1, double theta2) {
    return {p.l1 * std::cos(theta1) + p.l2 * std::cos(theta2),
            p.l1 * std::sin(theta1) + p.l2 * std::sin(theta2)};
}

/// Spring contact force plus the tip-mass inertia terms, and its joint-space
/// image through the transpose Jacobian.
struct ContactForce {
    double Fx = 0.0;
    double Fy = 0.0;
    double Fmag = 0.0;
    Vec2 joint_torque; ///< transpose Jacobian applied to (Fx, Fy)
};

inline ContactForce contact_forces(const SystemParams& p, const JointState& st, Vec2 r) {
    const double m3 = tip_mass(p, st.t);
    const double s1 = std::sin(st.theta1), c1 = std::cos(st.theta1);
    const double s2 = std::sin(st.theta2), c2 = std::cos(st.theta2);
    const double d1sq = st.dtheta1 * st.dtheta1;
    const double d2sq = st.dtheta2 * st.dtheta2;
    ContactForce f;
    f.Fx = p.Ks * (r.x - p.l1 * c1 - p.l2 * c2) +
           m3 * (p.l1 * st.ddtheta1 * s1 + p.l1 * d1sq * c1 + p.l2 * st.ddtheta2 * s2 +
                 p.l2 * d2sq * c2);
    f.Fy = p.Ks * (r.y - p.l1 * s1 - p.l2 * s2) +
           m3 * (p.l1 * d1sq * s1 - p.l1 * st.ddtheta1 * c1 + p.l2 * d2sq * s2 -
                 p.l2 * st.ddtheta2 * c2);
    f.Fmag = std::hypot(f.Fx, f.Fy);
    f.joint_torque = jacobian_transpose(p, st) * Vec2{f.Fx, f.Fy};
    return f;
}

/// Joint torques split into their three sources; tau1/tau2 are the exact
/// component sums.
struct TorqueRecord {
    double tau1 = 0.0;
    double tau2 = 0.0;
    Vec2 inertial; ///< M(theta) thetaddot
    Vec2 velocity; ///< Coriolis / centripetal column
    Vec2 contact;  ///< transpose-Jacobian contact torque
};

inline TorqueRecord make_torque_record(const Mat2& m, const JointState& st, Vec2 vel,
                                       Vec2 contact) {
    TorqueRecord rec;
    rec.inertial = m * Vec2{st.ddtheta1, st.ddtheta2};
    rec.velocity = vel;
    rec.contact = contact;
    rec.tau1 = rec.inertial.x + rec.velocity.x + rec.contact.x;
    rec.tau2 = rec.inertial.y + rec.velocity.y + rec.contact.y;
    return rec;
}

/// Torque series with the link kept rigid (all deflection integrals zero).
/// The tau2 column feeds the beam's root-curvature boundary condition.
struct RigidSolution {
    std::vector<double> tau1;
    std::vector<double> tau2;
    std::vector<ContactPoint> contacts;
    std::vector<ContactForce> forces;
};

inline RigidSolution rigid_torque(const SystemParams& p, const JointTrajectory& traj,
                                  const RotatingParabola& surface) {
    const std::size_t n = traj.states.size();
    RigidSolution sol;
    sol.tau1.resize(n);
    sol.tau2.resize(n);
    sol.contacts.resize(n);
    sol.forces.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const JointState& st = traj.states[k];
        sol.contacts[k] = contact_point(surface, rigid_tip(p, st.theta1, st.theta2), st.t);
        sol.forces[k] = contact_forces(p, st, sol.contacts[k].r);
        const TorqueRecord rec = make_torque_record(inertia_matrix(p, st), st, coriolis(p, st),
                                                    sol.forces[k].joint_torque);
        sol.tau1[k] = rec.tau1;
        sol.tau2[k] = rec.tau2;
    }
    return sol;
}

/// One full run: joint states, contact data, torques, and the beam field.
struct InverseDynamicsResult {
    JointTrajectory trajectory;
    std::vector<ContactPoint> contacts;
    std::vector<ContactForce> forces;
    std::vector<TorqueRecord> torques;
    DeflectionField field;
};

/// Inverse-dynamics pipeline: (i) sample the joint profiles, (ii) rigid
/// torque pass, (iii) beam solve driven by the rigid tau2, (iv) torques from
/// the full flexible inertia and velocity terms. Contact forces use the
/// rigid tip coordinates throughout, so step (iv) reuses the step (ii)
/// series.
inline InverseDynamicsResult inverse_dynamics(const SystemParams& p,
                                              const MotionProfile& theta1_profile,
                                              const MotionProfile& theta2_profile,
                                              const RotatingParabola& surface, int n_x = 41) {
    const std::vector<double> tgrid = make_time_grid(p.T, p.dt);
    InverseDynamicsResult out;
    out.trajectory = sample_trajectory(theta1_profile, theta2_profile, tgrid);

    RigidSolution rigid = rigid_torque(p, out.trajectory, surface);
    out.field = solve_deflection(p, theta1_profile, theta2_profile, rigid.tau2, tgrid, n_x);

    const GaussLegendre quad(p.n_quad, 0.0, p.l2);
    const std::size_t n = tgrid.size();
    out.torques.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const JointState& st = out.trajectory.states[k];
        const FieldIntegrals fi = field_integrals(out.field, k, quad);
        out.torques[k] = make_torque_record(inertia_matrix(p, st, fi), st, coriolis(p, st, fi),
                                            rigid.forces[k].joint_torque);
    }
    out.contacts = std::move(rigid.contacts);
    out.forces = std::move(rigid.forces);
    return out;
}

} // namespace flexsim
