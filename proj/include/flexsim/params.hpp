#pragma once

#include <stdexcept>
#include <string>

#include "flexsim/errors.hpp"

namespace flexsim {

/// Physical constants of the two-link rigid-flexible arm and the run grid.
/// Members use the conventional symbols: link 1 is rigid, link 2 is the
/// flexible beam, the tip payload mass grows linearly over the motion.
struct SystemParams {
    double l1 = 0.5;        ///< rigid link length, m
    double l2 = 0.75;       ///< flexible link length, m
    double m1 = 0.5;        ///< link-1 mass, kg
    double rho2 = 1.0;      ///< link-2 linear density, kg/m
    double m3_base = 0.15;  ///< tip mass at t = 0, kg
    double m3_growth = 0.15;///< tip mass added linearly by t = T, kg
    double I1 = 0.0834;     ///< link-1 inertia, kg m^2
    double Ih1 = 0.834;     ///< hub-1 inertia, kg m^2
    double Ih2 = 1.40625;   ///< hub-2 inertia, kg m^2
    double EI = 2.4507;     ///< flexural rigidity of link 2, N m^2
    double Ks = 1000.0;     ///< contact spring stiffness, N/m
    double K_gyr = 0.05;    ///< tip radius of gyration, m
    double xbar2 = 0.375;   ///< link-2 centroid offset from joint 2, m
    double T = 5.0;         ///< motion duration, s
    double dt = 0.005;      ///< time step, s
    int n_modes = 3;        ///< assumed modes
    int n_quad = 64;        ///< Gauss-Legendre points on [0, l2]

    /// Link-2 mass, kg (uniform beam).
    double m2() const { return l2 * rho2; }
    /// Link-2 inertia about joint 2, kg m^2 (uniform beam).
    double I2() const { return l2 * l2 * l2 * rho2 / 3.0; }
};

/// Parameters of the reference study. Hub inertias are ten times the
/// corresponding link inertias; values the study leaves free (rho2, Ks,
/// K_gyr, xbar2) take the documented defaults.
inline SystemParams default_params() {
    SystemParams p;
    p.Ih1 = 10.0 * p.I1;
    p.Ih2 = 10.0 * p.I2();
    p.xbar2 = 0.5 * p.l2;
    return p;
}

/// Throws ConfigError if any invariant is violated.
inline void validate(const SystemParams& p) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be strictly positive");
    };
    positive(p.l1, "l1");
    positive(p.l2, "l2");
    positive(p.m1, "m1");
    positive(p.rho2, "rho2");
    positive(p.I1, "I1");
    positive(p.Ih1, "Ih1");
    positive(p.Ih2, "Ih2");
    positive(p.EI, "EI");
    positive(p.Ks, "Ks");
    positive(p.T, "T");
    positive(p.dt, "dt");
    if (p.m3_base < 0.0 || p.m3_growth < 0.0)
        throw ConfigError("tip mass terms must be nonnegative");
    if (p.K_gyr < 0.0) throw ConfigError("K_gyr must be nonnegative");
    if (!(p.xbar2 > 0.0) || p.xbar2 > p.l2)
        throw ConfigError("xbar2 must lie in (0, l2]");
    if (p.n_modes < 1) throw ConfigError("n_modes must be at least 1");
    if (p.n_quad < 2) throw ConfigError("n_quad must be at least 2");
    if (p.dt >= p.T) throw ConfigError("dt must be smaller than T");
}

/// Tip mass m3(t) = m3_base + m3_growth * t / T. Throws std::domain_error
/// for t outside [0, T].
inline double tip_mass(const SystemParams& p, double t) {
    if (t < 0.0 || t > p.T)
        throw std::domain_error("tip_mass: t outside [0, T]");
    return p.m3_base + p.m3_growth * t / p.T;
}

/// Tip rotary inertia I3(t) = m3(t) * K_gyr^2.
inline double tip_inertia(const SystemParams& p, double t) {
    return tip_mass(p, t) * p.K_gyr * p.K_gyr;
}

} // namespace flexsim
