#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "flexsim/errors.hpp"
#include "flexsim/params.hpp"
#include "flexsim/profiles.hpp"

namespace flexsim {

enum class SurfaceMode { Stationary, Rotating };

inline const char* to_string(SurfaceMode m) {
    return m == SurfaceMode::Stationary ? "stationary" : "rotating";
}

/// Everything a run needs: physical parameters, joint and surface-angle
/// endpoints, and the surface geometry choices. Angles are radians.
struct SimConfig {
    SystemParams params = default_params();

    double theta1_start = std::numbers::pi / 6.0;
    double theta1_end = std::numbers::pi / 3.0;
    double theta2_start = std::numbers::pi / 3.0;
    double theta2_end = std::numbers::pi / 2.0;
    double alpha_start = 2.0 * std::numbers::pi / 3.0;
    double alpha_end = 5.0 * std::numbers::pi / 6.0;

    double surface_a0 = 0.5;
    double surface_b0 = 0.0;
    /// When unset, c0 is chosen so the surface passes through the
    /// end-effector's initial position.
    std::optional<double> surface_c0;
    /// When unset, the pivot is the base-parabola point nearest the
    /// end-effector's initial position.
    std::optional<double> pivot_x;
    std::optional<double> pivot_y;

    ProfileShape surface_profile = ProfileShape::Sine;
    SurfaceMode surface_mode = SurfaceMode::Stationary;
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline double parse_number(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || !std::isfinite(v))
        throw ConfigError("key '" + key + "': bad numeric value '" + value + "'");
    return v;
}

inline int parse_count(const std::string& key, const std::string& value) {
    const double v = parse_number(key, value);
    const double r = std::round(v);
    if (std::abs(v - r) > 0.0 || r < 0.0 || r > 1e9)
        throw ConfigError("key '" + key + "': expected a nonnegative integer, got '" + value + "'");
    return static_cast<int>(r);
}

} // namespace detail

inline ProfileShape parse_surface_profile(const std::string& v) {
    if (v == "sine") return ProfileShape::Sine;
    if (v == "polynomial") return ProfileShape::Polynomial;
    if (v == "gaussian") return ProfileShape::GaussianVelocity;
    if (v == "parabolic") return ProfileShape::Parabolic;
    throw ConfigError("surface profile must be sine|polynomial|gaussian|parabolic, got '" + v +
                      "'");
}

inline ProfileShape parse_joint_profile(const std::string& v) {
    const ProfileShape s = parse_surface_profile(v);
    if (s == ProfileShape::Parabolic)
        throw ConfigError("joint profile must be sine|polynomial|gaussian, got '" + v + "'");
    return s;
}

inline SurfaceMode parse_surface_mode(const std::string& v) {
    if (v == "stationary") return SurfaceMode::Stationary;
    if (v == "rotating") return SurfaceMode::Rotating;
    throw ConfigError("surface_mode must be stationary|rotating, got '" + v + "'");
}

/// Parse the flat `key = value` format. Later entries override earlier ones;
/// unknown keys are an error. Derived Ih1/Ih2 are applied after all keys are
/// read so factor and inertia overrides compose in any order.
inline SimConfig parse_config_text(const std::string& text) {
    SimConfig cfg;
    double ih1_factor = 10.0;
    double ih2_factor = 10.0;
    bool c0_is_value = false;
    bool pivot_is_xy = false;
    std::optional<double> c0_value, pivot_x, pivot_y;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string stripped = detail::trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");

        auto num = [&] { return detail::parse_number(key, value); };
        if (key == "l1") cfg.params.l1 = num();
        else if (key == "l2") cfg.params.l2 = num();
        else if (key == "m1") cfg.params.m1 = num();
        else if (key == "rho2") cfg.params.rho2 = num();
        else if (key == "m3_base") cfg.params.m3_base = num();
        else if (key == "m3_growth") cfg.params.m3_growth = num();
        else if (key == "I1") cfg.params.I1 = num();
        else if (key == "Ih1_factor") ih1_factor = num();
        else if (key == "Ih2_factor") ih2_factor = num();
        else if (key == "EI") cfg.params.EI = num();
        else if (key == "Ks") cfg.params.Ks = num();
        else if (key == "K_gyr") cfg.params.K_gyr = num();
        else if (key == "xbar2") cfg.params.xbar2 = num();
        else if (key == "T") cfg.params.T = num();
        else if (key == "dt") cfg.params.dt = num();
        else if (key == "n_modes") cfg.params.n_modes = detail::parse_count(key, value);
        else if (key == "n_quad") cfg.params.n_quad = detail::parse_count(key, value);
        else if (key == "theta1_start") cfg.theta1_start = num();
        else if (key == "theta1_end") cfg.theta1_end = num();
        else if (key == "theta2_start") cfg.theta2_start = num();
        else if (key == "theta2_end") cfg.theta2_end = num();
        else if (key == "alpha_start") cfg.alpha_start = num();
        else if (key == "alpha_end") cfg.alpha_end = num();
        else if (key == "surface_a0") cfg.surface_a0 = num();
        else if (key == "surface_b0") cfg.surface_b0 = num();
        else if (key == "surface_c0_mode") {
            if (value == "auto") c0_is_value = false;
            else if (value == "value") c0_is_value = true;
            else throw ConfigError("surface_c0_mode must be auto|value, got '" + value + "'");
        } else if (key == "surface_c0") c0_value = num();
        else if (key == "pivot_mode") {
            if (value == "auto") pivot_is_xy = false;
            else if (value == "xy") pivot_is_xy = true;
            else throw ConfigError("pivot_mode must be auto|xy, got '" + value + "'");
        } else if (key == "pivot_x") pivot_x = num();
        else if (key == "pivot_y") pivot_y = num();
        else if (key == "surface_profile") cfg.surface_profile = parse_surface_profile(value);
        else if (key == "surface_mode") cfg.surface_mode = parse_surface_mode(value);
        else throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }

    cfg.params.Ih1 = ih1_factor * cfg.params.I1;
    cfg.params.Ih2 = ih2_factor * cfg.params.I2();
    if (c0_is_value) {
        if (!c0_value) throw ConfigError("surface_c0_mode=value requires surface_c0");
        cfg.surface_c0 = c0_value;
    }
    if (pivot_is_xy) {
        if (!pivot_x || !pivot_y) throw ConfigError("pivot_mode=xy requires pivot_x and pivot_y");
        cfg.pivot_x = pivot_x;
        cfg.pivot_y = pivot_y;
    }
    validate(cfg.params);
    return cfg;
}

inline SimConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace flexsim
