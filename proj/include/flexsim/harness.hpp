#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <system_error>
#include <vector>

#include "flexsim/config.hpp"
#include "flexsim/dynamics.hpp"
#include "flexsim/errors.hpp"

namespace flexsim {

/// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline MotionProfile make_theta1_profile(const SimConfig& cfg, ProfileShape shape) {
    return {shape, cfg.theta1_start, cfg.theta1_end, cfg.params.T};
}

inline MotionProfile make_theta2_profile(const SimConfig& cfg, ProfileShape shape) {
    return {shape, cfg.theta2_start, cfg.theta2_end, cfg.params.T};
}

/// Build the contact surface. Auto c0 places the base parabola through the
/// end-effector's initial position; the auto pivot is the base point nearest
/// that position, so rotating and stationary runs share the t = 0 state.
inline RotatingParabola make_surface(const SimConfig& cfg) {
    RotatingParabola surf;
    surf.a0 = cfg.surface_a0;
    surf.b0 = cfg.surface_b0;
    surf.alpha_profile = {cfg.surface_profile, cfg.alpha_start, cfg.alpha_end, cfg.params.T};
    surf.stationary = cfg.surface_mode == SurfaceMode::Stationary;

    const Vec2 ee0 = rigid_tip(cfg.params, cfg.theta1_start, cfg.theta2_start);
    surf.c0 = cfg.surface_c0 ? *cfg.surface_c0
                             : ee0.y - cfg.surface_a0 * ee0.x * ee0.x - cfg.surface_b0 * ee0.x;
    if (cfg.pivot_x && cfg.pivot_y) {
        surf.pivot = {*cfg.pivot_x, *cfg.pivot_y};
    } else {
        RotatingParabola base = surf;
        base.stationary = true;
        base.pivot = {0.0, 0.0};
        surf.pivot = contact_point(base, ee0, 0.0).r;
    }
    return surf;
}

/// One cell of the experiment matrix.
struct RunSpec {
    ProfileShape joint_profile = ProfileShape::Sine;
    SurfaceMode surface_mode = SurfaceMode::Stationary;
    ProfileShape surface_profile = ProfileShape::Sine; ///< ignored when stationary
    SimConfig config;
    std::string label;
};

/// `stationary-<joint>` or `<surfaceProfile>-<jointProfile>`, mirroring the
/// figure captions of the reference study.
inline std::string make_label(ProfileShape joint, SurfaceMode mode, ProfileShape surface) {
    if (mode == SurfaceMode::Stationary) return std::string("stationary-") + to_string(joint);
    return std::string(to_string(surface)) + "-" + to_string(joint);
}

inline RunSpec make_run_spec(const SimConfig& cfg, ProfileShape joint, SurfaceMode mode,
                             ProfileShape surface) {
    RunSpec spec;
    spec.joint_profile = joint;
    spec.surface_mode = mode;
    spec.surface_profile = surface;
    spec.config = cfg;
    spec.config.surface_mode = mode;
    spec.config.surface_profile = surface;
    spec.label = make_label(joint, mode, surface);
    return spec;
}

struct RunSummary {
    double max_abs_Fmag = 0.0;
    double max_abs_tau1 = 0.0;
    double max_abs_tau2 = 0.0;
    double terminal_Fmag = 0.0;
};

/// Per-step record of one run, column-wise, plus the summary.
struct RunResult {
    std::string label;
    std::vector<double> t, theta1, theta2, alpha, r_x, r_y, Fx, Fy, Fmag, tau1, tau2, w_mid;
    RunSummary summary;
};

inline constexpr const char* kRunCsvHeader = "t,theta1,theta2,alpha,r_x,r_y,Fx,Fy,Fmag,tau1,tau2,w_mid";

namespace detail {

inline void write_run_csv(const RunResult& r, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << kRunCsvHeader << '\n';
    for (std::size_t k = 0; k < r.t.size(); ++k) {
        out << format_double(r.t[k]) << ',' << format_double(r.theta1[k]) << ','
            << format_double(r.theta2[k]) << ',' << format_double(r.alpha[k]) << ','
            << format_double(r.r_x[k]) << ',' << format_double(r.r_y[k]) << ','
            << format_double(r.Fx[k]) << ',' << format_double(r.Fy[k]) << ','
            << format_double(r.Fmag[k]) << ',' << format_double(r.tau1[k]) << ','
            << format_double(r.tau2[k]) << ',' << format_double(r.w_mid[k]) << '\n';
    }
}

inline void write_field_csv(const DeflectionField& f, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << "x,t,y,w,w_dot,w_ddot\n";
    const std::size_t nx = f.x.size();
    for (std::size_t k = 0; k < f.t.size(); ++k) {
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t idx = k * nx + i;
            out << format_double(f.x[i]) << ',' << format_double(f.t[k]) << ','
                << format_double(f.y[idx]) << ',' << format_double(f.w[idx]) << ','
                << format_double(f.w_dot[idx]) << ',' << format_double(f.w_ddot[idx]) << '\n';
        }
    }
}

} // namespace detail

/// Execute one run and write `<label>.csv` into out_dir. With dump_field the
/// beam grid goes to `<label>_field.csv`.
inline RunResult run_single(const RunSpec& spec, const std::filesystem::path& out_dir,
                            bool dump_field = false) {
    try {
        const SimConfig& cfg = spec.config;
        const MotionProfile th1 = make_theta1_profile(cfg, spec.joint_profile);
        const MotionProfile th2 = make_theta2_profile(cfg, spec.joint_profile);
        const RotatingParabola surface = make_surface(cfg);

        const InverseDynamicsResult sim =
            inverse_dynamics(cfg.params, th1, th2, surface);

        RunResult r;
        r.label = spec.label;
        const std::size_t n = sim.trajectory.t.size();
        r.t = sim.trajectory.t;
        r.theta1.resize(n);
        r.theta2.resize(n);
        r.alpha.resize(n);
        r.r_x.resize(n);
        r.r_y.resize(n);
        r.Fx.resize(n);
        r.Fy.resize(n);
        r.Fmag.resize(n);
        r.tau1.resize(n);
        r.tau2.resize(n);
        r.w_mid.resize(n);
        const double x_mid = 0.5 * cfg.params.l2;
        for (std::size_t k = 0; k < n; ++k) {
            r.theta1[k] = sim.trajectory.states[k].theta1;
            r.theta2[k] = sim.trajectory.states[k].theta2;
            r.alpha[k] = surface_angle(surface, r.t[k]);
            r.r_x[k] = sim.contacts[k].r.x;
            r.r_y[k] = sim.contacts[k].r.y;
            r.Fx[k] = sim.forces[k].Fx;
            r.Fy[k] = sim.forces[k].Fy;
            r.Fmag[k] = sim.forces[k].Fmag;
            r.tau1[k] = sim.torques[k].tau1;
            r.tau2[k] = sim.torques[k].tau2;
            r.w_mid[k] = sim.field.w_at(x_mid, k);
            r.summary.max_abs_Fmag = std::max(r.summary.max_abs_Fmag, std::abs(r.Fmag[k]));
            r.summary.max_abs_tau1 = std::max(r.summary.max_abs_tau1, std::abs(r.tau1[k]));
            r.summary.max_abs_tau2 = std::max(r.summary.max_abs_tau2, std::abs(r.tau2[k]));
        }
        r.summary.terminal_Fmag = r.Fmag.back();

        std::filesystem::create_directories(out_dir);
        detail::write_run_csv(r, out_dir / (spec.label + ".csv"));
        if (dump_field) detail::write_field_csv(sim.field, out_dir / (spec.label + "_field.csv"));
        return r;
    } catch (const NumericalError& e) {
        throw NumericalError("run '" + spec.label + "': " + e.what());
    }
}

/// Two-column (t, value) plot files for Fmag, tau1, tau2 and the midspan
/// deflection; plain space-separated rows, one per grid step.
inline std::vector<std::filesystem::path> emit_plot_data(const RunResult& r,
                                                         const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::array<std::pair<const char*, const std::vector<double>*>, 4> series{{
        {"fmag", &r.Fmag},
        {"tau1", &r.tau1},
        {"tau2", &r.tau2},
        {"w_mid", &r.w_mid},
    }};
    std::vector<std::filesystem::path> files;
    for (const auto& [name, column] : series) {
        std::filesystem::path path = out_dir / (r.label + "_" + name + ".dat");
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
        for (std::size_t k = 0; k < r.t.size(); ++k)
            out << format_double(r.t[k]) << ' ' << format_double((*column)[k]) << '\n';
        files.push_back(std::move(path));
    }
    return files;
}

inline constexpr std::array<ProfileShape, 3> kJointProfiles{
    ProfileShape::Sine, ProfileShape::Polynomial, ProfileShape::GaussianVelocity};
inline constexpr std::array<ProfileShape, 4> kSurfaceProfiles{
    ProfileShape::Sine, ProfileShape::GaussianVelocity, ProfileShape::Polynomial,
    ProfileShape::Parabolic};

/// The full 15-cell experiment matrix: each joint profile on the stationary
/// surface and under the four surface rotation profiles.
inline std::vector<RunSpec> matrix_specs(const SimConfig& cfg) {
    std::vector<RunSpec> specs;
    specs.reserve(15);
    for (const ProfileShape joint : kJointProfiles) {
        specs.push_back(make_run_spec(cfg, joint, SurfaceMode::Stationary, cfg.surface_profile));
        for (const ProfileShape surf : kSurfaceProfiles)
            specs.push_back(make_run_spec(cfg, joint, SurfaceMode::Rotating, surf));
    }
    return specs;
}

struct MatrixResult {
    std::vector<RunResult> runs;
    std::filesystem::path summary_csv;
    std::filesystem::path report_md;
};

/// Run the whole matrix, emit per-run CSVs and plot files, the summary table
/// and a Markdown ranking report. A failing run aborts the matrix; files of
/// completed runs are left in place.
inline MatrixResult run_matrix(const SimConfig& cfg, const std::filesystem::path& out_dir) {
    MatrixResult mr;
    for (const RunSpec& spec : matrix_specs(cfg)) {
        RunResult r = run_single(spec, out_dir);
        emit_plot_data(r, out_dir);
        mr.runs.push_back(std::move(r));
    }

    mr.summary_csv = out_dir / "matrix_summary.csv";
    {
        std::ofstream out(mr.summary_csv);
        if (!out) throw std::runtime_error("cannot write '" + mr.summary_csv.string() + "'");
        out << "label,max_abs_Fmag,max_abs_tau1,max_abs_tau2,terminal_Fmag\n";
        for (const RunResult& r : mr.runs) {
            out << r.label << ',' << format_double(r.summary.max_abs_Fmag) << ','
                << format_double(r.summary.max_abs_tau1) << ','
                << format_double(r.summary.max_abs_tau2) << ','
                << format_double(r.summary.terminal_Fmag) << '\n';
        }
    }

    mr.report_md = out_dir / "report.md";
    {
        std::ofstream out(mr.report_md);
        if (!out) throw std::runtime_error("cannot write '" + mr.report_md.string() + "'");
        out << "# Experiment matrix\n";
        for (const ProfileShape joint : kJointProfiles) {
            out << "\n## Joint profile: " << to_string(joint) << "\n\n";
            out << "| rank | run | max `|F|` (N) | max `|tau1|` (N m) | max `|tau2|` (N m) | "
                   "terminal `|F|` (N) |\n";
            out << "|---|---|---|---|---|---|\n";
            std::vector<const RunResult*> group;
            for (const RunResult& r : mr.runs) {
                const std::string suffix = std::string("-") + to_string(joint);
                if (r.label.size() >= suffix.size() &&
                    r.label.compare(r.label.size() - suffix.size(), suffix.size(), suffix) == 0)
                    group.push_back(&r);
            }
            std::sort(group.begin(), group.end(), [](const RunResult* a, const RunResult* b) {
                return a->summary.max_abs_Fmag > b->summary.max_abs_Fmag;
            });
            int rank = 1;
            for (const RunResult* r : group) {
                out << "| " << rank++ << " | " << r->label << " | "
                    << format_double(r->summary.max_abs_Fmag) << " | "
                    << format_double(r->summary.max_abs_tau1) << " | "
                    << format_double(r->summary.max_abs_tau2) << " | "
                    << format_double(r->summary.terminal_Fmag) << " |\n";
            }
        }
    }
    return mr;
}

/// Checks the CLI `validate` subcommand runs without simulating: parameter
/// invariants, profile endpoint identities, surface rigidity, and the t = 0
/// contact state. Returns one line per check; throws on the first failure.
inline std::vector<std::string> validate_run_inputs(const SimConfig& cfg) {
    std::vector<std::string> notes;
    validate(cfg.params);
    notes.push_back("parameters: all invariants hold");

    const std::array<std::pair<const char*, MotionProfile>, 3> profiles{{
        {"theta1", make_theta1_profile(cfg, ProfileShape::Sine)},
        {"theta2", make_theta2_profile(cfg, ProfileShape::Sine)},
        {"alpha", {cfg.surface_profile, cfg.alpha_start, cfg.alpha_end, cfg.params.T}},
    }};
    for (const auto& [name, p] : profiles) {
        const double v0 = evaluate_profile(p, 0.0).value;
        const double vT = evaluate_profile(p, p.duration).value;
        if (std::abs(v0 - p.start_value) > 1e-12 || std::abs(vT - p.end_value) > 1e-12)
            throw ConfigError(std::string(name) + ": endpoint values not reproduced");
        notes.push_back(std::string(name) + ": endpoints reproduced exactly");
    }

    const RotatingParabola surf = make_surface(cfg);
    for (const double s : {-0.5, 0.0, 0.4, 1.1}) {
        const double d0 = (surface_point(surf, s, 0.0) - surf.pivot).norm();
        const double d1 = (surface_point(surf, s, cfg.params.T) - surf.pivot).norm();
        if (std::abs(d0 - d1) > 1e-12)
            throw ConfigError("surface rotation is not rigid (isometry violated)");
    }
    notes.push_back("surface: rigid rotation isometry holds");

    const auto fit = coefficients_at(surf, 0.0, surf.pivot.x - 0.4, surf.pivot.x + 0.4);
    if (std::abs(fit[0] - surf.a0) > 1e-10 || std::abs(fit[1] - surf.b0) > 1e-10 ||
        std::abs(fit[2] - surf.c0) > 1e-10)
        throw ConfigError("surface: coefficient refit does not reproduce the base parabola");
    notes.push_back("surface: zero-rotation refit reproduces base coefficients");

    const Vec2 ee0 = rigid_tip(cfg.params, cfg.theta1_start, cfg.theta2_start);
    const ContactPoint cp = contact_point(surf, ee0, 0.0);
    notes.push_back("contact at t=0: gap = " + format_double(cp.gap) + " m");
    if (!cfg.surface_c0 && std::abs(cp.gap) > 1e-9)
        throw ConfigError("auto surface placement failed to touch the end-effector");
    return notes;
}

} // namespace flexsim
