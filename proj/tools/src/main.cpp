#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "config_file.hpp"
#include "csv.hpp"
#include "dwal/errors.hpp"
#include "dwal/observables.hpp"
#include "manifest.hpp"
#include "presets.hpp"
#include "runner.hpp"
#include "validate.hpp"

namespace {

using namespace dwal;
using namespace dwal::tools;

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::string name;
    std::string out_dir;
    int m_modes = -1;
    double omega_up = -1.0;
    double dt = -1.0;
    double t_end = -1.0;
    double tau = -1.0;
    double sample_every = -1.0;
    std::string integrator;
    std::string frame;
};

void attach_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("-c,--config", a.config_path, "key = value config file");
    cmd->add_option("-p,--preset", a.preset, "scenario preset name")
        ->check(CLI::IsMember(preset_names()));
    cmd->add_option("--name", a.name, "run name (output subdirectory)");
    cmd->add_option("-o,--out", a.out_dir, "output root (default $DWAL_OUT_ROOT or ./out)");
    cmd->add_option("-M,--m-modes", a.m_modes, "number of discretized continuum modes");
    cmd->add_option("--omega-up", a.omega_up, "discretization cutoff, rad/s");
    cmd->add_option("--dt", a.dt, "fixed step size, s");
    cmd->add_option("--t-end", a.t_end, "integration horizon, s");
    cmd->add_option("--tau", a.tau, "outcoupling pulse duration, s");
    cmd->add_option("--sample-every", a.sample_every, "output sampling interval, s");
    cmd->add_option("--integrator", a.integrator, "rk4 | rk45")
        ->check(CLI::IsMember({"rk4", "rk45"}));
    cmd->add_option("--frame", a.frame, "interaction | direct")
        ->check(CLI::IsMember({"interaction", "direct"}));
}

RunConfig assemble(const CommonArgs& a) {
    RunConfig rc;
    if (!a.preset.empty()) {
        auto p = find_preset(a.preset);
        if (!p) throw ConfigError("unknown preset '" + a.preset + "'");
        rc = *p;
    }
    if (!a.config_path.empty()) rc = load_config_file(a.config_path, rc);
    if (!a.name.empty()) rc.name = a.name;
    if (a.m_modes > 0) rc.m_modes = a.m_modes;
    if (a.omega_up > 0) rc.omega_up = a.omega_up;
    if (a.dt > 0) rc.evolution.dt = a.dt;
    if (a.t_end > 0) rc.evolution.t_end = a.t_end;
    if (a.tau >= 0) rc.evolution.tau = a.tau;
    if (a.sample_every > 0) rc.evolution.sample_every = a.sample_every;
    if (!a.integrator.empty())
        rc.evolution.integrator = a.integrator == "rk4" ? IntegratorKind::FixedRk4
                                                        : IntegratorKind::AdaptiveRk45;
    if (!a.frame.empty())
        rc.evolution.frame = a.frame == "interaction" ? Frame::Interaction : Frame::Direct;
    return rc;
}

std::filesystem::path output_root(const CommonArgs& a) {
    if (!a.out_dir.empty()) return a.out_dir;
    if (const char* env = std::getenv("DWAL_OUT_ROOT"); env && *env) return env;
    return "out";
}

int cmd_derive(const CommonArgs& args) {
    const RunConfig rc = assemble(args);
    DerivedParams d = derive_params(rc.physical);
    d.S = tail_shift(rc.physical.Lambda, rc.physical.omega_z, rc.omega_up);

    auto& os = std::cout;
    os << "derived parameters (" << rc.name << ")\n";
    os << "  l_z                = " << format_double(d.l_z) << " m\n";
    os << "  l_x                = " << format_double(d.l_x) << " m\n";
    os << "  omega_o (exact)    = " << format_double(d.omega_o_exact) << " 1/s\n";
    os << "  omega_o (approx)   = " << format_double(d.omega_o_approx) << " 1/s\n";
    os << "  J                  = " << format_double(d.J) << " 1/s\n";
    os << "  kappa              = " << format_double(d.kappa) << " 1/s\n";
    os << "  overlap e^{-eta^2} = " << format_double(d.overlap) << "\n";
    os << "  N_max              = " << format_double(d.n_max) << "\n";
    os << "  S (omega_up = " << format_double(rc.omega_up) << ") = "
       << format_double(d.S) << " 1/s\n";
    os << "  J_eff = J - S e^{-eta^2} = " << format_double(d.J - d.S * d.overlap)
       << " 1/s\n";

    const auto lm = josephson_landmarks(rc.physical.omega_z, rc.physical.lambda);
    os << "josephson landmarks over eta in [1, 4]\n";
    if (lm.eta_zero)
        os << "  bare J zero at eta  = " << format_double(*lm.eta_zero) << "\n";
    else
        os << "  bare J keeps one sign on the interval\n";
    os << "  J minimum at eta    = " << format_double(lm.eta_min) << " (J = "
       << format_double(lm.j_at_min) << " 1/s)\n";
    if (const auto ez = effective_coupling_zero(rc.physical.omega_z,
                                                rc.physical.lambda, d.S))
        os << "  effective (J - S e^{-eta^2}) zero at eta = " << format_double(*ez)
           << " for this Lambda\n";

    os << "validity checks\n";
    for (const auto& c : d.checks)
        os << "  [" << (c.satisfied ? "ok" : "marginal") << "] " << c.name << ": "
           << c.detail << " = " << format_double(c.ratio) << " (margin "
           << format_double(c.margin) << ")\n";
    return 0;
}

int cmd_run(const CommonArgs& args, const RunOptions& opts) {
    const RunConfig rc = assemble(args);
    const RunOutput out = run_simulation(rc, opts);
    const auto dir = output_root(args) / rc.name;
    write_run_files(out, dir, opts);

    const auto& last = out.trajectory.last();
    std::cout << "run '" << rc.name << "' finished: t = " << format_double(last.t)
              << " s, N_A = " << format_double(last.n_a) << ", N_B = "
              << format_double(last.n_b) << ", N_C = " << format_double(last.n_c)
              << "\n  norm drift " << format_double(out.trajectory.norm_drift)
              << ", " << out.trajectory.steps << " steps, "
              << format_double(out.wall_time_sec) << " s wall\n";
    for (const auto& w : out.trajectory.warnings)
        std::cout << "  warning: " << w << "\n";
    std::cout << "  wrote " << dir.string() << "\n";
    return 0;
}

int cmd_scan(const CommonArgs& args, const std::string& axis,
             std::vector<double> values, double from, double to, double step,
             const ScanOptions& opts) {
    if (values.empty()) {
        if (!(step > 0) || !(to >= from))
            throw ConfigError("scan needs --values or a valid --from/--to/--step");
        for (double v = from; v <= to + 1e-12 * std::max(1.0, std::abs(to)); v += step)
            values.push_back(v);
    }
    const RunConfig base = assemble(args);
    const ScanResult scan = scan_steady(base, axis, values, opts);
    const auto dir = output_root(args) / (base.name + "-scan-" + axis);
    write_scan_files(scan, base, values, dir);

    for (const auto& p : scan.points) {
        std::cout << axis << " = " << format_double(p.axis_value) << ": ";
        if (p.failed) std::cout << "failed (" << p.error << ")";
        else if (p.steady) std::cout << "steady N_A = " << format_double(p.steady_value);
        else std::cout << "no steady state (beat " << format_double(p.beat_amplitude) << ")";
        std::cout << "\n";
    }
    std::cout << "wrote " << dir.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dwal — two-mode condensate outcoupling into a discretized 1D continuum"};
    app.require_subcommand(1);
    app.set_version_flag("--version", artifact_version);

    CommonArgs derive_args;
    auto* derive = app.add_subcommand("derive", "print derived model coefficients and validity checks");
    attach_common(derive, derive_args);

    CommonArgs run_args;
    RunOptions run_opts;
    auto* run = app.add_subcommand("run", "integrate one scenario and write CSV + manifest");
    attach_common(run, run_args);
    run->add_flag("--allow-beyond-recurrence", run_opts.allow_beyond_recurrence,
                  "override the recurrence-time guard (tail dynamics become grid artifacts)");
    run->add_option("--zoom-max", run_opts.zoom_max_omega,
                    "upper edge of the low-frequency zoom emission, rad/s");

    CommonArgs scan_args;
    ScanOptions scan_opts;
    std::string axis;
    std::vector<double> values;
    double from = 0.0, to = -1.0, step = -1.0;
    auto* scan = app.add_subcommand("scan", "steady-state scan over Lambda or eta");
    attach_common(scan, scan_args);
    scan->add_option("--axis", axis, "scan axis")->required()
        ->check(CLI::IsMember({"Lambda", "eta"}));
    scan->add_option("--values", values, "explicit scan values")->delimiter(',');
    scan->add_option("--from", from, "scan start");
    scan->add_option("--to", to, "scan end");
    scan->add_option("--step", step, "scan step");
    scan->add_option("-w,--workers", scan_opts.workers, "concurrent scan workers");
    scan->add_option("--tail-fraction", scan_opts.tail_fraction,
                     "trailing fraction of the series used for the steady read");
    scan->add_option("--threshold-frac", scan_opts.threshold_frac,
                     "steady peak-to-peak bound as a fraction of N");
    scan->add_flag("--allow-beyond-recurrence", scan_opts.allow_beyond_recurrence,
                   "override the recurrence-time guard for every point");

    auto* validate = app.add_subcommand("validate", "run the reduced invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (derive->parsed()) return cmd_derive(derive_args);
        if (run->parsed()) return cmd_run(run_args, run_opts);
        if (scan->parsed()) return cmd_scan(scan_args, axis, values, from, to, step, scan_opts);
        if (validate->parsed()) {
            const int failures = dwal::tools::run_validation(std::cout);
            return failures == 0 ? 0 : 1;
        }
    } catch (const dwal::tools::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "invalid input: " << ex.what() << "\n";
        return 2;
    } catch (const dwal::NumericalError& ex) {
        std::cerr << "numerical failure: " << ex.what() << "\n";
        return 3;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
