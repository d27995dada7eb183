#include "validate.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>
#include <vector>

#include "csv.hpp"
#include "dwal/constants.hpp"
#include "dwal/dynamics.hpp"
#include "dwal/errors.hpp"
#include "dwal/grid.hpp"
#include "dwal/model.hpp"
#include "dwal/observables.hpp"
#include "dwal/propagator.hpp"
#include "runner.hpp"

namespace dwal::tools {

namespace {

// ---- small numeric helpers (oracle side; deliberately independent of the
// ---- closed forms they check)

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double erf_series(double x) {
    // Taylor series, adequate for |x| <= 3
    double term = x, sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x * x / n;
        sum += term / (2 * n + 1);
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return 2.0 / std::sqrt(pi) * sum;
}

// Ground-state Gaussians of the two wells and the double-well operator,
// reduced to the merging axis; the transverse factors contribute
// (omega_y + omega_z)/2 times the axis overlap.
struct AxisModel {
    double l, s, omega_x, mass;
    double xa(double x) const {
        return std::pow(pi, -0.25) / std::sqrt(l) * std::exp(-x * x / (2 * l * l));
    }
    double xb(double x) const {
        const double u = x - s;
        return std::pow(pi, -0.25) / std::sqrt(l) * std::exp(-u * u / (2 * l * l));
    }
    double xb_dd(double x) const {  // second derivative of xb
        const double u = x - s;
        return (u * u / (l * l * l * l) - 1.0 / (l * l)) * xb(x);
    }
    double xa_dd(double x) const {
        return (x * x / (l * l * l * l) - 1.0 / (l * l)) * xa(x);
    }
    double vx(double x) const {  // double-well axis potential
        const double d = std::abs(x - 0.5 * s) - 0.5 * s;
        return 0.5 * mass * omega_x * omega_x * d * d;
    }
};

double quadrature_J(const PhysicalConfig& cfg) {
    const double omega_x = cfg.omega_z / cfg.lambda;
    AxisModel m{std::sqrt(hbar / (cfg.mass_kg * omega_x)), 0.0, omega_x, cfg.mass_kg};
    m.s = 2.0 * cfg.eta * m.l;

    const auto integrand = [&](double x) {
        return m.xa(x) * (-hbar * hbar / (2 * cfg.mass_kg) * m.xb_dd(x)
                          + m.vx(x) * m.xb(x));
    };
    const double x_part =
        simpson(integrand, -9 * m.l, m.s + 9 * m.l, 20000) / hbar;
    const double cross_overlap = std::exp(-cfg.eta * cfg.eta);
    return x_part + cross_overlap * 0.5 * (omega_x + cfg.omega_z);
}

double quadrature_omega_o(const PhysicalConfig& cfg) {
    const double omega_x = cfg.omega_z / cfg.lambda;
    AxisModel m{std::sqrt(hbar / (cfg.mass_kg * omega_x)), 0.0, omega_x, cfg.mass_kg};
    m.s = 2.0 * cfg.eta * m.l;

    const auto integrand = [&](double x) {
        return m.xa(x) * (-hbar * hbar / (2 * cfg.mass_kg) * m.xa_dd(x)
                          + m.vx(x) * m.xa(x));
    };
    const double x_part = simpson(integrand, -9 * m.l, m.s + 9 * m.l, 20000) / hbar;
    return x_part + 0.5 * (omega_x + cfg.omega_z);
}

struct Check {
    std::string name;
    bool ok = false;
    std::string detail;
};

PhysicalConfig baseline() {
    PhysicalConfig cfg;
    cfg.Lambda = 100.0;
    cfg.eta = 1.7;
    return cfg;
}

double max_deviation(const AmplitudeState& x, const AmplitudeState& y) {
    double dev = std::abs(x.a - y.a);
    dev = std::max(dev, std::abs(x.b - y.b));
    for (size_t j = 0; j < x.c.size(); ++j)
        dev = std::max(dev, std::abs(x.c[j] - y.c[j]));
    return dev;
}

Trajectory quick_run(PhysicalConfig cfg, int m_modes, double t_end, double tau,
                     EvolutionSpec patch = {}) {
    const ContinuumGrid grid = build_grid(cfg.Lambda, cfg.omega_z, m_modes, 300.0);
    DerivedParams d = derive_params(cfg);
    d.S = grid.shift_S;
    EvolutionSpec spec = patch;
    spec.t_end = t_end;
    spec.tau = tau;
    return integrate(init_state(cfg, grid), spec, d, grid, cfg.kappa_on);
}

} // namespace

int run_validation(std::ostream& os) {
    std::vector<Check> checks;
    auto add = [&](std::string name, bool ok, std::string detail) {
        checks.push_back({std::move(name), ok, std::move(detail)});
    };
    std::ostringstream msg;
    auto fmt = [&](auto&&... xs) {
        msg.str("");
        msg << std::setprecision(6);
        (msg << ... << xs);
        return msg.str();
    };

    const PhysicalConfig base = baseline();

    // erfc as used by the closed forms, against an independent series
    {
        double worst = 0.0;
        for (double x : {0.0, 1.0, 2.0})
            worst = std::max(worst, std::abs(std::erfc(x) - (1.0 - erf_series(x))));
        add("erfc_series", worst < 1e-12, fmt("max abs dev ", worst));
    }

    // closed-form J against the defining overlap integral
    {
        double worst = 0.0;
        for (double eta : {1.5, 1.7, 2.0, 3.0}) {
            PhysicalConfig cfg = base;
            cfg.eta = eta;
            const double closed = josephson_coupling(cfg.omega_z, cfg.lambda, eta);
            const double num = quadrature_J(cfg);
            worst = std::max(worst, std::abs(num - closed) / std::abs(closed));
        }
        add("J_closed_form_vs_quadrature", worst < 1e-6, fmt("max rel dev ", worst));
    }

    // closed-form omega_o against quadrature
    {
        double worst = 0.0;
        for (double eta : {1.5, 1.7}) {
            PhysicalConfig cfg = base;
            cfg.eta = eta;
            const double closed = omega_ground_exact(cfg.omega_z, cfg.lambda, eta);
            const double num = quadrature_omega_o(cfg);
            worst = std::max(worst, std::abs(num - closed) / closed);
        }
        add("omega_o_closed_form_vs_quadrature", worst < 1e-6, fmt("max rel dev ", worst));
    }

    // spectral response against the 2 g^2 rho route
    {
        const double l_z = std::sqrt(hbar / (base.mass_kg * base.omega_z));
        double worst = 0.0;
        for (double w : {50.0, 100.0, 200.0}) {
            const double g2 = l_z / std::sqrt(pi) * base.Lambda
                              * std::exp(-2.0 * w / base.omega_z);
            const double rho = std::sqrt(base.mass_kg / (2.0 * hbar * w));
            const double direct = spectral_response(w, base.Lambda, base.omega_z);
            worst = std::max(worst, std::abs(direct - 2.0 * g2 * rho) / direct);
        }
        add("spectral_response_2g2rho", worst < 1e-12, fmt("max rel dev ", worst));
    }

    // tail shift against the incomplete-gamma identity
    // Gamma(-1/2, x) = 2 (e^-x / sqrt(x) - sqrt(pi) erfc(sqrt(x)))
    {
        const double wup = 300.0, wz = 200.0, L = 100.0;
        const double x = 2.0 * wup / wz;
        const double gamma_half = 2.0 * (std::exp(-x) / std::sqrt(x)
                                         - std::sqrt(pi) * std::erfc(std::sqrt(x)));
        const double closed = 2.0 * L / (std::sqrt(pi) * wz) * gamma_half;
        const double quad = tail_shift(L, wz, wup);
        const double rel = std::abs(quad - closed) / closed;
        const bool linear = std::abs(tail_shift(2 * L, wz, wup) - 2 * quad) < 1e-12 * quad;
        add("tail_shift_gamma_identity", rel < 1e-8 && linear,
            fmt("rel dev ", rel, ", S/Lambda ", quad / L));
    }

    // grid bookkeeping at M = 750
    {
        const ContinuumGrid g = build_grid(base.Lambda, base.omega_z, 750, 300.0);
        bool ok = g.omegas.back() == 300.0
                  && g.recurrence_time == 2.0 * pi / g.epsilon;
        double band_sum = 0.0;
        for (int j = 0; j < g.m_modes; ++j) {
            if (j > 0 && !(g.omegas[j] > g.omegas[j - 1])) ok = false;
            if (j > 0 && !(g.couplings[j] < g.couplings[j - 1])) ok = false;
            if (g.couplings_sq[j]
                != spectral_response(g.omegas[j], base.Lambda, base.omega_z) * g.epsilon)
                ok = false;
            band_sum += g.couplings_sq[j];
        }
        // integral of D over the discretized band [omega_1, omega_up]
        const double band = base.Lambda
                            * (std::erf(std::sqrt(2.0 * 300.0 / base.omega_z))
                               - std::erf(std::sqrt(2.0 * g.epsilon / base.omega_z)));
        const double rel = std::abs(band_sum - band) / band;
        add("grid_invariants_and_band_sum", ok && rel < 0.04,
            fmt("band rel dev ", rel));
    }

    // landmark roots against their analytic positions
    {
        const auto lm = josephson_landmarks(base.omega_z, base.lambda);
        const double zero_exact = std::sqrt(pi) * (1.0 + 0.5 * base.lambda);
        const double c = 0.5 + 1.0 / base.lambda;
        const double d = 1.0 / (base.lambda * std::sqrt(pi));
        const double min_exact = (c + std::sqrt(c * c + 2.0 * d * d)) / (2.0 * d);
        const bool ok = lm.eta_zero && std::abs(*lm.eta_zero - zero_exact) < 1e-9
                        && std::abs(lm.eta_min - min_exact) < 1e-8;
        add("josephson_landmarks_analytic", ok,
            fmt("zero ", lm.eta_zero ? *lm.eta_zero : -1.0, " min ", lm.eta_min));
    }

    // norm conservation at M = 400, kappa off and on
    {
        double worst = 0.0;
        for (bool kappa : {false, true}) {
            PhysicalConfig cfg = base;
            cfg.kappa_on = kappa;
            cfg.n_total = kappa ? 100.0 : 1.0;
            const Trajectory tr = quick_run(cfg, 400, 5.0, 5.0);
            worst = std::max(worst, tr.norm_drift);
        }
        add("norm_conservation", worst < 1e-8, fmt("max drift ", worst));
    }

    // stepper against the exact propagator, and the sign-flip mutation control
    {
        double worst = 0.0;
        double mutated_dev = 0.0;
        for (double L : {1e2, 2e3}) {
            PhysicalConfig cfg = base;
            cfg.Lambda = L;
            const ContinuumGrid grid = build_grid(L, cfg.omega_z, 200, 300.0);
            DerivedParams d = derive_params(cfg);
            d.S = grid.shift_S;
            EvolutionSpec spec;
            spec.t_end = 5.0;
            spec.tau = 10.0;
            spec.enforce_recurrence = false;
            const AmplitudeState y0 = init_state(cfg, grid);
            const Trajectory tr = integrate(y0, spec, d, grid, false);
            const AmplitudeState ex = exact_propagate(y0, 5.0, d, grid);
            worst = std::max(worst, max_deviation(tr.snapshots.back(), ex));

            if (L == 1e2) {
                DerivedParams bad = d;
                bad.overlap = -bad.overlap;
                const AmplitudeState ex_bad = exact_propagate(y0, 5.0, bad, grid);
                mutated_dev = max_deviation(ex_bad, ex);
            }
        }
        add("oracle_equivalence", worst < 1e-6, fmt("max amplitude dev ", worst));
        add("mutation_control_overlap_sign", mutated_dev > 1e-3,
            fmt("sign flip moves amplitudes by ", mutated_dev));
    }

    // time reversal: evolve, conjugate, evolve, conjugate == identity
    {
        PhysicalConfig cfg = base;
        const ContinuumGrid grid = build_grid(cfg.Lambda, cfg.omega_z, 200, 300.0);
        DerivedParams d = derive_params(cfg);
        d.S = grid.shift_S;
        EvolutionSpec spec;
        spec.t_end = 5.0;
        spec.tau = 10.0;
        spec.enforce_recurrence = false;
        const AmplitudeState y0 = init_state(cfg, grid);
        Trajectory fwd = integrate(y0, spec, d, grid, false);
        AmplitudeState mid = fwd.snapshots.back();
        mid.a = std::conj(mid.a);
        mid.b = std::conj(mid.b);
        for (auto& cj : mid.c) cj = std::conj(cj);
        mid.t = 0.0;
        Trajectory back = integrate(mid, spec, d, grid, false);
        AmplitudeState fin = back.snapshots.back();
        fin.a = std::conj(fin.a);
        fin.b = std::conj(fin.b);
        for (auto& cj : fin.c) cj = std::conj(cj);
        const double dev = max_deviation(fin, y0);
        add("time_reversal", dev < 1e-6, fmt("return dev ", dev));
    }

    // grid refinement: doubling M moves the Markovian N_A(5 s) by < 1e-3
    // per atom (the population itself is 98% decayed by then)
    {
        const Trajectory t400 = quick_run(base, 400, 5.0, 5.0);
        const Trajectory t800 = quick_run(base, 800, 5.0, 5.0);
        const double a400 = t400.last().n_a, a800 = t800.last().n_a;
        const double change = std::abs(a800 - a400) / t800.n_total;
        add("grid_refinement", change < 1e-3, fmt("N_A(5s) change per atom ", change));
    }

    // fixed-step order: error against the exact propagator scales ~ dt^4
    {
        PhysicalConfig cfg = base;
        const ContinuumGrid grid = build_grid(cfg.Lambda, cfg.omega_z, 40, 300.0);
        DerivedParams d = derive_params(cfg);
        d.S = grid.shift_S;
        const AmplitudeState y0 = init_state(cfg, grid);
        const AmplitudeState ex = exact_propagate(y0, 1.0, d, grid);
        std::vector<double> errs;
        for (double dt : {4e-3, 2e-3, 1e-3}) {
            EvolutionSpec spec;
            spec.t_end = 1.0;
            spec.tau = 2.0;
            spec.dt = dt;
            spec.frame = Frame::Direct;
            spec.abort_drift = 1.0;
            spec.enforce_recurrence = false;
            const Trajectory tr = integrate(y0, spec, d, grid, false);
            errs.push_back(max_deviation(tr.snapshots.back(), ex));
        }
        const double p1 = std::log2(errs[0] / errs[1]);
        const double p2 = std::log2(errs[1] / errs[2]);
        const bool ok = p1 > 3.7 && p1 < 4.3 && p2 > 3.7 && p2 < 4.3;
        add("rk4_order", ok, fmt("measured exponents ", p1, ", ", p2));
    }

    // negative control: dt = 0.1 s must violate the drift bound
    {
        bool violated = false;
        std::string how = "drift stayed small";
        try {
            EvolutionSpec patch;
            patch.dt = 0.1;
            patch.enforce_recurrence = false;
            const Trajectory tr = quick_run(base, 400, 10.0, 10.0, patch);
            violated = tr.norm_drift > 1e-8;
            how = fmt("drift ", tr.norm_drift);
        } catch (const NumericalError& ex) {
            violated = true;
            how = "integrator aborted on drift, as it should";
        }
        add("negative_control_coarse_dt", violated, how);
    }

    // doublet at reduced size: peak separation tracks 2(J - S e^{-eta^2})
    {
        PhysicalConfig cfg = base;
        cfg.eta = 1.5;
        const ContinuumGrid grid = build_grid(cfg.Lambda, cfg.omega_z, 750, 300.0);
        DerivedParams d = derive_params(cfg);
        d.S = grid.shift_S;
        EvolutionSpec spec;
        spec.t_end = 10.0;
        spec.tau = 10.0;
        const Trajectory tr = integrate(init_state(cfg, grid), spec, d, grid, false);
        const Spectrum sp = spectrum_at(tr, grid, 10.0);
        const SpectrumFeatures f = find_peaks_and_dip(sp);
        bool ok = f.peaks.size() >= 2;
        double sep = 0.0, expect = 2.0 * (d.J - d.S * d.overlap);
        if (ok) {
            sep = std::abs(f.peaks[0].omega - f.peaks[1].omega);
            ok = std::abs(sep - expect) <= 2.0 * grid.epsilon;
        }
        add("doublet_splitting", ok, fmt("sep ", sep, " expected ", expect));
    }

    // observables sanity on synthetic input
    {
        Trajectory synth;
        synth.n_total = 1.0;
        for (int i = 0; i <= 2500; ++i) {
            SamplePoint p;
            p.t = i * 0.01;
            p.n_a = std::exp(-0.5 * p.t);
            p.n_b = 0.0;
            synth.samples.push_back(p);
        }
        const DecayFit fit = fit_decay(synth, 0.0, 25.0);
        bool ok = std::abs(fit.gamma - 0.5) < 1e-6;
        ok = ok && !oscillation_frequency(synth).has_value();
        Trajectory flat = synth;
        for (auto& p : flat.samples) p.n_a = 0.25;
        const SteadyState st = detect_steady_state(flat);
        ok = ok && st.found && std::abs(st.value - 0.25) < 1e-12;
        add("observable_reductions", ok, fmt("gamma ", fit.gamma));
    }

    // identical configs must give byte-identical CSV bodies
    {
        PhysicalConfig cfg = base;
        RunConfig rc;
        rc.physical = cfg;
        rc.m_modes = 100;
        rc.evolution.t_end = 1.0;
        rc.evolution.tau = 1.0;
        const RunOutput a = run_simulation(rc);
        const RunOutput b = run_simulation(rc);
        const bool ok = timeseries_csv(a.trajectory, "x") == timeseries_csv(b.trajectory, "x");
        add("csv_determinism", ok, "two identical runs, one byte pattern");
    }

    int failures = 0;
    for (const auto& c : checks) {
        os << (c.ok ? "[ ok ] " : "[FAIL] ") << c.name;
        if (!c.detail.empty()) os << " — " << c.detail;
        os << "\n";
        if (!c.ok) ++failures;
    }
    os << checks.size() - failures << "/" << checks.size() << " checks passed\n";
    return failures;
}

} // namespace dwal::tools
