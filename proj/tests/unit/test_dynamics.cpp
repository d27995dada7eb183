#include <doctest.h>

#include <cmath>
#include <complex>

#include "dwal/dynamics.hpp"
#include "dwal/errors.hpp"
#include "dwal/propagator.hpp"
#include "oracles.hpp"

using namespace dwal;
using dwal::testing::max_amplitude_dev;
using dwal::testing::sodium_baseline;

namespace {

struct Setup {
    PhysicalConfig cfg;
    ContinuumGrid grid;
    DerivedParams params;
    AmplitudeState y0;
};

Setup make_setup(double Lambda, double eta, int m_modes, double n_total = 1.0,
                 double alpha = 0.7, double phi = 0.0) {
    Setup s;
    s.cfg = sodium_baseline();
    s.cfg.Lambda = Lambda;
    s.cfg.eta = eta;
    s.cfg.n_total = n_total;
    s.cfg.alpha_frac = alpha;
    s.cfg.beta_frac = 1.0 - alpha;
    s.cfg.phi0 = phi;
    s.grid = build_grid(Lambda, s.cfg.omega_z, m_modes, 300.0);
    s.params = derive_params(s.cfg);
    s.params.S = s.grid.shift_S;
    s.y0 = init_state(s.cfg, s.grid);
    return s;
}

} // namespace

TEST_CASE("initial state from fractions and phase") {
    auto s = make_setup(100.0, 1.7, 32);
    CHECK(s.y0.a == cplx{std::sqrt(0.7), 0.0});
    CHECK(std::abs(s.y0.b - cplx{std::sqrt(0.3), 0.0}) < 1e-15);
    CHECK(s.y0.norm_sq() == doctest::Approx(1.0).epsilon(1e-14));
    for (const auto& cj : s.y0.c) CHECK(cj == cplx{0.0, 0.0});

    auto sp = make_setup(100.0, 1.7, 32, 1.0, 0.7, pi);
    CHECK(sp.y0.b.real() < 0.0);  // phase pi flips trap B's amplitude
    CHECK(std::abs(sp.y0.b.imag()) < 1e-15);

    auto sa = make_setup(100.0, 1.7, 32, 100.0, 1.0);
    CHECK(sa.y0.a == cplx{10.0, 0.0});
    CHECK(sa.y0.b == cplx{0.0, 0.0});
}

TEST_CASE("rhs on an empty continuum feeds every mode through the two channels") {
    auto s = make_setup(100.0, 1.7, 48);
    const AmplitudeState dy = rhs(s.y0, s.params, s.grid, false);
    const cplx u = s.y0.a + s.params.overlap * s.y0.b;
    for (int j = 0; j < s.grid.m_modes; ++j) {
        const cplx expect = cplx{0.0, -1.0} * s.grid.couplings[j] * u;
        CHECK(std::abs(dy.c[j] - expect) < 1e-16);
    }
}

TEST_CASE("rhs generator is norm-conserving, kappa on or off") {
    auto s = make_setup(100.0, 1.7, 48, 100.0);
    // put some population in the bath so every term participates
    AmplitudeState y = s.y0;
    for (int j = 0; j < s.grid.m_modes; ++j)
        y.c[j] = cplx{0.1 * std::sin(j + 1.0), 0.05 * std::cos(2.0 * j)};

    for (bool kappa : {false, true}) {
        const AmplitudeState dy = rhs(y, s.params, s.grid, kappa);
        // d(norm^2)/dt = 2 Re<y, dy>
        double re = (std::conj(y.a) * dy.a + std::conj(y.b) * dy.b).real();
        for (int j = 0; j < s.grid.m_modes; ++j)
            re += (std::conj(y.c[j]) * dy.c[j]).real();
        CHECK(std::abs(2.0 * re) < 1e-12 * y.norm_sq());
    }
}

TEST_CASE("rhs with the pulse off keeps only trap terms") {
    auto s = make_setup(100.0, 1.7, 16);
    AmplitudeState y = s.y0;
    y.c[3] = cplx{0.2, -0.1};
    const AmplitudeState dy = rhs(y, s.params, s.grid, false, /*pulse_on=*/false);
    // bath decouples: dc_j = -i w_j c_j only
    for (int j = 0; j < s.grid.m_modes; ++j) {
        const cplx expect = cplx{0.0, -1.0} * s.grid.omegas[j] * y.c[j];
        CHECK(std::abs(dy.c[j] - expect) < 1e-16);
    }
    // trap A: -i wz/2 a - i J b, no shift, no bath drive
    const cplx expect_a = cplx{0.0, -1.0}
        * (0.5 * s.cfg.omega_z * y.a + s.params.J * y.b);
    CHECK(std::abs(dy.a - expect_a) < 1e-14);
}

TEST_CASE("decoupled trap is a pure phase rotation") {
    auto s = make_setup(0.0, 40.0, 8, 1.0, 1.0);  // J = 0, Lambda = 0
    EvolutionSpec spec;
    spec.t_end = 2.0;
    spec.tau = 2.0;
    const Trajectory tr = integrate(s.y0, spec, s.params, s.grid, false);

    for (const auto& p : tr.samples)
        CHECK(std::abs(p.n_a - 1.0) < 1e-10);

    const AmplitudeState fin = tr.snapshots.back();
    const double phase = 0.5 * s.cfg.omega_z * 2.0;
    const cplx expect = s.y0.a * cplx{std::cos(phase), -std::sin(phase)};
    CHECK(std::abs(fin.a - expect) < 1e-9);
}

TEST_CASE("isolated double well follows the Rabi closed form") {
    auto s = make_setup(0.0, 1.7, 8);
    EvolutionSpec spec;
    spec.t_end = 2.0;
    spec.tau = 2.0;
    const Trajectory tr = integrate(s.y0, spec, s.params, s.grid, false);
    for (const auto& p : tr.samples) {
        const double expect = dwal::testing::rabi_n_a(p.t, s.params.J, 0.7, 0.3, 0.0);
        CHECK(std::abs(p.n_a - expect) < 1e-8);
    }

    // alpha = 1 reduces to N cos^2(J t)
    auto s1 = make_setup(0.0, 1.7, 8, 1.0, 1.0);
    const Trajectory tr1 = integrate(s1.y0, spec, s1.params, s1.grid, false);
    for (const auto& p : tr1.samples) {
        const double c = std::cos(s1.params.J * p.t);
        CHECK(std::abs(p.n_a - c * c) < 1e-8);
    }
}

TEST_CASE("stepper matches the exact propagator for the bilinear system") {
    for (double Lambda : {1e2, 2e3}) {
        auto s = make_setup(Lambda, 1.7, 200);
        EvolutionSpec spec;
        spec.t_end = 5.0;
        spec.tau = 10.0;
        spec.enforce_recurrence = false;  // same discrete system on both routes
        const Trajectory tr = integrate(s.y0, spec, s.params, s.grid, false);
        const AmplitudeState ex = exact_propagate(s.y0, 5.0, s.params, s.grid);
        CHECK(max_amplitude_dev(tr.snapshots.back(), ex) < 1e-6);
    }
}

TEST_CASE("interaction and direct frames agree at fine steps") {
    auto s = make_setup(100.0, 1.7, 50);
    EvolutionSpec spec;
    spec.t_end = 0.5;
    spec.tau = 1.0;
    spec.dt = 1e-5;
    const Trajectory ip = integrate(s.y0, spec, s.params, s.grid, false);
    spec.frame = Frame::Direct;
    const Trajectory direct = integrate(s.y0, spec, s.params, s.grid, false);
    CHECK(max_amplitude_dev(ip.snapshots.back(), direct.snapshots.back()) < 1e-8);
}

TEST_CASE("adaptive stepper hits the same answer") {
    auto s = make_setup(100.0, 1.7, 100);
    EvolutionSpec spec;
    spec.t_end = 2.0;
    spec.tau = 5.0;
    spec.integrator = IntegratorKind::AdaptiveRk45;
    spec.tolerance = 1e-10;
    spec.enforce_recurrence = false;
    const Trajectory tr = integrate(s.y0, spec, s.params, s.grid, false);
    const AmplitudeState ex = exact_propagate(s.y0, 2.0, s.params, s.grid);
    CHECK(max_amplitude_dev(tr.snapshots.back(), ex) < 1e-6);
    CHECK(tr.norm_drift < 1e-8);
}

TEST_CASE("time reversal returns the initial state") {
    auto s = make_setup(100.0, 1.7, 200);
    EvolutionSpec spec;
    spec.t_end = 5.0;
    spec.tau = 10.0;
    spec.enforce_recurrence = false;

    const Trajectory fwd = integrate(s.y0, spec, s.params, s.grid, false);
    AmplitudeState mid = fwd.snapshots.back();
    mid.a = std::conj(mid.a);
    mid.b = std::conj(mid.b);
    for (auto& cj : mid.c) cj = std::conj(cj);
    mid.t = 0.0;

    const Trajectory back = integrate(mid, spec, s.params, s.grid, false);
    AmplitudeState fin = back.snapshots.back();
    fin.a = std::conj(fin.a);
    fin.b = std::conj(fin.b);
    for (auto& cj : fin.c) cj = std::conj(cj);

    CHECK(max_amplitude_dev(fin, s.y0) < 1e-6);
}

TEST_CASE("bilinear dynamics is linear in the initial amplitudes") {
    auto s1 = make_setup(100.0, 1.7, 100, 1.0);
    auto s4 = make_setup(100.0, 1.7, 100, 4.0);  // amplitudes doubled
    EvolutionSpec spec;
    spec.t_end = 2.0;
    spec.tau = 5.0;
    spec.enforce_recurrence = false;
    const Trajectory t1 = integrate(s1.y0, spec, s1.params, s1.grid, false);
    const Trajectory t4 = integrate(s4.y0, spec, s4.params, s4.grid, false);

    REQUIRE(t1.samples.size() == t4.samples.size());
    for (size_t i = 0; i < t1.samples.size(); ++i) {
        CHECK(t4.samples[i].n_a == doctest::Approx(4.0 * t1.samples[i].n_a).epsilon(1e-9));
        CHECK(t4.samples[i].n_c == doctest::Approx(4.0 * t1.samples[i].n_c).epsilon(1e-9));
    }
    const AmplitudeState f1 = t1.snapshots.back();
    const AmplitudeState f4 = t4.snapshots.back();
    CHECK(std::abs(f4.a - 2.0 * f1.a) < 1e-9);
}

TEST_CASE("fixed stepper shows fourth-order convergence") {
    auto s = make_setup(100.0, 1.7, 40);
    const AmplitudeState ex = exact_propagate(s.y0, 1.0, s.params, s.grid);
    double errs[3];
    int k = 0;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
        EvolutionSpec spec;
        spec.t_end = 1.0;
        spec.tau = 2.0;
        spec.dt = dt;
        spec.frame = Frame::Direct;
        spec.abort_drift = 1.0;
        spec.enforce_recurrence = false;
        const Trajectory tr = integrate(s.y0, spec, s.params, s.grid, false);
        errs[k++] = max_amplitude_dev(tr.snapshots.back(), ex);
    }
    const double p1 = std::log2(errs[0] / errs[1]);
    const double p2 = std::log2(errs[1] / errs[2]);
    CHECK(p1 > 3.7);
    CHECK(p1 < 4.3);
    CHECK(p2 > 3.7);
    CHECK(p2 < 4.3);
}

TEST_CASE("pulse edge decouples the bath exactly at tau") {
    auto s = make_setup(100.0, 1.7, 150);
    EvolutionSpec spec;
    spec.t_end = 4.0;
    spec.tau = 2.0;
    spec.enforce_recurrence = false;
    const Trajectory tr = integrate(s.y0, spec, s.params, s.grid, false);

    // a sample lands exactly on the pulse edge
    bool tau_sampled = false;
    double nc_at_tau = 0.0;
    for (const auto& p : tr.samples)
        if (std::abs(p.t - 2.0) < 1e-12) {
            tau_sampled = true;
            nc_at_tau = p.n_c;
        }
    REQUIRE(tau_sampled);

    // after the pulse the continuum population freezes
    for (const auto& p : tr.samples)
        if (p.t > 2.0)
            CHECK(std::abs(p.n_c - nc_at_tau) < 1e-10);

    CHECK(tr.norm_drift < 1e-8);
}

TEST_CASE("recurrence guard warns and rejects") {
    auto s = make_setup(100.0, 1.7, 200);  // recurrence 4.19 s
    EvolutionSpec spec;
    spec.tau = 20.0;

    spec.t_end = 10.0;
    CHECK_THROWS_AS(integrate(s.y0, spec, s.params, s.grid, false),
                    std::invalid_argument);

    spec.enforce_recurrence = false;
    Trajectory tr = integrate(s.y0, spec, s.params, s.grid, false);
    REQUIRE_FALSE(tr.warnings.empty());

    spec.enforce_recurrence = true;
    spec.t_end = 3.6;  // above 80% of the recurrence time
    tr = integrate(s.y0, spec, s.params, s.grid, false);
    REQUIRE_FALSE(tr.warnings.empty());

    spec.t_end = 3.0;
    tr = integrate(s.y0, spec, s.params, s.grid, false);
    CHECK(tr.warnings.empty());
}

TEST_CASE("coarse stepping trips the norm-drift abort") {
    auto s = make_setup(100.0, 1.7, 400);
    EvolutionSpec spec;
    spec.t_end = 10.0;
    spec.tau = 10.0;
    spec.dt = 0.1;
    spec.enforce_recurrence = false;
    CHECK_THROWS_AS(integrate(s.y0, spec, s.params, s.grid, false), NumericalError);
}

TEST_CASE("exact propagator basics") {
    auto s = make_setup(100.0, 1.7, 64);

    const AmplitudeState id = exact_propagate(s.y0, 0.0, s.params, s.grid);
    CHECK(max_amplitude_dev(id, s.y0) < 1e-12);

    const AmplitudeState ev = exact_propagate(s.y0, 7.0, s.params, s.grid);
    CHECK(ev.norm_sq() == doctest::Approx(s.y0.norm_sq()).epsilon(1e-13));

    CHECK_THROWS_AS(exact_propagate(s.y0, 1.0, s.params, s.grid, true),
                    std::invalid_argument);

    AmplitudeState wrong = s.y0;
    wrong.c.resize(10);
    CHECK_THROWS_AS(exact_propagate(wrong, 1.0, s.params, s.grid),
                    std::invalid_argument);
}

TEST_CASE("interacting runs conserve the norm too") {
    auto s = make_setup(100.0, 1.7, 400, 100.0);
    EvolutionSpec spec;
    spec.t_end = 5.0;
    spec.tau = 5.0;
    const Trajectory tr = integrate(s.y0, spec, s.params, s.grid, true);
    CHECK(tr.norm_drift < 1e-8);

    // nonlinear phase rotations leave each |amplitude| of the isolated
    // two-mode system oscillating inside the closed pair; the undamped
    // nonlinear terms cost a little more drift than the outcoupled runs
    auto iso = make_setup(0.0, 1.7, 8, 100.0);
    const Trajectory tr2 = integrate(iso.y0, spec, iso.params, iso.grid, true);
    for (const auto& p : tr2.samples)
        CHECK(p.n_a + p.n_b == doctest::Approx(100.0).epsilon(1e-7));
}
