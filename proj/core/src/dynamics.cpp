#include "dwal/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dwal/constants.hpp"
#include "dwal/errors.hpp"

namespace dwal {

double AmplitudeState::norm_sq() const {
    double n = std::norm(a) + std::norm(b);
    for (const cplx& cj : c) n += std::norm(cj);
    return n;
}

AmplitudeState init_state(const PhysicalConfig& cfg, const ContinuumGrid& grid) {
    cfg.validate();
    AmplitudeState s;
    s.a = std::sqrt(cfg.n_total * cfg.alpha_frac);
    s.b = std::sqrt(cfg.n_total * cfg.beta_frac)
          * cplx{std::cos(cfg.phi0), std::sin(cfg.phi0)};
    s.c.assign(grid.m_modes, cplx{0.0, 0.0});
    s.t = 0.0;
    return s;
}

void EvolutionSpec::validate() const {
    auto fail = [](const char* msg) { throw std::invalid_argument(msg); };
    if (!(dt > 0.0)) fail("dt must be > 0");
    if (!(t_end > 0.0)) fail("t_end must be > 0");
    if (!(sample_every > 0.0)) fail("sample_every must be > 0");
    if (!(tolerance > 0.0)) fail("tolerance must be > 0");
    if (tau < 0.0) fail("tau must be >= 0");
    if (!(abort_drift > 0.0)) fail("abort_drift must be > 0");
}

RecurrenceCheck check_recurrence(double horizon, const ContinuumGrid& grid) {
    RecurrenceCheck rc;
    rc.ratio = horizon / grid.recurrence_time;
    if (rc.ratio > 1.0)
        rc.level = RecurrenceCheck::Level::Error;
    else if (rc.ratio > 0.8)
        rc.level = RecurrenceCheck::Level::Warning;
    return rc;
}

const AmplitudeState& Trajectory::snapshot_near(double t, bool* nearest_used) const {
    if (snapshots.empty())
        throw std::logic_error("trajectory holds no snapshots");
    const AmplitudeState* best = &snapshots.front();
    for (const auto& s : snapshots)
        if (std::abs(s.t - t) < std::abs(best->t - t)) best = &s;
    if (nearest_used) *nearest_used = std::abs(best->t - t) > 1e-9;
    return *best;
}

namespace {

inline cplx mul_mi(cplx z) { return {z.imag(), -z.real()}; }  // -i z

// Per-run coefficient block; pulse gating switches the outcoupling terms.
struct StepCtx {
    int m = 0;
    const double* g = nullptr;  // couplings
    const double* w = nullptr;  // mode frequencies
    double omega_half = 0.0;    // omega_z / 2
    double ovl = 0.0;           // e^{-eta^2}
    double j_bare = 0.0;
    double shift = 0.0;
    double kappa2 = 0.0;        // 2 kappa, zero when interactions are off

    bool pulse = true;
    double s_eff = 0.0;
    double j_eff = 0.0;

    void set_pulse(bool on) {
        pulse = on;
        s_eff = on ? shift : 0.0;
        j_eff = j_bare - s_eff * ovl;
    }
};

void rhs_direct(const cplx* y, cplx* dy, const StepCtx& c) {
    const cplx a = y[0], b = y[1];
    cplx acc{0.0, 0.0};
    if (c.pulse)
        for (int j = 0; j < c.m; ++j) acc += c.g[j] * y[2 + j];

    const double ka = c.kappa2 * std::norm(a);
    const double kb = c.kappa2 * std::norm(b);
    dy[0] = mul_mi((c.omega_half - c.s_eff + ka) * a + c.j_eff * b + acc);
    dy[1] = mul_mi((c.omega_half - c.s_eff * c.ovl * c.ovl + kb) * b
                   + c.j_eff * a + c.ovl * acc);

    if (c.pulse) {
        const cplx u = a + c.ovl * b;
        for (int j = 0; j < c.m; ++j)
            dy[2 + j] = mul_mi(c.w[j] * y[2 + j] + c.g[j] * u);
    } else {
        for (int j = 0; j < c.m; ++j)
            dy[2 + j] = mul_mi(c.w[j] * y[2 + j]);
    }
}

// Interaction frame: y[2+j] holds c_j e^{+i w_j t}; traps carry
// e^{+i omega_half t}.  P[j] = e^{i (omega_half - w_j) t} at the stage time.
void rhs_interaction(const cplx* y, cplx* dy, const cplx* P, const StepCtx& c) {
    const cplx a = y[0], b = y[1];
    cplx acc{0.0, 0.0};
    if (c.pulse)
        for (int j = 0; j < c.m; ++j) acc += c.g[j] * (y[2 + j] * P[j]);

    const double ka = c.kappa2 * std::norm(a);
    const double kb = c.kappa2 * std::norm(b);
    dy[0] = mul_mi((ka - c.s_eff) * a + c.j_eff * b + acc);
    dy[1] = mul_mi((kb - c.s_eff * c.ovl * c.ovl) * b + c.j_eff * a + c.ovl * acc);

    if (c.pulse) {
        const cplx u = a + c.ovl * b;
        for (int j = 0; j < c.m; ++j)
            dy[2 + j] = c.g[j] * mul_mi(std::conj(P[j]) * u);
    } else {
        for (int j = 0; j < c.m; ++j) dy[2 + j] = cplx{0.0, 0.0};
    }
}

struct Workspace {
    std::vector<cplx> y, k1, k2, k3, k4, yt;
    std::vector<cplx> phase, phase_t;   // interaction frame only
    std::vector<cplx> rot_half;         // e^{i delta_j h/2} for the current h
    std::vector<double> delta;          // omega_half - w_j
    double rot_h = 0.0;                 // h the rotators were built for

    void resize(int n, int m, bool ip) {
        y.resize(n); k1.resize(n); k2.resize(n); k3.resize(n); k4.resize(n);
        yt.resize(n);
        if (ip) {
            phase.resize(m);
            phase_t.resize(m);
            rot_half.resize(m);
            delta.resize(m);
        }
    }
};

void sync_phases(std::vector<cplx>& phase, const std::vector<double>& delta, double t) {
    for (size_t j = 0; j < delta.size(); ++j)
        phase[j] = cplx{std::cos(delta[j] * t), std::sin(delta[j] * t)};
}

double norm_sq_of(const std::vector<cplx>& y) {
    double n = std::norm(y[0]) + std::norm(y[1]);
    for (size_t j = 2; j < y.size(); ++j) n += std::norm(y[j]);
    return n;
}

// Cash-Karp 4(5) embedded pair.
struct CashKarp {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 3.0 / 5, c5 = 1.0,
                            c6 = 7.0 / 8;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 3.0 / 10, a42 = -9.0 / 10, a43 = 6.0 / 5;
    static constexpr double a51 = -11.0 / 54, a52 = 5.0 / 2, a53 = -70.0 / 27,
                            a54 = 35.0 / 27;
    static constexpr double a61 = 1631.0 / 55296, a62 = 175.0 / 512,
                            a63 = 575.0 / 13824, a64 = 44275.0 / 110592,
                            a65 = 253.0 / 4096;
    static constexpr double b1 = 37.0 / 378, b3 = 250.0 / 621, b4 = 125.0 / 594,
                            b6 = 512.0 / 1771;
    static constexpr double e1 = 37.0 / 378 - 2825.0 / 27648,
                            e3 = 250.0 / 621 - 18575.0 / 48384,
                            e4 = 125.0 / 594 - 13525.0 / 55296,
                            e5 = -277.0 / 14336, e6 = 512.0 / 1771 - 1.0 / 4;
};

} // namespace

AmplitudeState rhs(const AmplitudeState& state, const DerivedParams& params,
                   const ContinuumGrid& grid, bool kappa_on, bool pulse_on) {
    if ((int)state.c.size() != grid.m_modes)
        throw std::invalid_argument("state and grid disagree on mode count");

    StepCtx ctx;
    ctx.m = grid.m_modes;
    ctx.g = grid.couplings.data();
    ctx.w = grid.omegas.data();
    ctx.omega_half = 0.5 * grid.omega_z;
    ctx.ovl = params.overlap;
    ctx.j_bare = params.J;
    ctx.shift = grid.shift_S;
    ctx.kappa2 = kappa_on ? 2.0 * params.kappa : 0.0;
    ctx.set_pulse(pulse_on);

    std::vector<cplx> y(grid.m_modes + 2), dy(grid.m_modes + 2);
    y[0] = state.a;
    y[1] = state.b;
    std::copy(state.c.begin(), state.c.end(), y.begin() + 2);
    rhs_direct(y.data(), dy.data(), ctx);

    AmplitudeState out;
    out.a = dy[0];
    out.b = dy[1];
    out.c.assign(dy.begin() + 2, dy.end());
    out.t = state.t;
    return out;
}

Trajectory integrate(const AmplitudeState& init, const EvolutionSpec& spec,
                     const DerivedParams& params, const ContinuumGrid& grid,
                     bool kappa_on) {
    spec.validate();
    if ((int)init.c.size() != grid.m_modes)
        throw std::invalid_argument("state and grid disagree on mode count");
    if (!(spec.t_end > init.t))
        throw std::invalid_argument("t_end must lie beyond the state's time");

    Trajectory traj;

    // a silent bath (Lambda = 0) never re-feeds the traps, so the
    // discretization recurrence is irrelevant there
    RecurrenceCheck rc = check_recurrence(spec.t_end, grid);
    if (grid.Lambda == 0.0) rc.level = RecurrenceCheck::Level::Ok;
    if (rc.level == RecurrenceCheck::Level::Error) {
        if (spec.enforce_recurrence) {
            std::ostringstream os;
            os << "horizon " << spec.t_end << " s exceeds the discretization recurrence time "
               << grid.recurrence_time << " s (ratio " << rc.ratio
               << "); refine the grid or shorten the run";
            throw std::invalid_argument(os.str());
        }
        traj.warnings.push_back("recurrence guard overridden: horizon/recurrence = "
                                + std::to_string(rc.ratio)
                                + "; tail dynamics are discretization artifacts");
    } else if (rc.level == RecurrenceCheck::Level::Warning) {
        traj.warnings.push_back("horizon within 80% of the recurrence time (ratio "
                                + std::to_string(rc.ratio) + ")");
    }

    const int m = grid.m_modes;
    const int n = m + 2;
    const bool ip = spec.frame == Frame::Interaction;
    const double t0 = init.t;
    const double omega_half = 0.5 * grid.omega_z;

    StepCtx ctx;
    ctx.m = m;
    ctx.g = grid.couplings.data();
    ctx.w = grid.omegas.data();
    ctx.omega_half = omega_half;
    ctx.ovl = params.overlap;
    ctx.j_bare = params.J;
    ctx.shift = grid.shift_S;
    ctx.kappa2 = kappa_on ? 2.0 * params.kappa : 0.0;

    // Event times: sampling comb, the pulse edge, snapshot requests, t_end.
    const double time_eps = 1e-12 * std::max(1.0, spec.t_end);
    std::vector<double> events;
    for (long k = 1;; ++k) {
        const double t = t0 + k * spec.sample_every;
        if (t >= spec.t_end - time_eps) break;
        events.push_back(t);
    }
    if (spec.tau > t0 + time_eps && spec.tau < spec.t_end - time_eps)
        events.push_back(spec.tau);

    std::vector<double> snap_times = spec.snapshot_times;
    snap_times.push_back(spec.t_end);
    if (spec.tau > t0 && spec.tau <= spec.t_end) snap_times.push_back(spec.tau);
    std::sort(snap_times.begin(), snap_times.end());
    snap_times.erase(std::unique(snap_times.begin(), snap_times.end(),
                                 [&](double x, double y) { return std::abs(x - y) <= time_eps; }),
                     snap_times.end());
    for (double ts : snap_times)
        if (ts > t0 + time_eps && ts < spec.t_end - time_eps) events.push_back(ts);

    events.push_back(spec.t_end);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end(),
                             [&](double x, double y) { return std::abs(x - y) <= time_eps; }),
                 events.end());

    Workspace ws;
    ws.resize(n, m, ip);
    ws.y[0] = init.a;
    ws.y[1] = init.b;
    std::copy(init.c.begin(), init.c.end(), ws.y.begin() + 2);
    if (ip) {
        for (int j = 0; j < m; ++j) ws.delta[j] = omega_half - grid.omegas[j];
        if (t0 != 0.0) {
            // rotate the lab-frame state into the interaction frame
            ws.y[0] *= cplx{std::cos(omega_half * t0), std::sin(omega_half * t0)};
            ws.y[1] *= cplx{std::cos(omega_half * t0), std::sin(omega_half * t0)};
            for (int j = 0; j < m; ++j)
                ws.y[2 + j] *= cplx{std::cos(grid.omegas[j] * t0), std::sin(grid.omegas[j] * t0)};
        }
    }

    const double norm0 = norm_sq_of(ws.y);
    traj.n_total = norm0;

    auto to_lab = [&](double t) {
        AmplitudeState s;
        s.t = t;
        if (ip) {
            const cplx ra{std::cos(omega_half * t), -std::sin(omega_half * t)};
            s.a = ws.y[0] * ra;
            s.b = ws.y[1] * ra;
            s.c.resize(m);
            for (int j = 0; j < m; ++j)
                s.c[j] = ws.y[2 + j]
                         * cplx{std::cos(grid.omegas[j] * t), -std::sin(grid.omegas[j] * t)};
        } else {
            s.a = ws.y[0];
            s.b = ws.y[1];
            s.c.assign(ws.y.begin() + 2, ws.y.end());
        }
        return s;
    };

    auto record = [&](double t) {
        SamplePoint p;
        p.t = t;
        p.n_a = std::norm(ws.y[0]);
        p.n_b = std::norm(ws.y[1]);
        double nc = 0.0;
        for (int j = 0; j < m; ++j) nc += std::norm(ws.y[2 + j]);
        p.n_c = nc;
        p.n_plus = 0.5 * std::norm(ws.y[0] + ws.y[1]);
        p.n_minus = 0.5 * std::norm(ws.y[0] - ws.y[1]);
        traj.samples.push_back(p);

        const double drift = std::abs(p.n_a + p.n_b + nc - norm0) / norm0;
        traj.norm_drift = std::max(traj.norm_drift, drift);
        if (drift > spec.abort_drift) {
            std::ostringstream os;
            os << "norm drift " << drift << " exceeded " << spec.abort_drift
               << " at t = " << t << " after " << traj.steps
               << " steps (N_A = " << p.n_a << ", N_B = " << p.n_b
               << ", N_C = " << nc << "); reduce dt or tolerance";
            throw NumericalError(os.str());
        }

        for (double ts : snap_times)
            if (std::abs(ts - t) <= 1e-9) {
                traj.snapshots.push_back(to_lab(t));
                break;
            }
    };

    // interaction-frame RHS at an arbitrary absolute time (adaptive path)
    auto rhs_at = [&](double t, const cplx* y, cplx* dy) {
        ++traj.rhs_evals;
        if (ip) {
            sync_phases(ws.phase_t, ws.delta, t);
            rhs_interaction(y, dy, ws.phase_t.data(), ctx);
        } else {
            rhs_direct(y, dy, ctx);
        }
    };

    record(t0);

    double t = t0;
    long steps_since_sync = 0;

    for (double tb : events) {
        if (tb <= t + time_eps) continue;
        ctx.set_pulse(t < spec.tau - time_eps);

        if (spec.integrator == IntegratorKind::FixedRk4) {
            const double span = tb - t;
            const long nsteps = std::max<long>(1, std::lround(span / spec.dt));
            const double h = span / nsteps;

            if (ip) {
                if (ws.rot_h != h) {
                    for (int j = 0; j < m; ++j) {
                        const double th = 0.5 * ws.delta[j] * h;
                        ws.rot_half[j] = cplx{std::cos(th), std::sin(th)};
                    }
                    ws.rot_h = h;
                }
                sync_phases(ws.phase, ws.delta, t);
                steps_since_sync = 0;
            }

            for (long s = 0; s < nsteps; ++s) {
                cplx* y = ws.y.data();
                cplx* k1 = ws.k1.data();
                cplx* k2 = ws.k2.data();
                cplx* k3 = ws.k3.data();
                cplx* k4 = ws.k4.data();
                cplx* yt = ws.yt.data();

                if (ip) {
                    cplx* P = ws.phase.data();
                    const cplx* R = ws.rot_half.data();
                    rhs_interaction(y, k1, P, ctx);
                    for (int i = 0; i < n; ++i) yt[i] = y[i] + 0.5 * h * k1[i];
                    for (int j = 0; j < m; ++j) P[j] *= R[j];  // t + h/2
                    rhs_interaction(yt, k2, P, ctx);
                    for (int i = 0; i < n; ++i) yt[i] = y[i] + 0.5 * h * k2[i];
                    rhs_interaction(yt, k3, P, ctx);
                    for (int i = 0; i < n; ++i) yt[i] = y[i] + h * k3[i];
                    for (int j = 0; j < m; ++j) P[j] *= R[j];  // t + h
                    rhs_interaction(yt, k4, P, ctx);
                    traj.rhs_evals += 4;
                    if (++steps_since_sync >= 512) {
                        sync_phases(ws.phase, ws.delta, t + h * (s + 1));
                        steps_since_sync = 0;
                    }
                } else {
                    rhs_direct(y, k1, ctx);
                    for (int i = 0; i < n; ++i) yt[i] = y[i] + 0.5 * h * k1[i];
                    rhs_direct(yt, k2, ctx);
                    for (int i = 0; i < n; ++i) yt[i] = y[i] + 0.5 * h * k2[i];
                    rhs_direct(yt, k3, ctx);
                    for (int i = 0; i < n; ++i) yt[i] = y[i] + h * k3[i];
                    rhs_direct(yt, k4, ctx);
                    traj.rhs_evals += 4;
                }

                const double h6 = h / 6.0;
                for (int i = 0; i < n; ++i)
                    ws.y[i] += h6 * (ws.k1[i] + 2.0 * (ws.k2[i] + ws.k3[i]) + ws.k4[i]);
                ++traj.steps;
            }
            t = tb;
        } else {
            // adaptive Cash-Karp with local extrapolation
            using CK = CashKarp;
            const double atol = 1e-12 * std::sqrt(norm0);
            double h = std::min(spec.dt, tb - t);
            std::vector<cplx> k5(n), k6(n);

            while (t < tb - time_eps) {
                h = std::min(h, tb - t);
                if (h < 1e-14 * std::max(1.0, std::abs(t)))
                    throw NumericalError("adaptive step size underflow at t = "
                                         + std::to_string(t));

                cplx* y = ws.y.data();
                cplx* yt = ws.yt.data();
                rhs_at(t, y, ws.k1.data());
                for (int i = 0; i < n; ++i) yt[i] = y[i] + h * CK::a21 * ws.k1[i];
                rhs_at(t + CK::c2 * h, yt, ws.k2.data());
                for (int i = 0; i < n; ++i)
                    yt[i] = y[i] + h * (CK::a31 * ws.k1[i] + CK::a32 * ws.k2[i]);
                rhs_at(t + CK::c3 * h, yt, ws.k3.data());
                for (int i = 0; i < n; ++i)
                    yt[i] = y[i] + h * (CK::a41 * ws.k1[i] + CK::a42 * ws.k2[i]
                                        + CK::a43 * ws.k3[i]);
                rhs_at(t + CK::c4 * h, yt, ws.k4.data());
                for (int i = 0; i < n; ++i)
                    yt[i] = y[i] + h * (CK::a51 * ws.k1[i] + CK::a52 * ws.k2[i]
                                        + CK::a53 * ws.k3[i] + CK::a54 * ws.k4[i]);
                rhs_at(t + CK::c5 * h, yt, k5.data());
                for (int i = 0; i < n; ++i)
                    yt[i] = y[i] + h * (CK::a61 * ws.k1[i] + CK::a62 * ws.k2[i]
                                        + CK::a63 * ws.k3[i] + CK::a64 * ws.k4[i]
                                        + CK::a65 * k5[i]);
                rhs_at(t + CK::c6 * h, yt, k6.data());

                double emax = 0.0;
                for (int i = 0; i < n; ++i) {
                    const cplx y5 = y[i] + h * (CK::b1 * ws.k1[i] + CK::b3 * ws.k3[i]
                                                + CK::b4 * ws.k4[i] + CK::b6 * k6[i]);
                    const cplx e = h * (CK::e1 * ws.k1[i] + CK::e3 * ws.k3[i]
                                        + CK::e4 * ws.k4[i] + CK::e5 * k5[i]
                                        + CK::e6 * k6[i]);
                    yt[i] = y5;
                    const double scale = atol + spec.tolerance * std::abs(y5);
                    emax = std::max(emax, std::abs(e) / scale);
                }

                if (emax <= 1.0) {
                    std::swap(ws.y, ws.yt);
                    t += h;
                    ++traj.steps;
                    h *= std::min(5.0, 0.9 * std::pow(std::max(emax, 1e-16), -0.2));
                } else {
                    h *= std::max(0.2, 0.9 * std::pow(emax, -0.25));
                }
            }
            t = tb;
        }

        record(tb);
    }

    std::sort(traj.snapshots.begin(), traj.snapshots.end(),
              [](const AmplitudeState& x, const AmplitudeState& y) { return x.t < y.t; });
    return traj;
}

} // namespace dwal
