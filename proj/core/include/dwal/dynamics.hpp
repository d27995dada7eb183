#ifndef DWAL_DYNAMICS_HPP
#define DWAL_DYNAMICS_HPP

#include <complex>
#include <string>
#include <vector>

#include "dwal/grid.hpp"
#include "dwal/model.hpp"

namespace dwal {

using cplx = std::complex<double>;

// Mean-field amplitudes of the two trap modes and the M bath modes,
// lab frame.  norm_sq() is conserved by the exact dynamics for kappa = 0
// and kappa != 0 alike.
struct AmplitudeState {
    cplx a{0.0, 0.0};
    cplx b{0.0, 0.0};
    std::vector<cplx> c;
    double t = 0.0;

    double norm_sq() const;
};

// a(0) = sqrt(N alpha), b(0) = sqrt(N beta) e^{i phi}, continuum empty.
AmplitudeState init_state(const PhysicalConfig& cfg, const ContinuumGrid& grid);

enum class IntegratorKind { FixedRk4, AdaptiveRk45 };

// Frame the stepper works in.  Interaction rotates out the bath diagonal
// and the omega_z/2 trap diagonal exactly, leaving only the coupling terms
// to the stepper; it is the only frame whose phase errors at dt = 1e-3 stay
// inside this library's norm-drift and oracle tolerances, so it is the
// default.  Direct integrates the equations as written.
enum class Frame { Interaction, Direct };

struct EvolutionSpec {
    double t_end = 10.0;
    double dt = 1e-3;
    IntegratorKind integrator = IntegratorKind::FixedRk4;
    Frame frame = Frame::Interaction;
    double tolerance = 1e-9;        // adaptive mode: relative local error
    double sample_every = 1e-2;
    double tau = 10.0;              // rectangular pulse active on [0, tau)
    std::vector<double> snapshot_times;  // full-state snapshots (tau, t_end always kept)
    double abort_drift = 1e-6;      // norm-drift abort threshold
    bool enforce_recurrence = true;

    void validate() const;
};

struct SamplePoint {
    double t = 0.0;
    double n_a = 0.0;      // |a|^2
    double n_b = 0.0;      // |b|^2
    double n_c = 0.0;      // sum_j |c_j|^2, fixed index order
    double n_plus = 0.0;   // |a + b|^2 / 2
    double n_minus = 0.0;  // |a - b|^2 / 2
};

struct Trajectory {
    std::vector<SamplePoint> samples;
    std::vector<AmplitudeState> snapshots;  // lab frame, ordered in t
    double n_total = 0.0;                   // norm_sq at t = 0
    double norm_drift = 0.0;                // max relative norm_sq deviation seen
    long long steps = 0;
    long long rhs_evals = 0;
    std::vector<std::string> warnings;

    const SamplePoint& last() const { return samples.back(); }
    // Snapshot closest to t; sets nearest_used when |t - snapshot.t| > 1e-9.
    const AmplitudeState& snapshot_near(double t, bool* nearest_used = nullptr) const;
};

struct RecurrenceCheck {
    enum class Level { Ok, Warning, Error };
    Level level = Level::Ok;
    double ratio = 0.0;  // horizon / recurrence_time
};

// A uniformly discretized continuum re-feeds the system beyond 2 pi / eps;
// horizons above 80% of that get a warning, above 100% an error.
RecurrenceCheck check_recurrence(double horizon, const ContinuumGrid& grid);

// Right-hand side of the discretized mean-field equations, lab frame:
//   da/dt  = -i (wz/2 - S) a        - 2 i kappa |a|^2 a - i (J - S v) b - i sum_j g_j c_j
//   db/dt  = -i (wz/2 - S v^2) b    - 2 i kappa |b|^2 b - i (J - S v) a - i v sum_j g_j c_j
//   dc_j/dt = -i w_j c_j - i g_j (a + v b)
// with v = e^{-eta^2}.  With pulse_on = false all outcoupling terms
// (g_j and S) vanish and only trap terms remain.
AmplitudeState rhs(const AmplitudeState& state, const DerivedParams& params,
                   const ContinuumGrid& grid, bool kappa_on, bool pulse_on = true);

// Propagates init from its own t to spec.t_end, sampling populations every
// sample_every.  Aborts with NumericalError if the norm drifts by more than
// spec.abort_drift; throws std::invalid_argument when the horizon violates
// the recurrence guard and enforce_recurrence is set.
Trajectory integrate(const AmplitudeState& init, const EvolutionSpec& spec,
                     const DerivedParams& params, const ContinuumGrid& grid,
                     bool kappa_on);

} // namespace dwal

#endif
