#ifndef DWAL_GRID_HPP
#define DWAL_GRID_HPP

#include <vector>

namespace dwal {

// Uniform discretization of the outcoupled-atom continuum over
// (0, omega_up]: mode frequencies omega_j = j epsilon with
// epsilon = omega_up / M, couplings fixed by the spectral response via
// g_j^2 = D(omega_j) epsilon.  The band above omega_up enters only through
// the perturbative shift S.  Immutable once built; safe to share across
// threads.
struct ContinuumGrid {
    int m_modes = 0;
    double omega_up = 0.0;
    double epsilon = 0.0;
    std::vector<double> omegas;        // omega_j = j epsilon, j = 1..M
    std::vector<double> couplings;     // g_j = sqrt(couplings_sq[j])
    std::vector<double> couplings_sq;  // D(omega_j) * epsilon, stored as computed
    double shift_S = 0.0;              // integral of D(w)/w above omega_up
    double recurrence_time = 0.0;      // 2 pi / epsilon
    double Lambda = 0.0;               // provenance
    double omega_z = 0.0;
};

// Perturbative level shift from the continuum tail above omega_up:
// S = int_{omega_up}^inf D(omega)/omega domega, computed by adaptive
// quadrature after an exponential change of variables, to relative
// accuracy 1e-8 or better.  Linear in Lambda.  Throws dwal::NumericalError
// on non-convergence.
double tail_shift(double Lambda, double omega_z, double omega_up);

// Builds the grid; throws std::invalid_argument for m_modes < 1 or
// omega_up <= 0.
ContinuumGrid build_grid(double Lambda, double omega_z, int m_modes, double omega_up);

} // namespace dwal

#endif
