#include "dwal/propagator.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace dwal {

AmplitudeState exact_propagate(const AmplitudeState& state, double t,
                               const DerivedParams& params,
                               const ContinuumGrid& grid, bool kappa_on) {
    if (kappa_on)
        throw std::invalid_argument(
            "exact_propagate handles the bilinear system only; kappa must be off");
    if ((int)state.c.size() != grid.m_modes)
        throw std::invalid_argument("state and grid disagree on mode count");

    const int m = grid.m_modes;
    const int n = m + 2;
    const double ovl = params.overlap;
    const double s_shift = grid.shift_S;
    const double j_eff = params.J - s_shift * ovl;
    const double omega_half = 0.5 * grid.omega_z;

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    h(0, 0) = omega_half - s_shift;
    h(1, 1) = omega_half - s_shift * ovl * ovl;
    h(0, 1) = h(1, 0) = j_eff;
    for (int j = 0; j < m; ++j) {
        h(2 + j, 2 + j) = grid.omegas[j];
        h(0, 2 + j) = h(2 + j, 0) = grid.couplings[j];
        h(1, 2 + j) = h(2 + j, 1) = grid.couplings[j] * ovl;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed");

    Eigen::VectorXcd y0(n);
    y0(0) = state.a;
    y0(1) = state.b;
    for (int j = 0; j < m; ++j) y0(2 + j) = state.c[j];

    Eigen::VectorXcd z = solver.eigenvectors().transpose() * y0;
    for (int k = 0; k < n; ++k) {
        const double phase = solver.eigenvalues()(k) * t;
        z(k) *= cplx{std::cos(phase), -std::sin(phase)};
    }
    Eigen::VectorXcd y = solver.eigenvectors() * z;

    AmplitudeState out;
    out.a = y(0);
    out.b = y(1);
    out.c.resize(m);
    for (int j = 0; j < m; ++j) out.c[j] = y(2 + j);
    out.t = state.t + t;
    return out;
}

} // namespace dwal
