#ifndef DWAL_PROPAGATOR_HPP
#define DWAL_PROPAGATOR_HPP

#include "dwal/dynamics.hpp"

namespace dwal {

// Exact evolution of the bilinear (kappa = 0) system over [state.t, state.t + t]
// with the pulse held on: diagonalizes the real-symmetric coefficient matrix
// once and applies e^{-i E t} in the eigenbasis.  Exact up to eigensolver
// precision; serves as the independent oracle for the time steppers.
// Throws std::invalid_argument when called with kappa_on = true.
AmplitudeState exact_propagate(const AmplitudeState& state, double t,
                               const DerivedParams& params,
                               const ContinuumGrid& grid,
                               bool kappa_on = false);

} // namespace dwal

#endif
