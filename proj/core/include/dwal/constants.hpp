#ifndef DWAL_CONSTANTS_HPP
#define DWAL_CONSTANTS_HPP

namespace dwal {

// Reduced Planck constant, J s.  All frequencies in this library are
// angular (rad/s) and all other quantities SI unless a name says otherwise.
inline constexpr double hbar = 1.0545718e-34;

inline constexpr double pi = 3.14159265358979323846;

} // namespace dwal

#endif
