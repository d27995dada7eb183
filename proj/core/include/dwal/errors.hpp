#ifndef DWAL_ERRORS_HPP
#define DWAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dwal {

// Failure of a numerical procedure (quadrature non-convergence, step-size
// underflow, norm-drift abort).  Distinct from std::invalid_argument so
// callers can separate bad input from numerical trouble.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace dwal

#endif
