#ifndef DWAL_TOOLS_VALIDATE_HPP
#define DWAL_TOOLS_VALIDATE_HPP

#include <ostream>

namespace dwal::tools {

// Reduced-size invariant suite (M <= 800, well under two minutes): closed
// forms against quadrature oracles, grid bookkeeping, integrator against the
// exact propagator, plus the documented negative controls.  Returns the
// number of failed checks.
int run_validation(std::ostream& os);

} // namespace dwal::tools

#endif
