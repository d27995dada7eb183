#include "dwal/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "dwal/constants.hpp"
#include "dwal/errors.hpp"
#include "dwal/model.hpp"

namespace dwal {

namespace {

// Adaptive Simpson on [a, b] with absolute tolerance tol.
double adaptive_simpson(const auto& f, double a, double b, double fa, double fb,
                        double fm, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0)
        throw NumericalError("tail_shift quadrature failed to converge");
    if (std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1)
         + adaptive_simpson(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const auto& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fb, fm, whole, tol, 48);
}

} // namespace

double tail_shift(double Lambda, double omega_z, double omega_up) {
    if (!(omega_up > 0.0)) throw std::invalid_argument("omega_up must be > 0");
    if (!(omega_z > 0.0)) throw std::invalid_argument("omega_z must be > 0");
    if (Lambda == 0.0) return 0.0;

    // With omega = omega_up + omega_z u / 2 the integrand becomes
    // e^{-u} times a smooth algebraic factor; the e^{-2 omega_up/omega_z}
    // prefactor is pulled out so the remaining integral is O(1).
    const double pref = std::sqrt(2.0) * Lambda / std::sqrt(pi * omega_z)
                        * std::exp(-2.0 * omega_up / omega_z) * 0.5 * omega_z;
    const auto integrand = [&](double u) {
        const double w = omega_up + 0.5 * omega_z * u;
        return std::exp(-u) / (w * std::sqrt(w));
    };
    // e^{-u} below u = 45 already leaves a relative remainder < 1e-19.
    const double scale = integrand(0.0);
    const double value = integrate(integrand, 0.0, 45.0, 1e-11 * scale);
    return pref * value;
}

ContinuumGrid build_grid(double Lambda, double omega_z, int m_modes, double omega_up) {
    if (m_modes < 1) throw std::invalid_argument("m_modes must be >= 1");
    if (!(omega_up > 0.0)) throw std::invalid_argument("omega_up must be > 0");
    if (!(omega_z > 0.0)) throw std::invalid_argument("omega_z must be > 0");
    if (Lambda < 0.0) throw std::invalid_argument("Lambda must be >= 0");

    ContinuumGrid g;
    g.m_modes = m_modes;
    g.omega_up = omega_up;
    g.Lambda = Lambda;
    g.omega_z = omega_z;
    g.epsilon = omega_up / m_modes;
    g.recurrence_time = 2.0 * pi / g.epsilon;

    g.omegas.resize(m_modes);
    g.couplings.resize(m_modes);
    g.couplings_sq.resize(m_modes);
    for (int j = 0; j < m_modes; ++j) {
        // omega_M = omega_up exactly, independent of the division rounding
        g.omegas[j] = (j + 1 == m_modes) ? omega_up : (j + 1) * g.epsilon;
        g.couplings_sq[j] = spectral_response(g.omegas[j], Lambda, omega_z) * g.epsilon;
        g.couplings[j] = std::sqrt(g.couplings_sq[j]);
    }
    g.shift_S = tail_shift(Lambda, omega_z, omega_up);
    return g;
}

} // namespace dwal
