#ifndef DWAL_MODEL_HPP
#define DWAL_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

namespace dwal {

// User-facing physical inputs for a double-well condensate pair coupled to
// a 1D waveguide continuum.  Trap A sits at x = 0, trap B at x = s; both are
// axially symmetric harmonic traps with longitudinal frequency omega_z and
// radial frequency omega_x = omega_z / lambda.
struct PhysicalConfig {
    double mass_kg = 3.818e-26;              // atomic mass (Na-23 default)
    double scattering_length_m = 2.75e-9;    // s-wave scattering length a_tt
    double omega_z = 200.0;                  // longitudinal trap frequency, rad/s
    double lambda = 0.4;                     // omega_z / omega_x
    double Lambda = 0.0;                     // outcoupling strength, 1/s^2
    double eta = 1.7;                        // intertrap half-distance s / (2 l_x)
    double n_total = 1.0;                    // total atom number (N=1 for normalized runs)
    double alpha_frac = 0.7;                 // initial population fraction in trap A
    double beta_frac = 0.3;                  // initial population fraction in trap B
    double phi0 = 0.0;                       // initial relative phase of trap B, rad
    bool kappa_on = false;                   // enable the mean-field interaction term

    // Throws std::invalid_argument on non-physical input.
    void validate() const;
};

struct ValidityCheck {
    std::string name;
    bool satisfied = false;
    double ratio = 0.0;    // the raw ratio the condition constrains
    double margin = 0.0;   // 1 / ratio where meaningful
    std::string detail;
};

// Closed-form coefficients of the two-mode-plus-continuum Hamiltonian.
// All frequencies angular, rad/s.
struct DerivedParams {
    double l_z = 0.0;               // longitudinal oscillator length, m
    double l_x = 0.0;               // radial oscillator length, m
    double omega_o_exact = 0.0;     // ground-state frequency, Erfc form
    double omega_o_approx = 0.0;    // omega_z (1/2 + 1/lambda), used in the dynamics
    double J = 0.0;                 // Josephson coupling
    double kappa = 0.0;             // interaction strength per atom pair
    double overlap = 0.0;           // e^{-eta^2}
    double n_max = 0.0;             // validity bound on the atom number
    double S = 0.0;                 // off-resonant tail shift; filled by the grid module
    std::vector<ValidityCheck> checks;
};

// Individual closed forms, exposed for scans and root finding.
double josephson_coupling(double omega_z, double lambda, double eta);
double omega_ground_exact(double omega_z, double lambda, double eta);
double omega_ground_approx(double omega_z, double lambda);
double interaction_kappa(double mass_kg, double scattering_length_m,
                         double omega_z, double lambda);
double atom_number_bound(double mass_kg, double scattering_length_m,
                         double omega_z, double lambda);

// Spectral response D(omega) of the free-atom continuum, 1/s.  Zero for
// omega <= 0 except at omega == 0, where the 1/sqrt(omega) edge divergence
// returns +infinity; the discretization never samples that point.
double spectral_response(double omega, double Lambda, double omega_z);

// Evaluates every closed form and the validity checks.  Throws on
// non-physical input; advisory conditions (eta < 1.5 and the "<<" margins)
// are reported in `checks`, never thrown.
DerivedParams derive_params(const PhysicalConfig& cfg);

std::vector<ValidityCheck> validity_report(const PhysicalConfig& cfg,
                                           const DerivedParams& derived);

struct JosephsonLandmarks {
    std::optional<double> eta_zero;  // root of J(eta) = 0 in [1, 4], if any
    double eta_min = 0.0;            // argmin of J(eta) (most negative J)
    double j_at_min = 0.0;
};

// Root / minimum of the bare Josephson coupling over eta in [1, 4].
// The effective intertrap coupling in the equations of motion is
// J - S e^{-eta^2}; its zero for a given outcoupling setup is provided
// separately so neither number masquerades as the other.
JosephsonLandmarks josephson_landmarks(double omega_z, double lambda);
std::optional<double> effective_coupling_zero(double omega_z, double lambda,
                                              double shift_S);

} // namespace dwal

#endif
