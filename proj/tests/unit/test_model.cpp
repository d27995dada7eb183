#include <doctest.h>

#include <cmath>

#include "dwal/constants.hpp"
#include "dwal/model.hpp"
#include "oracles.hpp"

using namespace dwal;
using dwal::testing::sodium_baseline;

TEST_CASE("config validation rejects non-physical input") {
    PhysicalConfig cfg = sodium_baseline();
    CHECK_NOTHROW(cfg.validate());

    auto bad = cfg; bad.mass_kg = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg; bad.omega_z = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg; bad.Lambda = -5.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg; bad.eta = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg; bad.alpha_frac = 0.6; bad.beta_frac = 0.6;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg; bad.alpha_frac = 1.2; bad.beta_frac = -0.2;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("sodium baseline derived parameters") {
    const PhysicalConfig cfg = sodium_baseline();
    const DerivedParams d = derive_params(cfg);

    // N << lambda^(1/3) sqrt(2 pi) l_z / a_tt, quoted as 2.5e3 for Na-23
    CHECK(d.n_max == doctest::Approx(2.5e3).epsilon(0.05));
    CHECK(d.n_max == doctest::Approx(2495.834).epsilon(1e-6));

    CHECK(d.l_z == doctest::Approx(3.71625e-6).epsilon(1e-5));
    CHECK(d.overlap == doctest::Approx(std::exp(-1.7 * 1.7)).epsilon(1e-12));

    // kappa by direct constant evaluation, an independent arithmetic route
    const double l_z = std::sqrt(hbar / (cfg.mass_kg * cfg.omega_z));
    const double kappa_direct = hbar * cfg.scattering_length_m
        / (cfg.lambda * cfg.mass_kg * std::sqrt(2.0 * pi) * l_z * l_z * l_z);
    CHECK(d.kappa == doctest::Approx(kappa_direct).epsilon(1e-12));
    CHECK(d.kappa == doctest::Approx(0.1476).epsilon(2e-3));

    // cross-validation: N_max from the same l_z reproduces the 2.5e3 bound
    CHECK(d.n_max * cfg.scattering_length_m / (std::cbrt(cfg.lambda) * std::sqrt(2.0 * pi))
          == doctest::Approx(l_z).epsilon(1e-12));
}

TEST_CASE("closed-form J against the defining overlap integral") {
    for (double eta : {1.5, 1.7, 2.0, 3.0}) {
        PhysicalConfig cfg = sodium_baseline();
        cfg.eta = eta;
        const double closed = josephson_coupling(cfg.omega_z, cfg.lambda, eta);
        const double quad = dwal::testing::quadrature_josephson(cfg);
        CHECK(std::abs(quad - closed) / std::abs(closed) < 1e-6);
    }
    CHECK(josephson_coupling(200.0, 0.4, 1.7) == doctest::Approx(6.70).epsilon(2e-3));
}

TEST_CASE("closed-form omega_o against quadrature and its approximation") {
    PhysicalConfig cfg = sodium_baseline();
    for (double eta : {1.5, 1.7, 2.5}) {
        cfg.eta = eta;
        const double closed = omega_ground_exact(cfg.omega_z, cfg.lambda, eta);
        const double quad = dwal::testing::quadrature_omega_ground(cfg);
        CHECK(std::abs(quad - closed) / closed < 1e-6);
    }

    // constant approximation is good to < 2% at the closest allowed distance
    const double exact15 = omega_ground_exact(200.0, 0.4, 1.5);
    const double approx = omega_ground_approx(200.0, 0.4);
    CHECK(std::abs(approx - exact15) / exact15 < 0.02);

    // and the difference shrinks monotonically with distance
    double prev = std::abs(approx - exact15);
    for (double eta = 1.7; eta < 3.6; eta += 0.4) {
        const double diff = std::abs(approx - omega_ground_exact(200.0, 0.4, eta));
        CHECK(diff < prev);
        prev = diff;
    }
}

TEST_CASE("large separation kills coupling and overlap") {
    const double j40 = josephson_coupling(200.0, 0.4, 40.0);
    CHECK(j40 == 0.0);  // e^{-1600} underflows to exactly zero
    PhysicalConfig cfg = sodium_baseline();
    cfg.eta = 40.0;
    CHECK(derive_params(cfg).overlap == 0.0);

    double prev = 1.0;
    for (double eta : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
        const double ovl = std::exp(-eta * eta);
        CHECK(ovl < prev);
        prev = ovl;
    }
}

TEST_CASE("N_max scales linearly in l_z and inversely in a_tt") {
    const PhysicalConfig cfg = sodium_baseline();
    const double base = atom_number_bound(cfg.mass_kg, cfg.scattering_length_m,
                                          cfg.omega_z, cfg.lambda);
    // quartering the mass doubles l_z
    const double m4 = atom_number_bound(cfg.mass_kg / 4.0, cfg.scattering_length_m,
                                        cfg.omega_z, cfg.lambda);
    CHECK(m4 == doctest::Approx(2.0 * base).epsilon(1e-12));
    const double a2 = atom_number_bound(cfg.mass_kg, 2.0 * cfg.scattering_length_m,
                                        cfg.omega_z, cfg.lambda);
    CHECK(a2 == doctest::Approx(0.5 * base).epsilon(1e-12));
}

TEST_CASE("spectral response value, step, monotonicity, edge") {
    CHECK(spectral_response(100.0, 100.0, 200.0) == doctest::Approx(0.2076).epsilon(1e-3));
    CHECK(spectral_response(-5.0, 100.0, 200.0) == 0.0);
    CHECK(std::isinf(spectral_response(0.0, 100.0, 200.0)));
    CHECK(spectral_response(0.0, 0.0, 200.0) == 0.0);

    // independent route: D = 2 g(omega)^2 rho(omega) through the dispersion
    const PhysicalConfig cfg = sodium_baseline();
    const double l_z = std::sqrt(hbar / (cfg.mass_kg * cfg.omega_z));
    for (double w : {20.0, 100.0, 250.0}) {
        const double g2 = l_z / std::sqrt(pi) * cfg.Lambda * std::exp(-2.0 * w / cfg.omega_z);
        const double rho = std::sqrt(cfg.mass_kg / (2.0 * hbar * w));
        CHECK(spectral_response(w, cfg.Lambda, cfg.omega_z)
              == doctest::Approx(2.0 * g2 * rho).epsilon(1e-12));
    }

    double prev = spectral_response(1e-3, 100.0, 200.0);
    for (double w = 1.0; w <= 300.0; w += 10.0) {
        const double d = spectral_response(w, 100.0, 200.0);
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("josephson landmarks against analytic positions") {
    const auto lm = josephson_landmarks(200.0, 0.4);

    REQUIRE(lm.eta_zero.has_value());
    // the bracket of J is affine in eta; its root is sqrt(pi)(1 + lambda/2)
    const double zero_exact = std::sqrt(pi) * (1.0 + 0.5 * 0.4);
    CHECK(*lm.eta_zero == doctest::Approx(zero_exact).epsilon(1e-10));
    CHECK(*lm.eta_zero == doctest::Approx(2.127).epsilon(0.005 / 2.127));
    CHECK(std::abs(josephson_coupling(200.0, 0.4, *lm.eta_zero)) < 1e-9);

    // dJ/deta = 0 at ([c + sqrt(c^2 + 2 d^2)] / 2d), c = 1/2 + 1/lambda
    const double c = 0.5 + 1.0 / 0.4, dcoef = 1.0 / (0.4 * std::sqrt(pi));
    const double min_exact = (c + std::sqrt(c * c + 2.0 * dcoef * dcoef)) / (2.0 * dcoef);
    CHECK(lm.eta_min == doctest::Approx(min_exact).epsilon(1e-8));
    CHECK(lm.eta_min == doctest::Approx(2.34).epsilon(0.02 / 2.34));
    CHECK(lm.j_at_min < 0.0);

    // single-signed J on [1, 4] when lambda pushes the root beyond 4
    const auto none = josephson_landmarks(200.0, 3.0);
    CHECK_FALSE(none.eta_zero.has_value());
}

TEST_CASE("effective coupling zero tracks the tail shift") {
    const auto bare = effective_coupling_zero(200.0, 0.4, 0.0);
    REQUIRE(bare.has_value());
    CHECK(*bare == doctest::Approx(std::sqrt(pi) * 1.2).epsilon(1e-10));

    const auto shifted = effective_coupling_zero(200.0, 0.4, 0.153);
    REQUIRE(shifted.has_value());
    CHECK(*shifted < *bare);
    // the affine bracket has slope -1/(lambda sqrt(pi)), so the zero moves
    // by S lambda sqrt(pi) / omega_z
    const double displacement = 0.153 * 0.4 * std::sqrt(pi) / 200.0;
    CHECK(*bare - *shifted == doctest::Approx(displacement).epsilon(1e-6));
}

TEST_CASE("validity report") {
    PhysicalConfig cfg = sodium_baseline();
    DerivedParams d = derive_params(cfg);

    const auto find = [](const DerivedParams& dp, const std::string& name) {
        for (const auto& c : dp.checks)
            if (c.name == name) return c;
        REQUIRE(false);
        return dp.checks.front();
    };

    // eta = 1.7: l_x / (sqrt(2) s) = 1 / (2 sqrt(2) eta), margin about 4.8
    const auto geo = find(d, "geometry_lx_vs_separation");
    CHECK(geo.ratio == doctest::Approx(0.208).epsilon(2e-3));
    CHECK(geo.margin == doctest::Approx(4.8).epsilon(4e-3));
    CHECK(geo.satisfied);

    // N far above the bound fails the atom-number check
    cfg.n_total = 1e4;
    d = derive_params(cfg);
    CHECK_FALSE(find(d, "atom_number_bound").satisfied);

    // wide separation satisfies the geometric checks with growing margin
    cfg = sodium_baseline();
    cfg.eta = 4.0;
    d = derive_params(cfg);
    CHECK(find(d, "geometry_lx_vs_separation").satisfied);
    CHECK(find(d, "geometry_lx_vs_separation").margin > 11.0);

    // eta below 1.5 warns through the report but never throws
    cfg.eta = 1.2;
    CHECK_NOTHROW(d = derive_params(cfg));
    CHECK_FALSE(find(d, "eta_range").satisfied);
}

TEST_CASE("erfc agrees with an independent series") {
    for (double x : {0.0, 1.0, 2.0})
        CHECK(std::erfc(x) == doctest::Approx(1.0 - dwal::testing::erf_series(x)).epsilon(1e-10));
}
