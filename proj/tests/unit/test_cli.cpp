#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "config_file.hpp"
#include "csv.hpp"
#include "dwal/observables.hpp"
#include "manifest.hpp"
#include "presets.hpp"
#include "runner.hpp"

using namespace dwal;
using namespace dwal::tools;

TEST_CASE("config text parsing and overrides") {
    const std::string text =
        "# baseline tweaks\n"
        "Lambda_per_sec2 = 2e3   # strong outcoupling\n"
        "eta = 1.6\n"
        "m_modes = 750\n"
        "tau_sec = 5\n"
        "kappa_on = true\n"
        "integrator = rk45\n"
        "frame = direct\n";
    const RunConfig rc = parse_config_text(text, "inline");
    CHECK(rc.physical.Lambda == 2e3);
    CHECK(rc.physical.eta == 1.6);
    CHECK(rc.physical.kappa_on);
    CHECK(rc.m_modes == 750);
    CHECK(rc.evolution.tau == 5.0);
    CHECK(rc.evolution.integrator == IntegratorKind::AdaptiveRk45);
    CHECK(rc.evolution.frame == Frame::Direct);
    // untouched keys keep their defaults
    CHECK(rc.physical.omega_z == 200.0);
    CHECK(rc.physical.alpha_frac == 0.7);
}

TEST_CASE("config parse errors carry location and key") {
    const auto throws_with = [](const std::string& text, const std::string& needle) {
        try {
            parse_config_text(text, "cfg.txt");
            FAIL("expected ConfigError for: " << text);
        } catch (const ConfigError& ex) {
            CHECK(std::string(ex.what()).find(needle) != std::string::npos);
        }
    };

    throws_with("eta = 1.7\nomega_q_per_sec = 100\n", "cfg.txt:2");
    throws_with("omega_q_per_sec = 100\n", "unknown key 'omega_q_per_sec'");
    throws_with("eta = fast\n", "expected a number");
    throws_with("eta = 1.7\neta = 1.8\n", "given twice");
    throws_with("kappa_on = maybe\n", "expected a boolean");
    throws_with("just words\n", "expected 'key = value'");
    throws_with("m_modes = 1500.5\n", "expected an integer");

    CHECK_THROWS_AS(load_config_file("/nonexistent/x.txt"), ConfigError);
}

TEST_CASE("canonical config text round-trips") {
    RunConfig rc;
    rc.physical.Lambda = 4e3;
    rc.physical.eta = 1.62;
    rc.m_modes = 3000;
    rc.evolution.dt = 5e-4;
    rc.name = "roundtrip";
    const std::string canon = canonical_config_text(rc);
    const RunConfig back = parse_config_text(canon, "canon");
    CHECK(canonical_config_text(back) == canon);
}

TEST_CASE("preset table pins the published parameter tuples") {
    const auto& table = preset_table();
    CHECK(table.size() == 25);

    // shared baseline across every preset
    for (const auto& p : table) {
        CAPTURE(p.name);
        CHECK(p.config.physical.omega_z == 200.0);
        CHECK(p.config.physical.lambda == 0.4);
        CHECK(p.config.physical.alpha_frac == 0.7);
        CHECK(p.config.physical.beta_frac == 0.3);
        CHECK(p.config.physical.phi0 == 0.0);
        CHECK(p.config.omega_up == 300.0);
        CHECK_FALSE(p.config.physical.kappa_on);
    }

    struct Expect {
        const char* name;
        double Lambda, eta, tau;
        int m;
    };
    // field-for-field tuples from the figure panels
    const Expect expected[] = {
        {"mark-P-a", 1e2, 2.0, 10, 1500}, {"mark-P-b", 1e2, 1.7, 10, 1500},
        {"mark-P-c", 1e2, 1.5, 10, 1500}, {"mark-P-d", 2e2, 1.7, 10, 1500},
        {"mark-S-a", 1e2, 2.0, 10, 1500}, {"mark-S-b", 1e2, 1.7, 10, 1500},
        {"mark-S-c", 1e2, 1.5, 10, 1500}, {"mark-S-d", 2e2, 1.7, 10, 1500},
        {"nm-gam-a", 5e2, 1.7, 40, 3000}, {"nm-gam-b", 1e3, 1.7, 40, 3000},
        {"nm-gam-c", 2e3, 1.7, 40, 3000}, {"nm-gam-d", 4e3, 1.7, 40, 3000},
        {"nm-eta-a", 4e3, 4.0, 10, 1500}, {"nm-eta-b", 4e3, 2.0, 10, 1500},
        {"nm-eta-c", 4e3, 1.8, 10, 1500}, {"nm-eta-d", 4e3, 1.6, 10, 1500},
        {"nm-spec-eta-a", 2e3, 4.0, 10, 1500}, {"nm-spec-eta-b", 2e3, 2.0, 10, 1500},
        {"nm-spec-eta-c", 2e3, 1.8, 10, 1500}, {"nm-spec-eta-d", 2e3, 1.6, 10, 1500},
        {"nm-spec-gam-a", 5e2, 1.7, 10, 1500}, {"nm-spec-gam-b", 1e3, 1.7, 10, 1500},
        {"nm-spec-gam-c", 2e3, 1.7, 10, 1500}, {"nm-spec-gam-d", 4e3, 1.7, 10, 1500},
        {"dip-closeup", 2e3, 1.7, 10, 1500},
    };
    for (const auto& e : expected) {
        CAPTURE(e.name);
        const auto rc = find_preset(e.name);
        REQUIRE(rc.has_value());
        CHECK(rc->physical.Lambda == e.Lambda);
        CHECK(rc->physical.eta == e.eta);
        CHECK(rc->evolution.tau == e.tau);
        CHECK(rc->m_modes == e.m);
        // every preset horizon respects its grid's recurrence time
        const double recurrence = 2.0 * 3.14159265358979 / (300.0 / rc->m_modes);
        CHECK(rc->evolution.t_end <= recurrence);
    }

    CHECK_FALSE(find_preset("mark-P-z").has_value());
}

TEST_CASE("manifest hash is deterministic and config-sensitive") {
    RunConfig a;
    a.physical.Lambda = 100.0;
    RunConfig b = a;
    CHECK(content_hash(a) == content_hash(b));
    b.physical.Lambda = 200.0;
    CHECK(content_hash(a) != content_hash(b));

    const DerivedParams d = derive_params(a.physical);
    const ContinuumGrid g = build_grid(a.physical.Lambda, a.physical.omega_z, 50, 300.0);
    const auto j = manifest_json(a, d, g);
    CHECK(j["content_hash"] == content_hash(a));
    CHECK(j["grid"]["epsilon_per_sec"] == doctest::Approx(6.0));
    CHECK(j["derived"]["J_per_sec"] == doctest::Approx(d.J));
}

TEST_CASE("identical configs produce byte-identical CSV bodies") {
    RunConfig rc;
    rc.physical.Lambda = 100.0;
    rc.physical.eta = 1.7;
    rc.m_modes = 120;
    rc.evolution.t_end = 1.0;
    rc.evolution.tau = 1.0;

    const RunOutput a = run_simulation(rc);
    const RunOutput b = run_simulation(rc);
    CHECK(timeseries_csv(a.trajectory, "h") == timeseries_csv(b.trajectory, "h"));

    const Spectrum sa = spectrum_at(a.trajectory, a.grid, 1.0);
    const Spectrum sb = spectrum_at(b.trajectory, b.grid, 1.0);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(spectrum_csv(sa, "h", -inf, inf) == spectrum_csv(sb, "h", -inf, inf));
}

TEST_CASE("scan results do not depend on the worker count") {
    RunConfig rc;
    rc.physical.Lambda = 1.0;
    rc.physical.eta = 1.7;
    rc.m_modes = 128;
    rc.omega_up = 30.0;  // recurrence 26.8 s
    rc.evolution.t_end = 21.0;
    rc.evolution.tau = 21.0;
    rc.evolution.sample_every = 0.05;
    const std::vector<double> values{0.5, 1.0, 1.5, 2.0};

    ScanOptions one;
    one.workers = 1;
    ScanOptions four;
    four.workers = 4;
    const ScanResult s1 = scan_steady(rc, "Lambda", values, one);
    const ScanResult s4 = scan_steady(rc, "Lambda", values, four);
    CHECK(scan_csv(s1, "h") == scan_csv(s4, "h"));
}

TEST_CASE("single-point scan equals the plain run reduction") {
    RunConfig rc;
    rc.physical.Lambda = 2.0;
    rc.physical.eta = 1.7;
    rc.m_modes = 128;
    rc.omega_up = 30.0;
    rc.evolution.t_end = 21.0;
    rc.evolution.tau = 21.0;
    rc.evolution.sample_every = 0.05;

    ScanOptions so;
    const ScanResult scan = scan_steady(rc, "Lambda", {2.0}, so);
    REQUIRE(scan.points.size() == 1);
    CHECK_FALSE(scan.points[0].failed);

    const RunOutput out = run_simulation(rc);
    const SteadyState st = detect_steady_state(out.trajectory, so.tail_fraction,
                                               so.threshold_frac);
    CHECK(scan.points[0].steady == st.found);
    CHECK(scan.points[0].beat_amplitude == doctest::Approx(st.beat_amplitude));
    if (st.found) CHECK(scan.points[0].steady_value == doctest::Approx(st.value));
}

TEST_CASE("a failing scan point is isolated") {
    RunConfig rc;
    rc.physical.eta = 1.7;
    rc.m_modes = 128;
    rc.omega_up = 30.0;
    rc.evolution.t_end = 21.0;
    rc.evolution.tau = 21.0;
    rc.evolution.sample_every = 0.05;

    // Lambda < 0 fails config validation inside the worker
    ScanOptions so;
    const ScanResult scan = scan_steady(rc, "Lambda", {-1.0, 2.0}, so);
    REQUIRE(scan.points.size() == 2);
    CHECK(scan.points[0].failed);
    CHECK_FALSE(scan.points[0].error.empty());
    CHECK_FALSE(scan.points[1].failed);

    CHECK_THROWS_AS(scan_steady(rc, "volume", {1.0}, so), std::invalid_argument);
    CHECK_THROWS_AS(scan_steady(rc, "Lambda", {2.0, 1.0}, so), std::invalid_argument);
}

TEST_CASE("run files land on disk with the manifest reference") {
    RunConfig rc;
    rc.physical.Lambda = 100.0;
    rc.physical.eta = 1.7;
    rc.m_modes = 120;
    rc.evolution.t_end = 1.0;
    rc.evolution.tau = 1.0;
    rc.name = "filecheck";

    const auto dir = std::filesystem::temp_directory_path() / "dwal-test-run";
    std::filesystem::remove_all(dir);
    const RunOutput out = run_simulation(rc);
    write_run_files(out, dir);

    REQUIRE(std::filesystem::exists(dir / "manifest.json"));
    REQUIRE(std::filesystem::exists(dir / "timeseries.csv"));
    REQUIRE(std::filesystem::exists(dir / "spectrum.csv"));
    REQUIRE(std::filesystem::exists(dir / "spectrum_zoom.csv"));

    std::ifstream ts(dir / "timeseries.csv");
    std::string line1, line2, line3;
    std::getline(ts, line1);
    std::getline(ts, line2);
    std::getline(ts, line3);
    CHECK(line1 == "# dwal timeseries v1");
    CHECK(line2 == "# manifest=" + content_hash(rc));
    CHECK(line3 == "t,N_A,N_B,N_C,N_plus,N_minus");

    // zoom emission is a strict low-frequency slice of the full spectrum
    std::ifstream zoom(dir / "spectrum_zoom.csv");
    std::string zline;
    int rows = 0;
    while (std::getline(zoom, zline))
        if (!zline.empty() && zline[0] != '#' && zline.find("omega") != 0) ++rows;
    CHECK(rows == 20);  // omega <= 50 at eps = 2.5

    std::filesystem::remove_all(dir);
}

TEST_CASE("shortest round-trip float formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-3) == "0.001");
    CHECK(format_double(2495.833949148) == "2495.833949148");
    CHECK(format_double(0.0) == "0");
    const double v = 0.1 + 0.2;
    CHECK(std::stod(format_double(v)) == v);
}
