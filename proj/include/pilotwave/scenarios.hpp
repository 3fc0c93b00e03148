// scenarios.hpp - scenario dispatch behind the command line: parameter
// validation, simulation runs, CSV/SVG artifacts, the output manifest, and
// the machine-readable verification report.

#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace pw::cli {

struct ScenarioConfig {
    std::string scenario;  // figure1 | figure2 | phase-sweep | spectrum |
                           // kemmer-evolve | field-map | jump-demo | dispersion-scan
    std::filesystem::path out = "out";
    std::uint64_t seed = 1;
    int workers = 1;
    bool allow_flags = false;

    // trajectory scenarios
    int photons = 20;
    double delta = 0.785398163397448279;  // pi/4; figure2 defaults to -pi/4
    bool delta_set = false;
    double b_min = -0.5, b_max = 0.5;
    double t_max = 3.0;
    double strength = 0.65;
    bool dipole_only = false;
    bool phasor_guidance = false;  // cycle-averaged flow instead of instantaneous

    // spectrum
    double gamma = 0.05;  // in units of omega0
    int trains = 10000;
    double omega0 = 1.0;

    // kemmer-evolve
    int resolution = 32;  // nodes per wavelength
    double periods = 1.0;

    // field-map
    double map_extent = 2.0;
    int map_samples = 41;
    double map_time = 0.25;

    // dispersion-scan
    int scan_points = 101;
};

struct RunReport {
    int exit_code = 0;
    std::vector<std::string> files;  // relative paths listed in the manifest
    std::string summary;
    int flagged = 0;
};

// Executes the named scenario, writes artifacts + manifest.txt into
// config.out, and returns the report. Unknown scenarios and invalid
// parameters produce exit_code 2 with the violated precondition in `summary`;
// flagged trajectories/evolutions produce exit_code 1 unless allow_flags.
RunReport run_scenario(const ScenarioConfig& config);

struct VerifyCheck {
    std::string name;
    bool passed = false;
    double metric = 0.0;
    std::string detail;
};

struct VerifyOptions {
    // Test fixture: flips the sign of E_free on the 3-vector side of the
    // covariant comparison so the oracle check must fail.
    bool flip_efree_sign = false;
    bool quick = false;  // smaller grids for smoke runs
};

// Runs the invariant suite (Maxwell residuals, covariant/3-vector oracle,
// guidance speed bound, hydrogen Q+V constancy, symmetrization brute force,
// Kemmer-vs-leapfrog) and prints one line per check: name, status, metric.
std::vector<VerifyCheck> verify(std::ostream& os, const VerifyOptions& opts = {});

}  // namespace pw::cli
