#pragma once

// Experiment driver: declarative configuration, deterministic artifacts.
// Every runner consumes an ExperimentConfig, writes its CSV (or mesh file)
// atomically under `out_dir`, and returns the exit-status contract
// 0 = pass, 1 = fail (a checked assertion did not hold), 2 = inconclusive
// (invalid configuration or an error before any verdict).

#include "heatrig/fem.hpp"
#include "heatrig/geometry.hpp"
#include "heatrig/sphereband.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace heatrig {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitStatus : int { kExitPass = 0, kExitFail = 1, kExitInconclusive = 2 };

struct ExperimentConfig {
    DomainSpec domain = DomainSpec::disk_spec(1.0, 0.05);
    int refine = 0;
    std::vector<double> times = {0.05, 0.1, 0.2, 0.4, 0.8, 1.6};
    int mode_count = 120;
    double tolerance = 0.02;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::string psi = "one";  // heatcontent test function: "one" | "seeded"
    sphereband::BandSpec band = sphereband::cap_spec(1.5707963267948966);
    double band_tol = 1e-6;   // grid-calibrated noise for the constant-flow verdict

    void validate() const;  // throws std::invalid_argument with a diagnostic
};

/// Plain-text configuration: `[section]` headers, `key = value` lines,
/// `#`/`;` comments.  Sections: [domain], [times], [run], [band].
/// Times come from `list = ...`, or `start/ratio/count` (geometric), or
/// `start/stop/count` (log-spaced endpoints).
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

/// Canonical single-line rendering of every effective field; equal configs
/// render identically, so the FNV-1a hash below is a stable fingerprint.
std::string canonical_text(const ExperimentConfig& cfg);
std::uint64_t fnv1a64(const std::string& text);
std::string config_hash(const ExperimentConfig& cfg);  // 16 hex digits

/// CSV artifact: `#`-prefixed metadata lines, one header row, numeric rows
/// rendered with 17 significant digits.  `write_atomic` stages to a temp
/// file and renames, so readers never observe partial output.
class CsvWriter {
public:
    void meta(const std::string& key, const std::string& value);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    std::string body() const;
    void write_atomic(const std::string& path) const;

private:
    std::vector<std::string> meta_;
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

/// Seeded zero-average boundary test function: hand-rolled Box-Muller normals
/// on mt19937_64 (named generator "boxmuller-mt19937_64", bit-stable across
/// platforms), projected B-orthogonal to constants and B-normalized.
/// Returned in boundary-loop ordering (one value per sys.boundary entry).
Vector zero_average_boundary_function(const SystemMatrices& sys, std::uint64_t seed);

int run_mesh(const ExperimentConfig& cfg);
int run_eigs(const ExperimentConfig& cfg);
int run_flux(const ExperimentConfig& cfg);
int run_serrin(const ExperimentConfig& cfg);
int run_heatcontent(const ExperimentConfig& cfg);
int run_interior(const ExperimentConfig& cfg);
int run_sphereband(const ExperimentConfig& cfg);

/// Dispatch by subcommand name; unknown names are inconclusive (2).
int run(const std::string& subcommand, const ExperimentConfig& cfg);

}  // namespace heatrig
