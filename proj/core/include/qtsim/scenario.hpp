#ifndef QTSIM_SCENARIO_HPP
#define QTSIM_SCENARIO_HPP

#include "qtsim/collision.hpp"
#include "qtsim/diagnostics.hpp"
#include "qtsim/propagator.hpp"
#include "qtsim/state.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qtsim {

struct PacketSpec {
    double x0;
    double k0;
    double a0;
};

struct GridBlock {
    double x_min;
    double x_max;
    int n_points;
};

struct PotentialBlock {
    std::string type = "free"; // "free" | "double_barrier"
    double center = 0.0;
    double barrier_width = 0.0;
    double height = 0.0;
    double well_width = 0.0;
};

struct EvolutionBlock {
    double dt;
    double t_end;
    int substeps = 1;
    std::vector<double> snapshot_times;
};

struct CollisionBlock {
    std::string mode = "none"; // "none" | "he" | "gs"
    double t_S = 0.0;
    double k_F = 0.0;
    WeightMode weight_mode = AutoMaxSafe{};  // he only
    std::optional<double> x0_ref;            // default: charge centroid at t_S
    int electron_count = 1;                  // gs only
    int source_index = 0;                    // gs only
    int occupation = 1;                      // gs only
};

struct OutputBlock {
    int wigner_stride = 4;
    std::string wigner_format = "text"; // "text" | "binary"
};

struct ScenarioConfig {
    GridBlock grid;
    double mass; // m*/m0
    std::vector<PacketSpec> packets;
    std::vector<double> coefficients;
    PotentialBlock potential;
    EvolutionBlock evolution;
    CollisionBlock collision;
    OutputBlock output;
};

/// Parses and validates a JSON config document. On failure `config` is
/// empty and `errors` holds every problem found (unknown keys, missing
/// fields, range violations), not just the first.
struct ValidationResult {
    std::optional<ScenarioConfig> config;
    std::vector<std::string> errors;
    bool ok() const { return config.has_value(); }
};
ValidationResult validate_config(const std::string& raw);

/// Reads the file and validates it; throws ConfigError carrying the full
/// error list on failure.
ScenarioConfig load_config_file(const std::string& path);

/// In-memory pipeline result, one entry per requested snapshot (sorted by
/// time; snapshots at or after t_S see the post-collision ensemble).
struct SnapshotResult {
    double requested_time;
    double time;
    SignedEnsemble ensemble;
    ChargeDensity q;
    NormDecomposition decomposition;
    NegativityReport negativity;
};

struct ScenarioResult {
    std::vector<SnapshotResult> snapshots;
    SignedEnsemble final_state;
    double t_final = 0.0;
    std::optional<double> resolved_weight; // he mode
    double resolved_x0_ref = 0.0;          // he/gs mode
};

/// Runs build -> evolve -> collide -> evolve without touching the
/// filesystem.
ScenarioResult execute_scenario(const ScenarioConfig& cfg);

/// Full pipeline plus emission: per-snapshot charge profile, Wigner field
/// and negativity report, a decomposition table, and manifest.json (every
/// emitted file indexed with an fnv1a-64 checksum). Returns the manifest
/// path.
std::string run_scenario(const ScenarioConfig& cfg, const std::string& out_dir);

/// Bisection on the H.E. collision weight so the negative part of the
/// norm decomposition at the final snapshot time hits `target_negative`
/// (a negative number). The search reuses one evolution of the
/// pre-collision state and the two collision packets, so it is cheap.
/// Throws ConfigError if the target is outside the reachable range for
/// w in (0, w_max].
double calibrate_he_weight(const ScenarioConfig& cfg, double target_negative,
                           double w_max = 1.0, double tol = 1e-6);

/// FNV-1a 64-bit hash of a byte string, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

} // namespace qtsim

#endif
