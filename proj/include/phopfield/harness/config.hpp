#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phopfield/analysis.hpp"
#include "phopfield/model.hpp"

namespace phopfield::harness {

struct ScatteringSource {
  /// "haar" (disorder realization `index` of the master seed), "hadamard"
  /// (rows below, completed with `index`), "dft", "identity" or "file".
  std::string kind = "haar";
  std::uint64_t index = 0;
  std::vector<std::vector<int>> rows;
  std::string path;

  bool operator==(const ScatteringSource&) const = default;
};

struct TargetSource {
  /// "random": the first N_P entries of realization `index`'s shuffled C.
  /// "explicit": the one-based configurations in `configs`.
  std::string kind = "random";
  std::vector<std::vector<int>> configs;

  bool operator==(const TargetSource&) const = default;
};

/// Every parameter of a run. Round-trips through JSON losslessly.
struct RunConfig {
  int mode_count = 6;
  int photon_count = 2;
  std::string prep = "dft";
  std::vector<int> injection;  // one-based; empty = all photons in mode 1
  ScatteringSource scattering;
  TargetSource targets;
  std::vector<double> temperatures{0.1};
  std::vector<double> alphas;
  std::vector<int> pattern_counts{1};
  std::vector<SweepPoint> grid;  // explicit (alpha, T) points; else alphas x temperatures
  int replicas = 1;
  int disorder = 1;
  int n_steps = 1000;
  int burn_in = -1;
  std::string energy_mode = "exact";
  std::uint64_t events = 10000;
  bool reestimate_incumbent = true;
  std::string threshold_mode = "fixed";
  int min_replicas = 30;
  int max_lag = 100;
  std::vector<std::vector<int>> spins;  // distribution: requested sigma; empty = all 2^M
  bool sample = false;                  // distribution: also emit sampled estimates
  std::uint64_t seed = 1;
  std::string out = "runs";
  unsigned threads = 0;

  bool operator==(const RunConfig&) const = default;

  /// Throws std::invalid_argument on any out-of-range field.
  void validate() const;
  EnergyMode resolved_energy_mode() const;
  ThresholdMode resolved_threshold_mode() const;
  std::vector<SweepPoint> resolved_grid() const;
};

void to_json(nlohmann::json& j, const RunConfig& c);
/// Unknown keys are rejected.
void from_json(const nlohmann::json& j, RunConfig& c);

RunConfig load_config(const std::string& path);

/// Scattering unitary named by the config.
UnitarySpec build_scattering(const RunConfig& config);
UnitarySpec build_prep(const RunConfig& config);
PhotonConfiguration build_injection(const RunConfig& config);
/// Target set for `pattern_count` (random source) or the explicit list.
TargetSet build_targets(const RunConfig& config, const ConfigurationSpace& space, std::size_t pattern_count);

/// Hex digest of the command and resolved config; names the run directory.
std::string config_hash(const std::string& command, const RunConfig& config);

}  // namespace phopfield::harness
