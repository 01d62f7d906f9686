#include "phopfield/harness/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include "phopfield/rng.hpp"

namespace phopfield::harness {

using nlohmann::json;

void RunConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  if (mode_count < 1 || mode_count > 20) fail("mode_count must be in [1, 20]");
  if (photon_count < 1 || photon_count > 4) fail("photon_count must be in [1, 4]");
  if (prep != "dft" && prep != "identity") fail("prep must be dft or identity");
  if (!injection.empty() && injection.size() != static_cast<std::size_t>(photon_count)) {
    fail("injection must list one mode per photon");
  }
  for (int m : injection) {
    if (m < 1 || m > mode_count) fail("injection mode out of range");
  }
  static const std::set<std::string> kinds{"haar", "hadamard", "dft", "identity", "file"};
  if (!kinds.count(scattering.kind)) fail("unknown scattering kind '" + scattering.kind + "'");
  if (scattering.kind == "hadamard" && scattering.rows.empty()) fail("hadamard scattering needs rows");
  if (scattering.kind == "file") {
    if (scattering.path.empty()) fail("file scattering needs a path");
    if (!std::ifstream(scattering.path)) fail("scattering file '" + scattering.path + "' does not exist");
  }
  if (targets.kind != "random" && targets.kind != "explicit") fail("targets.kind must be random or explicit");
  if (targets.kind == "explicit" && targets.configs.empty()) fail("explicit targets need configs");
  for (double t : temperatures) {
    if (!(t >= 0.0)) fail("temperatures must be non-negative");
  }
  for (double a : alphas) {
    if (!(a > 0.0 && a <= 1.0)) fail("alphas must be in (0, 1]");
  }
  for (int n : pattern_counts) {
    if (n < 1) fail("pattern_counts must be positive");
  }
  for (const auto& p : grid) {
    if (!(p.alpha > 0.0 && p.alpha <= 1.0) || !(p.temperature >= 0.0)) fail("grid point out of range");
  }
  if (replicas < 1) fail("replicas must be positive");
  if (disorder < 1) fail("disorder must be positive");
  if (n_steps < 1) fail("n_steps must be positive");
  if (burn_in >= n_steps) fail("burn_in must be smaller than n_steps");
  if (energy_mode != "exact" && energy_mode != "sampled") fail("energy_mode must be exact or sampled");
  if (events < 1) fail("events must be positive");
  if (threshold_mode != "fixed" && threshold_mode != "quantile") fail("threshold_mode must be fixed or quantile");
  if (min_replicas < 2) fail("min_replicas must be at least 2");
  if (max_lag < 0) fail("max_lag must be non-negative");
  for (const auto& s : spins) {
    if (s.size() != static_cast<std::size_t>(mode_count)) fail("each spin configuration needs M entries");
    for (int v : s) {
      if (v != 1 && v != -1) fail("spins must be +1 or -1");
    }
  }
  if (out.empty()) fail("out must not be empty");
}

EnergyMode RunConfig::resolved_energy_mode() const {
  return energy_mode == "sampled" ? EnergyMode::sampled(events) : EnergyMode::exact();
}

ThresholdMode RunConfig::resolved_threshold_mode() const {
  return threshold_mode == "quantile" ? ThresholdMode::quantile : ThresholdMode::fixed;
}

std::vector<SweepPoint> RunConfig::resolved_grid() const {
  if (!grid.empty()) return grid;
  std::vector<SweepPoint> out;
  for (double a : alphas) {
    for (double t : temperatures) out.push_back({a, t});
  }
  return out;
}

void to_json(json& j, const RunConfig& c) {
  json grid = json::array();
  for (const auto& p : c.grid) grid.push_back({p.alpha, p.temperature});
  j = json{
      {"mode_count", c.mode_count},
      {"photon_count", c.photon_count},
      {"prep", c.prep},
      {"injection", c.injection},
      {"scattering", {{"kind", c.scattering.kind}, {"index", c.scattering.index}, {"rows", c.scattering.rows},
                      {"path", c.scattering.path}}},
      {"targets", {{"kind", c.targets.kind}, {"configs", c.targets.configs}}},
      {"temperatures", c.temperatures},
      {"alphas", c.alphas},
      {"pattern_counts", c.pattern_counts},
      {"grid", grid},
      {"replicas", c.replicas},
      {"disorder", c.disorder},
      {"n_steps", c.n_steps},
      {"burn_in", c.burn_in},
      {"energy_mode", c.energy_mode},
      {"events", c.events},
      {"reestimate_incumbent", c.reestimate_incumbent},
      {"threshold_mode", c.threshold_mode},
      {"min_replicas", c.min_replicas},
      {"max_lag", c.max_lag},
      {"spins", c.spins},
      {"sample", c.sample},
      {"seed", c.seed},
      {"out", c.out},
      {"threads", c.threads},
  };
}

namespace {

template <class T>
void read(const json& j, const char* key, T& field) {
  if (auto it = j.find(key); it != j.end()) it->get_to(field);
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("config: unknown key '" + where + key + "'");
  }
}

}  // namespace

void from_json(const json& j, RunConfig& c) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  reject_unknown(j,
                 {"mode_count", "photon_count", "prep", "injection", "scattering", "targets", "temperatures",
                  "alphas", "pattern_counts", "grid", "replicas", "disorder", "n_steps", "burn_in", "energy_mode",
                  "events", "reestimate_incumbent", "threshold_mode", "min_replicas", "max_lag", "spins", "sample",
                  "seed", "out", "threads"},
                 "");
  read(j, "mode_count", c.mode_count);
  read(j, "photon_count", c.photon_count);
  read(j, "prep", c.prep);
  read(j, "injection", c.injection);
  if (auto it = j.find("scattering"); it != j.end()) {
    reject_unknown(*it, {"kind", "index", "rows", "path"}, "scattering.");
    read(*it, "kind", c.scattering.kind);
    read(*it, "index", c.scattering.index);
    read(*it, "rows", c.scattering.rows);
    read(*it, "path", c.scattering.path);
  }
  if (auto it = j.find("targets"); it != j.end()) {
    reject_unknown(*it, {"kind", "configs"}, "targets.");
    read(*it, "kind", c.targets.kind);
    read(*it, "configs", c.targets.configs);
  }
  read(j, "temperatures", c.temperatures);
  read(j, "alphas", c.alphas);
  read(j, "pattern_counts", c.pattern_counts);
  if (auto it = j.find("grid"); it != j.end()) {
    c.grid.clear();
    for (const auto& p : *it) {
      if (!p.is_array() || p.size() != 2) throw std::invalid_argument("config: grid entries are [alpha, T]");
      c.grid.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  }
  read(j, "replicas", c.replicas);
  read(j, "disorder", c.disorder);
  read(j, "n_steps", c.n_steps);
  read(j, "burn_in", c.burn_in);
  read(j, "energy_mode", c.energy_mode);
  read(j, "events", c.events);
  read(j, "reestimate_incumbent", c.reestimate_incumbent);
  read(j, "threshold_mode", c.threshold_mode);
  read(j, "min_replicas", c.min_replicas);
  read(j, "max_lag", c.max_lag);
  read(j, "spins", c.spins);
  read(j, "sample", c.sample);
  read(j, "seed", c.seed);
  read(j, "out", c.out);
  read(j, "threads", c.threads);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config " + path + ": " + e.what());
  }
  return j.get<RunConfig>();
}

UnitarySpec build_scattering(const RunConfig& c) {
  const auto& s = c.scattering;
  if (s.kind == "haar") {
    const ConfigurationSpace space(c.mode_count, c.photon_count);
    return make_disorder(c.mode_count, space, c.seed, s.index).scattering;
  }
  if (s.kind == "hadamard") {
    return hadamard_row_unitary(c.mode_count, s.rows, derive_seed(c.seed, "hadamard-completion", {s.index}));
  }
  if (s.kind == "dft") return dft_matrix(c.mode_count);
  if (s.kind == "identity") return identity_unitary(c.mode_count);
  auto loaded = load_unitary(s.path);
  if (loaded.dimension() != c.mode_count) throw std::invalid_argument("scattering file dimension differs from mode_count");
  return loaded;
}

UnitarySpec build_prep(const RunConfig& c) {
  return c.prep == "identity" ? identity_unitary(c.mode_count) : dft_matrix(c.mode_count);
}

PhotonConfiguration build_injection(const RunConfig& c) {
  std::vector<int> modes = c.injection;
  if (modes.empty()) modes.assign(static_cast<std::size_t>(c.photon_count), 1);
  return PhotonConfiguration::from_one_based(modes, c.mode_count);
}

TargetSet build_targets(const RunConfig& c, const ConfigurationSpace& space, std::size_t pattern_count) {
  if (c.targets.kind == "explicit") {
    std::vector<PhotonConfiguration> members;
    for (const auto& k : c.targets.configs) {
      if (k.size() != static_cast<std::size_t>(c.photon_count)) {
        throw std::invalid_argument("target configuration has the wrong photon count");
      }
      members.push_back(PhotonConfiguration::from_one_based(k, c.mode_count));
    }
    return {space, members};
  }
  if (pattern_count < 1 || pattern_count > space.size()) throw std::invalid_argument("pattern count out of range");
  const auto order = make_disorder(c.mode_count, space, c.seed, c.scattering.index).target_order;
  return {space, std::vector<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(pattern_count))};
}

std::string config_hash(const std::string& command, const RunConfig& config) {
  // Worker count and output root do not change results.
  RunConfig canonical = config;
  canonical.threads = 0;
  canonical.out.clear();
  const json j = canonical;
  const std::uint64_t h = fnv1a(command + "\n" + j.dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace phopfield::harness
