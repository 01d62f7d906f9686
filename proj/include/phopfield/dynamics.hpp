#pragma once

#include <cstdint>
#include <vector>

#include "phopfield/fock.hpp"
#include "phopfield/model.hpp"
#include "phopfield/rng.hpp"

namespace phopfield {

struct MCParams {
  double temperature = 0.1;
  /// Monte Carlo steps; one step is M single-spin proposals.
  int n_steps = 1000;
  /// Steps discarded before averaging; negative selects n_steps / 2.
  int burn_in = -1;
  std::uint64_t seed = 0;
  /// In sampled energy mode, re-measure the incumbent energy at every
  /// proposal instead of reusing the cached estimate.
  bool reestimate_incumbent = true;
  /// Keep sigma(t) for every step (needed for autocorrelations).
  bool record_spins = true;

  int resolved_burn_in() const { return burn_in < 0 ? n_steps / 2 : burn_in; }
  /// Throws std::invalid_argument if T < 0, n_steps < 1 or burn_in >= n_steps.
  void validate() const;
};

/// Metropolis rule: downhill and flat moves are always taken; uphill moves
/// with probability exp(-dE/T), never at T = 0. `u` is uniform on [0, 1).
bool metropolis_accept(double delta_energy, double temperature, double u) noexcept;

/// Single-spin-flip Metropolis chain over one energy landscape. The
/// evaluator must outlive the chain.
class MetropolisChain {
 public:
  MetropolisChain(const EnergyEvaluator& evaluator, SpinConfiguration initial, const MCParams& params,
                  std::uint64_t seed);

  /// One proposal at a uniformly chosen spin. Returns true if accepted.
  bool update();
  /// One Monte Carlo step: exactly M proposals.
  void run_mcs();

  const SpinConfiguration& spins() const noexcept { return state_.spins; }
  double energy() const noexcept { return state_.energy; }
  std::uint64_t accepted() const noexcept { return accepted_; }
  std::uint64_t proposals() const noexcept { return proposals_; }

 private:
  const EnergyEvaluator* evaluator_;
  double temperature_;
  bool reestimate_;
  CounterRng rng_;
  EnergyEvaluator::ChainState state_;
  std::uint64_t accepted_ = 0;
  std::uint64_t proposals_ = 0;
};

/// sigma(t) and H(t) recorded once per Monte Carlo step, t = 0..n_steps.
struct Trajectory {
  int mode_count = 0;
  int burn_in = 0;
  std::vector<signed char> spin_history;  // row-major, (n_steps + 1) x M; empty if not recorded
  std::vector<double> energies;
  SpinConfiguration final_spins;
  std::uint64_t accepted = 0;
  std::uint64_t proposals = 0;

  int steps() const noexcept { return static_cast<int>(energies.size()) - 1; }
  bool has_spins() const noexcept { return !spin_history.empty(); }
  SpinConfiguration spins_at(int t) const;
  double acceptance_rate() const noexcept {
    return proposals ? static_cast<double>(accepted) / static_cast<double>(proposals) : 0.0;
  }
};

Trajectory run_trajectory(const EnergyEvaluator& evaluator, SpinConfiguration initial, const MCParams& params);

/// F_self(tau) = (1/M) mean_t sigma(t) . sigma(t + tau) over t >= burn-in.
/// Throws std::invalid_argument if the window holds no sample pair.
double autocorrelation(const Trajectory& trajectory, int tau);

/// Uniform random spin configuration.
SpinConfiguration random_spins(int mode_count, CounterRng& rng);

/// Independent replicas sharing one energy landscape and temperature.
struct ReplicaEnsemble {
  double temperature = 0.0;
  std::vector<Trajectory> replicas;

  std::vector<SpinConfiguration> final_states() const;
};

/// Runs `replica_count` chains from uniform random starts. Replica a uses
/// the stream derive_seed(params.seed, "replica", {stream, a}), so results
/// are independent of `threads`.
ReplicaEnsemble run_replicas(const EnergyEvaluator& evaluator, const MCParams& params, int replica_count,
                             std::uint64_t stream = 0, unsigned threads = 1);

}  // namespace phopfield
