#include "phopfield/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "phopfield/parallel.hpp"

namespace phopfield {

void MCParams::validate() const {
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("temperature must be finite and non-negative");
  }
  if (n_steps < 1) throw std::invalid_argument("n_steps must be at least 1");
  if (resolved_burn_in() >= n_steps) throw std::invalid_argument("burn_in must be smaller than n_steps");
}

bool metropolis_accept(double delta_energy, double temperature, double u) noexcept {
  if (delta_energy <= 0.0) return true;
  if (temperature <= 0.0) return false;
  return u < std::exp(-delta_energy / temperature);
}

MetropolisChain::MetropolisChain(const EnergyEvaluator& evaluator, SpinConfiguration initial,
                                 const MCParams& params, std::uint64_t seed)
    : evaluator_(&evaluator),
      temperature_(params.temperature),
      reestimate_(params.reestimate_incumbent),
      rng_(seed) {
  state_ = evaluator.start(std::move(initial), &rng_);
}

bool MetropolisChain::update() {
  const int m = evaluator_->mode_count();
  const int i = static_cast<int>(rng_.below(static_cast<std::uint64_t>(m)));
  ++proposals_;
  const double proposed = evaluator_->propose_flip(state_, i, &rng_);
  double current = state_.energy;
  if (reestimate_ && evaluator_->mode().kind == EnergyMode::Kind::sampled) {
    current = evaluator_->reestimate(state_, &rng_);
    state_.energy = current;
  }
  const double delta = proposed - current;
  const double u = (delta > 0.0 && temperature_ > 0.0) ? rng_.uniform() : 0.0;
  if (!metropolis_accept(delta, temperature_, u)) return false;
  evaluator_->commit_flip(state_, i, proposed);
  ++accepted_;
  return true;
}

void MetropolisChain::run_mcs() {
  const int m = evaluator_->mode_count();
  for (int p = 0; p < m; ++p) update();
}

SpinConfiguration Trajectory::spins_at(int t) const {
  if (!has_spins()) throw std::logic_error("trajectory did not record spins");
  if (t < 0 || t > steps()) throw std::out_of_range("time step outside the trajectory");
  const auto begin = spin_history.begin() + static_cast<std::ptrdiff_t>(t) * mode_count;
  return SpinConfiguration(std::vector<int>(begin, begin + mode_count));
}

Trajectory run_trajectory(const EnergyEvaluator& evaluator, SpinConfiguration initial, const MCParams& params) {
  params.validate();
  Trajectory traj;
  traj.mode_count = evaluator.mode_count();
  traj.burn_in = params.resolved_burn_in();
  MetropolisChain chain(evaluator, std::move(initial), params, params.seed);
  auto record = [&] {
    traj.energies.push_back(chain.energy());
    if (params.record_spins) {
      for (int s : chain.spins().spins()) traj.spin_history.push_back(static_cast<signed char>(s));
    }
  };
  traj.energies.reserve(static_cast<std::size_t>(params.n_steps) + 1);
  if (params.record_spins) {
    traj.spin_history.reserve((static_cast<std::size_t>(params.n_steps) + 1) * static_cast<std::size_t>(traj.mode_count));
  }
  record();
  for (int t = 0; t < params.n_steps; ++t) {
    chain.run_mcs();
    record();
  }
  traj.final_spins = chain.spins();
  traj.accepted = chain.accepted();
  traj.proposals = chain.proposals();
  return traj;
}

double autocorrelation(const Trajectory& trajectory, int tau) {
  if (!trajectory.has_spins()) throw std::invalid_argument("autocorrelation needs recorded spins");
  if (tau < 0) throw std::invalid_argument("lag must be non-negative");
  const int first = trajectory.burn_in;
  const int last = trajectory.steps() - tau;
  if (last < first) throw std::invalid_argument("insufficient samples for this lag");
  const int m = trajectory.mode_count;
  const auto* data = trajectory.spin_history.data();
  long long total = 0;
  for (int t = first; t <= last; ++t) {
    const auto* a = data + static_cast<std::ptrdiff_t>(t) * m;
    const auto* b = data + static_cast<std::ptrdiff_t>(t + tau) * m;
    for (int i = 0; i < m; ++i) total += a[i] * b[i];
  }
  return static_cast<double>(total) / (static_cast<double>(m) * static_cast<double>(last - first + 1));
}

SpinConfiguration random_spins(int mode_count, CounterRng& rng) {
  std::vector<int> spins(static_cast<std::size_t>(mode_count));
  for (int& s : spins) s = (rng() >> 63) ? 1 : -1;
  return SpinConfiguration(std::move(spins));
}

std::vector<SpinConfiguration> ReplicaEnsemble::final_states() const {
  std::vector<SpinConfiguration> out;
  out.reserve(replicas.size());
  for (const auto& r : replicas) out.push_back(r.final_spins);
  return out;
}

ReplicaEnsemble run_replicas(const EnergyEvaluator& evaluator, const MCParams& params, int replica_count,
                             std::uint64_t stream, unsigned threads) {
  params.validate();
  if (replica_count < 1) throw std::invalid_argument("need at least one replica");
  ReplicaEnsemble ensemble;
  ensemble.temperature = params.temperature;
  ensemble.replicas.resize(static_cast<std::size_t>(replica_count));
  parallel_for(ensemble.replicas.size(), threads, [&](std::size_t a) {
    const std::uint64_t seed = derive_seed(params.seed, "replica", {stream, a});
    CounterRng init_rng(derive_seed(seed, "initial"));
    MCParams replica_params = params;
    replica_params.seed = derive_seed(seed, "chain");
    ensemble.replicas[a] = run_trajectory(evaluator, random_spins(evaluator.mode_count(), init_rng), replica_params);
  });
  return ensemble;
}

}  // namespace phopfield
