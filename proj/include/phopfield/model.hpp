#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "phopfield/fock.hpp"
#include "phopfield/linalg.hpp"
#include "phopfield/rng.hpp"

namespace phopfield {

/// Amplitudes a_x of the n-photon input state, indexed by configuration
/// ordinal. `injection` is set when the state was prepared by a unitary
/// acting on a Fock state, which enables the composed-matrix path.
struct InputState {
  std::vector<cplx> amplitudes;
  std::optional<PhotonConfiguration> injection;

  double norm_squared() const;
};

/// Quenched disorder of one simulator instance: scattering S, the
/// preparation unitary and the Fock state injected into it.
struct ScatteringSpec {
  UnitarySpec scattering;
  UnitarySpec prep;
  PhotonConfiguration injection;

  int mode_count() const noexcept { return scattering.dimension(); }
  /// Throws std::invalid_argument on inconsistent dimensions.
  void validate() const;
};

/// a_x = Perm(prep_{x|inj}) / sqrt(mu(inj) mu(x)). Throws std::logic_error if
/// the result is not normalized to 1e-10, which signals a multiplicity
/// convention inconsistent with bosonic statistics.
InputState prepare_input(const ConfigurationSpace& space, const UnitarySpec& prep,
                         const PhotonConfiguration& injection,
                         MultiplicityConvention convention = MultiplicityConvention::factorial);

enum class AmplitudePath {
  /// One permanent of S diag(sigma) prep on the injected columns.
  composed,
  /// Sum over input configurations of a_x Perm(S_{k|x}) prod sigma.
  configuration_sum,
};

/// X^{(k)}_x = (a_x / sqrt(mu(x))) Perm(S_{k|x}) / sqrt(mu(k)) for k in K.
struct PatternTensor {
  std::vector<std::size_t> targets;             // ordinals of K
  std::vector<std::vector<cplx>> patterns;      // [target][input ordinal]

  /// Position of ordinal `k` in `targets`; throws std::out_of_range if k is not stored.
  std::size_t slot(std::size_t k) const;
};

/// J(x, y) = sum_k X^{(k)}_x conj(X^{(k)}_y), Hermitian.
struct SynapticTensor {
  ComplexMatrix coupling;
};

/// Scattering spec, input state and configuration space bundled together.
class PhotonicModel {
 public:
  /// Prepares the input state from spec.prep and spec.injection.
  PhotonicModel(ScatteringSpec spec, int photon_count,
                MultiplicityConvention convention = MultiplicityConvention::factorial);
  /// Uses an explicit input state; the composed path is then unavailable
  /// unless `input.injection` is set.
  PhotonicModel(ScatteringSpec spec, int photon_count, InputState input,
                MultiplicityConvention convention = MultiplicityConvention::factorial);

  const ConfigurationSpace& space() const noexcept { return space_; }
  const ScatteringSpec& spec() const noexcept { return spec_; }
  const InputState& input() const noexcept { return input_; }
  int mode_count() const noexcept { return space_.mode_count(); }
  int photon_count() const noexcept { return space_.photon_count(); }
  MultiplicityConvention convention() const noexcept { return convention_; }
  bool has_composed_path() const noexcept { return input_.injection.has_value(); }

  /// <k | S diag(sigma) | psi0>
  cplx amplitude(const SpinConfiguration& sigma, const PhotonConfiguration& k,
                 AmplitudePath path = AmplitudePath::composed) const;
  std::vector<cplx> amplitudes(const SpinConfiguration& sigma,
                               AmplitudePath path = AmplitudePath::composed) const;
  /// P(k) = |<k|psi>|^2 over every ordinal.
  std::vector<double> output_distribution(const SpinConfiguration& sigma,
                                          AmplitudePath path = AmplitudePath::composed) const;
  /// Sum of P(k) over K; 0 for an empty K.
  double target_probability(const SpinConfiguration& sigma, const TargetSet& targets) const;
  /// H = -M P_S(sigma, K).
  double energy(const SpinConfiguration& sigma, const TargetSet& targets) const;

  PatternTensor pattern_tensor(const TargetSet& targets) const;

  /// 1 / sqrt(mu(x)) for every ordinal.
  const std::vector<double>& inverse_sqrt_multiplicity() const noexcept { return inv_sqrt_mu_; }

 private:
  void check_sigma(const SpinConfiguration& sigma) const;
  std::vector<ComplexVector> injected_columns(const SpinConfiguration& sigma) const;

  ScatteringSpec spec_;
  ConfigurationSpace space_;
  InputState input_;
  MultiplicityConvention convention_;
  std::vector<double> inv_sqrt_mu_;
};

SynapticTensor synaptic_tensor(const PatternTensor& patterns, std::size_t space_size);

/// sum_{x,y} J(x,y) prod sigma_x prod sigma_y (real part; the imaginary part
/// vanishes for a Hermitian J).
double tensor_target_probability(const SynapticTensor& j, const ConfigurationSpace& space,
                                 const SpinConfiguration& sigma);

/// 1/2 sum |P_k - Q_k|. Both inputs must have equal length and sum to 1 +- 1e-6.
double total_variation_distance(std::span<const double> p, std::span<const double> q);

/// Multinomial draw of `events` outcomes from `p` by inverse-CDF sampling.
std::vector<std::uint64_t> sample_counts(std::span<const double> p, std::uint64_t events,
                                         CounterRng& rng);
std::vector<std::uint64_t> sample_counts(std::span<const double> p, std::uint64_t events,
                                         std::uint64_t seed);

std::vector<double> empirical_distribution(std::span<const std::uint64_t> counts);

struct EnergyMode {
  enum class Kind { exact, sampled };
  Kind kind = Kind::exact;
  std::uint64_t events = 10000;

  static EnergyMode exact() { return {}; }
  static EnergyMode sampled(std::uint64_t events) { return {Kind::sampled, events}; }
};

/// Energy oracle for Metropolis chains. Keeps the injected columns
/// S diag(sigma) prep[:, inj] per chain so a single flip costs O(n_ph M)
/// plus one permanent per target. Falls back to cached pattern tensors when
/// the input state has no injection.
class EnergyEvaluator {
 public:
  struct ChainState {
    SpinConfiguration spins;
    double energy = 0.0;
    std::vector<ComplexVector> columns;
    std::vector<ComplexVector> pending;
    std::uint64_t updates_since_refresh = 0;
  };

  EnergyEvaluator(const PhotonicModel& model, TargetSet targets, EnergyMode mode = EnergyMode::exact());

  const PhotonicModel& model() const noexcept { return *model_; }
  const TargetSet& targets() const noexcept { return targets_; }
  const EnergyMode& mode() const noexcept { return mode_; }
  int mode_count() const noexcept { return model_->mode_count(); }

  /// `rng` is required in sampled mode.
  ChainState start(SpinConfiguration sigma, CounterRng* rng = nullptr) const;
  /// Energy (or sampled estimate) after flipping spin i; leaves the state unchanged.
  double propose_flip(ChainState& state, int i, CounterRng* rng = nullptr) const;
  /// Applies the flip evaluated by the last propose_flip on this state.
  void commit_flip(ChainState& state, int i, double energy) const;
  /// Fresh estimate of the current state's energy (exact mode returns the cached value).
  double reestimate(const ChainState& state, CounterRng* rng) const;

  /// Stateless evaluation of H(sigma).
  double energy(const SpinConfiguration& sigma, CounterRng* rng = nullptr) const;

 private:
  double energy_from_columns(const std::vector<ComplexVector>& columns, const SpinConfiguration& sigma,
                             CounterRng* rng) const;
  void fill_columns(const SpinConfiguration& sigma, std::vector<ComplexVector>& columns) const;

  const PhotonicModel* model_;
  TargetSet targets_;
  EnergyMode mode_;
  std::vector<int> injection_modes_;
  double inv_sqrt_mu_injection_ = 1.0;
  std::vector<std::vector<int>> target_modes_;
  std::vector<double> target_scale_;
  std::optional<PatternTensor> patterns_;
};

}  // namespace phopfield
