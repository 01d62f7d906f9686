#include "phopfield/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace phopfield {
namespace {

// Permanent of the n x n matrix (columns[j][modes[i]]), the amplitude kernel
// of the composed path.
cplx column_permanent(const std::vector<ComplexVector>& columns, const std::vector<int>& modes) {
  const std::size_t n = modes.size();
  if (n == 1) return columns[0](modes[0]);
  if (n == 2) {
    return columns[0](modes[0]) * columns[1](modes[1]) + columns[1](modes[0]) * columns[0](modes[1]);
  }
  ComplexMatrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = columns[j](modes[i]);
    }
  }
  return permanent(a);
}

}  // namespace

double InputState::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amplitudes) total += std::norm(a);
  return total;
}

void ScatteringSpec::validate() const {
  const int m = scattering.dimension();
  if (m < 1) throw std::invalid_argument("scattering matrix is empty");
  if (prep.dimension() != m) throw std::invalid_argument("preparation unitary dimension differs from S");
  for (int mode : injection.modes()) {
    if (mode < 0 || mode >= m) throw std::invalid_argument("injection mode outside the device");
  }
}

InputState prepare_input(const ConfigurationSpace& space, const UnitarySpec& prep,
                         const PhotonConfiguration& injection, MultiplicityConvention convention) {
  if (prep.dimension() != space.mode_count()) {
    throw std::invalid_argument("preparation unitary does not match the mode count");
  }
  if (injection.photon_count() != space.photon_count()) {
    throw std::invalid_argument("injection photon count does not match the configuration space");
  }
  InputState state;
  state.injection = injection;
  state.amplitudes.reserve(space.size());
  const double mu_in = static_cast<double>(multiplicity(injection, convention));
  for (const auto& x : space.configurations()) {
    const double mu_x = static_cast<double>(multiplicity(x, convention));
    state.amplitudes.push_back(permanent(submatrix(prep.matrix, x, injection)) / std::sqrt(mu_in * mu_x));
  }
  const double norm = state.norm_squared();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw std::logic_error("prepared input state has norm^2 " + std::to_string(norm) +
                           "; the multiplicity convention is inconsistent");
  }
  return state;
}

std::size_t PatternTensor::slot(std::size_t k) const {
  auto it = std::lower_bound(targets.begin(), targets.end(), k);
  if (it == targets.end() || *it != k) throw std::out_of_range("configuration is not a stored pattern");
  return static_cast<std::size_t>(it - targets.begin());
}

PhotonicModel::PhotonicModel(ScatteringSpec spec, int photon_count, MultiplicityConvention convention)
    : spec_(std::move(spec)),
      space_(spec_.mode_count(), photon_count),
      convention_(convention) {
  spec_.validate();
  input_ = prepare_input(space_, spec_.prep, spec_.injection, convention_);
  inv_sqrt_mu_.reserve(space_.size());
  for (const auto& x : space_.configurations()) {
    inv_sqrt_mu_.push_back(1.0 / std::sqrt(static_cast<double>(multiplicity(x, convention_))));
  }
}

PhotonicModel::PhotonicModel(ScatteringSpec spec, int photon_count, InputState input,
                             MultiplicityConvention convention)
    : spec_(std::move(spec)),
      space_(spec_.mode_count(), photon_count),
      input_(std::move(input)),
      convention_(convention) {
  spec_.validate();
  if (input_.amplitudes.size() != space_.size()) {
    throw std::invalid_argument("input state size does not match the configuration space");
  }
  if (std::abs(input_.norm_squared() - 1.0) > 1e-10) {
    throw std::invalid_argument("input state is not normalized");
  }
  inv_sqrt_mu_.reserve(space_.size());
  for (const auto& x : space_.configurations()) {
    inv_sqrt_mu_.push_back(1.0 / std::sqrt(static_cast<double>(multiplicity(x, convention_))));
  }
}

void PhotonicModel::check_sigma(const SpinConfiguration& sigma) const {
  if (sigma.size() != mode_count()) throw std::invalid_argument("spin configuration length differs from M");
}

std::vector<ComplexVector> PhotonicModel::injected_columns(const SpinConfiguration& sigma) const {
  const int m = mode_count();
  ComplexVector signs(m);
  for (int i = 0; i < m; ++i) signs(i) = static_cast<double>(sigma[static_cast<std::size_t>(i)]);
  std::vector<ComplexVector> columns;
  for (int mode : input_.injection->modes()) {
    columns.push_back(spec_.scattering.matrix * signs.cwiseProduct(spec_.prep.matrix.col(mode)));
  }
  return columns;
}

cplx PhotonicModel::amplitude(const SpinConfiguration& sigma, const PhotonConfiguration& k,
                              AmplitudePath path) const {
  check_sigma(sigma);
  const std::size_t k_ordinal = space_.index(k);
  if (path == AmplitudePath::composed) {
    if (!has_composed_path()) throw std::logic_error("composed path needs a prepared input state");
    const double mu_in = static_cast<double>(multiplicity(*input_.injection, convention_));
    return column_permanent(injected_columns(sigma), k.modes()) * inv_sqrt_mu_[k_ordinal] /
           std::sqrt(mu_in);
  }
  cplx total{0.0, 0.0};
  for (std::size_t x = 0; x < space_.size(); ++x) {
    const auto& a = input_.amplitudes[x];
    if (a == cplx{0.0, 0.0}) continue;
    const auto& config = space_[x];
    total += a * permanent(submatrix(spec_.scattering.matrix, k, config)) * inv_sqrt_mu_[x] *
             inv_sqrt_mu_[k_ordinal] * static_cast<double>(sigma.parity(config));
  }
  return total;
}

std::vector<cplx> PhotonicModel::amplitudes(const SpinConfiguration& sigma, AmplitudePath path) const {
  check_sigma(sigma);
  std::vector<cplx> out;
  out.reserve(space_.size());
  if (path == AmplitudePath::composed) {
    if (!has_composed_path()) throw std::logic_error("composed path needs a prepared input state");
    const auto columns = injected_columns(sigma);
    const double inv_sqrt_mu_in =
        1.0 / std::sqrt(static_cast<double>(multiplicity(*input_.injection, convention_)));
    for (std::size_t k = 0; k < space_.size(); ++k) {
      out.push_back(column_permanent(columns, space_[k].modes()) * inv_sqrt_mu_[k] * inv_sqrt_mu_in);
    }
    return out;
  }
  for (const auto& k : space_.configurations()) out.push_back(amplitude(sigma, k, path));
  return out;
}

std::vector<double> PhotonicModel::output_distribution(const SpinConfiguration& sigma,
                                                       AmplitudePath path) const {
  const auto amps = amplitudes(sigma, path);
  std::vector<double> p;
  p.reserve(amps.size());
  for (const auto& a : amps) p.push_back(std::norm(a));
  return p;
}

double PhotonicModel::target_probability(const SpinConfiguration& sigma, const TargetSet& targets) const {
  if (targets.empty()) return 0.0;
  const auto path = has_composed_path() ? AmplitudePath::composed : AmplitudePath::configuration_sum;
  double total = 0.0;
  for (std::size_t k : targets.ordinals()) total += std::norm(amplitude(sigma, space_[k], path));
  return total;
}

double PhotonicModel::energy(const SpinConfiguration& sigma, const TargetSet& targets) const {
  return -static_cast<double>(mode_count()) * target_probability(sigma, targets);
}

PatternTensor PhotonicModel::pattern_tensor(const TargetSet& targets) const {
  PatternTensor x;
  x.targets = targets.ordinals();
  x.patterns.reserve(targets.size());
  for (std::size_t k : targets.ordinals()) {
    std::vector<cplx> pattern(space_.size());
    for (std::size_t y = 0; y < space_.size(); ++y) {
      pattern[y] = input_.amplitudes[y] * inv_sqrt_mu_[y] *
                   permanent(submatrix(spec_.scattering.matrix, space_[k], space_[y])) * inv_sqrt_mu_[k];
    }
    x.patterns.push_back(std::move(pattern));
  }
  return x;
}

SynapticTensor synaptic_tensor(const PatternTensor& patterns, std::size_t space_size) {
  const auto n = static_cast<Eigen::Index>(space_size);
  SynapticTensor j{ComplexMatrix::Zero(n, n)};
  for (const auto& pattern : patterns.patterns) {
    if (pattern.size() != space_size) throw std::invalid_argument("pattern length differs from space size");
    const Eigen::Map<const ComplexVector> v(pattern.data(), n);
    j.coupling += v * v.adjoint();
  }
  return j;
}

double tensor_target_probability(const SynapticTensor& j, const ConfigurationSpace& space,
                                 const SpinConfiguration& sigma) {
  const auto n = static_cast<Eigen::Index>(space.size());
  if (j.coupling.rows() != n || j.coupling.cols() != n) {
    throw std::invalid_argument("synaptic tensor does not match the configuration space");
  }
  Eigen::VectorXd parity(n);
  for (Eigen::Index x = 0; x < n; ++x) parity(x) = sigma.parity(space[static_cast<std::size_t>(x)]);
  const cplx value = (parity.cast<cplx>().transpose() * j.coupling * parity.cast<cplx>())(0, 0);
  return value.real();
}

double total_variation_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("distributions have different lengths");
  const double sp = std::accumulate(p.begin(), p.end(), 0.0);
  const double sq = std::accumulate(q.begin(), q.end(), 0.0);
  if (std::abs(sp - 1.0) > 1e-6 || std::abs(sq - 1.0) > 1e-6) {
    throw std::invalid_argument("distributions must sum to 1");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += std::abs(p[i] - q[i]);
  return 0.5 * total;
}

std::vector<std::uint64_t> sample_counts(std::span<const double> p, std::uint64_t events, CounterRng& rng) {
  if (events == 0) throw std::invalid_argument("sample_counts needs at least one event");
  if (p.empty()) throw std::invalid_argument("sample_counts needs a non-empty distribution");
  std::vector<double> cdf(p.size());
  double running = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < -1e-12 || !std::isfinite(p[i])) throw std::invalid_argument("invalid probability");
    running += std::max(p[i], 0.0);
    cdf[i] = running;
    if (p[i] > 0.0) last_positive = i;
  }
  if (std::abs(running - 1.0) > 1e-6) throw std::invalid_argument("distribution must sum to 1");

  std::vector<std::uint64_t> counts(p.size(), 0);
  for (std::uint64_t e = 0; e < events; ++e) {
    const double u = rng.uniform() * running;
    auto bin = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    ++counts[std::min(bin, last_positive)];
  }
  return counts;
}

std::vector<std::uint64_t> sample_counts(std::span<const double> p, std::uint64_t events, std::uint64_t seed) {
  CounterRng rng(seed);
  return sample_counts(p, events, rng);
}

std::vector<double> empirical_distribution(std::span<const std::uint64_t> counts) {
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  std::vector<double> out;
  out.reserve(counts.size());
  for (auto c : counts) out.push_back(total > 0 ? static_cast<double>(c) / total : 0.0);
  return out;
}

EnergyEvaluator::EnergyEvaluator(const PhotonicModel& model, TargetSet targets, EnergyMode mode)
    : model_(&model), targets_(std::move(targets)), mode_(mode) {
  if (mode_.kind == EnergyMode::Kind::sampled && mode_.events == 0) {
    throw std::invalid_argument("sampled energy mode needs a positive event count");
  }
  const auto& space = model.space();
  if (!targets_.empty() && targets_.ordinals().back() >= space.size()) {
    throw std::out_of_range("target set does not belong to this model");
  }
  if (model.has_composed_path()) {
    injection_modes_ = model.input().injection->modes();
    inv_sqrt_mu_injection_ =
        1.0 / std::sqrt(static_cast<double>(multiplicity(*model.input().injection, model.convention())));
    for (std::size_t k : targets_.ordinals()) {
      target_modes_.push_back(space[k].modes());
      target_scale_.push_back(model.inverse_sqrt_multiplicity()[k] * inv_sqrt_mu_injection_);
    }
  } else {
    patterns_ = model.pattern_tensor(targets_);
  }
}

void EnergyEvaluator::fill_columns(const SpinConfiguration& sigma, std::vector<ComplexVector>& columns) const {
  const auto& s = model_->spec().scattering.matrix;
  const auto& prep = model_->spec().prep.matrix;
  const int m = mode_count();
  columns.resize(injection_modes_.size());
  for (std::size_t j = 0; j < injection_modes_.size(); ++j) {
    ComplexVector v(m);
    for (int i = 0; i < m; ++i) v(i) = static_cast<double>(sigma[static_cast<std::size_t>(i)]) * prep(i, injection_modes_[j]);
    columns[j] = s * v;
  }
}

double EnergyEvaluator::energy_from_columns(const std::vector<ComplexVector>& columns,
                                            const SpinConfiguration& sigma, CounterRng* rng) const {
  const double m = static_cast<double>(mode_count());
  if (mode_.kind == EnergyMode::Kind::exact) {
    double p = 0.0;
    if (patterns_) {
      const auto& space = model_->space();
      for (const auto& pattern : patterns_->patterns) {
        cplx mk{0.0, 0.0};
        for (std::size_t x = 0; x < space.size(); ++x) mk += pattern[x] * static_cast<double>(sigma.parity(space[x]));
        p += std::norm(mk);
      }
    } else {
      for (std::size_t t = 0; t < target_modes_.size(); ++t) {
        p += std::norm(column_permanent(columns, target_modes_[t]) * target_scale_[t]);
      }
    }
    return -m * p;
  }

  if (rng == nullptr) throw std::invalid_argument("sampled energy mode needs a random stream");
  std::vector<double> dist;
  if (patterns_) {
    dist = model_->output_distribution(sigma, AmplitudePath::configuration_sum);
  } else {
    const auto& space = model_->space();
    const auto& inv_mu = model_->inverse_sqrt_multiplicity();
    dist.resize(space.size());
    for (std::size_t k = 0; k < space.size(); ++k) {
      dist[k] = std::norm(column_permanent(columns, space[k].modes()) * inv_mu[k] * inv_sqrt_mu_injection_);
    }
  }
  const auto counts = sample_counts(dist, mode_.events, *rng);
  std::uint64_t hits = 0;
  for (std::size_t k : targets_.ordinals()) hits += counts[k];
  return -m * static_cast<double>(hits) / static_cast<double>(mode_.events);
}

EnergyEvaluator::ChainState EnergyEvaluator::start(SpinConfiguration sigma, CounterRng* rng) const {
  if (sigma.size() != mode_count()) throw std::invalid_argument("spin configuration length differs from M");
  ChainState state;
  state.spins = std::move(sigma);
  if (!patterns_) {
    fill_columns(state.spins, state.columns);
    state.pending = state.columns;
  }
  state.energy = energy_from_columns(state.columns, state.spins, rng);
  return state;
}

double EnergyEvaluator::propose_flip(ChainState& state, int i, CounterRng* rng) const {
  if (i < 0 || i >= mode_count()) throw std::out_of_range("spin index out of range");
  SpinConfiguration flipped = spin_flip(state.spins, i);
  if (!patterns_) {
    // Flipping sigma_i changes each column by -2 sigma_i prep(i, inj) S[:, i].
    const auto& s = model_->spec().scattering.matrix;
    const auto& prep = model_->spec().prep.matrix;
    const double sign = static_cast<double>(state.spins[static_cast<std::size_t>(i)]);
    for (std::size_t j = 0; j < injection_modes_.size(); ++j) {
      state.pending[j] = state.columns[j] - (2.0 * sign * prep(i, injection_modes_[j])) * s.col(i);
    }
  }
  return energy_from_columns(state.pending, flipped, rng);
}

void EnergyEvaluator::commit_flip(ChainState& state, int i, double energy) const {
  state.spins.flip(i);
  state.energy = energy;
  if (patterns_) return;
  std::swap(state.columns, state.pending);
  // Periodic rebuild bounds the drift of the incremental updates.
  if (++state.updates_since_refresh >= 4096) {
    fill_columns(state.spins, state.columns);
    state.updates_since_refresh = 0;
  }
}

double EnergyEvaluator::reestimate(const ChainState& state, CounterRng* rng) const {
  if (mode_.kind == EnergyMode::Kind::exact) return state.energy;
  return energy_from_columns(state.columns, state.spins, rng);
}

double EnergyEvaluator::energy(const SpinConfiguration& sigma, CounterRng* rng) const {
  if (sigma.size() != mode_count()) throw std::invalid_argument("spin configuration length differs from M");
  std::vector<ComplexVector> columns;
  if (!patterns_) fill_columns(sigma, columns);
  return energy_from_columns(columns, sigma, rng);
}

}  // namespace phopfield
