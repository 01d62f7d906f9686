#include "phopfield/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "phopfield/parallel.hpp"

namespace phopfield {
namespace {

template <class F>
double simpson(F&& f, double lo, double hi, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (hi - lo) / intervals;
  double total = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) total += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return total * h / 3.0;
}

// Simpson in t = sqrt(x), which smooths the x log x behaviour of the Bessel
// term at the origin.
template <typename F>
double simpson_sqrt(F&& f, double lo, double hi, int intervals) {
  return simpson([&](double t) { return 2.0 * t * f(t * t); }, std::sqrt(lo), std::sqrt(hi), intervals);
}

double pm_density_terms(double abs_m, int mode_count, double exponential_prefactor) {
  if (abs_m < 0.0) return 0.0;
  const double m = static_cast<double>(mode_count);
  const double bunched = exponential_prefactor * 2.0 / (m + 1.0) * std::exp(-abs_m * m);
  if (abs_m == 0.0) return bunched;
  const double unbunched =
      (m - 1.0) / (m + 1.0) * 2.0 * abs_m * m * m * std::cyl_bessel_k(0.0, std::numbers::sqrt2 * abs_m * m);
  return bunched + unbunched;
}

double quantile(std::vector<double> values, double level) {
  std::sort(values.begin(), values.end());
  const double pos = level * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace

cplx magnetization(const ConfigurationSpace& space, const PatternTensor& patterns, std::size_t k_ordinal,
                   const SpinConfiguration& sigma) {
  const auto& pattern = patterns.patterns[patterns.slot(k_ordinal)];
  if (sigma.size() != space.mode_count()) throw std::invalid_argument("spin configuration length differs from M");
  cplx m{0.0, 0.0};
  for (std::size_t x = 0; x < space.size(); ++x) m += pattern[x] * static_cast<double>(sigma.parity(space[x]));
  return m;
}

double overlap(const SpinConfiguration& a, const SpinConfiguration& b) {
  if (a.size() != b.size()) throw std::invalid_argument("replicas have different lengths");
  if (a.size() == 0) throw std::invalid_argument("overlap of empty configurations");
  int total = 0;
  for (int i = 0; i < a.size(); ++i) total += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
  return static_cast<double>(total) / a.size();
}

double pm_reference_pdf_printed(double abs_m, int mode_count) {
  return pm_density_terms(abs_m, mode_count, 1.0);
}

double pm_reference_printed_integral(int mode_count) {
  if (mode_count < 2) throw std::invalid_argument("reference law needs M >= 2");
  static std::mutex mutex;
  static std::map<int, double> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(mode_count); it != cache.end()) return it->second;
  const double upper = 40.0 / mode_count;
  const double value = simpson_sqrt([&](double x) { return pm_reference_pdf_printed(x, mode_count); }, 0.0, upper, 40000);
  cache.emplace(mode_count, value);
  return value;
}

double pm_reference_pdf(double abs_m, int mode_count, PmReferenceForm form) {
  if (form == PmReferenceForm::normalized_prefactor) {
    return pm_density_terms(abs_m, mode_count, static_cast<double>(mode_count));
  }
  return pm_reference_pdf_printed(abs_m, mode_count) / pm_reference_printed_integral(mode_count);
}

double pm_reference_mass(double lo, double hi, int mode_count, PmReferenceForm form) {
  // Past 40/M both terms are below e^-40.
  hi = std::min(hi, 40.0 / mode_count);
  if (hi <= lo) return 0.0;
  const int intervals = std::max(200, static_cast<int>(std::ceil((hi - lo) * mode_count * 1000.0)));
  return simpson_sqrt([&](double x) { return pm_reference_pdf(x, mode_count, form); }, lo, hi, intervals);
}

double retrieval_quantile_level(std::size_t pattern_count, int mode_count) {
  return 1.0 - static_cast<double>(pattern_count) / std::ldexp(1.0, mode_count - 1);
}

RetrievalThreshold retrieval_threshold(ThresholdMode mode, std::size_t pattern_count, int mode_count,
                                       std::span<const double> calibration) {
  RetrievalThreshold out;
  out.quantile_level = retrieval_quantile_level(pattern_count, mode_count);
  if (mode == ThresholdMode::fixed) {
    out.value = std::numbers::inv_pi;
    return out;
  }
  if (out.quantile_level <= 0.0 || out.quantile_level >= 1.0) {
    out.degenerate = true;
    out.value = 0.0;
    return out;
  }
  if (calibration.empty()) throw std::invalid_argument("quantile threshold needs calibration samples");
  out.value = quantile(std::vector<double>(calibration.begin(), calibration.end()), out.quantile_level);
  return out;
}

std::vector<double> high_temperature_abs_m(const PhotonicModel& model, const PatternTensor& patterns,
                                           int samples, CounterRng& rng) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(samples) * patterns.targets.size());
  for (int s = 0; s < samples; ++s) {
    const auto sigma = random_spins(model.mode_count(), rng);
    for (std::size_t k : patterns.targets) out.push_back(std::abs(magnetization(model.space(), patterns, k, sigma)));
  }
  return out;
}

std::vector<double> sample_pm_abs_m(int mode_count, int samples, std::uint64_t seed) {
  const ConfigurationSpace space(mode_count, 2);
  const auto prep = dft_matrix(mode_count);
  const PhotonConfiguration injection({0, 0}, mode_count);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    const auto index = static_cast<std::uint64_t>(s);
    const PhotonicModel model(ScatteringSpec{haar_random_unitary(mode_count, derive_seed(seed, "pm-S", {index})),
                                             prep, injection},
                              2);
    CounterRng rng(derive_seed(seed, "pm-draw", {index}));
    const auto sigma = random_spins(mode_count, rng);
    const auto& k = space[rng.below(space.size())];
    out.push_back(std::abs(model.amplitude(sigma, k)));
  }
  return out;
}

Histogram::Histogram(double lower, double width, std::size_t bins)
    : lower_(lower), width_(width), counts_(bins, 0) {
  if (!(width > 0.0) || bins == 0) throw std::invalid_argument("histogram needs positive width and bins");
}

void Histogram::add(double value, std::uint64_t weight) {
  const double pos = std::floor((value - lower_) / width_);
  const auto last = static_cast<double>(counts_.size() - 1);
  const auto bin = static_cast<std::size_t>(std::clamp(pos, 0.0, last));
  counts_[bin] += weight;
}

void Histogram::merge(const Histogram& other) {
  if (other.counts_.size() != counts_.size() || other.lower_ != lower_ || other.width_ != width_) {
    throw std::invalid_argument("cannot merge histograms with different binning");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::uint64_t Histogram::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::vector<double> Histogram::masses() const {
  const double t = static_cast<double>(total());
  std::vector<double> out;
  out.reserve(counts_.size());
  for (auto c : counts_) out.push_back(t > 0 ? static_cast<double>(c) / t : 0.0);
  return out;
}

Histogram make_abs_m_histogram() { return {0.0, 0.02, 60}; }

Histogram make_overlap_histogram(int mode_count) {
  const double step = 2.0 / mode_count;
  return {-1.0 - 0.5 * step, step, static_cast<std::size_t>(mode_count) + 1};
}

double kurtosis(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("kurtosis of an empty sample");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d2 = (v - mean) * (v - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= n;
  m4 /= n;
  if (m2 <= 1e-300) return 0.0;
  return m4 / (m2 * m2);
}

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::retrieval: return "memory_retrieval";
    case Phase::spin_glass: return "spin_glass";
    case Phase::paramagnet: return "paramagnet";
  }
  return "unknown";
}

std::string short_name(Phase phase) {
  switch (phase) {
    case Phase::retrieval: return "MR";
    case Phase::spin_glass: return "SG";
    case Phase::paramagnet: return "PM";
  }
  return "?";
}

OrderParameters collect_order_parameters(const ConfigurationSpace& space, const PatternTensor& patterns,
                                         const std::vector<SpinConfiguration>& finals) {
  OrderParameters order;
  order.mode_count = space.mode_count();
  order.replica_count = static_cast<int>(finals.size());
  order.pattern_count = patterns.targets.size();
  for (const auto& sigma : finals) {
    for (std::size_t k : patterns.targets) {
      const cplx m = magnetization(space, patterns, k, sigma);
      order.m.push_back(m);
      order.abs_m.push_back(std::abs(m));
    }
  }
  for (std::size_t a = 0; a < finals.size(); ++a) {
    for (std::size_t b = a + 1; b < finals.size(); ++b) order.q.push_back(overlap(finals[a], finals[b]));
  }
  return order;
}

double central_overlap_reference(int mode_count) {
  const double m = static_cast<double>(mode_count);
  const double step = 2.0 / m;
  const double variance = 1.0 / m;
  double mass = 0.0;
  for (int j = 0; j <= mode_count; ++j) {
    const double q = -1.0 + j * step;
    if (std::abs(q) <= 1.0 / m + 1e-12) {
      mass += step * std::exp(-q * q / (2.0 * variance)) / std::sqrt(2.0 * std::numbers::pi * variance);
    }
  }
  return mass;
}

PhaseLabel classify_phase(const OrderParameters& order, double threshold, int min_replicas) {
  if (order.replica_count < min_replicas) {
    throw std::invalid_argument("phase classification needs at least " + std::to_string(min_replicas) +
                                " replicas");
  }
  if (order.pattern_count == 0 || order.abs_m.empty()) throw std::invalid_argument("no stored patterns");
  if (order.q.empty()) throw std::invalid_argument("no replica overlaps");

  PhaseLabel label;
  const auto above = static_cast<std::size_t>(
      std::count_if(order.abs_m.begin(), order.abs_m.end(), [&](double v) { return v > threshold; }));
  label.retrieval_mass = static_cast<double>(above) / static_cast<double>(order.abs_m.size());
  label.kurtosis = kurtosis(order.q);
  const double central_cut = 1.0 / order.mode_count + 1e-12;
  const auto central = std::count_if(order.q.begin(), order.q.end(), [&](double q) { return std::abs(q) <= central_cut; });
  label.central_q_mass = static_cast<double>(central) / static_cast<double>(order.q.size());
  label.central_q_reference = central_overlap_reference(order.mode_count);

  // Integer form of P(|m| > threshold) >= 1/N_P.
  if (above * order.pattern_count >= order.abs_m.size()) {
    label.phase = Phase::retrieval;
    label.coexistence = label.central_q_mass >= 2.0 * label.central_q_reference;
  } else if (label.kurtosis > kParamagnetKurtosis) {
    label.phase = Phase::paramagnet;
  } else {
    label.phase = Phase::spin_glass;
  }
  return label;
}

std::size_t pattern_count_for_load(double alpha, int mode_count, int photon_count) {
  const double scaled = alpha * std::pow(static_cast<double>(mode_count), photon_count);
  const double rounded = std::floor(scaled + 0.5);
  if (!(rounded >= 1.0)) throw std::invalid_argument("load alpha gives fewer than one pattern");
  const auto n = static_cast<std::size_t>(rounded);
  const auto space_size = binomial(static_cast<std::uint64_t>(mode_count + photon_count - 1),
                                   static_cast<std::uint64_t>(photon_count));
  if (n > space_size) throw std::invalid_argument("load alpha asks for more patterns than configurations");
  return n;
}

DisorderRealization make_disorder(int mode_count, const ConfigurationSpace& space, std::uint64_t master_seed,
                                  std::size_t realization) {
  DisorderRealization d{haar_random_unitary(mode_count, derive_seed(master_seed, "disorder-S", {realization})),
                        std::vector<std::size_t>(space.size())};
  std::iota(d.target_order.begin(), d.target_order.end(), std::size_t{0});
  CounterRng rng(derive_seed(master_seed, "disorder-K", {realization}));
  for (std::size_t i = d.target_order.size(); i > 1; --i) {
    std::swap(d.target_order[i - 1], d.target_order[rng.below(i)]);
  }
  return d;
}

namespace {

struct UnitResult {
  RealizationOutcome outcome;
  Histogram abs_m;
  Histogram q;
};

UnitResult run_unit(const SweepConfig& config, std::size_t point_index, std::size_t realization) {
  const auto& point = config.grid[point_index];
  const ConfigurationSpace space(config.mode_count, config.photon_count);
  const auto disorder = make_disorder(config.mode_count, space, config.master_seed, realization);
  const std::size_t n_patterns = pattern_count_for_load(point.alpha, config.mode_count, config.photon_count);

  std::vector<int> injection_modes = config.injection;
  if (injection_modes.empty()) injection_modes.assign(static_cast<std::size_t>(config.photon_count), 1);
  const auto injection = PhotonConfiguration::from_one_based(injection_modes, config.mode_count);
  UnitarySpec prep;
  if (config.prep == "dft") {
    prep = dft_matrix(config.mode_count);
  } else if (config.prep == "identity") {
    prep = identity_unitary(config.mode_count);
  } else {
    throw std::invalid_argument("unknown preparation '" + config.prep + "'");
  }
  const PhotonicModel model(ScatteringSpec{disorder.scattering, prep, injection}, config.photon_count);
  const TargetSet targets(space, std::vector<std::size_t>(disorder.target_order.begin(),
                                                          disorder.target_order.begin() +
                                                              static_cast<std::ptrdiff_t>(n_patterns)));
  const EnergyEvaluator evaluator(model, targets, config.energy_mode);

  MCParams params;
  params.temperature = point.temperature;
  params.n_steps = config.n_steps;
  params.burn_in = config.burn_in;
  params.seed = derive_seed(config.master_seed, "sweep-mc", {point_index, realization});
  params.reestimate_incumbent = config.reestimate_incumbent;
  params.record_spins = false;
  const auto ensemble = run_replicas(evaluator, params, config.replica_count, 0, 1);

  const auto patterns = model.pattern_tensor(targets);
  const auto order = collect_order_parameters(space, patterns, ensemble.final_states());

  UnitResult result{{}, make_abs_m_histogram(), make_overlap_histogram(config.mode_count)};
  for (double v : order.abs_m) result.abs_m.add(v);
  for (double v : order.q) result.q.add(v);

  std::vector<double> calibration;
  if (config.threshold_mode == ThresholdMode::quantile) {
    CounterRng rng(derive_seed(config.master_seed, "sweep-calibration", {point_index, realization}));
    calibration = high_temperature_abs_m(model, patterns, config.calibration_samples, rng);
  }
  result.outcome.threshold =
      retrieval_threshold(config.threshold_mode, n_patterns, config.mode_count, calibration).value;
  double energy_sum = 0.0;
  for (const auto& r : ensemble.replicas) energy_sum += r.energies.back();
  result.outcome.mean_final_energy = energy_sum / static_cast<double>(ensemble.replicas.size());
  if (config.replica_count >= config.min_replicas && !order.q.empty()) {
    result.outcome.label = classify_phase(order, result.outcome.threshold, config.min_replicas);
  }
  return result;
}

}  // namespace

PhaseDiagram sweep_phase_diagram(const SweepConfig& config) {
  if (config.grid.empty()) throw std::invalid_argument("sweep grid is empty");
  if (config.disorder_count < 1) throw std::invalid_argument("need at least one disorder realization");
  if (config.replica_count < 1) throw std::invalid_argument("need at least one replica");
  for (const auto& p : config.grid) {
    pattern_count_for_load(p.alpha, config.mode_count, config.photon_count);
    if (!(p.temperature >= 0.0)) throw std::invalid_argument("grid temperature must be non-negative");
  }

  const std::size_t n_points = config.grid.size();
  const auto n_real = static_cast<std::size_t>(config.disorder_count);
  std::vector<UnitResult> units(n_points * n_real);
  parallel_for(units.size(), config.threads, [&](std::size_t u) {
    units[u] = run_unit(config, u / n_real, u % n_real);
  });

  PhaseDiagram diagram;
  for (std::size_t p = 0; p < n_points; ++p) {
    PointResult point;
    point.requested = config.grid[p];
    point.pattern_count = pattern_count_for_load(point.requested.alpha, config.mode_count, config.photon_count);
    point.realized_alpha =
        static_cast<double>(point.pattern_count) / std::pow(static_cast<double>(config.mode_count), config.photon_count);
    point.abs_m = make_abs_m_histogram();
    point.q = make_overlap_histogram(config.mode_count);
    for (std::size_t r = 0; r < n_real; ++r) {
      const auto& unit = units[p * n_real + r];
      point.abs_m.merge(unit.abs_m);
      point.q.merge(unit.q);
      point.realizations.push_back(unit.outcome);
      if (unit.outcome.label) {
        ++point.votes[static_cast<std::size_t>(unit.outcome.label->phase)];
        if (unit.outcome.label->coexistence) ++point.coexistence_votes;
      } else {
        ++point.unclassified;
      }
    }
    const auto best = std::max_element(point.votes.begin(), point.votes.end());
    if (*best > 0) point.majority = static_cast<Phase>(best - point.votes.begin());
    diagram.points.push_back(std::move(point));
  }
  diagram.boundaries = extract_boundaries(diagram.points);
  return diagram;
}

std::vector<Boundary> extract_boundaries(const std::vector<PointResult>& points) {
  using Key = std::tuple<int, double, int, int>;  // direction, fixed value, from, to
  std::map<Key, std::vector<double>> crossings;
  const std::size_t n_real = points.empty() ? 0 : points.front().realizations.size();

  auto scan = [&](Boundary::Direction direction) {
    const bool along_t = direction == Boundary::Direction::along_temperature;
    std::map<double, std::vector<std::size_t>> lines;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& req = points[i].requested;
      lines[along_t ? req.alpha : req.temperature].push_back(i);
    }
    for (auto& [fixed, members] : lines) {
      std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
        const auto& pa = points[a].requested;
        const auto& pb = points[b].requested;
        return along_t ? pa.temperature < pb.temperature : pa.alpha < pb.alpha;
      });
      for (std::size_t r = 0; r < n_real; ++r) {
        std::map<std::pair<int, int>, bool> seen;
        for (std::size_t j = 1; j < members.size(); ++j) {
          const auto& prev = points[members[j - 1]];
          const auto& next = points[members[j]];
          if (prev.realizations.size() <= r || next.realizations.size() <= r) continue;
          const auto& a = prev.realizations[r].label;
          const auto& b = next.realizations[r].label;
          if (!a || !b || a->phase == b->phase) continue;
          const std::pair<int, int> change{static_cast<int>(a->phase), static_cast<int>(b->phase)};
          if (seen[change]) continue;
          seen[change] = true;
          const double x0 = along_t ? prev.requested.temperature : prev.realized_alpha;
          const double x1 = along_t ? next.requested.temperature : next.realized_alpha;
          crossings[{static_cast<int>(direction), fixed, change.first, change.second}].push_back(0.5 * (x0 + x1));
        }
      }
    }
  };
  scan(Boundary::Direction::along_temperature);
  scan(Boundary::Direction::along_load);

  std::vector<Boundary> out;
  for (const auto& [key, values] : crossings) {
    Boundary b;
    b.direction = static_cast<Boundary::Direction>(std::get<0>(key));
    b.fixed_value = std::get<1>(key);
    b.from = static_cast<Phase>(std::get<2>(key));
    b.to = static_cast<Phase>(std::get<3>(key));
    b.samples = static_cast<int>(values.size());
    const double n = static_cast<double>(values.size());
    b.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - b.mean) * (v - b.mean);
      b.sem = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace phopfield
