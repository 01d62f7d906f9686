#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phopfield/dynamics.hpp"
#include "phopfield/fock.hpp"
#include "phopfield/model.hpp"

namespace phopfield {

/// m_k = sum_x X^{(k)}_x prod_i sigma_{x_i}. Throws std::out_of_range if k is
/// not one of the stored patterns.
cplx magnetization(const ConfigurationSpace& space, const PatternTensor& patterns, std::size_t k_ordinal,
                   const SpinConfiguration& sigma);

/// q_ab = (1/M) sum_i sigma^a_i sigma^b_i
double overlap(const SpinConfiguration& a, const SpinConfiguration& b);

enum class PmReferenceForm {
  /// Closed form as printed, (2/(M+1)) e^{-M|m|} + ((M-1)/(M+1)) 2|m| M^2 K0(sqrt2 |m| M),
  /// divided by its numerical integral.
  printed_renormalized,
  /// Same shape with the exponential term carrying its missing factor M;
  /// integrates to one exactly.
  normalized_prefactor,
};

/// High-temperature reference density of |m| averaged over unitary S.
double pm_reference_pdf(double abs_m, int mode_count,
                        PmReferenceForm form = PmReferenceForm::printed_renormalized);
/// The printed closed form without any renormalization.
double pm_reference_pdf_printed(double abs_m, int mode_count);
/// Integral of the printed form over [0, inf); the renormalization factor is its inverse.
double pm_reference_printed_integral(int mode_count);
/// Probability mass of the reference density in [lo, hi).
double pm_reference_mass(double lo, double hi, int mode_count,
                         PmReferenceForm form = PmReferenceForm::printed_renormalized);

enum class ThresholdMode { fixed, quantile };

struct RetrievalThreshold {
  double value = 0.0;
  /// 1 - N_P / 2^{M-1}; meaningful in quantile mode.
  double quantile_level = 1.0;
  /// Set when the quantile level is not in (0, 1).
  bool degenerate = false;
};

double retrieval_quantile_level(std::size_t pattern_count, int mode_count);

/// Fixed mode returns 1/pi. Quantile mode returns the empirical quantile of
/// `calibration` (|m| samples from a high-temperature run) at
/// 1 - N_P/2^{M-1}; a degenerate level yields 0.
RetrievalThreshold retrieval_threshold(ThresholdMode mode, std::size_t pattern_count, int mode_count,
                                       std::span<const double> calibration = {});

/// |m_k| for k in K over `samples` uniformly random spin configurations.
std::vector<double> high_temperature_abs_m(const PhotonicModel& model, const PatternTensor& patterns,
                                           int samples, CounterRng& rng);

/// |m| samples with a fresh Haar S, a uniform random sigma and a uniformly
/// chosen k in C for each sample; DFT preparation with both photons in mode 1.
std::vector<double> sample_pm_abs_m(int mode_count, int samples, std::uint64_t seed);

/// Fixed-width histogram; values past either edge land in the edge bins.
class Histogram {
 public:
  Histogram() = default;
  Histogram(double lower, double width, std::size_t bins);

  void add(double value, std::uint64_t weight = 1);
  void merge(const Histogram& other);

  double lower() const noexcept { return lower_; }
  double width() const noexcept { return width_; }
  std::size_t bins() const noexcept { return counts_.size(); }
  double center(std::size_t bin) const noexcept { return lower_ + (static_cast<double>(bin) + 0.5) * width_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t total() const noexcept;
  std::vector<double> masses() const;

  bool operator==(const Histogram&) const = default;

 private:
  double lower_ = 0.0;
  double width_ = 1.0;
  std::vector<std::uint64_t> counts_;
};

/// |m| bins of width 0.02 on [0, 1.2].
Histogram make_abs_m_histogram();
/// One bin per attainable overlap -1, -1 + 2/M, ..., 1.
Histogram make_overlap_histogram(int mode_count);

/// <(q-<q>)^4> / <(q-<q>)^2>^2; 0 when the variance vanishes.
double kurtosis(std::span<const double> values);

enum class Phase { retrieval, spin_glass, paramagnet };
std::string to_string(Phase phase);
std::string short_name(Phase phase);

/// Pooled order parameters of one replica ensemble.
struct OrderParameters {
  int mode_count = 0;
  int replica_count = 0;
  std::size_t pattern_count = 0;
  std::vector<double> abs_m;  // replica-major, pattern_count per replica
  std::vector<cplx> m;        // same layout as abs_m
  std::vector<double> q;      // all pairs a < b
};

OrderParameters collect_order_parameters(const ConfigurationSpace& space, const PatternTensor& patterns,
                                         const std::vector<SpinConfiguration>& finals);

struct PhaseLabel {
  Phase phase = Phase::paramagnet;
  bool coexistence = false;
  double retrieval_mass = 0.0;    // P(|m| > threshold)
  double kurtosis = 0.0;          // of the pooled q samples
  double central_q_mass = 0.0;    // P(|q| <= 1/M)
  double central_q_reference = 0.0;  // same mass for independent random replicas (Gaussian law)
};

/// Gaussian N(0, 1/M) mass on the attainable overlaps with |q| <= 1/M.
double central_overlap_reference(int mode_count);

/// MR if P(|m| > threshold) >= 1/N_P; otherwise PM if kurtosis(q) > 2.65;
/// otherwise SG. Coexistence is flagged for MR points whose central q mass is
/// at least twice the Gaussian reference. Throws std::invalid_argument with
/// fewer than `min_replicas` replicas.
PhaseLabel classify_phase(const OrderParameters& order, double threshold, int min_replicas = 30);

inline constexpr double kParamagnetKurtosis = 2.65;

struct SweepPoint {
  double alpha = 0.0;
  double temperature = 0.0;

  bool operator==(const SweepPoint&) const = default;
};

struct SweepConfig {
  int mode_count = 10;
  int photon_count = 2;
  std::vector<SweepPoint> grid;
  int disorder_count = 1;
  int replica_count = 50;
  int n_steps = 2000;
  int burn_in = -1;
  EnergyMode energy_mode = EnergyMode::exact();
  bool reestimate_incumbent = true;
  ThresholdMode threshold_mode = ThresholdMode::fixed;
  int calibration_samples = 4096;
  /// "dft" or "identity".
  std::string prep = "dft";
  /// One-based injected modes; empty means all photons in mode 1.
  std::vector<int> injection;
  int min_replicas = 30;
  std::uint64_t master_seed = 1;
  unsigned threads = 0;
};

/// N_P = round-half-up(alpha M^n_ph); throws std::invalid_argument if < 1 or > |C|.
std::size_t pattern_count_for_load(double alpha, int mode_count, int photon_count);

/// Disorder realization r: Haar S and a uniformly shuffled order of C whose
/// first N_P entries form K (so targets are nested across loads).
struct DisorderRealization {
  UnitarySpec scattering;
  std::vector<std::size_t> target_order;
};
DisorderRealization make_disorder(int mode_count, const ConfigurationSpace& space, std::uint64_t master_seed,
                                  std::size_t realization);

struct RealizationOutcome {
  std::optional<PhaseLabel> label;
  double threshold = 0.0;
  double mean_final_energy = 0.0;
};

struct PointResult {
  SweepPoint requested;
  double realized_alpha = 0.0;
  std::size_t pattern_count = 0;
  Histogram abs_m;
  Histogram q;
  std::array<int, 3> votes{};  // indexed by Phase
  int coexistence_votes = 0;
  int unclassified = 0;
  std::optional<Phase> majority;
  std::vector<RealizationOutcome> realizations;
};

struct Boundary {
  enum class Direction { along_temperature, along_load };
  Direction direction = Direction::along_temperature;
  double fixed_value = 0.0;  // alpha for temperature lines, T for load lines
  Phase from = Phase::retrieval;
  Phase to = Phase::spin_glass;
  double mean = 0.0;
  double sem = 0.0;
  int samples = 0;
};

struct PhaseDiagram {
  std::vector<PointResult> points;
  std::vector<Boundary> boundaries;
};

/// Runs every (grid point, disorder realization) unit on the worker pool and
/// aggregates histograms, label votes and disorder-averaged boundaries.
/// Results depend only on the configuration and master seed.
PhaseDiagram sweep_phase_diagram(const SweepConfig& config);

/// Midpoint of the first label change along each grid line, per realization,
/// averaged over realizations with standard error of the mean.
std::vector<Boundary> extract_boundaries(const std::vector<PointResult>& points);

}  // namespace phopfield
