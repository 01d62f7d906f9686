#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace phopfield {

/// Occupied modes of an n-photon Fock state, zero-based and sorted
/// non-decreasing. One-based indices only appear at I/O boundaries.
class PhotonConfiguration {
 public:
  PhotonConfiguration() = default;

  /// Sorts `modes`; throws std::invalid_argument if empty or any mode is
  /// outside [0, mode_count).
  PhotonConfiguration(std::vector<int> modes, int mode_count);

  /// Parses one-based indices, e.g. {1, 1} for both photons in the first mode.
  static PhotonConfiguration from_one_based(std::span<const int> modes, int mode_count);

  const std::vector<int>& modes() const noexcept { return modes_; }
  int photon_count() const noexcept { return static_cast<int>(modes_.size()); }
  int operator[](std::size_t i) const { return modes_[i]; }

  bool is_bunched() const noexcept;
  /// Occupation number of every mode, length `mode_count`.
  std::vector<int> occupations(int mode_count) const;
  std::vector<int> one_based() const;
  /// "(1,2)" style, one-based.
  std::string to_string() const;

  auto operator<=>(const PhotonConfiguration&) const = default;

 private:
  std::vector<int> modes_;
};

enum class MultiplicityConvention {
  /// prod_j n_j!  -- gives normalized bosonic amplitudes.
  factorial,
  /// prod_j n_j as printed in the original mapping; agrees with the
  /// factorial form only while every occupation is at most 2.
  occupation_product,
};

/// Occupation-number multiplicity of a configuration.
std::uint64_t multiplicity(const PhotonConfiguration& x,
                           MultiplicityConvention convention = MultiplicityConvention::factorial);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// All photon configurations of `photon_count` photons in `mode_count`
/// modes, in lexicographic order. Ordinals index every tensor in the model.
class ConfigurationSpace {
 public:
  ConfigurationSpace(int mode_count, int photon_count);

  int mode_count() const noexcept { return mode_count_; }
  int photon_count() const noexcept { return photon_count_; }
  std::size_t size() const noexcept { return configs_.size(); }

  const PhotonConfiguration& operator[](std::size_t ordinal) const { return configs_[ordinal]; }
  const std::vector<PhotonConfiguration>& configurations() const noexcept { return configs_; }

  /// Ordinal of `x`; throws std::out_of_range if x is not in the space.
  std::size_t index(const PhotonConfiguration& x) const;
  bool contains(const PhotonConfiguration& x) const noexcept;

  std::size_t bunched_count() const noexcept;

 private:
  int mode_count_;
  int photon_count_;
  std::vector<PhotonConfiguration> configs_;
};

/// Same as constructing a ConfigurationSpace; rejects zero modes or photons.
ConfigurationSpace enumerate_configurations(int mode_count, int photon_count);

/// Subset of output configurations whose probability defines the energy.
/// Stored as sorted, unique ordinals into a ConfigurationSpace.
class TargetSet {
 public:
  TargetSet() = default;
  TargetSet(const ConfigurationSpace& space, std::vector<std::size_t> ordinals);
  TargetSet(const ConfigurationSpace& space, const std::vector<PhotonConfiguration>& members);

  /// The whole space, K = C.
  static TargetSet all(const ConfigurationSpace& space);

  const std::vector<std::size_t>& ordinals() const noexcept { return ordinals_; }
  std::size_t size() const noexcept { return ordinals_.size(); }
  bool empty() const noexcept { return ordinals_.empty(); }
  bool covers(const ConfigurationSpace& space) const noexcept { return ordinals_.size() == space.size(); }

  /// Storage load N_P / M^n_ph.
  double load(const ConfigurationSpace& space) const;

 private:
  std::vector<std::size_t> ordinals_;
};

/// Ising spins on the phase layer: +1 <-> phase 0, -1 <-> phase pi.
class SpinConfiguration {
 public:
  SpinConfiguration() = default;
  /// Throws std::invalid_argument unless every entry is +1 or -1.
  explicit SpinConfiguration(std::vector<int> spins);

  static SpinConfiguration all_up(int mode_count);
  /// Phases in {0, pi}, tolerance 1e-9.
  static SpinConfiguration from_phases(std::span<const double> phases);

  int size() const noexcept { return static_cast<int>(spins_.size()); }
  int operator[](std::size_t i) const { return spins_[i]; }
  const std::vector<int>& spins() const noexcept { return spins_; }

  /// Flips spin `i` (zero-based) in place.
  void flip(int i);
  std::vector<double> phases() const;
  /// Product of sigma over the modes of x (with repetition).
  int parity(const PhotonConfiguration& x) const noexcept;
  std::string to_string() const;

  SpinConfiguration operator-() const;
  bool operator==(const SpinConfiguration&) const = default;

 private:
  std::vector<int> spins_;
};

/// Copy of `sigma` with spin `i` (zero-based) negated; throws
/// std::out_of_range when i is not a valid mode.
SpinConfiguration spin_flip(const SpinConfiguration& sigma, int i);

}  // namespace phopfield
