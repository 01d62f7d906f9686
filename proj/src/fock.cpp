#include "phopfield/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace phopfield {

PhotonConfiguration::PhotonConfiguration(std::vector<int> modes, int mode_count)
    : modes_(std::move(modes)) {
  if (modes_.empty()) throw std::invalid_argument("photon configuration needs at least one photon");
  for (int m : modes_) {
    if (m < 0 || m >= mode_count) {
      throw std::invalid_argument("mode index " + std::to_string(m + 1) + " outside [1, " +
                                  std::to_string(mode_count) + "]");
    }
  }
  std::sort(modes_.begin(), modes_.end());
}

PhotonConfiguration PhotonConfiguration::from_one_based(std::span<const int> modes, int mode_count) {
  std::vector<int> zero_based(modes.begin(), modes.end());
  for (int& m : zero_based) --m;
  return {std::move(zero_based), mode_count};
}

bool PhotonConfiguration::is_bunched() const noexcept {
  return std::adjacent_find(modes_.begin(), modes_.end()) != modes_.end();
}

std::vector<int> PhotonConfiguration::occupations(int mode_count) const {
  std::vector<int> n(static_cast<std::size_t>(mode_count), 0);
  for (int m : modes_) ++n.at(static_cast<std::size_t>(m));
  return n;
}

std::vector<int> PhotonConfiguration::one_based() const {
  std::vector<int> out(modes_);
  for (int& m : out) ++m;
  return out;
}

std::string PhotonConfiguration::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(modes_[i] + 1);
  }
  return s + ")";
}

std::uint64_t multiplicity(const PhotonConfiguration& x, MultiplicityConvention convention) {
  std::uint64_t mu = 1;
  const auto& modes = x.modes();
  for (std::size_t i = 0; i < modes.size();) {
    std::size_t j = i;
    while (j < modes.size() && modes[j] == modes[i]) ++j;
    const auto occupation = static_cast<std::uint64_t>(j - i);
    if (convention == MultiplicityConvention::factorial) {
      for (std::uint64_t f = 2; f <= occupation; ++f) mu *= f;
    } else {
      mu *= occupation;
    }
    i = j;
  }
  return mu;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

ConfigurationSpace::ConfigurationSpace(int mode_count, int photon_count)
    : mode_count_(mode_count), photon_count_(photon_count) {
  if (mode_count < 1) throw std::invalid_argument("mode count must be at least 1");
  if (photon_count < 1) throw std::invalid_argument("photon count must be at least 1");
  configs_.reserve(binomial(static_cast<std::uint64_t>(mode_count + photon_count - 1),
                            static_cast<std::uint64_t>(photon_count)));
  // Odometer over non-decreasing tuples yields lexicographic order directly.
  std::vector<int> modes(static_cast<std::size_t>(photon_count), 0);
  while (true) {
    configs_.emplace_back(modes, mode_count);
    int pos = photon_count - 1;
    while (pos >= 0 && modes[static_cast<std::size_t>(pos)] == mode_count - 1) --pos;
    if (pos < 0) break;
    const int next = modes[static_cast<std::size_t>(pos)] + 1;
    for (auto i = static_cast<std::size_t>(pos); i < modes.size(); ++i) modes[i] = next;
  }
}

std::size_t ConfigurationSpace::index(const PhotonConfiguration& x) const {
  auto it = std::lower_bound(configs_.begin(), configs_.end(), x);
  if (it == configs_.end() || *it != x) {
    throw std::out_of_range("configuration " + x.to_string() + " not in the configuration space");
  }
  return static_cast<std::size_t>(it - configs_.begin());
}

bool ConfigurationSpace::contains(const PhotonConfiguration& x) const noexcept {
  return std::binary_search(configs_.begin(), configs_.end(), x);
}

std::size_t ConfigurationSpace::bunched_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(configs_.begin(), configs_.end(), [](const auto& c) { return c.is_bunched(); }));
}

ConfigurationSpace enumerate_configurations(int mode_count, int photon_count) {
  return {mode_count, photon_count};
}

TargetSet::TargetSet(const ConfigurationSpace& space, std::vector<std::size_t> ordinals)
    : ordinals_(std::move(ordinals)) {
  std::sort(ordinals_.begin(), ordinals_.end());
  if (std::adjacent_find(ordinals_.begin(), ordinals_.end()) != ordinals_.end()) {
    throw std::invalid_argument("target set contains a duplicate configuration");
  }
  if (!ordinals_.empty() && ordinals_.back() >= space.size()) {
    throw std::out_of_range("target ordinal outside the configuration space");
  }
}

TargetSet::TargetSet(const ConfigurationSpace& space, const std::vector<PhotonConfiguration>& members) {
  std::vector<std::size_t> ordinals;
  ordinals.reserve(members.size());
  for (const auto& k : members) ordinals.push_back(space.index(k));
  *this = TargetSet(space, std::move(ordinals));
}

TargetSet TargetSet::all(const ConfigurationSpace& space) {
  std::vector<std::size_t> ordinals(space.size());
  for (std::size_t i = 0; i < ordinals.size(); ++i) ordinals[i] = i;
  return {space, std::move(ordinals)};
}

double TargetSet::load(const ConfigurationSpace& space) const {
  return static_cast<double>(ordinals_.size()) /
         std::pow(static_cast<double>(space.mode_count()), space.photon_count());
}

SpinConfiguration::SpinConfiguration(std::vector<int> spins) : spins_(std::move(spins)) {
  for (int s : spins_) {
    if (s != 1 && s != -1) throw std::invalid_argument("spins must be +1 or -1");
  }
}

SpinConfiguration SpinConfiguration::all_up(int mode_count) {
  return SpinConfiguration(std::vector<int>(static_cast<std::size_t>(mode_count), 1));
}

SpinConfiguration SpinConfiguration::from_phases(std::span<const double> phases) {
  std::vector<int> spins;
  spins.reserve(phases.size());
  for (double phi : phases) {
    if (std::abs(phi) < 1e-9) {
      spins.push_back(1);
    } else if (std::abs(phi - std::numbers::pi) < 1e-9) {
      spins.push_back(-1);
    } else {
      throw std::invalid_argument("phase must be 0 or pi");
    }
  }
  return SpinConfiguration(std::move(spins));
}

void SpinConfiguration::flip(int i) {
  if (i < 0 || i >= size()) throw std::out_of_range("spin index out of range");
  spins_[static_cast<std::size_t>(i)] = -spins_[static_cast<std::size_t>(i)];
}

std::vector<double> SpinConfiguration::phases() const {
  std::vector<double> out;
  out.reserve(spins_.size());
  for (int s : spins_) out.push_back(s == 1 ? 0.0 : std::numbers::pi);
  return out;
}

int SpinConfiguration::parity(const PhotonConfiguration& x) const noexcept {
  int p = 1;
  for (int m : x.modes()) p *= spins_[static_cast<std::size_t>(m)];
  return p;
}

std::string SpinConfiguration::to_string() const {
  std::string s;
  s.reserve(spins_.size());
  for (int v : spins_) s += v == 1 ? '+' : '-';
  return s;
}

SpinConfiguration SpinConfiguration::operator-() const {
  SpinConfiguration out(*this);
  for (int& s : out.spins_) s = -s;
  return out;
}

SpinConfiguration spin_flip(const SpinConfiguration& sigma, int i) {
  SpinConfiguration out(sigma);
  out.flip(i);
  return out;
}

}  // namespace phopfield
