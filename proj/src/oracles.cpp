#include "phopfield/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace phopfield::oracle {

cplx permanent_leibniz(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("permanent requires a square matrix");
  const auto n = static_cast<int>(a.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  cplx total{0.0, 0.0};
  do {
    cplx product{1.0, 0.0};
    for (int i = 0; i < n; ++i) product *= a(i, perm[static_cast<std::size_t>(i)]);
    total += product;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

namespace {

// Row-major index of a mode tuple in the M^n first-quantized space.
std::size_t tuple_index(const std::vector<int>& modes, int m) {
  std::size_t idx = 0;
  for (int mode : modes) idx = idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(mode);
  return idx;
}

std::vector<int> tuple_modes(std::size_t idx, int n, int m) {
  std::vector<int> modes(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    modes[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(m));
    idx /= static_cast<std::size_t>(m);
  }
  return modes;
}

// Normalized symmetric tensor for a Fock configuration: uniform weight on
// every distinct ordering of its modes.
std::vector<cplx> symmetric_tensor(const PhotonConfiguration& x, int m) {
  const int n = x.photon_count();
  std::size_t dim = 1;
  for (int i = 0; i < n; ++i) dim *= static_cast<std::size_t>(m);
  std::vector<cplx> psi(dim, cplx{0.0, 0.0});
  std::vector<int> order = x.modes();
  std::vector<std::size_t> hits;
  do {
    hits.push_back(tuple_index(order, m));
  } while (std::next_permutation(order.begin(), order.end()));
  const double w = 1.0 / std::sqrt(static_cast<double>(hits.size()));
  for (auto h : hits) psi[h] = w;
  return psi;
}

}  // namespace

ComplexMatrix fock_space_unitary(const ComplexMatrix& u, const ConfigurationSpace& space) {
  const int m = space.mode_count();
  const int n = space.photon_count();
  if (u.rows() != m || u.cols() != m) throw std::invalid_argument("unitary does not match the mode count");
  std::size_t dim = 1;
  for (int i = 0; i < n; ++i) dim *= static_cast<std::size_t>(m);

  const auto size = static_cast<Eigen::Index>(space.size());
  ComplexMatrix out = ComplexMatrix::Zero(size, size);
  for (Eigen::Index col = 0; col < size; ++col) {
    std::vector<cplx> psi = symmetric_tensor(space[static_cast<std::size_t>(col)], m);
    // Apply U to one tensor factor at a time: a_x^dagger -> sum_k U_kx a_k^dagger.
    for (int factor = 0; factor < n; ++factor) {
      std::vector<cplx> next(dim, cplx{0.0, 0.0});
      for (std::size_t idx = 0; idx < dim; ++idx) {
        if (psi[idx] == cplx{0.0, 0.0}) continue;
        auto modes = tuple_modes(idx, n, m);
        const int from = modes[static_cast<std::size_t>(factor)];
        for (int to = 0; to < m; ++to) {
          modes[static_cast<std::size_t>(factor)] = to;
          next[tuple_index(modes, m)] += u(to, from) * psi[idx];
        }
      }
      psi.swap(next);
    }
    // Project onto each normalized symmetric output state.
    for (Eigen::Index row = 0; row < size; ++row) {
      const auto basis = symmetric_tensor(space[static_cast<std::size_t>(row)], m);
      cplx overlap{0.0, 0.0};
      for (std::size_t idx = 0; idx < dim; ++idx) overlap += std::conj(basis[idx]) * psi[idx];
      out(row, col) = overlap;
    }
  }
  return out;
}

std::vector<cplx> evolve_state_vector(const ComplexMatrix& s, const ConfigurationSpace& space,
                                      const std::vector<cplx>& input, const SpinConfiguration& sigma) {
  if (input.size() != space.size()) throw std::invalid_argument("input size does not match the space");
  const auto size = static_cast<Eigen::Index>(space.size());
  ComplexVector phased(size);
  for (Eigen::Index x = 0; x < size; ++x) {
    phased(x) = input[static_cast<std::size_t>(x)] * static_cast<double>(sigma.parity(space[static_cast<std::size_t>(x)]));
  }
  const ComplexVector out = fock_space_unitary(s, space) * phased;
  return {out.data(), out.data() + out.size()};
}

std::vector<cplx> prepared_state_vector(const ComplexMatrix& prep, const ConfigurationSpace& space,
                                        const PhotonConfiguration& injection) {
  const ComplexMatrix f = fock_space_unitary(prep, space);
  const ComplexVector col = f.col(static_cast<Eigen::Index>(space.index(injection)));
  return {col.data(), col.data() + col.size()};
}

std::vector<double> boltzmann_distribution(const std::vector<double>& energies, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("Boltzmann weights need T > 0");
  const double e_min = *std::min_element(energies.begin(), energies.end());
  std::vector<double> w;
  w.reserve(energies.size());
  for (double e : energies) w.push_back(std::exp(-(e - e_min) / temperature));
  const double z = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= z;
  return w;
}

SpinConfiguration spins_from_bits(unsigned bits, int mode_count) {
  std::vector<int> spins(static_cast<std::size_t>(mode_count));
  for (int i = 0; i < mode_count; ++i) spins[static_cast<std::size_t>(i)] = (bits >> i) & 1u ? -1 : 1;
  return SpinConfiguration(std::move(spins));
}

unsigned bits_from_spins(const SpinConfiguration& sigma) {
  unsigned bits = 0;
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma[static_cast<std::size_t>(i)] < 0) bits |= 1u << i;
  }
  return bits;
}

}  // namespace phopfield::oracle
