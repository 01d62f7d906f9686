#pragma once

// Reference computations that share no code path with the production
// kernels. Used by the test suites and the `validate` subcommand.

#include <vector>

#include "phopfield/fock.hpp"
#include "phopfield/linalg.hpp"

namespace phopfield::oracle {

/// Permanent as the sum over all n! permutations.
cplx permanent_leibniz(const ComplexMatrix& a);

/// Matrix of U's action on the n-photon Fock space, |C| x |C|, built by
/// applying U to every photon of the symmetrized first-quantized basis
/// state. Column x is the image of the Fock state with ordinal x.
ComplexMatrix fock_space_unitary(const ComplexMatrix& u, const ConfigurationSpace& space);

/// Output amplitudes of S acting on the phase-encoded input
/// sum_x a_x prod sigma |x>, via the dense Fock-space matrix.
std::vector<cplx> evolve_state_vector(const ComplexMatrix& s, const ConfigurationSpace& space,
                                      const std::vector<cplx>& input, const SpinConfiguration& sigma);

/// Input amplitudes prep|injection> via the dense Fock-space matrix.
std::vector<cplx> prepared_state_vector(const ComplexMatrix& prep, const ConfigurationSpace& space,
                                        const PhotonConfiguration& injection);

/// Exact Boltzmann weights exp(-H/T)/Z over all 2^M spin configurations,
/// indexed by the bit pattern (bit i set <=> sigma_i = -1). `energies` is
/// indexed the same way.
std::vector<double> boltzmann_distribution(const std::vector<double>& energies, double temperature);

/// Spin configuration with bit i of `bits` mapped to sigma_i = -1.
SpinConfiguration spins_from_bits(unsigned bits, int mode_count);
unsigned bits_from_spins(const SpinConfiguration& sigma);

}  // namespace phopfield::oracle
