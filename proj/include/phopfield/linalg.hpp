#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phopfield/fock.hpp"

namespace phopfield {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Exact permanent by Ryser's formula with Gray-code column updates,
/// O(2^n n). Sizes 1 and 2 are evaluated in closed form. Throws
/// std::invalid_argument for non-square, empty or n > 20 input.
cplx permanent(const ComplexMatrix& a);

/// n x n matrix with entry (i, j) = s(rows[i], cols[j]); modes repeat for
/// bunched configurations. Amplitudes use submatrix(S, k_out, x_in).
ComplexMatrix submatrix(const ComplexMatrix& s, const PhotonConfiguration& rows,
                        const PhotonConfiguration& cols);

/// max_ij |(U^dagger U - I)_ij|
double unitarity_error(const ComplexMatrix& u);

enum class UnitaryKind { haar, dft, hadamard_rows, explicit_matrix };

std::string to_string(UnitaryKind kind);

struct UnitarySpec {
  ComplexMatrix matrix;
  UnitaryKind kind = UnitaryKind::explicit_matrix;
  std::uint64_t seed = 0;

  int dimension() const noexcept { return static_cast<int>(matrix.rows()); }
};

/// Wraps a square matrix, rejecting non-finite entries or unitarity error
/// above `tolerance`.
UnitarySpec make_unitary(ComplexMatrix matrix, UnitaryKind kind = UnitaryKind::explicit_matrix,
                         std::uint64_t seed = 0, double tolerance = 1e-10);

UnitarySpec identity_unitary(int dimension);

/// D_jl = M^{-1/2} exp(-2 pi i j l / M), j, l = 0..M-1.
UnitarySpec dft_matrix(int dimension);

/// Haar unitary from the QR decomposition of a complex Ginibre matrix, with
/// the phases of R's diagonal moved into Q. Deterministic per seed.
UnitarySpec haar_random_unitary(int dimension, std::uint64_t seed);

/// Unitary whose leading rows are the given mutually orthogonal +-1 vectors
/// scaled by M^{-1/2}. The remaining rows are completed by Gram-Schmidt on
/// seeded real Gaussian vectors, so the result is real orthogonal with
/// determinant +1 whenever at least one row is completed.
UnitarySpec hadamard_row_unitary(int dimension, const std::vector<std::vector<int>>& rows,
                                 std::uint64_t seed);

/// Plain-text format: "M M" header, then M lines of M "re,im" tokens.
ComplexMatrix read_complex_matrix(std::istream& in);
void write_complex_matrix(std::ostream& out, const ComplexMatrix& m);

/// Loads a scattering matrix file and checks unitarity to 1e-8.
UnitarySpec load_unitary(const std::string& path);

}  // namespace phopfield
