#include "phopfield/linalg.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "phopfield/rng.hpp"

namespace phopfield {

cplx permanent(const ComplexMatrix& a) {
  const auto n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("permanent requires a square matrix");
  if (n == 0) throw std::invalid_argument("permanent of an empty matrix");
  if (n > 20) throw std::invalid_argument("permanent limited to n <= 20");
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) + a(0, 1) * a(1, 0);

  // perm(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij, visiting
  // subsets in Gray-code order so each step toggles one column.
  std::vector<cplx> row_sums(static_cast<std::size_t>(n), cplx{0.0, 0.0});
  std::uint32_t gray = 0;
  cplx total{0.0, 0.0};
  const std::uint32_t subsets = 1u << n;
  for (std::uint32_t step = 1; step < subsets; ++step) {
    const int column = std::countr_zero(step);
    const std::uint32_t bit = 1u << column;
    gray ^= bit;
    const double direction = (gray & bit) ? 1.0 : -1.0;
    cplx product{1.0, 0.0};
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& sum = row_sums[static_cast<std::size_t>(i)];
      sum += direction * a(i, column);
      product *= sum;
    }
    total += (std::popcount(gray) % 2 == n % 2) ? product : -product;
  }
  return total;
}

ComplexMatrix submatrix(const ComplexMatrix& s, const PhotonConfiguration& rows,
                        const PhotonConfiguration& cols) {
  if (rows.photon_count() != cols.photon_count()) {
    throw std::invalid_argument("submatrix needs configurations with equal photon counts");
  }
  const int n = rows.photon_count();
  ComplexMatrix out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int r = rows[static_cast<std::size_t>(i)];
      const int c = cols[static_cast<std::size_t>(j)];
      if (r >= s.rows() || c >= s.cols()) throw std::out_of_range("submatrix index out of range");
      out(i, j) = s(r, c);
    }
  }
  return out;
}

double unitarity_error(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const ComplexMatrix residual = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
  return residual.cwiseAbs().maxCoeff();
}

std::string to_string(UnitaryKind kind) {
  switch (kind) {
    case UnitaryKind::haar: return "haar";
    case UnitaryKind::dft: return "dft";
    case UnitaryKind::hadamard_rows: return "hadamard_rows";
    case UnitaryKind::explicit_matrix: return "explicit";
  }
  return "unknown";
}

UnitarySpec make_unitary(ComplexMatrix matrix, UnitaryKind kind, std::uint64_t seed, double tolerance) {
  if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
    throw std::invalid_argument("unitary must be a non-empty square matrix");
  }
  if (!matrix.allFinite()) throw std::invalid_argument("unitary has non-finite entries");
  const double err = unitarity_error(matrix);
  if (!(err <= tolerance)) {
    std::ostringstream msg;
    msg << "matrix is not unitary: max |U^dagger U - I| = " << err;
    throw std::invalid_argument(msg.str());
  }
  return UnitarySpec{std::move(matrix), kind, seed};
}

UnitarySpec identity_unitary(int dimension) {
  return make_unitary(ComplexMatrix::Identity(dimension, dimension));
}

UnitarySpec dft_matrix(int dimension) {
  if (dimension < 1) throw std::invalid_argument("DFT dimension must be positive");
  ComplexMatrix d(dimension, dimension);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dimension));
  for (int j = 0; j < dimension; ++j) {
    for (int l = 0; l < dimension; ++l) {
      // Reduce j*l mod M first so the angle stays small and exact.
      const int r = (j * l) % dimension;
      const double angle = -2.0 * std::numbers::pi * r / dimension;
      d(j, l) = std::polar(scale, angle);
    }
  }
  return make_unitary(std::move(d), UnitaryKind::dft);
}

UnitarySpec haar_random_unitary(int dimension, std::uint64_t seed) {
  if (dimension < 1) throw std::invalid_argument("unitary dimension must be positive");
  CounterRng rng(seed);
  ComplexMatrix z(dimension, dimension);
  // Column-major fill order is part of the reproducibility contract.
  for (int c = 0; c < dimension; ++c) {
    for (int r = 0; r < dimension; ++r) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(r, c) = cplx{re, im} * (1.0 / std::numbers::sqrt2);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (int c = 0; c < dimension; ++c) {
    const cplx d = r(c, c);
    const double mag = std::abs(d);
    q.col(c) *= mag > 0.0 ? d / mag : cplx{1.0, 0.0};
  }
  return make_unitary(std::move(q), UnitaryKind::haar, seed);
}

UnitarySpec hadamard_row_unitary(int dimension, const std::vector<std::vector<int>>& rows,
                                 std::uint64_t seed) {
  if (dimension < 2 || dimension % 2 != 0) {
    throw std::invalid_argument("Hadamard-row unitary needs an even dimension");
  }
  if (rows.empty() || rows.size() > static_cast<std::size_t>(dimension)) {
    throw std::invalid_argument("Hadamard-row unitary needs between 1 and M rows");
  }
  for (const auto& row : rows) {
    if (row.size() != static_cast<std::size_t>(dimension)) {
      throw std::invalid_argument("Hadamard row has the wrong length");
    }
    for (int v : row) {
      if (v != 1 && v != -1) throw std::invalid_argument("Hadamard row entries must be +1 or -1");
    }
  }
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      long dot = 0;
      for (int i = 0; i < dimension; ++i) dot += rows[a][static_cast<std::size_t>(i)] * rows[b][static_cast<std::size_t>(i)];
      if (dot != 0) throw std::invalid_argument("Hadamard rows must be mutually orthogonal");
    }
  }

  Eigen::MatrixXd u(dimension, dimension);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dimension));
  const auto given = static_cast<int>(rows.size());
  for (int a = 0; a < given; ++a) {
    for (int i = 0; i < dimension; ++i) u(a, i) = rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] * scale;
  }

  CounterRng rng(seed);
  for (int a = given; a < dimension; ++a) {
    while (true) {
      Eigen::VectorXd v(dimension);
      for (int i = 0; i < dimension; ++i) v(i) = rng.normal();
      // Two passes of modified Gram-Schmidt.
      for (int pass = 0; pass < 2; ++pass) {
        for (int b = 0; b < a; ++b) v -= u.row(b).dot(v) * u.row(b).transpose();
      }
      const double norm = v.norm();
      if (norm < 1e-8) continue;
      u.row(a) = (v / norm).transpose();
      break;
    }
  }
  if (given < dimension && u.determinant() < 0.0) u.row(dimension - 1) *= -1.0;
  return make_unitary(u.cast<cplx>(), UnitaryKind::hadamard_rows, seed);
}

ComplexMatrix read_complex_matrix(std::istream& in) {
  long rows = 0;
  long cols = 0;
  if (!(in >> rows >> cols) || rows <= 0 || cols <= 0) {
    throw std::runtime_error("matrix file: expected positive 'rows cols' header");
  }
  ComplexMatrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      std::string token;
      if (!(in >> token)) throw std::runtime_error("matrix file: too few entries");
      const auto comma = token.find(',');
      if (comma == std::string::npos) throw std::runtime_error("matrix file: entry '" + token + "' is not re,im");
      try {
        std::size_t used_re = 0;
        std::size_t used_im = 0;
        const std::string re_text = token.substr(0, comma);
        const std::string im_text = token.substr(comma + 1);
        const double re = std::stod(re_text, &used_re);
        const double im = std::stod(im_text, &used_im);
        if (used_re != re_text.size() || used_im != im_text.size()) throw std::invalid_argument(token);
        m(r, c) = cplx{re, im};
      } catch (const std::logic_error&) {
        throw std::runtime_error("matrix file: cannot parse entry '" + token + "'");
      }
    }
  }
  std::string extra;
  if (in >> extra) throw std::runtime_error("matrix file: trailing data '" + extra + "'");
  return m;
}

void write_complex_matrix(std::ostream& out, const ComplexMatrix& m) {
  const auto old_precision = out.precision(17);
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << m(r, c).real() << ',' << m(r, c).imag();
    }
    out << '\n';
  }
  out.precision(old_precision);
}

UnitarySpec load_unitary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file " + path);
  return make_unitary(read_complex_matrix(in), UnitaryKind::explicit_matrix, 0, 1e-8);
}

}  // namespace phopfield
