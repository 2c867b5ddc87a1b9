#pragma once

// Dense real kernels: eigenstructure of a real matrix expressed in real block
// form, congruence transforms and plain-text matrix I/O.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hypbc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// One eigenvalue cluster of a real matrix.
///
/// A Real block stands for lambda * I_k. A Complex block stands for k copies
/// of E0 = [[mu1, -mu2], [mu2, mu1]] with mu2 > 0, so it spans 2k rows.
struct EigenBlock {
  enum class Kind { Real, Complex };

  Kind kind = Kind::Real;
  double value = 0.0;  ///< lambda (Real) or mu1 (Complex)
  double imag = 0.0;   ///< mu2 > 0 for Complex, 0 for Real
  int multiplicity = 1;

  static EigenBlock real(double lambda, int k) { return {Kind::Real, lambda, 0.0, k}; }
  static EigenBlock complex(double mu1, double mu2, int k) { return {Kind::Complex, mu1, mu2, k}; }

  [[nodiscard]] bool is_real() const noexcept { return kind == Kind::Real; }
  [[nodiscard]] int size() const noexcept { return is_real() ? multiplicity : 2 * multiplicity; }

  /// The size() x size() canonical block (lambda I_k or diag(E0, ..., E0)).
  [[nodiscard]] Matrix canonical() const;
};

/// basis^{-1} * M * basis = blockdiag(blocks[i].canonical()).
struct RealBlockForm {
  Matrix basis;
  std::vector<EigenBlock> blocks;
  double condition = 1.0;  ///< 2-norm condition number of basis
  double residual = 0.0;   ///< ||M basis - basis J||_F / ||M||_F

  [[nodiscard]] Matrix block_matrix() const;
  /// First column of each block inside basis.
  [[nodiscard]] std::vector<int> offsets() const;
};

struct EigenOptions {
  double cluster_tol = 1e-8;   ///< relative to ||M||_F
  double rank_tol = 1e-6;      ///< singular values below rank_tol * sigma_max count as zero
  double condition_cap = 1e8;  ///< larger basis condition numbers are rejected
};

/// Real block diagonalization of a square matrix diagonalizable over C.
///
/// Eigenvalues within cluster_tol * ||M|| of each other are merged. Each
/// cluster's eigenspace is taken from the numerical null space of M - z I.
/// Blocks are ordered Real before Complex, then by (value, imag).
/// Throws NotDiagonalizable or IllConditionedBasis.
RealBlockForm real_block_eigen(const Matrix& m, const EigenOptions& opts = {});

struct DiagonalizabilityReport {
  bool diagonalizable = true;
  std::string diagnostic;
};

/// Compares geometric with algebraic multiplicity cluster by cluster.
DiagonalizabilityReport is_diagonalizable(const Matrix& m, const EigenOptions& opts = {});

/// P^t A P, symmetrized by averaging with its transpose.
Matrix congruence_transform(const Matrix& a, const Matrix& p);

// small helpers shared across modules
bool is_symmetric(const Matrix& a, double rel_tol = 1e-12);
double condition_number(const Matrix& a);
Matrix symmetric_sqrt(const Matrix& spd);
Matrix block_diagonal(const std::vector<Matrix>& blocks);

/// "rows cols" header followed by rows of 17-significant-digit entries.
void write_matrix(std::ostream& os, const Matrix& m);
Matrix read_matrix(std::istream& is);
Matrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const Matrix& m);

}  // namespace hypbc
