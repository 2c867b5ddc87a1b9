#pragma once

// Simultaneous diagonalization of two non-singular real symmetric matrices
// by a single real congruence P:
//
//   P^t A1 P = diag(C_1, ..., C_m),   P^t A2 P = diag(D_1, ..., D_m),
//
// where each (C_i, D_i) is either a pair of non-zero scalars (Type I, one
// hyperbolic mode) or a pair of trace-free symmetric 2x2 matrices with
// alpha2*beta1 - alpha1*beta2 = 1 (Standard Type II, one elliptic mode).

#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "hypbc/linalg.hpp"

namespace hypbc {

/// Coefficients of u_t + A1 u_x + A2 u_y + B u = f after symmetrization.
///
/// a1 and a2 are always the symmetric working matrices. When the system was
/// built from a Friedrichs-symmetrizable one, `symmetrizer` records the S0
/// that was used, so that physical variables are S0^{-1/2} times ours.
struct SymmetricPair {
  Matrix a1;
  Matrix a2;
  std::optional<Matrix> lower_order;
  std::optional<Matrix> symmetrizer;

  [[nodiscard]] Eigen::Index order() const noexcept { return a1.rows(); }

  /// Throws DimensionMismatch, InvalidArgument (asymmetric) or SingularInput.
  void validate() const;
};

/// (c, d): the scalar mode u_t + c u_x + d u_y.
struct TypeI {
  double c = 1.0;
  double d = 1.0;

  [[nodiscard]] double lambda() const noexcept { return d / c; }
};

/// T1 = [[alpha1, beta1], [beta1, -alpha1]], T2 = [[alpha2, beta2], [beta2, -alpha2]].
struct StandardTypeII {
  double alpha1 = 0.0;
  double beta1 = 1.0;
  double alpha2 = 1.0;
  double beta2 = 0.0;

  [[nodiscard]] double determinant() const noexcept { return alpha2 * beta1 - alpha1 * beta2; }
  [[nodiscard]] Matrix t1() const;
  [[nodiscard]] Matrix t2() const;
  /// T1^{-1} T2 = [[mu1, -mu2], [mu2, mu1]].
  [[nodiscard]] double mu1() const noexcept;
  [[nodiscard]] double mu2() const noexcept;
};

using ModePair = std::variant<TypeI, StandardTypeII>;

[[nodiscard]] inline int mode_size(const ModePair& m) noexcept {
  return std::holds_alternative<TypeI>(m) ? 1 : 2;
}

struct DecompositionResiduals {
  double offdiag_1 = 0.0;       ///< off-block part of P^t A1 P, relative
  double offdiag_2 = 0.0;       ///< off-block part of P^t A2 P, relative
  double reconstruction = 0.0;  ///< max over A1, A2 of ||A - P^{-t} blockdiag P^{-1}|| / ||A||
};

struct ModeDecomposition {
  Matrix p;
  std::vector<ModePair> modes;
  DecompositionResiduals residuals;

  [[nodiscard]] std::vector<int> offsets() const;
  [[nodiscard]] Matrix first_blocks() const;   ///< blockdiag(C_i)
  [[nodiscard]] Matrix second_blocks() const;  ///< blockdiag(D_i)
  [[nodiscard]] int count_type1() const;
  [[nodiscard]] int count_type2() const;
};

struct CongruenceOptions {
  double tol = 1e-8;  ///< off-diagonal and pivot tolerance, relative
  EigenOptions eigen{};
};

/// Throws SingularInput, NotDiagonalizable, IllConditionedBasis, OffDiagonalResidual.
ModeDecomposition simultaneous_diagonalize(const SymmetricPair& pair,
                                           const CongruenceOptions& opts = {});

struct StandardizedPair {
  Matrix v;  ///< kappa0 * I_2
  double kappa0 = 1.0;
  StandardTypeII mode;
};

/// Scales a Type II pair (C, D) by kappa0 = (alpha2*beta1 - alpha1*beta2)^{-1/4}.
/// Throws NotTypeII when the determinant condition is not positive.
StandardizedPair standardize_type2(const Matrix& c, const Matrix& d);

enum class PivotCase { None, Swap, Combination };

struct PivotResult {
  Matrix w;        ///< congruence applied as W^t A W
  Matrix pivoted;  ///< W^t A W
  PivotCase kind = PivotCase::None;
  int partner = 0;  ///< 2x2 block index moved into (or combined with) slot 0
};

/// Makes the leading 2x2 block of a 2k x 2k matrix of trace-free symmetric
/// 2x2 blocks non-singular. A block counts as singular when
/// |det| <= tol * ||A||^2. Throws AllPivotsFail.
PivotResult pivot_leading_block(const Matrix& blocks, double tol);

struct SchurStep {
  Matrix v;  ///< unit upper block-triangular, first block row (I, -C11^{-1} C1j)
  Matrix leading_c;
  Matrix leading_d;
  Matrix trailing_c;  ///< (2k-2) x (2k-2), empty when k == 1
  Matrix trailing_d;
};

/// One block Schur elimination of the pair (A, A J) for a complex cluster J.
/// Throws SingularPivot when C11 is singular.
SchurStep schur_eliminate(const Matrix& a, const EigenBlock& cluster, double tol);

void write_decomposition(std::ostream& os, const ModeDecomposition& d);
std::ostream& operator<<(std::ostream& os, const ModePair& m);

}  // namespace hypbc
