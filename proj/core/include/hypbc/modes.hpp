#pragma once

// Boundary-condition synthesis for hyperbolic (Type I) and elliptic
// (Standard Type II) modes, plus the grid-sampled checks a variable
// coefficient system must pass before it can be simulated.

#include <array>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "hypbc/congruence.hpp"
#include "hypbc/error.hpp"
#include "hypbc/grid.hpp"

namespace hypbc {

/// Sides on which a scalar mode variable vanishes.
struct Type1BC {
  std::array<Side, 2> inflow{Side::W, Side::S};
};

/// a * ubar1 + b * ubar2 = 0 on one side.
struct SideCondition {
  double a = 1.0;
  double b = 0.0;
};

/// One condition per side, indexed by Side.
struct Type2BC {
  std::array<SideCondition, 4> sides{};

  [[nodiscard]] const SideCondition& on(Side s) const { return sides[static_cast<int>(s)]; }
  SideCondition& on(Side s) { return sides[static_cast<int>(s)]; }
};

using ModeBC = std::variant<Type1BC, Type2BC>;

/// Throws ZeroCoefficient when c * d == 0.
std::array<Side, 2> synthesize_bc_type1(double c, double d);

/// Default elliptic assignment from the signs of alpha1, alpha2. A value
/// counts as non-negative when it exceeds -zero_tol * scale.
Type2BC synthesize_bc_type2(const StandardTypeII& mode, double zero_tol = 1e-12);

/// Coefficients of the mode after v = Q(kappa) u. Throws ZeroKappa.
StandardTypeII rotate_type2(const StandardTypeII& mode, double kappa);

/// Default conditions of the rotated mode, pulled back to the original ubar.
Type2BC rotated_bc_type2(const StandardTypeII& mode, double kappa, double zero_tol = 1e-12);

/// The 4x2 matrix of side rows (a_j, b_j) has rank 2.
bool has_full_rank(const Type2BC& bc, double rel_tol = 1e-10);

/// Default tables, with optional per-mode replacements. Throws
/// RankDeficientOverride or InvalidArgument (override of the wrong kind).
std::vector<ModeBC> assemble_system_bcs(const ModeDecomposition& decomp,
                                        const std::map<int, ModeBC>& overrides = {});

/// "mode k: TypeI inflow=W,S" and "mode k: TypeII side=W cond=(a,b)" lines.
void write_bcs(std::ostream& os, const std::vector<ModeBC>& bcs);
std::vector<ModeBC> read_bcs(std::istream& is);

/// Rows g with g . ubar = 0 imposed on `side` for one mode.
std::vector<Eigen::RowVector2d> side_rows(const Type2BC& bc, Side side);

using PairSampler = std::function<SymmetricPair(double x, double y)>;

struct VariableCoeffReport {
  double a1_margin = 0.0;    ///< min over nodes of min |eig(A1)|
  double a2_margin = 0.0;    ///< min over nodes of min |eig(A2)|
  double real_margin = 0.0;  ///< min |lambda| over real eigenvalues of A1^{-1} A2
  double imag_margin = 0.0;  ///< min mu2 over complex pairs (infinity when none)
  bool multiplicity_constant = true;
  double c1_norm = 0.0;      ///< max over nodes of |dA1/dx| + |dA1/dy| + |dA2/dx| + |dA2/dy|
  double omega0 = 0.0;       ///< 1/2 max || dA1/dx + dA2/dy ||_2
  int type1_modes = 0;
  int type2_modes = 0;
  std::string note;
};

/// Which standing assumption failed and at which node.
class AssumptionViolation : public Error {
 public:
  AssumptionViolation(char which, int i, int j, double x, double y, const std::string& what);

  [[nodiscard]] char which() const noexcept { return which_; }
  [[nodiscard]] int i() const noexcept { return i_; }
  [[nodiscard]] int j() const noexcept { return j_; }
  [[nodiscard]] double x() const noexcept { return x_; }
  [[nodiscard]] double y() const noexcept { return y_; }

 private:
  char which_;
  int i_;
  int j_;
  double x_;
  double y_;
};

/// Assumptions are labelled 'b' (A1, A2 eigenvalues keep their signs away
/// from zero), 'c' (eigenvalues of A1^{-1} A2 stay away from the real axis
/// crossing) and 'd' (cluster multiplicities stay constant). Regularity
/// beyond C^1 cannot be sampled and is taken on trust.
VariableCoeffReport check_variable_coeff_assumptions(const PairSampler& sampler,
                                                     const RectGrid& grid, double tol = 1e-8);

}  // namespace hypbc
