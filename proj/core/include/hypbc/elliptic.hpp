#pragma once

// Steady elliptic mode T1 u_x + T2 u_y = Psi on the rectangle, solved as a
// least-squares problem over continuous bilinear elements with the side
// conditions eliminated node by node.

#include "hypbc/operators.hpp"

namespace hypbc {

struct EllipticOptions {
  double c0 = 1e-8;             ///< lower bound for alpha2*beta1 - alpha1*beta2
  double residual_factor = 5.0; ///< accepted relative L2 residual is residual_factor * max(hx, hy)
  double uniqueness_tol = 1e-8; ///< bound on |u| for the zero right-hand side
  bool refine = true;           ///< one step of iterative refinement
};

struct EllipticSolution {
  StateField u;
  CertReport residual;    ///< ||T1 u_x + T2 u_y - Psi|| / ||Psi||
  CertReport uniqueness;  ///< ||u|| returned for Psi = 0
  double min_eig_ratio = 0.0;  ///< lambda_min / lambda_max of the reduced normal matrix
  bool rank_deficient = false;
};

/// Throws EllipticityLost, RankDeficientBC, InvalidArgument (Psi not zero on
/// the two node layers along each side) or DimensionMismatch.
EllipticSolution elliptic_steady_solve(const ModeField& mode, const StateField& psi,
                                       const Type2BC& bc, const EllipticOptions& opts = {});

}  // namespace hypbc
