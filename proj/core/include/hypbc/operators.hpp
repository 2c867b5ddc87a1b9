#pragma once

// Discrete residuals for the energy identities behind well-posedness:
// positivity of the mode operators under their boundary conditions, the
// cross-term identity for fields with rank-2 side conditions, and the
// integration-by-parts formula for symmetric coefficient fields.

#include <functional>
#include <random>

#include "hypbc/grid.hpp"
#include "hypbc/modes.hpp"

namespace hypbc {

using ModeField = std::function<StandardTypeII(double x, double y)>;
using ScalarField = std::function<double(double x, double y)>;

/// Largest |a u1 + b u2| (or |u|) over the nodes of the constrained sides,
/// relative to max |u|. Fields hold mode variables ubar.
double bc_defect(const StateField& u, const std::vector<ModeBC>& bcs);
double bc_defect(const StateField& u, const Type2BC& bc);
double bc_defect(const StateField& u, const std::array<Side, 2>& inflow);

/// <c u_x + d u_y, u>. Throws BCViolated unless u vanishes on the inflow sides.
double positivity_residual_type1(double c, double d, const StateField& u);
double positivity_residual_type1(const ScalarField& c, const ScalarField& d, const StateField& u);

/// <T1 u_x + T2 u_y, u> under the default side conditions. Throws BCViolated.
double positivity_residual_type2(const StandardTypeII& mode, const StateField& u);
/// Variable mode; the side conditions are synthesized node by node.
double positivity_residual_type2(const ModeField& mode, const StateField& u);

/// | int u2_x u1_y - int u1_x u2_y |. Throws BCViolated.
double cross_term_residual(const StateField& u, const Type2BC& bc);

/// | <(T1 th)_x + (T2 th)_y, g> + <T1 g_x + T2 g_y, th> - boundary term |.
/// Throws DimensionMismatch.
double integration_by_parts_residual(const StateField& theta, const StateField& g,
                                     const MatrixField& t1, const MatrixField& t2);

/// Smooth random field obeying the side conditions of one mode: a random
/// trigonometric sum times factors that vanish on the constrained sides.
/// Non-coordinate Type II conditions get a factor vanishing on all sides.
StateField random_admissible_field(const RectGrid& grid, const ModeBC& bc, std::mt19937& rng);

/// BC tolerance used by the residual routines, relative to max |u|.
inline constexpr double kBcTolerance = 1e-12;

}  // namespace hypbc
