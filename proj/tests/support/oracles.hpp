#pragma once

// Test-side reference constructions. Nothing here calls the routine it is
// used to check.

#include <array>
#include <complex>
#include <random>
#include <set>
#include <vector>

#include "hypbc/hypbc.hpp"

namespace hypbc::testing {

/// Random orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
Matrix random_orthogonal(int n, std::mt19937& rng);

/// Random matrix with singular values in [1, cond].
Matrix random_conditioned(int n, double cond, std::mt19937& rng);

/// Standard Type II block with random coefficients and determinant one.
StandardTypeII random_standard_mode(std::mt19937& rng);

struct PlantedPair {
  SymmetricPair pair;
  Matrix q;                     ///< A_i = Q^{-t} blockdiag Q^{-1}
  std::vector<ModePair> modes;  ///< planted blocks in planted order
};

/// Block-diagonal pair of Type I and Standard Type II blocks with distinct
/// eigenvalues of A1^{-1} A2, hidden behind a congruence of condition <= cond.
PlantedPair plant_pair(int n, int type2_blocks, double cond, std::mt19937& rng);

/// max over A1, A2 of ||A_i - P^{-t} blockdiag P^{-1}|| / ||A_i||, assembling
/// the blocks from the mode coefficients directly.
double reconstruction_error(const SymmetricPair& pair, const Matrix& p,
                            const std::vector<ModePair>& modes);

/// Eigenvalues from a complex Schur decomposition.
std::vector<std::complex<double>> reference_eigenvalues(const Matrix& m);

/// Largest distance from each value in `a` to its nearest partner in `b`
/// (greedy one-to-one matching), relative to max(1, |a_k|).
double match_error(const std::vector<std::complex<double>>& a,
                   const std::vector<std::complex<double>>& b);

/// Side sets written out from the inflow tables for the four sign cases.
std::set<Side> expected_type1_sides(double c, double d);
/// {sides where ubar1 = 0, sides where ubar2 = 0}.
std::array<std::set<Side>, 2> expected_type2_sides(double alpha1, double alpha2);

/// Smooth bump supported in [a, 1 - a], with its derivative.
double bump(double t, double a = 0.2);
double bump_prime(double t, double a = 0.2);

/// Exact solution of the manufactured elliptic problem and its derivatives.
struct Manufactured {
  Eigen::Vector2d u;
  Eigen::Vector2d ux;
  Eigen::Vector2d uy;
};
Manufactured manufactured_elliptic(double x, double y);

/// T1 u_x + T2 u_y for the manufactured solution.
StateField manufactured_rhs(const RectGrid& g, const ModeField& mode);

/// || u - u* || in the discrete L2 norm.
double manufactured_error(const StateField& u);

/// Variable elliptic mode with T1^{-1} T2 = [[mu1, -mu2], [mu2, mu1]].
StandardTypeII mu_mode(double mu1, double mu2);

}  // namespace hypbc::testing
