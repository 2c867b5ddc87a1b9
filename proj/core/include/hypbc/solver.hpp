#pragma once

// Method-of-lines solver for u_t + A1 u_x + A2 u_y + B u = f on the
// rectangle. Fluxes are upwinded per characteristic field; boundary states
// are projected so that the assigned mode variables ubar = P^{-1} u vanish.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hypbc/congruence.hpp"
#include "hypbc/grid.hpp"
#include "hypbc/modes.hpp"

namespace hypbc {

using Forcing = std::function<Vector(double t, double x, double y)>;

/// Node-wise decompositions of a variable-coefficient pair.
struct VariableSetup {
  RectGrid grid;
  std::vector<ModeDecomposition> nodes;  ///< indexed by grid.index(i, j)
  double b1_norm = 0.0;  ///< max over nodes of ||A1 P_x P^{-1} + A2 P_y P^{-1}||_2

  [[nodiscard]] const ModeDecomposition& at(int i, int j) const {
    return nodes[static_cast<std::size_t>(grid.index(i, j))];
  }
};

/// Decomposes the sampled pair at every node, aligning column signs with the
/// previous node so that P varies continuously. Throws BlockMatchingFailure
/// when the mode structure or the eigenvector ordering cannot be continued.
VariableSetup variable_coeff_setup(const PairSampler& sampler, const RectGrid& grid,
                                   double tol = 1e-8);

struct IVPConfig {
  SymmetricPair pair;      ///< constant coefficients (ignored when sampler is set)
  PairSampler sampler;     ///< variable coefficients
  RectGrid grid;
  StateField u0;
  Forcing forcing;         ///< empty means f = 0
  double t_end = 1.0;
  double cfl = 0.4;
  int output_every = 1;
  std::optional<ModeDecomposition> decomp;  ///< computed when absent
  std::map<int, ModeBC> overrides;
  CongruenceOptions congruence;
};

/// The semi-discrete right-hand side L(u, t) = -(A1 Dx u + A2 Dy u + B u) + f(t).
class SpatialOperator {
 public:
  void apply(const StateField& u, double t, StateField& out) const;
  /// Orthogonal projection of every boundary node onto its admissible set.
  void project(StateField& u) const;

  [[nodiscard]] const RectGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] int components() const noexcept { return n_; }
  [[nodiscard]] double max_speed() const noexcept { return rho_; }
  [[nodiscard]] double cfl() const noexcept { return cfl_; }
  [[nodiscard]] double max_dt() const noexcept;
  [[nodiscard]] bool variable() const noexcept { return variable_; }
  [[nodiscard]] double omega0() const noexcept { return omega0_; }
  [[nodiscard]] double b1_norm() const noexcept { return b1_norm_; }
  [[nodiscard]] const std::vector<ModeBC>& bcs() const noexcept { return bcs_; }
  [[nodiscard]] const ModeDecomposition& decomposition() const noexcept { return decomp_; }

 private:
  friend SpatialOperator build_semidiscrete(const IVPConfig& config);

  RectGrid grid_;
  int n_ = 0;
  double cfl_ = 0.4;
  double rho_ = 0.0;
  bool variable_ = false;
  double omega0_ = 0.0;
  double b1_norm_ = 0.0;
  ModeDecomposition decomp_;
  std::vector<ModeBC> bcs_;

  std::vector<Matrix> a1_, a2_;  // per node
  std::vector<Matrix> xp_, xm_;  // per x face: (nx-1) * ny, index j*(nx-1)+i
  std::vector<Matrix> yp_, ym_;  // per y face: nx * (ny-1), index j*nx+i
  std::vector<Matrix> b_;        // per node, empty when B = 0
  std::map<std::pair<int, int>, std::array<Matrix, 4>> side_proj_;  // boundary node -> per side
  std::map<std::pair<int, int>, Matrix> node_proj_;                 // boundary node -> all sides
  Forcing forcing_;
};

/// Throws UnstableCoefficients (A1 or A2 singular somewhere), plus the
/// errors of the decomposition and BC synthesis.
SpatialOperator build_semidiscrete(const IVPConfig& config);

/// One classical four-stage Runge-Kutta step with boundary projection after
/// each stage. Throws CFLViolation when dt exceeds op.max_dt().
StateField step(const SpatialOperator& op, const StateField& u, double t, double dt);

struct EnergyReport {
  enum class Kind { Contraction, QuasiContraction, Forced };
  enum class Verdict { Pass, Fail, NotApplicable };

  Kind kind = Kind::Contraction;
  std::vector<double> times;
  std::vector<double> norms;
  double omega_hat = 0.0;
  double bound = 0.0;           ///< allowed omega_hat
  double max_increase = 0.0;    ///< largest per-step norm increase / ||u0||
  double step_tol = 1e-10;      ///< per-step allowance relative to ||u0||
  bool monotone = true;
  Verdict verdict = Verdict::Pass;

  [[nodiscard]] std::string summary() const;
};

struct Trajectory {
  StateField final_state;
  EnergyReport report;
  int steps = 0;
  double dt = 0.0;
  std::vector<std::string> warnings;
};

/// Integrates to t_end with the largest uniform dt allowed by the CFL bound.
Trajectory run(const IVPConfig& config);
Trajectory run(const SpatialOperator& op, const IVPConfig& config);

/// Least-squares slope of log(norm) against time over the positive samples.
double fit_growth_rate(const std::vector<double>& times, const std::vector<double>& norms);

}  // namespace hypbc
