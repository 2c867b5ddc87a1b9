#include "hypbc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hypbc/error.hpp"

namespace hypbc {

namespace {

struct Split {
  Matrix plus;
  Matrix minus;
};

Split split(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()));
  const Matrix& v = es.eigenvectors();
  const Vector lp = es.eigenvalues().cwiseMax(0.0);
  const Vector lm = es.eigenvalues().cwiseMin(0.0);
  return {v * lp.asDiagonal() * v.transpose(), v * lm.asDiagonal() * v.transpose()};
}

double spectral_radius(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

void require_regular(const Matrix& a, const char* which, double x, double y) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
  const auto ev = es.eigenvalues().cwiseAbs();
  if (!(ev.minCoeff() > 1e-10 * std::max(ev.maxCoeff(), 1e-300)))
    throw Error(ErrorCode::UnstableCoefficients,
                std::string(which) + " has a vanishing wave speed at x=" + std::to_string(x) +
                    " y=" + std::to_string(y));
}

// Rows g with g . u = 0 on side s, given P^{-1} and the mode BCs.
Matrix constraint_rows(const Matrix& pinv, const ModeDecomposition& d,
                       const std::vector<ModeBC>& bcs, Side s) {
  Matrix rows(0, pinv.cols());
  const auto offsets = d.offsets();
  auto push = [&](const Eigen::RowVectorXd& r) {
    rows.conservativeResize(rows.rows() + 1, Eigen::NoChange);
    rows.row(rows.rows() - 1) = r;
  };
  for (std::size_t k = 0; k < bcs.size(); ++k) {
    const int at = offsets[k];
    if (const auto* t1 = std::get_if<Type1BC>(&bcs[k])) {
      if (t1->inflow[0] == s || t1->inflow[1] == s) push(pinv.row(at));
    } else {
      const auto& c = std::get<Type2BC>(bcs[k]).on(s);
      push(c.a * pinv.row(at) + c.b * pinv.row(at + 1));
    }
  }
  return rows;
}

Matrix orthogonal_projector(const Matrix& rows, Eigen::Index n) {
  if (rows.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > 1e-12 * sv(0)) ++rank;
  const Matrix v = svd.matrixV().leftCols(rank);
  return Matrix::Identity(n, n) - v * v.transpose();
}

std::vector<ModeBC> bcs_for(const ModeDecomposition& d, const std::map<int, ModeBC>& overrides) {
  return assemble_system_bcs(d, overrides);
}

}  // namespace

double SpatialOperator::max_dt() const noexcept {
  return cfl_ * std::min(grid_.hx(), grid_.hy()) / rho_;
}

SpatialOperator build_semidiscrete(const IVPConfig& cfg) {
  SpatialOperator op;
  op.grid_ = cfg.grid;
  op.cfl_ = cfg.cfl;
  op.forcing_ = cfg.forcing;
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "cfl must lie in (0, 1]");
  const auto& g = cfg.grid;
  const auto nodes = static_cast<std::size_t>(g.nodes());

  std::optional<VariableSetup> setup;
  op.variable_ = static_cast<bool>(cfg.sampler);
  op.a1_.resize(nodes);
  op.a2_.resize(nodes);
  bool any_b = false;
  std::vector<Matrix> bs(nodes);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const auto k = static_cast<std::size_t>(g.index(i, j));
      const SymmetricPair p = op.variable_ ? cfg.sampler(g.x(i), g.y(j)) : cfg.pair;
      if (k == 0 || op.variable_) {
        if (p.a1.rows() == 0 || p.a1.rows() != p.a2.rows())
          throw Error(ErrorCode::DimensionMismatch, "coefficient matrices must be square and conform");
        require_regular(p.a1, "A1", g.x(i), g.y(j));
        require_regular(p.a2, "A2", g.x(i), g.y(j));
      }
      op.a1_[k] = p.a1;
      op.a2_[k] = p.a2;
      if (p.lower_order) {
        bs[k] = *p.lower_order;
        any_b = true;
      }
    }
  op.n_ = static_cast<int>(op.a1_[0].rows());
  if (any_b) {
    for (auto& b : bs)
      if (b.size() == 0) b = Matrix::Zero(op.n_, op.n_);
    op.b_ = std::move(bs);
  }

  if (op.variable_) {
    const auto report = check_variable_coeff_assumptions(cfg.sampler, g, cfg.congruence.eigen.cluster_tol);
    op.omega0_ = report.omega0;
    setup = variable_coeff_setup(cfg.sampler, g, cfg.congruence.eigen.cluster_tol);
    op.b1_norm_ = setup->b1_norm;
    op.decomp_ = setup->at(0, 0);
  } else {
    op.decomp_ = cfg.decomp ? *cfg.decomp : simultaneous_diagonalize(cfg.pair, cfg.congruence);
  }
  op.bcs_ = bcs_for(op.decomp_, cfg.overrides);

  op.rho_ = 0.0;
  for (std::size_t k = 0; k < nodes; ++k)
    op.rho_ = std::max({op.rho_, spectral_radius(op.a1_[k]), spectral_radius(op.a2_[k])});

  // Face splittings: the face matrix is the mean of its two nodes.
  const Split cx = split(op.a1_[0]);
  const Split cy = split(op.a2_[0]);
  op.xp_.resize(static_cast<std::size_t>((g.nx() - 1) * g.ny()));
  op.xm_.resize(op.xp_.size());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i + 1 < g.nx(); ++i) {
      const auto f = static_cast<std::size_t>(j * (g.nx() - 1) + i);
      const Split s = op.variable_
                          ? split(0.5 * (op.a1_[static_cast<std::size_t>(g.index(i, j))] +
                                         op.a1_[static_cast<std::size_t>(g.index(i + 1, j))]))
                          : cx;
      op.xp_[f] = s.plus;
      op.xm_[f] = s.minus;
    }
  op.yp_.resize(static_cast<std::size_t>(g.nx() * (g.ny() - 1)));
  op.ym_.resize(op.yp_.size());
  for (int j = 0; j + 1 < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const auto f = static_cast<std::size_t>(j * g.nx() + i);
      const Split s = op.variable_
                          ? split(0.5 * (op.a2_[static_cast<std::size_t>(g.index(i, j))] +
                                         op.a2_[static_cast<std::size_t>(g.index(i, j + 1))]))
                          : cy;
      op.yp_[f] = s.plus;
      op.ym_[f] = s.minus;
    }

  // Boundary projectors in physical variables.
  const Matrix pinv0 = op.decomp_.p.partialPivLu().inverse();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const bool boundary = i == 0 || j == 0 || i == g.nx() - 1 || j == g.ny() - 1;
      if (!boundary) continue;
      const ModeDecomposition& d = op.variable_ ? setup->at(i, j) : op.decomp_;
      const std::vector<ModeBC> bcs = op.variable_ ? bcs_for(d, cfg.overrides) : op.bcs_;
      const Matrix pinv = op.variable_ ? Matrix(d.p.partialPivLu().inverse()) : pinv0;
      std::array<Matrix, 4> per_side;
      Matrix all(0, op.n_);
      for (Side s : kAllSides) {
        if (!g.on_side(s, i, j)) continue;
        const Matrix rows = constraint_rows(pinv, d, bcs, s);
        per_side[static_cast<std::size_t>(s)] = orthogonal_projector(rows, op.n_);
        all.conservativeResize(all.rows() + rows.rows(), Eigen::NoChange);
        all.bottomRows(rows.rows()) = rows;
      }
      op.side_proj_[{i, j}] = per_side;
      op.node_proj_[{i, j}] = orthogonal_projector(all, op.n_);
    }
  return op;
}

void SpatialOperator::apply(const StateField& u, double t, StateField& out) const {
  const auto& g = grid_;
  if (!(u.grid() == g) || u.components() != n_)
    throw Error(ErrorCode::DimensionMismatch, "state does not match the operator");
  if (!(out.grid() == g) || out.components() != n_) out = StateField(g, n_);
  out.data().setZero();
  const double hx = g.hx();
  const double hy = g.hy();
  const int nx = g.nx();
  const int ny = g.ny();
  auto node_a1 = [&](int i, int j) -> const Matrix& { return a1_[static_cast<std::size_t>(g.index(i, j))]; };
  auto node_a2 = [&](int i, int j) -> const Matrix& { return a2_[static_cast<std::size_t>(g.index(i, j))]; };
  auto side = [&](int i, int j, Side s) -> const Matrix& {
    return side_proj_.at({i, j})[static_cast<std::size_t>(s)];
  };

  Vector flux(n_);
  Vector prev(n_);
  for (int j = 0; j < ny; ++j) {
    prev = node_a1(0, j) * (side(0, j, Side::W) * u.node(0, j));
    for (int i = 0; i < nx; ++i) {
      if (i + 1 < nx) {
        const auto f = static_cast<std::size_t>(j * (nx - 1) + i);
        flux = xp_[f] * u.node(i, j) + xm_[f] * u.node(i + 1, j);
      } else {
        flux = node_a1(i, j) * (side(i, j, Side::E) * u.node(i, j));
      }
      const double w = (i == 0 || i == nx - 1) ? 0.5 * hx : hx;
      out.node(i, j) -= (flux - prev) / w;
      prev = flux;
    }
  }
  for (int i = 0; i < nx; ++i) {
    prev = node_a2(i, 0) * (side(i, 0, Side::S) * u.node(i, 0));
    for (int j = 0; j < ny; ++j) {
      if (j + 1 < ny) {
        const auto f = static_cast<std::size_t>(j * nx + i);
        flux = yp_[f] * u.node(i, j) + ym_[f] * u.node(i, j + 1);
      } else {
        flux = node_a2(i, j) * (side(i, j, Side::N) * u.node(i, j));
      }
      const double w = (j == 0 || j == ny - 1) ? 0.5 * hy : hy;
      out.node(i, j) -= (flux - prev) / w;
      prev = flux;
    }
  }
  if (!b_.empty() || forcing_) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        if (!b_.empty()) out.node(i, j) -= b_[static_cast<std::size_t>(g.index(i, j))] * u.node(i, j);
        if (forcing_) out.node(i, j) += forcing_(t, g.x(i), g.y(j));
      }
  }
}

void SpatialOperator::project(StateField& u) const {
  for (const auto& [ij, pr] : node_proj_) u.node(ij.first, ij.second) = pr * u.node(ij.first, ij.second);
}

StateField step(const SpatialOperator& op, const StateField& u, double t, double dt) {
  if (!(dt > 0.0) || dt > op.max_dt() * (1.0 + 1e-12))
    throw Error(ErrorCode::CFLViolation, "dt=" + std::to_string(dt) + " exceeds the bound " +
                                             std::to_string(op.max_dt()));
  StateField k1, k2, k3, k4;
  op.apply(u, t, k1);
  StateField s = u;
  s.data() += 0.5 * dt * k1.data();
  op.project(s);
  op.apply(s, t + 0.5 * dt, k2);
  s.data() = u.data() + 0.5 * dt * k2.data();
  op.project(s);
  op.apply(s, t + 0.5 * dt, k3);
  s.data() = u.data() + dt * k3.data();
  op.project(s);
  op.apply(s, t + dt, k4);
  StateField next = u;
  next.data() += (dt / 6.0) * (k1.data() + 2.0 * k2.data() + 2.0 * k3.data() + k4.data());
  op.project(next);
  return next;
}

double fit_growth_rate(const std::vector<double>& times, const std::vector<double>& norms) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < times.size() && k < norms.size(); ++k) {
    if (!(norms[k] > 0.0)) continue;
    const double ly = std::log(norms[k]);
    sx += times[k];
    sy += ly;
    sxx += times[k] * times[k];
    sxy += times[k] * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  const double den = n * sxx - sx * sx;
  return den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;
}

std::string EnergyReport::summary() const {
  std::ostringstream os;
  os.precision(17);
  const char* k = kind == Kind::Contraction        ? "contraction"
                  : kind == Kind::QuasiContraction ? "quasi-contraction"
                                                   : "forced";
  const char* v = verdict == Verdict::Pass ? "pass" : verdict == Verdict::Fail ? "fail" : "n/a";
  os << "energy kind=" << k << " omega_hat=" << omega_hat << " bound=" << bound
     << " max_step_increase=" << max_increase << " step_tol=" << step_tol
     << " monotone=" << (monotone ? "yes" : "no") << " verdict=" << v;
  return os.str();
}

Trajectory run(const IVPConfig& config) { return run(build_semidiscrete(config), config); }

Trajectory run(const SpatialOperator& op, const IVPConfig& config) {
  if (!(config.t_end > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_end must be positive");
  if (!(config.u0.grid() == op.grid()) || config.u0.components() != op.components())
    throw Error(ErrorCode::DimensionMismatch, "initial state does not match the grid or system order");
  if (config.output_every < 1) throw Error(ErrorCode::InvalidArgument, "output_every must be >= 1");

  Trajectory tr;
  StateField u = config.u0;
  op.project(u);
  {
    StateField diff = u;
    diff.data() -= config.u0.data();
    const double scale = std::max(config.u0.max_abs(), 1e-300);
    if (diff.max_abs() > 1e-12 * scale)
      tr.warnings.push_back("initial data violated the boundary conditions and was projected (max change " +
                            std::to_string(diff.max_abs() / scale) + " relative)");
  }

  const double dt_max = op.max_dt();
  tr.steps = static_cast<int>(std::ceil(config.t_end / dt_max - 1e-12));
  tr.steps = std::max(tr.steps, 1);
  tr.dt = config.t_end / tr.steps;

  auto& rep = tr.report;
  const double n0 = u.l2_norm();
  rep.times.push_back(0.0);
  rep.norms.push_back(n0);
  double prev = n0;
  for (int s = 1; s <= tr.steps; ++s) {
    u = step(op, u, (s - 1) * tr.dt, tr.dt);
    const double nrm = u.l2_norm();
    const double inc = n0 > 0.0 ? (nrm - prev) / n0 : (nrm > 0.0 ? 1.0 : 0.0);
    rep.max_increase = std::max(rep.max_increase, inc);
    if (inc > rep.step_tol) rep.monotone = false;
    prev = nrm;
    if (s % config.output_every == 0 || s == tr.steps) {
      rep.times.push_back(s * tr.dt);
      rep.norms.push_back(nrm);
    }
  }
  rep.omega_hat = fit_growth_rate(rep.times, rep.norms);

  if (config.forcing) {
    rep.kind = EnergyReport::Kind::Forced;
    rep.verdict = EnergyReport::Verdict::NotApplicable;
  } else if (op.variable()) {
    rep.kind = EnergyReport::Kind::QuasiContraction;
    const double h = std::max(op.grid().hx(), op.grid().hy());
    rep.bound = op.omega0() + 5.0 * h;
    rep.verdict = rep.omega_hat <= rep.bound ? EnergyReport::Verdict::Pass : EnergyReport::Verdict::Fail;
  } else {
    rep.kind = EnergyReport::Kind::Contraction;
    rep.bound = 0.0;
    rep.verdict = (rep.monotone && rep.omega_hat <= rep.bound + rep.step_tol)
                      ? EnergyReport::Verdict::Pass
                      : EnergyReport::Verdict::Fail;
  }
  tr.final_state = std::move(u);
  return tr;
}

}  // namespace hypbc
