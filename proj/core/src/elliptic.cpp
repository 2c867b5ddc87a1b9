#include "hypbc/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace hypbc {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// Per-node basis of the admissible (u1, u2) directions.
struct NodeSpace {
  Matrix z;  // 2 x r
  int first = 0;
};

std::vector<NodeSpace> node_spaces(const RectGrid& g, const Type2BC& bc, int& ndof) {
  std::vector<NodeSpace> out(static_cast<std::size_t>(g.nodes()));
  ndof = 0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      Matrix rows(0, 2);
      for (Side s : kAllSides)
        if (g.on_side(s, i, j)) {
          rows.conservativeResize(rows.rows() + 1, 2);
          rows.row(rows.rows() - 1) << bc.on(s).a, bc.on(s).b;
        }
      auto& ns = out[static_cast<std::size_t>(g.index(i, j))];
      if (rows.rows() == 0) {
        ns.z = Matrix::Identity(2, 2);
      } else {
        Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        int rank = 0;
        for (Eigen::Index k = 0; k < sv.size(); ++k)
          if (sv(k) > 1e-12 * sv(0)) ++rank;
        ns.z = svd.matrixV().rightCols(2 - rank);
        for (Eigen::Index c = 0; c < ns.z.cols(); ++c) {
          Eigen::Index lead = 0;
          ns.z.col(c).cwiseAbs().maxCoeff(&lead);
          if (ns.z(lead, c) < 0.0) ns.z.col(c) *= -1.0;
        }
      }
      ns.first = ndof;
      ndof += static_cast<int>(ns.z.cols());
    }
  return out;
}

constexpr double kGauss = 0.57735026918962576;  // 1 / sqrt(3)

struct Quadrature {
  // Loops over elements and 2x2 Gauss points; f(corner nodes, dN/dx, dN/dy, N, x, y, weight).
  template <typename F>
  static void each(const RectGrid& g, F&& f) {
    const double hx = g.hx();
    const double hy = g.hy();
    const double w = 0.25 * hx * hy;
    for (int j = 0; j + 1 < g.ny(); ++j)
      for (int i = 0; i + 1 < g.nx(); ++i) {
        const std::array<std::pair<int, int>, 4> corners{
            {{i, j}, {i + 1, j}, {i, j + 1}, {i + 1, j + 1}}};
        for (double gy : {-kGauss, kGauss})
          for (double gx : {-kGauss, kGauss}) {
            const double s = 0.5 * (1.0 + gx);
            const double t = 0.5 * (1.0 + gy);
            const std::array<double, 4> n{(1 - s) * (1 - t), s * (1 - t), (1 - s) * t, s * t};
            const std::array<double, 4> dx{-(1 - t) / hx, (1 - t) / hx, -t / hx, t / hx};
            const std::array<double, 4> dy{-(1 - s) / hy, -s / hy, (1 - s) / hy, s / hy};
            f(corners, dx, dy, n, g.x(i) + s * hx, g.y(j) + t * hy, w);
          }
      }
  }
};

void check_compact_support(const StateField& psi) {
  const auto& g = psi.grid();
  const double scale = psi.max_abs();
  if (scale == 0.0) return;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const bool near = i < 2 || j < 2 || i > g.nx() - 3 || j > g.ny() - 3;
      if (near && psi.node(i, j).cwiseAbs().maxCoeff() > 1e-14 * scale)
        throw Error(ErrorCode::InvalidArgument,
                    "right-hand side must vanish on the two node layers along each side; node (" +
                        std::to_string(i) + "," + std::to_string(j) + ") is non-zero");
    }
}

struct System {
  SpMat k;
  Vector f;
  double psi_norm2 = 0.0;
};

System assemble(const ModeField& mode, const StateField& psi, const std::vector<NodeSpace>& spaces,
                int ndof, double c0) {
  const auto& g = psi.grid();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(g.nodes()) * 64);
  System sys;
  sys.f = Vector::Zero(ndof);
  Quadrature::each(g, [&](const auto& corners, const auto& dx, const auto& dy, const auto& n,
                          double x, double y, double w) {
    const auto m = mode(x, y);
    if (!(m.determinant() >= c0))
      throw Error(ErrorCode::EllipticityLost, "alpha2*beta1 - alpha1*beta2 = " +
                                                  std::to_string(m.determinant()) + " at x=" +
                                                  std::to_string(x) + " y=" + std::to_string(y));
    const Matrix t1 = m.t1();
    const Matrix t2 = m.t2();
    Eigen::Vector2d ps = Eigen::Vector2d::Zero();
    std::array<Matrix, 4> b;
    std::array<const NodeSpace*, 4> ns{};
    for (int a = 0; a < 4; ++a) {
      const auto [ci, cj] = corners[static_cast<std::size_t>(a)];
      ps += n[static_cast<std::size_t>(a)] * psi.node(ci, cj);
      ns[static_cast<std::size_t>(a)] = &spaces[static_cast<std::size_t>(g.index(ci, cj))];
      b[static_cast<std::size_t>(a)] =
          (dx[static_cast<std::size_t>(a)] * t1 + dy[static_cast<std::size_t>(a)] * t2) *
          ns[static_cast<std::size_t>(a)]->z;
    }
    sys.psi_norm2 += w * ps.squaredNorm();
    for (std::size_t a = 0; a < 4; ++a) {
      const Vector fa = w * b[a].transpose() * ps;
      for (Eigen::Index r = 0; r < fa.size(); ++r) sys.f(ns[a]->first + r) += fa(r);
      for (std::size_t c = 0; c < 4; ++c) {
        const Matrix kac = w * b[a].transpose() * b[c];
        for (Eigen::Index r = 0; r < kac.rows(); ++r)
          for (Eigen::Index s = 0; s < kac.cols(); ++s)
            trip.emplace_back(ns[a]->first + static_cast<int>(r), ns[c]->first + static_cast<int>(s),
                              kac(r, s));
      }
    }
  });
  sys.k.resize(ndof, ndof);
  sys.k.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

StateField expand(const RectGrid& g, const std::vector<NodeSpace>& spaces, const Vector& xi) {
  StateField u(g, 2);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const auto& ns = spaces[static_cast<std::size_t>(g.index(i, j))];
      if (ns.z.cols() > 0) u.node(i, j) = ns.z * xi.segment(ns.first, ns.z.cols());
    }
  return u;
}

double residual_norm(const ModeField& mode, const StateField& psi, const StateField& u) {
  const auto& g = psi.grid();
  double acc = 0.0;
  Quadrature::each(g, [&](const auto& corners, const auto& dx, const auto& dy, const auto& n,
                          double x, double y, double w) {
    const auto m = mode(x, y);
    Eigen::Vector2d ux = Eigen::Vector2d::Zero();
    Eigen::Vector2d uy = Eigen::Vector2d::Zero();
    Eigen::Vector2d ps = Eigen::Vector2d::Zero();
    for (std::size_t a = 0; a < 4; ++a) {
      const auto [ci, cj] = corners[a];
      ux += dx[a] * u.node(ci, cj);
      uy += dy[a] * u.node(ci, cj);
      ps += n[a] * psi.node(ci, cj);
    }
    acc += w * (m.t1() * ux + m.t2() * uy - ps).squaredNorm();
  });
  return std::sqrt(acc);
}

// lambda_min / lambda_max by inverse and direct power iteration.
double eigen_ratio(const SpMat& k, const Eigen::SimplicialLDLT<SpMat>& ldlt) {
  if (k.rows() == 0) return 1.0;
  std::mt19937 rng(42);
  std::normal_distribution<double> nd;
  Vector v(k.rows());
  for (Eigen::Index r = 0; r < v.size(); ++r) v(r) = nd(rng);
  Vector w = v.normalized();
  double lmax = 0.0;
  for (int it = 0; it < 60; ++it) {
    Vector kw = k * w;
    lmax = w.dot(kw);
    w = kw.normalized();
  }
  w = v.normalized();
  double inv = 0.0;
  for (int it = 0; it < 60; ++it) {
    Vector s = ldlt.solve(w);
    if (!s.allFinite()) return 0.0;
    inv = w.dot(s);
    w = s.normalized();
  }
  if (!(inv > 0.0) || !(lmax > 0.0)) return 0.0;
  return (1.0 / inv) / lmax;
}

}  // namespace

EllipticSolution elliptic_steady_solve(const ModeField& mode, const StateField& psi,
                                       const Type2BC& bc, const EllipticOptions& opts) {
  if (psi.components() != 2)
    throw Error(ErrorCode::DimensionMismatch, "elliptic right-hand side must have 2 components");
  if (!has_full_rank(bc))
    throw Error(ErrorCode::RankDeficientBC, "side conditions do not have rank 2");
  check_compact_support(psi);
  const auto& g = psi.grid();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double det = mode(g.x(i), g.y(j)).determinant();
      if (!(det >= opts.c0))
        throw Error(ErrorCode::EllipticityLost,
                    "alpha2*beta1 - alpha1*beta2 = " + std::to_string(det) + " at node (" +
                        std::to_string(i) + "," + std::to_string(j) + ")");
    }

  int ndof = 0;
  const auto spaces = node_spaces(g, bc, ndof);
  const System sys = assemble(mode, psi, spaces, ndof, opts.c0);

  Eigen::SimplicialLDLT<SpMat> ldlt(sys.k);
  EllipticSolution out;
  out.rank_deficient = ldlt.info() != Eigen::Success;
  Vector xi = Vector::Zero(ndof);
  if (!out.rank_deficient) {
    xi = ldlt.solve(sys.f);
    if (opts.refine) xi += ldlt.solve(sys.f - sys.k * xi);
    out.min_eig_ratio = eigen_ratio(sys.k, ldlt);
    out.rank_deficient = !(out.min_eig_ratio > 1e-13);
  }
  out.u = expand(g, spaces, xi);

  const double res = residual_norm(mode, psi, out.u);
  const double rel = sys.psi_norm2 > 0.0 ? res / std::sqrt(sys.psi_norm2) : res;
  out.residual = CertReport::make("elliptic_residual", g.label(), rel,
                                  opts.residual_factor * std::max(g.hx(), g.hy()));

  double zero_norm = std::numeric_limits<double>::infinity();
  if (!out.rank_deficient) {
    const Vector z = ldlt.solve(Vector::Zero(ndof));
    zero_norm = expand(g, spaces, z).l2_norm();
    if (!std::isfinite(zero_norm)) zero_norm = std::numeric_limits<double>::infinity();
  }
  out.uniqueness = CertReport::make("elliptic_uniqueness", g.label(), zero_norm, opts.uniqueness_tol);
  return out;
}

}  // namespace hypbc
