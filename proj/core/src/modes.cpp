#include "hypbc/modes.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <regex>
#include <sstream>

namespace hypbc {

namespace {

bool nonneg(double v, double zero_tol, double scale) { return v > -zero_tol * scale; }

Type2BC split_assignment(Side s1a, Side s1b, Side s2a, Side s2b) {
  Type2BC bc;
  bc.on(s1a) = {1.0, 0.0};
  bc.on(s1b) = {1.0, 0.0};
  bc.on(s2a) = {0.0, 1.0};
  bc.on(s2b) = {0.0, 1.0};
  return bc;
}

// Derivative of a sampled matrix family along one grid direction.
Matrix matrix_derivative(const std::vector<Matrix>& f, const RectGrid& g, int i, int j, bool along_x) {
  const int n = along_x ? g.nx() : g.ny();
  const int k = along_x ? i : j;
  const double h = along_x ? g.hx() : g.hy();
  auto at = [&](int m) -> const Matrix& {
    return along_x ? f[g.index(m, j)] : f[g.index(i, m)];
  };
  // Written as differences so that a constant family differentiates to exactly zero.
  if (k == 0) return (4.0 * (at(1) - at(0)) - (at(2) - at(0))) / (2.0 * h);
  if (k == n - 1) return (4.0 * (at(n - 1) - at(n - 2)) - (at(n - 1) - at(n - 3))) / (2.0 * h);
  return (at(k + 1) - at(k - 1)) / (2.0 * h);
}

struct Structure {
  std::vector<std::pair<bool, int>> clusters;  // (is_real, multiplicity)
  int complex_modes = 0;

  bool operator==(const Structure&) const = default;
};

}  // namespace

std::array<Side, 2> synthesize_bc_type1(double c, double d) {
  if (c == 0.0 || d == 0.0 || !std::isfinite(c) || !std::isfinite(d))
    throw Error(ErrorCode::ZeroCoefficient, "Type I mode needs c and d non-zero");
  return {c > 0.0 ? Side::W : Side::E, d > 0.0 ? Side::S : Side::N};
}

Type2BC synthesize_bc_type2(const StandardTypeII& m, double zero_tol) {
  const double scale =
      std::max({std::abs(m.alpha1), std::abs(m.beta1), std::abs(m.alpha2), std::abs(m.beta2)});
  const bool p1 = nonneg(m.alpha1, zero_tol, scale);
  const bool p2 = nonneg(m.alpha2, zero_tol, scale);
  if (p1 && p2) return split_assignment(Side::W, Side::S, Side::E, Side::N);
  if (p1) return split_assignment(Side::W, Side::N, Side::E, Side::S);
  if (p2) return split_assignment(Side::E, Side::S, Side::W, Side::N);
  return split_assignment(Side::E, Side::N, Side::W, Side::S);
}

StandardTypeII rotate_type2(const StandardTypeII& m, double kappa) {
  if (kappa == 0.0 || !std::isfinite(kappa))
    throw Error(ErrorCode::ZeroKappa, "rotation parameter must be finite and non-zero");
  const double k2 = kappa * kappa;
  const double den = 1.0 + k2;
  auto a = [&](double alpha, double beta) { return ((k2 - 1.0) * alpha - 2.0 * kappa * beta) / den; };
  auto b = [&](double alpha, double beta) { return ((k2 - 1.0) * beta + 2.0 * kappa * alpha) / den; };
  return {a(m.alpha1, m.beta1), b(m.alpha1, m.beta1), a(m.alpha2, m.beta2), b(m.alpha2, m.beta2)};
}

Type2BC rotated_bc_type2(const StandardTypeII& m, double kappa, double zero_tol) {
  const Type2BC v_bc = synthesize_bc_type2(rotate_type2(m, kappa), zero_tol);
  const double r = 1.0 / std::sqrt(1.0 + kappa * kappa);
  // v1 = (kappa u1 - u2) r, v2 = (u1 + kappa u2) r
  Type2BC out;
  for (Side s : kAllSides) {
    const auto& c = v_bc.on(s);
    out.on(s) = {r * (c.a * kappa + c.b), r * (-c.a + c.b * kappa)};
  }
  return out;
}

bool has_full_rank(const Type2BC& bc, double rel_tol) {
  Eigen::Matrix<double, 4, 2> rows;
  for (int k = 0; k < 4; ++k) rows.row(k) << bc.sides[k].a, bc.sides[k].b;
  for (int k = 0; k < 4; ++k)
    if (bc.sides[k].a == 0.0 && bc.sides[k].b == 0.0) return false;
  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>> svd(rows);
  const auto& sv = svd.singularValues();
  return sv(1) > rel_tol * sv(0);
}

std::vector<ModeBC> assemble_system_bcs(const ModeDecomposition& decomp,
                                        const std::map<int, ModeBC>& overrides) {
  for (const auto& [k, bc] : overrides) {
    if (k < 0 || k >= static_cast<int>(decomp.modes.size()))
      throw Error(ErrorCode::InvalidArgument, "override for non-existent mode " + std::to_string(k));
    if (bc.index() != decomp.modes[static_cast<std::size_t>(k)].index())
      throw Error(ErrorCode::InvalidArgument, "override kind does not match mode " + std::to_string(k));
    if (const auto* t2 = std::get_if<Type2BC>(&bc); t2 && !has_full_rank(*t2))
      throw Error(ErrorCode::RankDeficientOverride,
                  "side conditions for mode " + std::to_string(k) + " have rank below 2");
  }
  std::vector<ModeBC> out;
  out.reserve(decomp.modes.size());
  for (std::size_t k = 0; k < decomp.modes.size(); ++k) {
    if (auto it = overrides.find(static_cast<int>(k)); it != overrides.end()) {
      out.push_back(it->second);
      continue;
    }
    if (const auto* t = std::get_if<TypeI>(&decomp.modes[k]))
      out.emplace_back(Type1BC{synthesize_bc_type1(t->c, t->d)});
    else
      out.emplace_back(synthesize_bc_type2(std::get<StandardTypeII>(decomp.modes[k])));
  }
  return out;
}

std::vector<Eigen::RowVector2d> side_rows(const Type2BC& bc, Side side) {
  const auto& c = bc.on(side);
  return {Eigen::RowVector2d(c.a, c.b)};
}

void write_bcs(std::ostream& os, const std::vector<ModeBC>& bcs) {
  const auto prec = os.precision(17);
  for (std::size_t k = 0; k < bcs.size(); ++k) {
    if (const auto* t = std::get_if<Type1BC>(&bcs[k])) {
      os << "mode " << k << ": TypeI inflow=" << to_string(t->inflow[0]) << ','
         << to_string(t->inflow[1]) << '\n';
    } else {
      const auto& t2 = std::get<Type2BC>(bcs[k]);
      for (Side s : kAllSides)
        os << "mode " << k << ": TypeII side=" << to_string(s) << " cond=(" << t2.on(s).a << ','
           << t2.on(s).b << ")\n";
    }
  }
  os.precision(prec);
}

std::vector<ModeBC> read_bcs(std::istream& is) {
  static const std::regex type1(R"(mode (\d+): TypeI inflow=([WESN]),([WESN]))");
  static const std::regex type2(R"(mode (\d+): TypeII side=([WESN]) cond=\(([^,]+),([^)]+)\))");
  std::map<int, ModeBC> found;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::smatch m;
    if (std::regex_match(line, m, type1)) {
      found[std::stoi(m[1])] = Type1BC{{parse_side(m[2].str()), parse_side(m[3].str())}};
    } else if (std::regex_match(line, m, type2)) {
      const int k = std::stoi(m[1]);
      auto it = found.find(k);
      if (it == found.end()) it = found.emplace(k, Type2BC{}).first;
      auto* bc = std::get_if<Type2BC>(&it->second);
      if (!bc) throw Error(ErrorCode::InvalidArgument, "mode " + std::to_string(k) + " mixes kinds");
      bc->on(parse_side(m[2].str())) = {std::stod(m[3]), std::stod(m[4])};
    } else {
      throw Error(ErrorCode::InvalidArgument, "cannot parse boundary-condition line '" + line + "'");
    }
  }
  std::vector<ModeBC> out;
  for (int k = 0; k < static_cast<int>(found.size()); ++k) {
    auto it = found.find(k);
    if (it == found.end())
      throw Error(ErrorCode::InvalidArgument, "boundary conditions skip mode " + std::to_string(k));
    out.push_back(it->second);
  }
  return out;
}

AssumptionViolation::AssumptionViolation(char which, int i, int j, double x, double y,
                                         const std::string& what)
    : Error(ErrorCode::AssumptionViolated,
            std::string("assumption (") + which + ") fails at node (" + std::to_string(i) + "," +
                std::to_string(j) + "), x=" + std::to_string(x) + " y=" + std::to_string(y) +
                ": " + what),
      which_(which),
      i_(i),
      j_(j),
      x_(x),
      y_(y) {}

VariableCoeffReport check_variable_coeff_assumptions(const PairSampler& sampler,
                                                     const RectGrid& grid, double tol) {
  VariableCoeffReport rep;
  rep.a1_margin = rep.a2_margin = rep.real_margin = rep.imag_margin =
      std::numeric_limits<double>::infinity();
  rep.note = "Hoelder regularity of the coefficients is assumed, not sampled";

  std::vector<Matrix> a1s;
  std::vector<Matrix> a2s;
  a1s.reserve(static_cast<std::size_t>(grid.nodes()));
  a2s.reserve(static_cast<std::size_t>(grid.nodes()));

  int pos1 = -1;
  int pos2 = -1;
  Structure first;
  EigenOptions eopts;
  eopts.cluster_tol = tol;

  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) {
      const double x = grid.x(i);
      const double y = grid.y(j);
      const SymmetricPair p = sampler(x, y);
      if (p.a1.rows() == 0 || p.a1.rows() != p.a2.rows() || !is_symmetric(p.a1, 1e-10) ||
          !is_symmetric(p.a2, 1e-10))
        throw AssumptionViolation('a', i, j, x, y, "coefficients are not symmetric of equal order");
      a1s.push_back(p.a1);
      a2s.push_back(p.a2);

      int pos[2];
      for (int which = 0; which < 2; ++which) {
        const Matrix& a = which == 0 ? p.a1 : p.a2;
        Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        const double margin = ev.cwiseAbs().minCoeff();
        const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
        if (margin <= tol * scale)
          throw AssumptionViolation('b', i, j, x, y,
                                    std::string(which == 0 ? "A1" : "A2") + " is singular");
        pos[which] = static_cast<int>((ev.array() > 0.0).count());
        (which == 0 ? rep.a1_margin : rep.a2_margin) =
            std::min(which == 0 ? rep.a1_margin : rep.a2_margin, margin);
      }
      if (pos1 < 0) {
        pos1 = pos[0];
        pos2 = pos[1];
      } else if (pos[0] != pos1 || pos[1] != pos2) {
        throw AssumptionViolation('b', i, j, x, y, "an eigenvalue of A1 or A2 changed sign");
      }

      const Matrix m = p.a1.partialPivLu().solve(p.a2);
      RealBlockForm form;
      try {
        form = real_block_eigen(m, eopts);
      } catch (const Error& e) {
        throw AssumptionViolation('d', i, j, x, y, e.what());
      }
      Structure s;
      for (const auto& b : form.blocks) {
        s.clusters.emplace_back(b.is_real(), b.multiplicity);
        if (b.is_real()) {
          rep.real_margin = std::min(rep.real_margin, std::abs(b.value));
        } else {
          s.complex_modes += b.multiplicity;
          rep.imag_margin = std::min(rep.imag_margin, b.imag);
        }
      }
      if (i == 0 && j == 0) {
        first = s;
        for (const auto& [real, k] : s.clusters) (real ? rep.type1_modes : rep.type2_modes) += k;
      } else if (!(s == first)) {
        rep.multiplicity_constant = false;
        if (s.complex_modes != first.complex_modes)
          throw AssumptionViolation('c', i, j, x, y, "a complex eigenvalue pair reached the real axis");
        throw AssumptionViolation('d', i, j, x, y, "eigenvalue multiplicities changed");
      }
    }

  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) {
      const Matrix d1x = matrix_derivative(a1s, grid, i, j, true);
      const Matrix d1y = matrix_derivative(a1s, grid, i, j, false);
      const Matrix d2x = matrix_derivative(a2s, grid, i, j, true);
      const Matrix d2y = matrix_derivative(a2s, grid, i, j, false);
      rep.c1_norm = std::max(rep.c1_norm, d1x.norm() + d1y.norm() + d2x.norm() + d2y.norm());
      const Matrix div = d1x + d2y;
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (div + div.transpose()), Eigen::EigenvaluesOnly);
      rep.omega0 = std::max(rep.omega0, 0.5 * es.eigenvalues().cwiseAbs().maxCoeff());
    }
  return rep;
}

}  // namespace hypbc
