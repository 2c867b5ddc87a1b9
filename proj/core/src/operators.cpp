#include "hypbc/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hypbc {

namespace {

template <typename F>
void for_side_nodes(const RectGrid& g, Side s, F&& f) {
  if (s == Side::W || s == Side::E) {
    const int i = s == Side::W ? 0 : g.nx() - 1;
    for (int j = 0; j < g.ny(); ++j) f(i, j);
  } else {
    const int j = s == Side::S ? 0 : g.ny() - 1;
    for (int i = 0; i < g.nx(); ++i) f(i, j);
  }
}

void require_bc(double defect, const char* what) {
  if (defect > kBcTolerance)
    throw Error(ErrorCode::BCViolated,
                std::string(what) + ": field violates its side conditions (defect " +
                    std::to_string(defect) + ")");
}

void require_components(const StateField& u, int n, const char* what) {
  if (u.components() != n)
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " needs a " + std::to_string(n) + "-component field");
}

double scale_of(const StateField& u) { return std::max(u.max_abs(), 1e-300); }

}  // namespace

double bc_defect(const StateField& u, const std::array<Side, 2>& inflow) {
  double worst = 0.0;
  for (Side s : inflow)
    for_side_nodes(u.grid(), s, [&](int i, int j) { worst = std::max(worst, std::abs(u(i, j, 0))); });
  return u.max_abs() > 0.0 ? worst / scale_of(u) : 0.0;
}

double bc_defect(const StateField& u, const Type2BC& bc) {
  double worst = 0.0;
  for (Side s : kAllSides) {
    const auto& c = bc.on(s);
    const double norm = std::hypot(c.a, c.b);
    for_side_nodes(u.grid(), s, [&](int i, int j) {
      worst = std::max(worst, std::abs(c.a * u(i, j, 0) + c.b * u(i, j, 1)) / norm);
    });
  }
  return u.max_abs() > 0.0 ? worst / scale_of(u) : 0.0;
}

double bc_defect(const StateField& u, const std::vector<ModeBC>& bcs) {
  double worst = 0.0;
  int at = 0;
  for (const auto& bc : bcs) {
    if (const auto* t1 = std::get_if<Type1BC>(&bc)) {
      worst = std::max(worst, bc_defect(u.component(at), t1->inflow) * u.component(at).max_abs());
      at += 1;
    } else {
      StateField pair(u.grid(), 2);
      for (int j = 0; j < u.grid().ny(); ++j)
        for (int i = 0; i < u.grid().nx(); ++i) {
          pair(i, j, 0) = u(i, j, at);
          pair(i, j, 1) = u(i, j, at + 1);
        }
      worst = std::max(worst, bc_defect(pair, std::get<Type2BC>(bc)) * pair.max_abs());
      at += 2;
    }
  }
  return u.max_abs() > 0.0 ? worst / scale_of(u) : 0.0;
}

double positivity_residual_type1(double c, double d, const StateField& u) {
  return positivity_residual_type1([c](double, double) { return c; },
                                   [d](double, double) { return d; }, u);
}

double positivity_residual_type1(const ScalarField& c, const ScalarField& d, const StateField& u) {
  require_components(u, 1, "positivity_residual_type1");
  const auto& g = u.grid();
  const double c0 = c(0.0, 0.0);
  const double d0 = d(0.0, 0.0);
  require_bc(bc_defect(u, synthesize_bc_type1(c0, d0)), "positivity_residual_type1");
  const StateField ux = diff_x(u);
  const StateField uy = diff_y(u);
  StateField tu(g, 1);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      tu(i, j, 0) = c(g.x(i), g.y(j)) * ux(i, j, 0) + d(g.x(i), g.y(j)) * uy(i, j, 0);
  return inner(tu, u);
}

double positivity_residual_type2(const StandardTypeII& mode, const StateField& u) {
  return positivity_residual_type2([mode](double, double) { return mode; }, u);
}

double positivity_residual_type2(const ModeField& mode, const StateField& u) {
  require_components(u, 2, "positivity_residual_type2");
  const auto& g = u.grid();
  double worst = 0.0;
  for (Side s : kAllSides)
    for_side_nodes(g, s, [&](int i, int j) {
      const auto c = synthesize_bc_type2(mode(g.x(i), g.y(j))).on(s);
      worst = std::max(worst, std::abs(c.a * u(i, j, 0) + c.b * u(i, j, 1)));
    });
  require_bc(u.max_abs() > 0.0 ? worst / scale_of(u) : 0.0, "positivity_residual_type2");

  const StateField ux = diff_x(u);
  const StateField uy = diff_y(u);
  StateField tu(g, 2);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const auto m = mode(g.x(i), g.y(j));
      tu.node(i, j) = m.t1() * ux.node(i, j) + m.t2() * uy.node(i, j);
    }
  return inner(tu, u);
}

double cross_term_residual(const StateField& u, const Type2BC& bc) {
  require_components(u, 2, "cross_term_residual");
  if (!has_full_rank(bc))
    throw Error(ErrorCode::RankDeficientBC, "cross_term_residual needs rank-2 side conditions");
  require_bc(bc_defect(u, bc), "cross_term_residual");
  const StateField ux = diff_x(u);
  const StateField uy = diff_y(u);
  const auto& g = u.grid();
  double lhs = 0.0;
  double rhs = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double w = g.weight(i, j);
      lhs += w * ux(i, j, 1) * uy(i, j, 0);
      rhs += w * ux(i, j, 0) * uy(i, j, 1);
    }
  return std::abs(lhs - rhs);
}

double integration_by_parts_residual(const StateField& theta, const StateField& g,
                                     const MatrixField& t1, const MatrixField& t2) {
  if (!(theta.grid() == g.grid()) || theta.components() != g.components() ||
      !(t1.grid() == theta.grid()) || !(t2.grid() == theta.grid()) ||
      t1.order() != theta.components() || t2.order() != theta.components())
    throw Error(ErrorCode::DimensionMismatch, "integration_by_parts_residual: fields do not conform");
  const StateField t1th = t1.apply(theta);
  const StateField t2th = t2.apply(theta);
  const StateField div_th = [&] {
    StateField a = diff_x(t1th);
    a.data() += diff_y(t2th).data();
    return a;
  }();
  const StateField tg = [&] {
    StateField a = t1.apply(diff_x(g));
    a.data() += t2.apply(diff_y(g)).data();
    return a;
  }();
  const double volume = inner(div_th, g) + inner(tg, theta);
  const double boundary = side_inner(t1th, g, Side::E) - side_inner(t1th, g, Side::W) +
                          side_inner(t2th, g, Side::N) - side_inner(t2th, g, Side::S);
  return std::abs(volume - boundary);
}

StateField random_admissible_field(const RectGrid& g, const ModeBC& bc, std::mt19937& rng) {
  std::normal_distribution<double> coef;
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  auto smooth = [&] {
    std::array<double, 9> c{};
    std::array<double, 9> px{};
    std::array<double, 9> py{};
    for (std::size_t k = 0; k < 9; ++k) {
      c[k] = coef(rng);
      px[k] = phase(rng);
      py[k] = phase(rng);
    }
    return [=, l1 = g.l1(), l2 = g.l2()](double x, double y) {
      double s = 0.0;
      for (std::size_t k = 0; k < 9; ++k)
        s += c[k] * std::cos(static_cast<double>(k % 3) * std::numbers::pi * x / l1 + px[k]) *
             std::cos(static_cast<double>(k / 3) * std::numbers::pi * y / l2 + py[k]);
      return s;
    };
  };
  auto factor = [&](Side s, double x, double y) {
    switch (s) {
      case Side::W: return x / g.l1();
      case Side::E: return 1.0 - x / g.l1();
      case Side::S: return y / g.l2();
      case Side::N: return 1.0 - y / g.l2();
    }
    return 1.0;
  };
  auto exact_zero = [&](StateField& u, int comp, const std::vector<Side>& sides) {
    for (Side s : sides) for_side_nodes(g, s, [&](int i, int j) { u(i, j, comp) = 0.0; });
  };

  if (const auto* t1 = std::get_if<Type1BC>(&bc)) {
    const auto f = smooth();
    StateField u = StateField::from_function(g, 1, [&](double x, double y) {
      return Vector::Constant(1, f(x, y) * factor(t1->inflow[0], x, y) * factor(t1->inflow[1], x, y));
    });
    exact_zero(u, 0, {t1->inflow[0], t1->inflow[1]});
    return u;
  }
  const auto& t2 = std::get<Type2BC>(bc);
  std::vector<Side> zero1;
  std::vector<Side> zero2;
  bool coordinate = true;
  for (Side s : kAllSides) {
    const auto& c = t2.on(s);
    if (c.b == 0.0 && c.a != 0.0)
      zero1.push_back(s);
    else if (c.a == 0.0 && c.b != 0.0)
      zero2.push_back(s);
    else
      coordinate = false;
  }
  if (!coordinate) {
    zero1.assign(std::begin(kAllSides), std::end(kAllSides));
    zero2 = zero1;
  }
  const auto f1 = smooth();
  const auto f2 = smooth();
  StateField u = StateField::from_function(g, 2, [&](double x, double y) {
    double w1 = f1(x, y);
    double w2 = f2(x, y);
    for (Side s : zero1) w1 *= factor(s, x, y);
    for (Side s : zero2) w2 *= factor(s, x, y);
    return Vector(Eigen::Vector2d(w1, w2));
  });
  exact_zero(u, 0, zero1);
  exact_zero(u, 1, zero2);
  return u;
}

}  // namespace hypbc
