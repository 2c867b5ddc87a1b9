#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hypbc/hypbc.hpp"
#include "oracles.hpp"

using namespace hypbc;
namespace ht = hypbc::testing;

using std::numbers::pi;

TEST(Positivity, ZeroField) {
  const RectGrid g(1, 1, 17, 17);
  EXPECT_EQ(positivity_residual_type1(1.0, 1.0, StateField(g, 1)), 0.0);
  EXPECT_EQ(positivity_residual_type2(StandardTypeII{0, 1, 1, 0}, StateField(g, 2)), 0.0);
}

TEST(Positivity, ProductFieldMatchesOutflowIntegral) {
  // u = xy: <u_x + u_y, u> = (1/2)(int_0^1 y^2 dy + int_0^1 x^2 dx) = 1/3.
  std::vector<double> h;
  std::vector<double> err;
  for (int n : {17, 33, 65}) {
    const RectGrid g(1, 1, n, n);
    const auto u = StateField::from_function(g, 1, [](double x, double y) {
      return Vector::Constant(1, x * y);
    });
    const double q = positivity_residual_type1(1.0, 1.0, u);
    EXPECT_NEAR(q, 1.0 / 3.0, g.hx() * g.hx());
    h.push_back(g.hx());
    err.push_back(std::abs(q - 1.0 / 3.0));
  }
  EXPECT_GT(observed_order(h, err), 1.8);
}

TEST(Positivity, RandomAdmissibleFieldsType1) {
  const RectGrid g(1, 1, 33, 33);
  std::mt19937 rng(42);
  for (double c : {1.5, -0.7})
    for (double d : {0.4, -2.0}) {
      const Type1BC bc{synthesize_bc_type1(c, d)};
      for (int trial = 0; trial < 25; ++trial) {
        const auto u = random_admissible_field(g, bc, rng);
        EXPECT_LE(bc_defect(u, bc.inflow), 0.0);
        EXPECT_GE(positivity_residual_type1(c, d, u) / inner(u, u), -5.0 * g.hx());
      }
    }
}

TEST(Positivity, RandomAdmissibleFieldsType2) {
  const RectGrid g(1, 1, 33, 33);
  std::mt19937 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = trial == 0 ? StandardTypeII{0, 1, 1, 0} : ht::random_standard_mode(rng);
    const auto bc = synthesize_bc_type2(m);
    const auto u = random_admissible_field(g, bc, rng);
    EXPECT_LE(bc_defect(u, bc), 1e-15);
    EXPECT_GE(positivity_residual_type2(m, u) / inner(u, u), -5.0 * g.hx());
  }
}

TEST(Positivity, VariableType2Mode) {
  // alpha1 = 1 + x/2: the budget is (1/2) max |d/dx T1| = 1/4.
  const RectGrid g(1, 1, 33, 33);
  const ModeField mode = [](double x, double) { return StandardTypeII{1.0 + 0.5 * x, 0.3, 0.8, 0.2}; };
  std::mt19937 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = random_admissible_field(g, synthesize_bc_type2(mode(0, 0)), rng);
    EXPECT_GE(positivity_residual_type2(mode, u) / inner(u, u), -(0.25 + 5.0 * g.hx()));
  }
}

TEST(Positivity, ViolatedConditionsAreRejected) {
  const RectGrid g(1, 1, 17, 17);
  const auto u = StateField::from_function(g, 1, [](double, double) { return Vector::Ones(1); });
  try {
    positivity_residual_type1(1.0, 1.0, u);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BCViolated);
  }
}

TEST(CrossTerm, ZeroAndDegenerate) {
  const RectGrid g(1, 1, 17, 17);
  const auto bc = synthesize_bc_type2({0, 1, 1, 0});
  EXPECT_EQ(cross_term_residual(StateField(g, 2), bc), 0.0);
  // u2 = 0 makes both integrals vanish identically.
  const auto u = StateField::from_function(g, 2, [](double x, double y) {
    return Vector(Eigen::Vector2d(x * (1 - x) * y, 0.0));
  });
  EXPECT_LT(cross_term_residual(u, bc), 1e-12);
}

TEST(CrossTerm, VanishingFieldsAreExact) {
  // Both components vanish on every side: the discrete identity holds to round-off.
  const auto bc = synthesize_bc_type2({0, 1, 1, 0});
  for (int n : {17, 33, 65}) {
    const RectGrid g(1, 1, n, n);
    const auto u = StateField::from_function(g, 2, [](double x, double y) {
      const double s = std::sin(pi * x) * std::sin(pi * y);
      return Vector(Eigen::Vector2d(s, s * std::exp(x - y)));
    });
    EXPECT_LT(cross_term_residual(u, bc), 1e-13);
  }
}

TEST(CrossTerm, DecaysUnderRefinement) {
  // u1 vanishes on W and S, u2 on E and N: the default split for alpha1, alpha2 > 0.
  std::vector<double> h;
  std::vector<double> r;
  const auto bc = synthesize_bc_type2({0.6, 0.8, 0.8, -0.6});
  for (int n : {17, 33, 65}) {
    const RectGrid g(1, 1, n, n);
    const auto u = StateField::from_function(g, 2, [](double x, double y) {
      return Vector(Eigen::Vector2d(x * y * std::cos(x + 2 * y), (1 - x) * (1 - y) * std::exp(x * y)));
    });
    h.push_back(g.hx());
    r.push_back(cross_term_residual(u, bc));
  }
  EXPECT_GT(observed_order(h, r), 1.0);
}

TEST(CrossTerm, RankDeficientConditions) {
  const RectGrid g(1, 1, 17, 17);
  Type2BC bc;
  for (auto& s : bc.sides) s = {1.0, -1.0};
  try {
    cross_term_residual(StateField(g, 2), bc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficientBC);
  }
}

TEST(IntegrationByParts, ZeroTheta) {
  const RectGrid g(1, 1, 17, 17);
  const auto id = MatrixField::constant(g, Matrix::Identity(2, 2));
  const auto gf = StateField::from_function(g, 2, [](double x, double y) {
    return Vector(Eigen::Vector2d(x, y));
  });
  EXPECT_EQ(integration_by_parts_residual(StateField(g, 2), gf, id, id), 0.0);
}

TEST(IntegrationByParts, LinearFieldsAreExact) {
  // theta = g = (x, y), T1 = T2 = I: the differences are exact and the
  // quadratic boundary terms cancel between opposite sides.
  const RectGrid g(1, 1, 17, 17);
  const auto id = MatrixField::constant(g, Matrix::Identity(2, 2));
  const auto f = StateField::from_function(g, 2, [](double x, double y) {
    return Vector(Eigen::Vector2d(x, y));
  });
  EXPECT_LT(integration_by_parts_residual(f, f, id, id), 1e-2 * g.hx() * g.hx());
}

TEST(IntegrationByParts, VariableCoefficientsDecay) {
  std::vector<double> h;
  std::vector<double> r;
  for (int n : {17, 33, 65}) {
    const RectGrid g(1, 1, n, n);
    const MatrixField t1(g, [](double x, double y) { return ht::mu_mode(x / 4, 1 + y / 4).t1(); });
    const MatrixField t2(g, [](double x, double y) { return ht::mu_mode(x / 4, 1 + y / 4).t2(); });
    const auto th = StateField::from_function(g, 2, [](double x, double y) {
      return Vector(Eigen::Vector2d(std::cos(2 * x + y), std::sin(x * y + 1)));
    });
    const auto gg = StateField::from_function(g, 2, [](double x, double y) {
      return Vector(Eigen::Vector2d(std::exp(x - y), x * x + std::cos(3 * y)));
    });
    h.push_back(g.hx());
    r.push_back(integration_by_parts_residual(th, gg, t1, t2));
  }
  EXPECT_GT(observed_order(h, r), 1.0);
}

TEST(IntegrationByParts, NonConformingFields) {
  const RectGrid g(1, 1, 17, 17);
  const RectGrid other(1, 1, 9, 9);
  const auto id = MatrixField::constant(g, Matrix::Identity(2, 2));
  try {
    integration_by_parts_residual(StateField(g, 2), StateField(other, 2), id, id);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(RandomFields, AreDeterministic) {
  const RectGrid g(1, 1, 17, 17);
  std::mt19937 a(42);
  std::mt19937 b(42);
  const auto bc = synthesize_bc_type2({0.3, 1, -0.4, 1});
  EXPECT_EQ(random_admissible_field(g, bc, a).data(), random_admissible_field(g, bc, b).data());
}
