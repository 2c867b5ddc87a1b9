#include <gtest/gtest.h>

#include <cmath>

#include "hypbc/hypbc.hpp"
#include "oracles.hpp"

using namespace hypbc;
namespace ht = hypbc::testing;

namespace {

const StandardTypeII kCauchyRiemann{0, 1, 1, 0};

double recovery_order(const ModeField& mode, double* finest_error = nullptr) {
  std::vector<double> h;
  std::vector<double> err;
  for (int n : {17, 33, 65}) {
    const RectGrid g(1, 1, n, n);
    const auto psi = ht::manufactured_rhs(g, mode);
    const auto sol = elliptic_steady_solve(mode, psi, synthesize_bc_type2(mode(0, 0)));
    EXPECT_FALSE(sol.rank_deficient);
    EXPECT_TRUE(sol.residual.pass) << sol.residual.csv_row();
    h.push_back(g.hx());
    err.push_back(ht::manufactured_error(sol.u));
  }
  if (finest_error != nullptr) *finest_error = err.back();
  return observed_order(h, err);
}

}  // namespace

TEST(Elliptic, ZeroRightHandSideGivesZero) {
  const RectGrid g(1, 1, 33, 33);
  const auto sol = elliptic_steady_solve([](double, double) { return kCauchyRiemann; },
                                         StateField(g, 2), synthesize_bc_type2(kCauchyRiemann));
  EXPECT_LT(sol.u.l2_norm(), 1e-8);
  EXPECT_TRUE(sol.uniqueness.pass);
  EXPECT_GT(sol.min_eig_ratio, 1e-13);
}

TEST(Elliptic, ConstantModeConvergesAtSecondOrder) {
  double err = 0.0;
  const double p = recovery_order([](double, double) { return kCauchyRiemann; }, &err);
  EXPECT_GE(p, 1.5);
  EXPECT_LT(err, 5e-3);
}

TEST(Elliptic, VariableModeConverges) {
  const double p = recovery_order([](double x, double y) { return ht::mu_mode(x / 4, 1 + y / 4); });
  EXPECT_GE(p, 1.0);
}

TEST(Elliptic, LostEllipticity) {
  const RectGrid g(1, 1, 17, 17);
  try {
    elliptic_steady_solve([](double x, double) { return ht::mu_mode(0.0, x - 0.5); },
                          StateField(g, 2), synthesize_bc_type2(kCauchyRiemann));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EllipticityLost);
  }
}

TEST(Elliptic, RankDeficientConditions) {
  const RectGrid g(1, 1, 17, 17);
  Type2BC bc;
  for (auto& s : bc.sides) s = {1.0, 1.0};
  try {
    elliptic_steady_solve([](double, double) { return kCauchyRiemann; }, StateField(g, 2), bc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficientBC);
  }
}

TEST(Elliptic, RightHandSideMustVanishNearBoundary) {
  const RectGrid g(1, 1, 17, 17);
  const auto psi = StateField::from_function(g, 2, [](double, double) { return Vector::Ones(2); });
  try {
    elliptic_steady_solve([](double, double) { return kCauchyRiemann; }, psi,
                          synthesize_bc_type2(kCauchyRiemann));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}
