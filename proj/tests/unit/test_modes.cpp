#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "hypbc/hypbc.hpp"
#include "oracles.hpp"

using namespace hypbc;
namespace ht = hypbc::testing;

namespace {

std::set<Side> sides_of(const std::array<Side, 2>& a) { return {a[0], a[1]}; }

// Sides where the condition only involves ubar1 (first) or ubar2 (second).
std::array<std::set<Side>, 2> split(const Type2BC& bc) {
  std::array<std::set<Side>, 2> out;
  for (Side s : kAllSides) {
    const auto& c = bc.on(s);
    if (c.b == 0.0 && c.a != 0.0) out[0].insert(s);
    if (c.a == 0.0 && c.b != 0.0) out[1].insert(s);
  }
  return out;
}

}  // namespace

TEST(Type1Table, PaperCases) {
  EXPECT_EQ(sides_of(synthesize_bc_type1(1, 2)), (std::set<Side>{Side::W, Side::S}));
  EXPECT_EQ(sides_of(synthesize_bc_type1(-1, -1)), (std::set<Side>{Side::E, Side::N}));
  EXPECT_EQ(sides_of(synthesize_bc_type1(3, -0.5)), (std::set<Side>{Side::W, Side::N}));
  EXPECT_EQ(sides_of(synthesize_bc_type1(-2, 0.1)), (std::set<Side>{Side::E, Side::S}));
}

TEST(Type1Table, ZeroCoefficient) {
  try {
    synthesize_bc_type1(0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroCoefficient);
  }
}

TEST(Type2Table, PaperCases) {
  const auto a = split(synthesize_bc_type2({0.6, 1.0, 0.8, 0.3}));
  EXPECT_EQ(a, ht::expected_type2_sides(0.6, 0.8));
  EXPECT_EQ(a[0], (std::set<Side>{Side::W, Side::S}));
  const auto b = split(synthesize_bc_type2({0.5, 1.0, -1.0, 0.2}));
  EXPECT_EQ(b[0], (std::set<Side>{Side::W, Side::N}));
  EXPECT_EQ(b[1], (std::set<Side>{Side::E, Side::S}));
  const auto c = split(synthesize_bc_type2({-1.0, 0.4, -1.0, 0.2}));
  EXPECT_EQ(c[0], (std::set<Side>{Side::E, Side::N}));
  EXPECT_EQ(c[1], (std::set<Side>{Side::W, Side::S}));
  const auto d = split(synthesize_bc_type2({-1.0, 0.4, 1.0, 0.2}));
  EXPECT_EQ(d, ht::expected_type2_sides(-1.0, 1.0));
}

TEST(Type2Table, DefaultsHaveFullRank) {
  for (double a1 : {-1.0, 0.0, 1.0})
    for (double a2 : {-1.0, 0.0, 1.0}) EXPECT_TRUE(has_full_rank(synthesize_bc_type2({a1, 1, a2, 1})));
}

TEST(Rotation, UnitKappaOnCauchyRiemannMode) {
  const auto r = rotate_type2({0, 1, 1, 0}, 1.0);
  EXPECT_NEAR(r.alpha1, -1.0, 1e-15);
  EXPECT_NEAR(r.beta1, 0.0, 1e-15);
  EXPECT_NEAR(r.alpha2, 0.0, 1e-15);
  EXPECT_NEAR(r.beta2, 1.0, 1e-15);
  EXPECT_NEAR(r.determinant(), 1.0, 1e-15);
}

TEST(Rotation, DeterminantIsPreserved) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> kd(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = ht::random_standard_mode(rng);
    double k = kd(rng);
    if (std::abs(k) < 1e-3) k = 1.0;
    EXPECT_NEAR(rotate_type2(m, k).determinant(), m.determinant(), 1e-12);
    EXPECT_TRUE(has_full_rank(rotated_bc_type2(m, k)));
  }
}

TEST(Rotation, ZeroKappa) {
  try {
    rotate_type2({0, 1, 1, 0}, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroKappa);
  }
}

TEST(Rotation, RotatedConditionsMakeBoundaryFormNonNegative) {
  // The pulled-back rows must annihilate the outgoing part of the boundary
  // form: on each side, u^t (n1 T1 + n2 T2) u >= 0 whenever a u1 + b u2 = 0.
  std::mt19937 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = ht::random_standard_mode(rng);
    const double k = 0.25 + 0.1 * trial;
    const auto bc = rotated_bc_type2(m, k);
    const std::array<std::pair<Side, Eigen::Vector2d>, 4> normals{{
        {Side::W, {-1, 0}}, {Side::E, {1, 0}}, {Side::S, {0, -1}}, {Side::N, {0, 1}}}};
    for (const auto& [s, nrm] : normals) {
      const auto& c = bc.on(s);
      const Eigen::Vector2d u(-c.b, c.a);
      const Matrix form = nrm(0) * m.t1() + nrm(1) * m.t2();
      EXPECT_GE(u.dot(form * u), -1e-12) << "side " << to_string(s);
    }
  }
}

TEST(SystemBcs, SweAllReal) {
  const auto d = simultaneous_diagonalize(preset_swe({}));
  const auto bcs = assemble_system_bcs(d);
  ASSERT_EQ(bcs.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& m = std::get<TypeI>(d.modes[k]);
    EXPECT_EQ(sides_of(std::get<Type1BC>(bcs[k]).inflow), ht::expected_type1_sides(m.c, m.d));
  }
}

TEST(SystemBcs, WavePair) {
  const auto d = simultaneous_diagonalize(preset_wave({}));
  const auto bcs = assemble_system_bcs(d);
  ASSERT_EQ(bcs.size(), 1u);
  const auto& m = std::get<StandardTypeII>(d.modes[0]);
  EXPECT_EQ(split(std::get<Type2BC>(bcs[0])), ht::expected_type2_sides(m.alpha1, m.alpha2));
}

TEST(SystemBcs, RankDeficientOverride) {
  const auto d = simultaneous_diagonalize(preset_wave({}));
  Type2BC same;
  for (auto& s : same.sides) s = {1.0, 2.0};
  try {
    assemble_system_bcs(d, {{0, same}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficientOverride);
  }
  EXPECT_THROW(assemble_system_bcs(d, {{0, Type1BC{}}}), Error);
  EXPECT_THROW(assemble_system_bcs(d, {{3, synthesize_bc_type2({0, 1, 1, 0})}}), Error);
}

TEST(SystemBcs, TextRoundTrip) {
  SWEParams p;
  p.u0 = 0.5;
  p.v0 = 0.6;
  const auto d = simultaneous_diagonalize(preset_swe(p));
  const auto bcs = assemble_system_bcs(d);
  std::stringstream ss;
  write_bcs(ss, bcs);
  const auto back = read_bcs(ss);
  ASSERT_EQ(back.size(), bcs.size());
  for (std::size_t k = 0; k < bcs.size(); ++k) {
    ASSERT_EQ(back[k].index(), bcs[k].index());
    if (const auto* t = std::get_if<Type1BC>(&bcs[k])) {
      EXPECT_EQ(std::get<Type1BC>(back[k]).inflow, t->inflow);
    } else {
      for (Side s : kAllSides) {
        EXPECT_EQ(std::get<Type2BC>(back[k]).on(s).a, std::get<Type2BC>(bcs[k]).on(s).a);
        EXPECT_EQ(std::get<Type2BC>(back[k]).on(s).b, std::get<Type2BC>(bcs[k]).on(s).b);
      }
    }
  }
}

TEST(VariableAssumptions, ConstantSampler) {
  const auto pair = preset_swe({});
  const RectGrid g(1, 1, 17, 17);
  const auto r = check_variable_coeff_assumptions([&](double, double) { return pair; }, g);
  EXPECT_TRUE(r.multiplicity_constant);
  EXPECT_EQ(r.omega0, 0.0);
  EXPECT_EQ(r.type1_modes, 3);
  const double a1 = pair.a1.selfadjointView<Eigen::Lower>().eigenvalues().cwiseAbs().minCoeff();
  EXPECT_NEAR(r.a1_margin, a1, 1e-12);
}

TEST(VariableAssumptions, Omega0MatchesAnalyticDerivative) {
  // a1 = 2 + sin x on [0, 1]: omega0 = max |cos x| / 2 = 1/2, attained at x = 0.
  for (int n : {17, 33, 65}) {
    const RectGrid g(1, 1, n, n);
    const auto r = check_variable_coeff_assumptions(
        [](double x, double) {
          SymmetricPair p;
          p.a1 = Matrix::Constant(1, 1, 2.0 + std::sin(x));
          p.a2 = Matrix::Constant(1, 1, 3.0);
          return p;
        },
        g);
    EXPECT_NEAR(r.omega0, 0.5, 0.5 * g.hx() * g.hx());
  }
}

TEST(VariableAssumptions, SignCrossingIsReported) {
  const RectGrid g(1, 1, 33, 33);
  try {
    check_variable_coeff_assumptions(
        [](double x, double) {
          SymmetricPair p;
          p.a1 = Matrix::Constant(1, 1, x - 0.4);
          p.a2 = Matrix::Constant(1, 1, 3.0);
          return p;
        },
        g);
    FAIL();
  } catch (const AssumptionViolation& e) {
    EXPECT_EQ(e.code(), ErrorCode::AssumptionViolated);
    EXPECT_EQ(e.which(), 'b');
    EXPECT_LE(std::abs(e.x() - 0.4), g.hx());
  }
}
