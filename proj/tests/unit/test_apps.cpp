#include <gtest/gtest.h>

#include <cmath>

#include "hypbc/hypbc.hpp"
#include "oracles.hpp"

using namespace hypbc;
namespace ht = hypbc::testing;

namespace {

std::vector<std::complex<double>> raw_spectrum(const RawSystem& r) {
  return ht::reference_eigenvalues(r.e1.partialPivLu().solve(r.e2));
}

template <std::size_t N>
std::vector<std::complex<double>> as_vector(const std::array<std::complex<double>, N>& a) {
  return {a.begin(), a.end()};
}

}  // namespace

TEST(ShallowWater, SymmetrizedMatricesAsDisplayed) {
  const auto p = preset_swe({2, 3, 1, 1, 0});
  Matrix e1(3, 3);
  e1 << 2, 0, 1, 0, 2, 0, 1, 0, 2;
  Matrix e2(3, 3);
  e2 << 3, 0, 0, 0, 3, 1, 0, 1, 3;
  EXPECT_EQ(p.a1, e1);
  EXPECT_EQ(p.a2, e2);
  EXPECT_EQ(p.a1, p.a1.transpose());
  EXPECT_FALSE(p.lower_order.has_value());
}

TEST(ShallowWater, SquareRootEntries) {
  SWEParams s{1.5, -2.0, 2.0, 9.81, 0.0};
  const auto p = preset_swe(s);
  EXPECT_EQ(p.a1(0, 2), std::sqrt(9.81 * 2.0));
  EXPECT_EQ(p.a2(2, 1), std::sqrt(9.81 * 2.0));
}

TEST(ShallowWater, GenericityViolated) {
  try {
    preset_swe({1, 2, 1, 1, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GenericityViolated);
  }
}

TEST(ShallowWater, ClosedFormAtReferenceState) {
  const SWEParams p{2, 3, 1, 1, 0};
  const auto ev = swe_eigenvalues(p);
  EXPECT_NEAR(ev[0].real(), 3.1547005383792515, 1e-12);
  EXPECT_NEAR(ev[1].real(), 0.8452994616207485, 1e-12);
  EXPECT_NEAR(ev[2].real(), 1.5, 1e-15);
  EXPECT_LT(ht::match_error(as_vector(ev), raw_spectrum(raw_swe(p))), 1e-12);
  EXPECT_TRUE(is_diagonalizable(raw_swe(p).e1.inverse() * raw_swe(p).e2).diagonalizable);
}

TEST(ShallowWater, SubcriticalFlowHasEllipticPair) {
  const SWEParams p{1, 1, 1, 10, 0};
  const auto ev = swe_eigenvalues(p);
  EXPECT_NE(ev[0].imag(), 0.0);
  EXPECT_NEAR(ev[0].imag(), -ev[1].imag(), 1e-14);
  EXPECT_EQ(ev[2], std::complex<double>(1.0, 0.0));
  EXPECT_LT(ht::match_error(as_vector(ev), raw_spectrum(raw_swe(p))), 1e-12);
  const auto d = simultaneous_diagonalize(preset_swe(p));
  EXPECT_EQ(d.count_type1(), 1);
  EXPECT_EQ(d.count_type2(), 1);
}

TEST(ShallowWater, VelocityRatioIsScaleInvariant) {
  for (double s : {0.5, 2.0, 7.0}) {
    const auto ev = swe_eigenvalues({2 * s, 3 * s, 1, s * s, 0});
    EXPECT_NEAR(ev[2].real(), 1.5, 1e-15);
  }
}

TEST(ShallowWater, SimilarSpectra) {
  const SWEParams p{0.7, -1.3, 1.2, 2.0, 0.3};
  const auto pair = preset_swe(p);
  EXPECT_LT(ht::match_error(raw_spectrum(raw_swe(p)),
                            ht::reference_eigenvalues(pair.a1.inverse() * pair.a2)),
            1e-10);
}

TEST(ShallowWaterMhd, ClosedFormAtReferenceState) {
  const SWMHDParams p{2, 1, 0.5, 0.3, 1, 1};
  const auto ev = swmhd_eigenvalues(p);
  EXPECT_NEAR(ev[0].real(), 0.52, 1e-15);
  EXPECT_NEAR(ev[1].real(), 0.7 / 1.5, 1e-15);
  EXPECT_EQ(ev[4], std::complex<double>(0.5, 0.0));
  EXPECT_LT(ht::match_error(as_vector(ev), raw_spectrum(raw_swmhd(p))), 1e-10);
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = a + 1; b < 5; ++b) EXPECT_GT(std::abs(ev[a] - ev[b]), 1e-3);
}

TEST(ShallowWaterMhd, CollisionIsNonGenericInPractice) {
  const auto ev = swmhd_eigenvalues({2, 1, 0.5, 0.25, 1, 1});
  EXPECT_NEAR(std::abs(ev[0] - ev[1]), 0.0, 1e-15);
}

TEST(ShallowWaterMhd, StrongGravityGivesComplexPair) {
  const SWMHDParams p{1.0, 0.8, 0.2, 0.1, 1.0, 4.0};
  const auto ev = swmhd_eigenvalues(p);
  EXPECT_GT(std::abs(ev[2].imag()), 0.0);
  EXPECT_LT(ht::match_error(as_vector(ev), raw_spectrum(raw_swmhd(p))), 1e-10);
  EXPECT_EQ(simultaneous_diagonalize(preset_swmhd(p)).count_type2(), 1);
}

TEST(Euler, SymmetrizerWorks) {
  const EulerParams p;
  const auto r = raw_euler(p);
  const Matrix s1 = r.s0 * r.e1;
  const Matrix s2 = r.s0 * r.e2;
  EXPECT_LT((s1 - s1.transpose()).norm(), 1e-14);
  EXPECT_LT((s2 - s2.transpose()).norm(), 1e-14);
  EXPECT_NO_THROW(simultaneous_diagonalize(preset_euler(p)));
}

TEST(Euler, ZeroPressureDerivative) {
  EulerParams p;
  p.dp_de = 0.0;
  try {
    preset_euler(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveSymmetrizer);
  }
}

TEST(Wave, PairAsDisplayed) {
  const auto p = preset_wave({1.0, 0.0, 0.0});
  Matrix t1(2, 2);
  t1 << 0, 1, 1, 0;
  Matrix t2(2, 2);
  t2 << 1, 0, 0, -1;
  EXPECT_EQ(p.a1, t1);
  EXPECT_EQ(p.a2, t2);
  const auto d = simultaneous_diagonalize(preset_wave({0.6, 0.8, 0.0}));
  EXPECT_EQ(d.count_type2(), 1);
  EXPECT_EQ(d.modes.size(), 1u);
}

TEST(Wave, NormalizationRequired) {
  try {
    preset_wave({0.6, 0.6, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NormalizationViolated);
  }
}

TEST(Symmetrize, IdentitySymmetrizer) {
  const auto p = preset_swe({});
  const auto s = symmetrize(p.a1, p.a2, Matrix(), Matrix::Identity(3, 3));
  EXPECT_EQ(s.a1, p.a1);
  EXPECT_EQ(s.a2, p.a2);
}

TEST(Symmetrize, RawShallowWater) {
  const SWEParams p{1.2, 0.4, 2.5, 3.0, 0.0};
  const auto r = raw_swe(p);
  const auto s = symmetrize(r.e1, r.e2, r.b, r.s0);
  const double c = std::sqrt(p.g * p.phi0);
  EXPECT_NEAR(s.a1(0, 2), c, 1e-14);
  EXPECT_NEAR(s.a2(1, 2), c, 1e-14);
  EXPECT_NEAR(s.a1(0, 0), p.u0, 1e-15);
}

TEST(Symmetrize, NonSymmetrizable) {
  // With g != phi0 the identity does not symmetrize E1.
  SWEParams p;
  p.g = 2.0;
  const auto r = raw_swe(p);
  try {
    symmetrize(r.e1, r.e2, r.b, Matrix::Identity(3, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSymmetrizable);
  }
}
