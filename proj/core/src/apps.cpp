#include "hypbc/apps.hpp"

#include <algorithm>
#include <cmath>

#include "hypbc/error.hpp"

namespace hypbc {

namespace {

using cd = std::complex<double>;

void require_generic(double lhs, double rhs, const std::string& what) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  if (std::abs(lhs - rhs) <= kGenericityTol * scale)
    throw Error(ErrorCode::GenericityViolated, what);
}

void require_nonzero(double v, double scale, const std::string& what) {
  if (std::abs(v) <= kGenericityTol * std::max(scale, 1e-300))
    throw Error(ErrorCode::GenericityViolated, what);
}

void check_swe(const SWEParams& p) {
  if (!(p.phi0 > 0.0) || !(p.g > 0.0))
    throw Error(ErrorCode::InvalidArgument, "shallow water needs phi0 > 0 and g > 0");
  const double c2 = p.g * p.phi0;
  require_generic(p.u0 * p.u0, c2, "u0^2 = g*phi0");
  require_generic(p.v0 * p.v0, c2, "v0^2 = g*phi0");
  require_generic(p.u0 * p.u0 + p.v0 * p.v0, c2, "u0^2 + v0^2 = g*phi0");
}

void check_swmhd(const SWMHDParams& p) {
  if (!(p.phi0 > 0.0) || !(p.g > 0.0))
    throw Error(ErrorCode::InvalidArgument, "shallow-water MHD needs phi0 > 0 and g > 0");
  const double s = std::max({std::abs(p.u0), std::abs(p.v0), std::abs(p.b10), std::abs(p.b20),
                             std::sqrt(p.g * p.phi0)});
  require_nonzero(p.u0, s, "u0 = 0");
  require_nonzero(p.v0, s, "v0 = 0");
  require_nonzero(p.u0 - p.b10, s, "u0 = b10");
  require_nonzero(p.v0 - p.b20, s, "v0 = b20");
  const double c1 = p.b10 * p.b10 - p.u0 * p.u0 + p.g * p.phi0;
  const double c2 = p.b20 * p.b20 - p.v0 * p.v0 + p.g * p.phi0;
  const double m = p.b10 * p.b20 - p.u0 * p.v0;
  require_nonzero(c1, s * s, "b10^2 - u0^2 + g*phi0 = 0");
  require_nonzero(c2, s * s, "b20^2 - v0^2 + g*phi0 = 0");
  require_nonzero(m * m - c1 * c2, s * s * s * s, "discriminant vanishes");
}

}  // namespace

RawSystem raw_swe(const SWEParams& p) {
  RawSystem r;
  r.e1.resize(3, 3);
  r.e1 << p.u0, 0, p.g, 0, p.u0, 0, p.phi0, 0, p.u0;
  r.e2.resize(3, 3);
  r.e2 << p.v0, 0, 0, 0, p.v0, p.g, 0, p.phi0, p.v0;
  r.b = Matrix::Zero(3, 3);
  r.b(0, 1) = -p.f_cor;
  r.b(1, 0) = p.f_cor;
  r.s0 = Eigen::Vector3d(1.0, 1.0, p.g / p.phi0).asDiagonal();
  return r;
}

RawSystem raw_swmhd(const SWMHDParams& p) {
  RawSystem r;
  r.e1.resize(5, 5);
  r.e1 << p.u0, 0, -p.b10, 0, p.g,  //
      0, p.u0, 0, -p.b10, 0,        //
      -p.b10, 0, p.u0, 0, 0,        //
      0, -p.b10, 0, p.u0, 0,        //
      p.phi0, 0, 0, 0, p.u0;
  r.e2.resize(5, 5);
  r.e2 << p.v0, 0, -p.b20, 0, 0,  //
      0, p.v0, 0, -p.b20, p.g,    //
      -p.b20, 0, p.v0, 0, 0,      //
      0, -p.b20, 0, p.v0, 0,      //
      0, p.phi0, 0, 0, p.v0;
  r.b = Matrix::Zero(5, 5);
  Vector d = Vector::Ones(5);
  d(4) = p.g / p.phi0;
  r.s0 = d.asDiagonal();
  return r;
}

RawSystem raw_euler(const EulerParams& p) {
  RawSystem r;
  const double a = p.dp_drho / p.rho0;
  const double b = p.dp_de / p.rho0;
  const double c = p.p0 / p.rho0;
  r.e1.resize(4, 4);
  r.e1 << p.u0, 0, a, b,  //
      0, p.u0, 0, 0,      //
      p.rho0, 0, p.u0, 0, //
      c, 0, 0, p.u0;
  r.e2.resize(4, 4);
  r.e2 << p.v0, 0, 0, 0,  //
      0, p.v0, a, b,      //
      0, p.rho0, p.v0, 0, //
      0, c, 0, p.v0;
  r.b = Matrix::Zero(4, 4);
  r.s0 = Eigen::Vector4d(1.0, 1.0, p.dp_drho / (p.rho0 * p.rho0), p.dp_de / p.p0).asDiagonal();
  return r;
}

SymmetricPair symmetrize(const Matrix& e1, const Matrix& e2, const Matrix& b, const Matrix& s0) {
  const auto n = e1.rows();
  if (e1.cols() != n || e2.rows() != n || e2.cols() != n || s0.rows() != n || s0.cols() != n ||
      (b.size() != 0 && (b.rows() != n || b.cols() != n)))
    throw Error(ErrorCode::DimensionMismatch, "symmetrize: matrices do not conform");
  if (!is_symmetric(s0)) throw Error(ErrorCode::NonPositiveSymmetrizer, "S0 is not symmetric");
  const Matrix root = symmetric_sqrt(s0);
  for (const Matrix* e : {&e1, &e2}) {
    const Matrix se = s0 * *e;
    if (!is_symmetric(se, 1e-12))
      throw Error(ErrorCode::NotSymmetrizable,
                  std::string("S0 E") + (e == &e1 ? "1" : "2") + " is not symmetric (defect " +
                      std::to_string((se - se.transpose()).norm() / se.norm()) + ")");
  }
  const Matrix root_inv = root.inverse();
  SymmetricPair out;
  auto sym = [](const Matrix& m) { return Matrix(0.5 * (m + m.transpose())); };
  out.a1 = sym(root * e1 * root_inv);
  out.a2 = sym(root * e2 * root_inv);
  if (b.size() != 0 && !b.isZero(0.0)) out.lower_order = root * b * root_inv;
  out.symmetrizer = s0;
  return out;
}

SymmetricPair preset_swe(const SWEParams& p) {
  check_swe(p);
  const RawSystem r = raw_swe(p);
  SymmetricPair out = symmetrize(r.e1, r.e2, r.b, r.s0);
  // Write the square-root entries directly so the preset is exact.
  const double c = std::sqrt(p.g * p.phi0);
  out.a1(0, 2) = out.a1(2, 0) = c;
  out.a2(1, 2) = out.a2(2, 1) = c;
  return out;
}

std::array<std::complex<double>, 3> swe_eigenvalues(const SWEParams& p) {
  check_swe(p);
  const cd kappa0 = std::sqrt(cd(p.g * (p.u0 * p.u0 + p.v0 * p.v0 - p.g * p.phi0) / p.phi0, 0.0));
  const double den = p.u0 * p.u0 - p.g * p.phi0;
  return {(p.u0 * p.v0 + p.phi0 * kappa0) / den, (p.u0 * p.v0 - p.phi0 * kappa0) / den,
          cd(p.v0 / p.u0, 0.0)};
}

SymmetricPair preset_swmhd(const SWMHDParams& p) {
  check_swmhd(p);
  const RawSystem r = raw_swmhd(p);
  SymmetricPair out = symmetrize(r.e1, r.e2, r.b, r.s0);
  const double c = std::sqrt(p.g * p.phi0);
  out.a1(0, 4) = out.a1(4, 0) = c;
  out.a2(1, 4) = out.a2(4, 1) = c;
  return out;
}

std::array<std::complex<double>, 5> swmhd_eigenvalues(const SWMHDParams& p) {
  check_swmhd(p);
  const double c1 = p.b10 * p.b10 - p.u0 * p.u0 + p.g * p.phi0;
  const double c2 = p.b20 * p.b20 - p.v0 * p.v0 + p.g * p.phi0;
  const double m = p.b10 * p.b20 - p.u0 * p.v0;
  const cd root = std::sqrt(cd(m * m - c1 * c2, 0.0));
  return {cd((p.b20 + p.v0) / (p.b10 + p.u0), 0.0), cd((p.b20 - p.v0) / (p.b10 - p.u0), 0.0),
          (m + root) / c1, (m - root) / c1, cd(p.v0 / p.u0, 0.0)};
}

SymmetricPair preset_euler(const EulerParams& p) {
  if (!(p.rho0 > 0.0) || !(p.p0 > 0.0) || !(p.dp_drho > 0.0) || !(p.dp_de > 0.0))
    throw Error(ErrorCode::NonPositiveSymmetrizer,
                "Euler symmetrizer needs rho0, p0, dp/drho and dp/de positive");
  const RawSystem r = raw_euler(p);
  return symmetrize(r.e1, r.e2, r.b, r.s0);
}

SymmetricPair preset_wave(const WaveParams& p) {
  if (std::abs(p.alpha * p.alpha + p.beta * p.beta - 1.0) > 1e-12)
    throw Error(ErrorCode::NormalizationViolated, "alpha^2 + beta^2 must equal 1");
  SymmetricPair out;
  out.a1.resize(2, 2);
  out.a1 << -p.beta, p.alpha, p.alpha, p.beta;
  out.a2.resize(2, 2);
  out.a2 << p.alpha, p.beta, p.beta, -p.alpha;
  return out;
}

Vector wave_forcing(const WaveParams& p) { return Eigen::Vector2d(-p.alpha * p.h, -p.beta * p.h); }

std::vector<std::complex<double>> sorted_eigenvalues(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, false);
  std::vector<cd> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), [](const cd& a, const cd& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

std::vector<PresetInfo> preset_list() {
  return {
      {"swe", "u0 v0 g phi0 fcor"},
      {"swmhd", "u0 v0 b10 b20 g phi0"},
      {"euler", "u0 v0 rho0 e0 p0 dp_drho dp_de"},
      {"wave", "alpha beta h"},
  };
}

}  // namespace hypbc
