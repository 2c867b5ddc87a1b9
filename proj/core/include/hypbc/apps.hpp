#pragma once

// Linearized model systems: shallow water, shallow-water MHD, compressible
// Euler and the second-order wave equation reduced to first order.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "hypbc/congruence.hpp"

namespace hypbc {

struct SWEParams {
  double u0 = 2.0;
  double v0 = 3.0;
  double phi0 = 1.0;
  double g = 1.0;
  double f_cor = 0.0;
};

struct SWMHDParams {
  double u0 = 2.0;
  double v0 = 1.0;
  double b10 = 0.5;
  double b20 = 0.3;
  double phi0 = 1.0;
  double g = 1.0;
};

struct EulerParams {
  double u0 = 2.0;
  double v0 = 3.0;
  double rho0 = 1.0;
  double e0 = 1.0;
  double p0 = 0.4;
  double dp_drho = 0.4;
  double dp_de = 0.4;
};

struct WaveParams {
  double alpha = 1.0;
  double beta = 0.0;
  double h = 0.0;  ///< source of the wave equation
};

/// Relative tolerance for the genericity inequalities.
inline constexpr double kGenericityTol = 1e-10;

/// Unsymmetrized coefficients, in the order (E1, E2, B, S0).
struct RawSystem {
  Matrix e1;
  Matrix e2;
  Matrix b;
  Matrix s0;
};

RawSystem raw_swe(const SWEParams& p);
RawSystem raw_swmhd(const SWMHDParams& p);
RawSystem raw_euler(const EulerParams& p);

/// Throws GenericityViolated.
SymmetricPair preset_swe(const SWEParams& p);
std::array<std::complex<double>, 3> swe_eigenvalues(const SWEParams& p);

SymmetricPair preset_swmhd(const SWMHDParams& p);
std::array<std::complex<double>, 5> swmhd_eigenvalues(const SWMHDParams& p);

/// Throws NonPositiveSymmetrizer.
SymmetricPair preset_euler(const EulerParams& p);

/// Throws NormalizationViolated unless alpha^2 + beta^2 = 1.
SymmetricPair preset_wave(const WaveParams& p);
/// Right-hand side (-alpha h, -beta h) of the first-order wave system.
Vector wave_forcing(const WaveParams& p);

/// S0^{1/2} E_i S0^{-1/2}, S0^{1/2} B S0^{-1/2}. Throws NotSymmetrizable,
/// NonPositiveSymmetrizer.
SymmetricPair symmetrize(const Matrix& e1, const Matrix& e2, const Matrix& b, const Matrix& s0);

/// Eigenvalues of a general real matrix, sorted by (real, imag).
std::vector<std::complex<double>> sorted_eigenvalues(const Matrix& m);

struct PresetInfo {
  std::string name;
  std::string parameters;
};
std::vector<PresetInfo> preset_list();

}  // namespace hypbc
