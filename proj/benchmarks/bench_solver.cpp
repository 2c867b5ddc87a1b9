#include <benchmark/benchmark.h>

#include <cmath>

#include "hypbc/hypbc.hpp"

namespace {

void BM_SweStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const hypbc::RectGrid g(1, 1, n, n);
  hypbc::IVPConfig c;
  c.pair = hypbc::preset_swe({});
  c.grid = g;
  c.u0 = hypbc::StateField::from_function(g, 3, [](double x, double y) {
    const double r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
    return hypbc::Vector(hypbc::Vector::Constant(3, std::exp(-40.0 * r2)));
  });
  const auto op = hypbc::build_semidiscrete(c);
  hypbc::StateField u = c.u0;
  op.project(u);
  const double dt = op.max_dt();
  for (auto _ : state) {
    u = hypbc::step(op, u, 0.0, dt);
    benchmark::DoNotOptimize(u.data().data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_EllipticSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const hypbc::RectGrid g(1, 1, n, n);
  const hypbc::StandardTypeII cr{0, 1, 1, 0};
  const hypbc::ModeField mode = [cr](double, double) { return cr; };
  const auto psi = hypbc::StateField::from_function(g, 2, [](double x, double y) {
    // Supported in [0.2, 0.8]^2, away from the boundary layers.
    const auto bump = [](double t) { return t > 0.2 && t < 0.8 ? std::pow(std::sin(M_PI * (t - 0.2) / 0.6), 4) : 0.0; };
    const double b = bump(x) * bump(y);
    return hypbc::Vector(hypbc::Vector::Constant(2, b));
  });
  const auto bc = hypbc::synthesize_bc_type2(cr);
  for (auto _ : state) benchmark::DoNotOptimize(hypbc::elliptic_steady_solve(mode, psi, bc));
}

}  // namespace

BENCHMARK(BM_SweStep)->Arg(33)->Arg(65)->Arg(129)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EllipticSolve)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);
