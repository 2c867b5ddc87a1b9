#include <benchmark/benchmark.h>

#include <random>

#include "hypbc/hypbc.hpp"

namespace {

// Q^t blockdiag Q with one elliptic 2x2 block and diagonal Type I entries.
hypbc::SymmetricPair random_pair(int n) {
  std::mt19937 rng(42);
  std::normal_distribution<double> nd;
  hypbc::Matrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = nd(rng);
  const hypbc::Matrix q = g.householderQr().householderQ() * (1.5 * hypbc::Matrix::Identity(n, n));
  hypbc::Matrix d1 = hypbc::Matrix::Zero(n, n);
  hypbc::Matrix d2 = hypbc::Matrix::Zero(n, n);
  d1.block(0, 0, 2, 2) << 0.0, 1.0, 1.0, 0.0;
  d2.block(0, 0, 2, 2) << 1.0, 0.0, 0.0, -1.0;
  for (int k = 2; k < n; ++k) {
    d1(k, k) = k % 2 == 0 ? 1.0 : -1.0;
    d2(k, k) = 0.5 * k;
  }
  hypbc::SymmetricPair p;
  p.a1 = q.transpose() * d1 * q;
  p.a2 = q.transpose() * d2 * q;
  return p;
}

void BM_Diagonalize(benchmark::State& state) {
  const auto pair = random_pair(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hypbc::simultaneous_diagonalize(pair));
}

void BM_DiagonalizeSwmhd(benchmark::State& state) {
  const auto pair = hypbc::preset_swmhd({});
  for (auto _ : state) benchmark::DoNotOptimize(hypbc::simultaneous_diagonalize(pair));
}

}  // namespace

BENCHMARK(BM_Diagonalize)->DenseRange(3, 8);
BENCHMARK(BM_DiagonalizeSwmhd);
