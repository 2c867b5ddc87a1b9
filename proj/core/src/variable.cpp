#include <cmath>

#include "hypbc/error.hpp"
#include "hypbc/solver.hpp"

namespace hypbc {

namespace {

std::vector<int> kinds(const ModeDecomposition& d) {
  std::vector<int> k;
  for (const auto& m : d.modes) k.push_back(mode_size(m));
  return k;
}

[[noreturn]] void mismatch(const RectGrid& g, int i, int j, const std::string& why) {
  throw Error(ErrorCode::BlockMatchingFailure,
              "cannot continue the mode blocks to node (" + std::to_string(i) + "," +
                  std::to_string(j) + ") at x=" + std::to_string(g.x(i)) +
                  " y=" + std::to_string(g.y(j)) + ": " + why);
}

// Flips column blocks of `d` to follow `ref`; fails when a block turned away.
void align(ModeDecomposition& d, const ModeDecomposition& ref, const RectGrid& g, int i, int j) {
  if (kinds(d) != kinds(ref)) mismatch(g, i, j, "mode structure changed");
  const auto offsets = d.offsets();
  for (std::size_t k = 0; k < d.modes.size(); ++k) {
    const auto w = mode_size(d.modes[k]);
    const Matrix cur = d.p.middleCols(offsets[k], w);
    const Matrix old = ref.p.middleCols(offsets[k], w);
    const double dot = (cur.transpose() * old).trace();
    const double cosine = dot / (cur.norm() * old.norm());
    if (std::abs(cosine) < 0.5) mismatch(g, i, j, "eigenvector of mode " + std::to_string(k) + " jumped");
    if (cosine < 0.0) d.p.middleCols(offsets[k], w) *= -1.0;
  }
}

Matrix derivative(const VariableSetup& s, int i, int j, bool along_x) {
  const auto& g = s.grid;
  const int n = along_x ? g.nx() : g.ny();
  const int k = along_x ? i : j;
  const double h = along_x ? g.hx() : g.hy();
  auto at = [&](int m) -> const Matrix& { return along_x ? s.at(m, j).p : s.at(i, m).p; };
  // Written as differences so that a constant family differentiates to exactly zero.
  if (k == 0) return (4.0 * (at(1) - at(0)) - (at(2) - at(0))) / (2.0 * h);
  if (k == n - 1) return (4.0 * (at(n - 1) - at(n - 2)) - (at(n - 1) - at(n - 3))) / (2.0 * h);
  return (at(k + 1) - at(k - 1)) / (2.0 * h);
}

}  // namespace

VariableSetup variable_coeff_setup(const PairSampler& sampler, const RectGrid& grid, double tol) {
  VariableSetup out;
  out.grid = grid;
  out.nodes.resize(static_cast<std::size_t>(grid.nodes()));
  CongruenceOptions opts;
  opts.eigen.cluster_tol = tol;

  std::vector<SymmetricPair> pairs(out.nodes.size());
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) {
      const auto idx = static_cast<std::size_t>(grid.index(i, j));
      pairs[idx] = sampler(grid.x(i), grid.y(j));
      try {
        out.nodes[idx] = simultaneous_diagonalize(pairs[idx], opts);
      } catch (const Error& e) {
        mismatch(grid, i, j, e.what());
      }
      if (i > 0)
        align(out.nodes[idx], out.at(i - 1, j), grid, i, j);
      else if (j > 0)
        align(out.nodes[idx], out.at(i, j - 1), grid, i, j);
    }

  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) {
      const auto idx = static_cast<std::size_t>(grid.index(i, j));
      const Matrix pinv = out.nodes[idx].p.partialPivLu().inverse();
      const Matrix b1 = pairs[idx].a1 * derivative(out, i, j, true) * pinv +
                        pairs[idx].a2 * derivative(out, i, j, false) * pinv;
      Eigen::JacobiSVD<Matrix> svd(b1);
      out.b1_norm = std::max(out.b1_norm, svd.singularValues()(0));
    }
  return out;
}

}  // namespace hypbc
