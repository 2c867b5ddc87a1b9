#include "hypbc/congruence.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "hypbc/error.hpp"

namespace hypbc {

namespace {

double det2(const Matrix& c) { return c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0); }

// Nearest matrix of the form [[a, b], [b, -a]] in each 2x2 sub-block.
void project_trace_free(Matrix& a) {
  const auto k = a.rows() / 2;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      auto blk = a.block(2 * i, 2 * j, 2, 2);
      const double p = 0.5 * (blk(0, 0) - blk(1, 1));
      const double q = 0.5 * (blk(0, 1) + blk(1, 0));
      blk << p, q, q, -p;
    }
}

Matrix canonical_e0(const EigenBlock& cluster) {
  return EigenBlock::complex(cluster.value, cluster.imag, 1).canonical();
}

Matrix repeated(const Matrix& e0, Eigen::Index k) {
  Matrix j = Matrix::Zero(2 * k, 2 * k);
  for (Eigen::Index b = 0; b < k; ++b) j.block(2 * b, 2 * b, 2, 2) = e0;
  return j;
}

// Congruence for one complex cluster of multiplicity k, returning the 2x2
// leading blocks in order. After this, V^t A V is block diagonal.
Matrix decouple_complex(const Matrix& a_ii, const EigenBlock& cluster, double tol,
                        std::vector<Matrix>& leading) {
  const auto n = a_ii.rows();
  Matrix v = Matrix::Identity(n, n);
  Matrix work = a_ii;
  Eigen::Index at = 0;
  while (work.rows() > 2) {
    const auto m = work.rows();
    const PivotResult piv = pivot_leading_block(work, tol);
    v.block(0, at, n, m) = v.block(0, at, n, m) * piv.w;
    Matrix pivoted = piv.pivoted;
    project_trace_free(pivoted);

    const auto k = static_cast<int>(m / 2);
    const SchurStep step = schur_eliminate(
        pivoted, EigenBlock::complex(cluster.value, cluster.imag, k), tol);
    v.block(0, at, n, m) = v.block(0, at, n, m) * step.v;
    leading.push_back(step.leading_c);
    work = step.trailing_c;
    at += 2;
  }
  leading.push_back(work);
  return v;
}

TypeI read_type1(const Matrix& c, const Matrix& d, Eigen::Index at) {
  return TypeI{c(at, at), d(at, at)};
}

StandardTypeII read_type2(const Matrix& c, const Matrix& d, Eigen::Index at) {
  const auto bc = c.block(at, at, 2, 2);
  const auto bd = d.block(at, at, 2, 2);
  return StandardTypeII{0.5 * (bc(0, 0) - bc(1, 1)), 0.5 * (bc(0, 1) + bc(1, 0)),
                        0.5 * (bd(0, 0) - bd(1, 1)), 0.5 * (bd(0, 1) + bd(1, 0))};
}

double offdiag_norm(const Matrix& a, const std::vector<int>& sizes) {
  Matrix masked = a;
  Eigen::Index at = 0;
  for (int s : sizes) {
    masked.block(at, at, s, s).setZero();
    at += s;
  }
  return masked.norm();
}

}  // namespace

void SymmetricPair::validate() const {
  const auto n = a1.rows();
  if (n == 0 || a1.cols() != n || a2.rows() != n || a2.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "A1 and A2 must be square of the same order");
  if (!a1.allFinite() || !a2.allFinite())
    throw Error(ErrorCode::InvalidArgument, "coefficients contain non-finite entries");
  if (!is_symmetric(a1)) throw Error(ErrorCode::InvalidArgument, "A1 is not symmetric");
  if (!is_symmetric(a2)) throw Error(ErrorCode::InvalidArgument, "A2 is not symmetric");
  for (const auto* a : {&a1, &a2}) {
    Eigen::JacobiSVD<Matrix> svd(*a);
    const auto& sv = svd.singularValues();
    if (!(sv(n - 1) > 1e-10 * sv(0)))
      throw Error(ErrorCode::SingularInput,
                  std::string(a == &a1 ? "A1" : "A2") + " is singular to working precision");
  }
  if (lower_order && (lower_order->rows() != n || lower_order->cols() != n))
    throw Error(ErrorCode::DimensionMismatch, "B must have the order of A1");
  if (symmetrizer) {
    if (symmetrizer->rows() != n || symmetrizer->cols() != n)
      throw Error(ErrorCode::DimensionMismatch, "S0 must have the order of A1");
    if (!is_symmetric(*symmetrizer))
      throw Error(ErrorCode::NonPositiveSymmetrizer, "S0 is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(*symmetrizer, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw Error(ErrorCode::NonPositiveSymmetrizer, "S0 is not positive-definite");
  }
}

Matrix StandardTypeII::t1() const {
  Matrix t(2, 2);
  t << alpha1, beta1, beta1, -alpha1;
  return t;
}

Matrix StandardTypeII::t2() const {
  Matrix t(2, 2);
  t << alpha2, beta2, beta2, -alpha2;
  return t;
}

double StandardTypeII::mu1() const noexcept {
  return (alpha1 * alpha2 + beta1 * beta2) / (alpha1 * alpha1 + beta1 * beta1);
}

double StandardTypeII::mu2() const noexcept {
  return determinant() / (alpha1 * alpha1 + beta1 * beta1);
}

std::vector<int> ModeDecomposition::offsets() const {
  std::vector<int> out;
  int at = 0;
  for (const auto& m : modes) {
    out.push_back(at);
    at += mode_size(m);
  }
  return out;
}

Matrix ModeDecomposition::first_blocks() const {
  std::vector<Matrix> parts;
  for (const auto& m : modes) {
    if (const auto* t = std::get_if<TypeI>(&m))
      parts.push_back(Matrix::Constant(1, 1, t->c));
    else
      parts.push_back(std::get<StandardTypeII>(m).t1());
  }
  return block_diagonal(parts);
}

Matrix ModeDecomposition::second_blocks() const {
  std::vector<Matrix> parts;
  for (const auto& m : modes) {
    if (const auto* t = std::get_if<TypeI>(&m))
      parts.push_back(Matrix::Constant(1, 1, t->d));
    else
      parts.push_back(std::get<StandardTypeII>(m).t2());
  }
  return block_diagonal(parts);
}

int ModeDecomposition::count_type1() const {
  int k = 0;
  for (const auto& m : modes) k += std::holds_alternative<TypeI>(m) ? 1 : 0;
  return k;
}

int ModeDecomposition::count_type2() const {
  return static_cast<int>(modes.size()) - count_type1();
}

StandardizedPair standardize_type2(const Matrix& c, const Matrix& d) {
  if (c.rows() != 2 || c.cols() != 2 || d.rows() != 2 || d.cols() != 2)
    throw Error(ErrorCode::DimensionMismatch, "standardize_type2 takes 2x2 blocks");
  const StandardTypeII raw{0.5 * (c(0, 0) - c(1, 1)), 0.5 * (c(0, 1) + c(1, 0)),
                           0.5 * (d(0, 0) - d(1, 1)), 0.5 * (d(0, 1) + d(1, 0))};
  const double det = raw.determinant();
  if (!(det > 0.0))
    throw Error(ErrorCode::NotTypeII,
                "alpha2*beta1 - alpha1*beta2 = " + std::to_string(det) + " is not positive");
  StandardizedPair out;
  out.kappa0 = std::pow(det, -0.25);
  out.v = out.kappa0 * Matrix::Identity(2, 2);
  const double s = out.kappa0 * out.kappa0;
  out.mode = {s * raw.alpha1, s * raw.beta1, s * raw.alpha2, s * raw.beta2};
  return out;
}

PivotResult pivot_leading_block(const Matrix& blocks, double tol) {
  const auto n = blocks.rows();
  if (n != blocks.cols() || n % 2 != 0 || n == 0)
    throw Error(ErrorCode::DimensionMismatch, "pivot_leading_block needs a 2k x 2k matrix");
  const auto k = n / 2;
  const double scale = blocks.norm();
  const double cutoff = tol * scale * scale;

  PivotResult out;
  out.w = Matrix::Identity(n, n);
  auto finish = [&] {
    out.pivoted = congruence_transform(blocks, out.w);
    return out;
  };
  if (std::abs(det2(blocks.block(0, 0, 2, 2))) > cutoff) return finish();

  Eigen::Index best = -1;
  double best_det = cutoff;
  for (Eigen::Index j = 1; j < k; ++j) {
    const double dj = std::abs(det2(blocks.block(2 * j, 2 * j, 2, 2)));
    if (dj > best_det) {
      best_det = dj;
      best = j;
    }
  }
  if (best > 0) {
    out.kind = PivotCase::Swap;
    out.partner = static_cast<int>(best);
    out.w.block(0, 0, 2, 2).setZero();
    out.w.block(2 * best, 2 * best, 2, 2).setZero();
    out.w.block(0, 2 * best, 2, 2).setIdentity();
    out.w.block(2 * best, 0, 2, 2).setIdentity();
    return finish();
  }

  best_det = cutoff;
  for (Eigen::Index j = 1; j < k; ++j) {
    const double dj = std::abs(det2(blocks.block(0, 2 * j, 2, 2)));
    if (dj > best_det) {
      best_det = dj;
      best = j;
    }
  }
  if (best < 0)
    throw Error(ErrorCode::AllPivotsFail,
                "leading block row is singular; the cluster matrix cannot be non-singular");
  out.kind = PivotCase::Combination;
  out.partner = static_cast<int>(best);
  const Matrix id = Matrix::Identity(2, 2);
  out.w.block(0, 2 * best, 2, 2) = -id;
  out.w.block(2 * best, 0, 2, 2) = id;
  return finish();
}

SchurStep schur_eliminate(const Matrix& a, const EigenBlock& cluster, double tol) {
  const auto n = a.rows();
  if (n != a.cols() || n % 2 != 0 || n == 0)
    throw Error(ErrorCode::DimensionMismatch, "schur_eliminate needs a 2k x 2k matrix");
  if (cluster.is_real())
    throw Error(ErrorCode::InvalidArgument, "schur_eliminate needs a complex cluster");
  const double scale = a.norm();
  const Matrix c11 = a.block(0, 0, 2, 2);
  if (!(std::abs(det2(c11)) > tol * scale * scale))
    throw Error(ErrorCode::SingularPivot, "leading 2x2 block is singular");

  const Matrix e0 = canonical_e0(cluster);
  SchurStep out;
  out.v = Matrix::Identity(n, n);
  if (n > 2) out.v.block(0, 2, 2, n - 2) = -c11.inverse() * a.block(0, 2, 2, n - 2);
  const Matrix reduced = congruence_transform(a, out.v);
  out.leading_c = reduced.block(0, 0, 2, 2);
  out.leading_d = out.leading_c * e0;
  if (n > 2) {
    out.trailing_c = reduced.block(2, 2, n - 2, n - 2);
    project_trace_free(out.trailing_c);
    out.trailing_d = out.trailing_c * repeated(e0, (n - 2) / 2);
  } else {
    out.trailing_c.resize(0, 0);
    out.trailing_d.resize(0, 0);
  }
  return out;
}

ModeDecomposition simultaneous_diagonalize(const SymmetricPair& pair,
                                           const CongruenceOptions& opts) {
  pair.validate();
  const Matrix m = pair.a1.partialPivLu().solve(pair.a2);

  const RealBlockForm form = real_block_eigen(m, opts.eigen);
  Matrix a1b = congruence_transform(pair.a1, form.basis);

  std::vector<int> sizes;
  for (const auto& b : form.blocks) sizes.push_back(b.size());
  const double off = offdiag_norm(a1b, sizes);
  if (off > opts.tol * a1b.norm())
    throw Error(ErrorCode::OffDiagonalResidual,
                "eigenbasis congruence leaves off-block mass " + std::to_string(off / a1b.norm()));

  const auto offsets = form.offsets();
  std::vector<Matrix> vs;
  std::vector<int> mode_sizes;
  for (std::size_t b = 0; b < form.blocks.size(); ++b) {
    const auto& blk = form.blocks[b];
    const auto s = blk.size();
    Matrix a_ii = a1b.block(offsets[b], offsets[b], s, s);
    if (blk.is_real()) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(a_ii);
      Matrix q = es.eigenvectors();
      for (Eigen::Index j = 0; j < q.cols(); ++j) {
        Eigen::Index lead = 0;
        q.col(j).cwiseAbs().maxCoeff(&lead);
        if (q(lead, j) < 0.0) q.col(j) = -q.col(j);
      }
      vs.push_back(q);
      for (int j = 0; j < s; ++j) mode_sizes.push_back(1);
    } else {
      project_trace_free(a_ii);
      std::vector<Matrix> leading;
      Matrix v = decouple_complex(a_ii, blk, opts.tol, leading);
      const Matrix e0 = canonical_e0(blk);
      for (std::size_t j = 0; j < leading.size(); ++j) {
        const auto st = standardize_type2(leading[j], leading[j] * e0);
        v.middleCols(2 * static_cast<Eigen::Index>(j), 2) *= st.kappa0;
        mode_sizes.push_back(2);
      }
      vs.push_back(v);
    }
  }

  ModeDecomposition out;
  out.p = form.basis * block_diagonal(vs);

  // Rescale each elliptic block once more against the assembled congruence.
  Matrix c = congruence_transform(pair.a1, out.p);
  Matrix d = congruence_transform(pair.a2, out.p);
  Eigen::Index at = 0;
  for (int s : mode_sizes) {
    if (s == 2) {
      const double det = read_type2(c, d, at).determinant();
      if (!(det > 0.0)) throw Error(ErrorCode::NotTypeII, "elliptic block lost its sign");
      out.p.middleCols(at, 2) *= std::pow(det, -0.25);
    }
    at += s;
  }
  c = congruence_transform(pair.a1, out.p);
  d = congruence_transform(pair.a2, out.p);

  at = 0;
  for (int s : mode_sizes) {
    if (s == 1)
      out.modes.emplace_back(read_type1(c, d, at));
    else
      out.modes.emplace_back(read_type2(c, d, at));
    at += s;
  }

  out.residuals.offdiag_1 = offdiag_norm(c, mode_sizes) / c.norm();
  out.residuals.offdiag_2 = offdiag_norm(d, mode_sizes) / d.norm();
  const Matrix pinv = out.p.partialPivLu().inverse();
  const double r1 = (pair.a1 - pinv.transpose() * out.first_blocks() * pinv).norm() /
                    pair.a1.norm();
  const double r2 = (pair.a2 - pinv.transpose() * out.second_blocks() * pinv).norm() /
                    pair.a2.norm();
  out.residuals.reconstruction = std::max(r1, r2);
  return out;
}

std::ostream& operator<<(std::ostream& os, const ModePair& m) {
  const auto prec = os.precision(17);
  if (const auto* t = std::get_if<TypeI>(&m)) {
    os << "TypeI c=" << t->c << " d=" << t->d;
  } else {
    const auto& e = std::get<StandardTypeII>(m);
    os << "StandardTypeII alpha1=" << e.alpha1 << " beta1=" << e.beta1 << " alpha2=" << e.alpha2
       << " beta2=" << e.beta2 << " det=" << e.determinant();
  }
  os.precision(prec);
  return os;
}

void write_decomposition(std::ostream& os, const ModeDecomposition& d) {
  os << "P\n";
  write_matrix(os, d.p);
  os << "modes " << d.modes.size() << '\n';
  for (std::size_t k = 0; k < d.modes.size(); ++k) os << "mode " << k << ": " << d.modes[k] << '\n';
  const auto prec = os.precision(17);
  os << "residuals offdiag_1=" << d.residuals.offdiag_1 << " offdiag_2=" << d.residuals.offdiag_2
     << " reconstruction=" << d.residuals.reconstruction << '\n';
  os.precision(prec);
}

}  // namespace hypbc
