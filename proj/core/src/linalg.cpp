#include "hypbc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <limits>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hypbc/error.hpp"

namespace hypbc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorCode::IllConditionedBasis: return "IllConditionedBasis";
    case ErrorCode::SingularInput: return "SingularInput";
    case ErrorCode::OffDiagonalResidual: return "OffDiagonalResidual";
    case ErrorCode::NotTypeII: return "NotTypeII";
    case ErrorCode::AllPivotsFail: return "AllPivotsFail";
    case ErrorCode::SingularPivot: return "SingularPivot";
    case ErrorCode::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorCode::ZeroKappa: return "ZeroKappa";
    case ErrorCode::RankDeficientOverride: return "RankDeficientOverride";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::BCViolated: return "BCViolated";
    case ErrorCode::EllipticityLost: return "EllipticityLost";
    case ErrorCode::RankDeficientBC: return "RankDeficientBC";
    case ErrorCode::UnstableCoefficients: return "UnstableCoefficients";
    case ErrorCode::CFLViolation: return "CFLViolation";
    case ErrorCode::BlockMatchingFailure: return "BlockMatchingFailure";
    case ErrorCode::GenericityViolated: return "GenericityViolated";
    case ErrorCode::NonPositiveSymmetrizer: return "NonPositiveSymmetrizer";
    case ErrorCode::NormalizationViolated: return "NormalizationViolated";
    case ErrorCode::NotSymmetrizable: return "NotSymmetrizable";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::MissingInput: return "MissingInput";
    case ErrorCode::ConflictingSources: return "ConflictingSources";
  }
  return "Unknown";
}

namespace {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

struct Cluster {
  bool real = true;
  Complex z;
  int multiplicity = 0;
};

// Union-find over eigenvalues closer than tol; representative is the mean.
std::vector<Cluster> group(const std::vector<Complex>& vals, double tol, bool real) {
  const auto n = vals.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(vals[i] - vals[j]) <= tol) parent[find(i)] = find(j);

  std::vector<Cluster> out;
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = find(i);
    auto it = std::find(roots.begin(), roots.end(), r);
    if (it == roots.end()) {
      roots.push_back(r);
      out.push_back({real, vals[i], 1});
    } else {
      auto& c = out[static_cast<std::size_t>(it - roots.begin())];
      c.z += vals[i];
      ++c.multiplicity;
    }
  }
  for (auto& c : out) {
    c.z /= static_cast<double>(c.multiplicity);
    if (real) c.z = Complex(c.z.real(), 0.0);
  }
  std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) {
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    return a.z.imag() < b.z.imag();
  });
  return out;
}

std::vector<Cluster> cluster_eigenvalues(const Matrix& m, double abs_tol) {
  Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::NotDiagonalizable, "eigenvalue iteration did not converge");
  std::vector<Complex> reals;
  std::vector<Complex> uppers;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex z = es.eigenvalues()(i);
    if (std::abs(z.imag()) <= abs_tol)
      reals.emplace_back(z.real(), 0.0);
    else if (z.imag() > 0.0)
      uppers.push_back(z);
  }
  auto out = group(reals, abs_tol, true);
  auto cx = group(uppers, abs_tol, false);
  out.insert(out.end(), cx.begin(), cx.end());
  return out;
}

// Index of the entry of largest modulus; near-ties go to the lowest index.
template <typename Vec>
Eigen::Index dominant_index(const Vec& v) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v(i)));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) >= best * (1.0 - 1e-8)) return i;
  return 0;
}

double tiny_singular(const Eigen::VectorXd& sv, int k) {
  return sv(sv.size() - k);
}

}  // namespace

Matrix EigenBlock::canonical() const {
  if (is_real()) return value * Matrix::Identity(multiplicity, multiplicity);
  Matrix j = Matrix::Zero(size(), size());
  for (int b = 0; b < multiplicity; ++b) {
    j(2 * b, 2 * b) = value;
    j(2 * b, 2 * b + 1) = -imag;
    j(2 * b + 1, 2 * b) = imag;
    j(2 * b + 1, 2 * b + 1) = value;
  }
  return j;
}

Matrix RealBlockForm::block_matrix() const {
  std::vector<Matrix> parts;
  parts.reserve(blocks.size());
  for (const auto& b : blocks) parts.push_back(b.canonical());
  return block_diagonal(parts);
}

std::vector<int> RealBlockForm::offsets() const {
  std::vector<int> out;
  int at = 0;
  for (const auto& b : blocks) {
    out.push_back(at);
    at += b.size();
  }
  return out;
}

RealBlockForm real_block_eigen(const Matrix& m, const EigenOptions& opts) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch, "real_block_eigen needs a non-empty square matrix");
  if (!m.allFinite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
  const auto n = m.rows();
  const double norm = m.norm();

  RealBlockForm out;
  if (norm == 0.0) {
    out.basis = Matrix::Identity(n, n);
    out.blocks = {EigenBlock::real(0.0, static_cast<int>(n))};
    return out;
  }

  const auto clusters = cluster_eigenvalues(m, opts.cluster_tol * norm);
  out.basis.resize(n, n);
  Eigen::Index col = 0;
  for (const auto& c : clusters) {
    const int k = c.multiplicity;
    if (c.real) {
      const Matrix shifted = m - c.z.real() * Matrix::Identity(n, n);
      Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      if (tiny_singular(sv, k) > opts.rank_tol * std::max(sv(0), norm))
        throw Error(ErrorCode::NotDiagonalizable,
                    "defective real eigenvalue " + std::to_string(c.z.real()));
      for (int j = 0; j < k; ++j) {
        Vector v = svd.matrixV().col(n - k + j);
        if (v(dominant_index(v)) < 0.0) v = -v;
        out.basis.col(col++) = v;
      }
      out.blocks.push_back(EigenBlock::real(c.z.real(), k));
    } else {
      const ComplexMatrix shifted =
          m.cast<Complex>() - c.z * ComplexMatrix::Identity(n, n);
      Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      if (tiny_singular(sv, k) > opts.rank_tol * std::max(sv(0), norm))
        throw Error(ErrorCode::NotDiagonalizable,
                    "defective complex eigenvalue " + std::to_string(c.z.real()) + "+" +
                        std::to_string(c.z.imag()) + "i");
      for (int j = 0; j < k; ++j) {
        Eigen::VectorXcd v = svd.matrixV().col(n - k + j);
        const Complex lead = v(dominant_index(v));
        v *= std::conj(lead) / std::abs(lead);
        // M (a + ib) = z (a + ib) gives M [a, -b] = [a, -b] E0.
        out.basis.col(col++) = v.real();
        out.basis.col(col++) = -v.imag();
      }
      out.blocks.push_back(EigenBlock::complex(c.z.real(), c.z.imag(), k));
    }
  }
  if (col != n)
    throw Error(ErrorCode::NotDiagonalizable, "eigenvalue clusters do not cover the dimension");

  out.condition = condition_number(out.basis);
  if (!(out.condition <= opts.condition_cap))
    throw Error(ErrorCode::IllConditionedBasis,
                "eigenbasis condition number " + std::to_string(out.condition));
  out.residual = (m * out.basis - out.basis * out.block_matrix()).norm() / norm;
  return out;
}

DiagonalizabilityReport is_diagonalizable(const Matrix& m, const EigenOptions& opts) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch, "is_diagonalizable needs a square matrix");
  const auto n = m.rows();
  const double norm = m.norm();
  if (norm == 0.0) return {};

  for (const auto& c : cluster_eigenvalues(m, opts.cluster_tol * norm)) {
    const ComplexMatrix shifted = m.cast<Complex>() - c.z * ComplexMatrix::Identity(n, n);
    Eigen::JacobiSVD<ComplexMatrix> svd(shifted);
    const auto& sv = svd.singularValues();
    const double cutoff = opts.rank_tol * std::max(sv(0), norm);
    int geometric = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) <= cutoff) ++geometric;
    if (geometric < c.multiplicity) {
      std::ostringstream msg;
      msg << std::setprecision(17) << "defective eigenvalue " << c.z.real();
      if (!c.real) msg << (c.z.imag() >= 0 ? "+" : "") << c.z.imag() << "i";
      msg << " (algebraic " << c.multiplicity << ", geometric " << geometric << ")";
      return {false, msg.str()};
    }
  }
  return {};
}

Matrix congruence_transform(const Matrix& a, const Matrix& p) {
  if (a.rows() != a.cols() || p.rows() != a.rows())
    throw Error(ErrorCode::DimensionMismatch,
                "congruence_transform: A is " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + ", P has " + std::to_string(p.rows()) + " rows");
  const Matrix r = p.transpose() * a * p;
  return 0.5 * (r + r.transpose());
}

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(a.norm(), 1e-300);
  return (a - a.transpose()).norm() <= rel_tol * scale;
}

double condition_number(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smallest;
}

Matrix symmetric_sqrt(const Matrix& spd) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(spd);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw Error(ErrorCode::NonPositiveSymmetrizer, "matrix is not positive-definite");
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

Matrix block_diagonal(const std::vector<Matrix>& blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  Matrix out = Matrix::Zero(n, n);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

void write_matrix(std::ostream& os, const Matrix& m) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << m.rows() << ' ' << m.cols() << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
    os << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

Matrix read_matrix(std::istream& is) {
  long rows = 0;
  long cols = 0;
  if (!(is >> rows >> cols) || rows <= 0 || cols <= 0)
    throw Error(ErrorCode::IoError, "matrix header must be 'rows cols' with positive sizes");
  Matrix m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j)
      if (!(is >> m(i, j)))
        throw Error(ErrorCode::IoError, "matrix body ended early at entry (" + std::to_string(i) +
                                            "," + std::to_string(j) + ")");
  if (!m.allFinite()) throw Error(ErrorCode::IoError, "matrix contains non-finite entries");
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open matrix file '" + path + "'");
  try {
    return read_matrix(in);
  } catch (const Error& e) {
    throw Error(ErrorCode::IoError, path + ": " + e.what());
  }
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  write_matrix(out, m);
}

}  // namespace hypbc
