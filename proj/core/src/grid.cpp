#include "hypbc/grid.hpp"

#include <cmath>
#include <sstream>

#include "hypbc/error.hpp"

namespace hypbc {

std::string_view to_string(Side s) noexcept {
  switch (s) {
    case Side::W: return "W";
    case Side::E: return "E";
    case Side::S: return "S";
    case Side::N: return "N";
  }
  return "?";
}

Side parse_side(std::string_view s) {
  if (s == "W") return Side::W;
  if (s == "E") return Side::E;
  if (s == "S") return Side::S;
  if (s == "N") return Side::N;
  throw Error(ErrorCode::InvalidArgument, "unknown side '" + std::string(s) + "'");
}

RectGrid::RectGrid(double l1, double l2, int nx, int ny) : l1_(l1), l2_(l2), nx_(nx), ny_(ny) {
  if (!(l1 > 0.0) || !(l2 > 0.0) || !std::isfinite(l1) || !std::isfinite(l2))
    throw Error(ErrorCode::InvalidArgument, "domain lengths must be positive");
  if (nx < 8 || ny < 8)
    throw Error(ErrorCode::InvalidArgument, "grid needs at least 8 nodes per direction");
}

double RectGrid::weight(int i, int j) const noexcept {
  const double wx = (i == 0 || i == nx_ - 1) ? 0.5 : 1.0;
  const double wy = (j == 0 || j == ny_ - 1) ? 0.5 : 1.0;
  return wx * wy * hx() * hy();
}

bool RectGrid::on_side(Side s, int i, int j) const noexcept {
  switch (s) {
    case Side::W: return i == 0;
    case Side::E: return i == nx_ - 1;
    case Side::S: return j == 0;
    case Side::N: return j == ny_ - 1;
  }
  return false;
}

std::string RectGrid::label() const {
  return std::to_string(nx_) + "x" + std::to_string(ny_);
}

StateField::StateField(const RectGrid& grid, int components)
    : grid_(grid), comps_(components), data_(Vector::Zero(Eigen::Index{grid.nodes()} * components)) {
  if (components <= 0) throw Error(ErrorCode::InvalidArgument, "field needs components >= 1");
}

StateField StateField::from_function(const RectGrid& grid, int components,
                                     const std::function<Vector(double, double)>& f) {
  StateField u(grid, components);
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) {
      const Vector v = f(grid.x(i), grid.y(j));
      if (v.size() != components)
        throw Error(ErrorCode::DimensionMismatch, "field function returned the wrong size");
      u.node(i, j) = v;
    }
  return u;
}

StateField StateField::component(int c) const {
  StateField out(grid_, 1);
  for (int j = 0; j < grid_.ny(); ++j)
    for (int i = 0; i < grid_.nx(); ++i) out(i, j, 0) = (*this)(i, j, c);
  return out;
}

double StateField::l2_norm() const { return std::sqrt(std::max(inner(*this, *this), 0.0)); }

double StateField::max_abs() const { return data_.size() ? data_.cwiseAbs().maxCoeff() : 0.0; }

MatrixField::MatrixField(const RectGrid& grid, const std::function<Matrix(double, double)>& f)
    : grid_(grid) {
  values_.reserve(static_cast<std::size_t>(grid.nodes()));
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) values_.push_back(f(grid.x(i), grid.y(j)));
}

MatrixField MatrixField::constant(const RectGrid& grid, const Matrix& m) {
  return MatrixField(grid, [&](double, double) { return m; });
}

StateField MatrixField::apply(const StateField& u) const {
  if (!(u.grid() == grid_) || u.components() != order())
    throw Error(ErrorCode::DimensionMismatch, "matrix field and state field do not conform");
  StateField out(grid_, u.components());
  for (int j = 0; j < grid_.ny(); ++j)
    for (int i = 0; i < grid_.nx(); ++i) out.node(i, j) = at(i, j) * u.node(i, j);
  return out;
}

namespace {

// d/ds along one grid line given accessor get(k), k = 0..n-1.
template <typename Get>
double line_derivative(const Get& get, int k, int n, double h) {
  if (k == 0) return (-3.0 * get(0) + 4.0 * get(1) - get(2)) / (2.0 * h);
  if (k == n - 1) return (3.0 * get(n - 1) - 4.0 * get(n - 2) + get(n - 3)) / (2.0 * h);
  return (get(k + 1) - get(k - 1)) / (2.0 * h);
}

}  // namespace

StateField diff_x(const StateField& u) {
  const auto& g = u.grid();
  StateField out(g, u.components());
  for (int c = 0; c < u.components(); ++c)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        out(i, j, c) = line_derivative([&](int k) { return u(k, j, c); }, i, g.nx(), g.hx());
  return out;
}

StateField diff_y(const StateField& u) {
  const auto& g = u.grid();
  StateField out(g, u.components());
  for (int c = 0; c < u.components(); ++c)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        out(i, j, c) = line_derivative([&](int k) { return u(i, k, c); }, j, g.ny(), g.hy());
  return out;
}

double inner(const StateField& u, const StateField& v) {
  if (!(u.grid() == v.grid()) || u.components() != v.components())
    throw Error(ErrorCode::DimensionMismatch, "inner product of non-conforming fields");
  const auto& g = u.grid();
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) s += g.weight(i, j) * u.node(i, j).dot(v.node(i, j));
  return s;
}

double side_inner(const StateField& u, const StateField& v, Side s) {
  if (!(u.grid() == v.grid()) || u.components() != v.components())
    throw Error(ErrorCode::DimensionMismatch, "side integral of non-conforming fields");
  const auto& g = u.grid();
  double acc = 0.0;
  if (s == Side::W || s == Side::E) {
    const int i = s == Side::W ? 0 : g.nx() - 1;
    for (int j = 0; j < g.ny(); ++j) {
      const double w = (j == 0 || j == g.ny() - 1) ? 0.5 : 1.0;
      acc += w * g.hy() * u.node(i, j).dot(v.node(i, j));
    }
  } else {
    const int j = s == Side::S ? 0 : g.ny() - 1;
    for (int i = 0; i < g.nx(); ++i) {
      const double w = (i == 0 || i == g.nx() - 1) ? 0.5 : 1.0;
      acc += w * g.hx() * u.node(i, j).dot(v.node(i, j));
    }
  }
  return acc;
}

CertReport CertReport::make(std::string name, std::string grid, double residual, double tol,
                            std::optional<double> rate) {
  CertReport r;
  r.name = std::move(name);
  r.grid = std::move(grid);
  r.residual = residual;
  r.tol = tol;
  r.pass = residual <= tol;
  r.rate = rate;
  return r;
}

std::string CertReport::csv_row() const {
  std::ostringstream os;
  os.precision(17);
  os << name << ',' << grid << ',' << residual << ',' << tol << ',' << (pass ? "pass" : "fail")
     << ',';
  if (rate) os << *rate;
  return os.str();
}

double observed_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "observed_order needs two or more samples");
  const auto n = static_cast<double>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double lx = std::log(h[k]);
    const double ly = std::log(err[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace hypbc
