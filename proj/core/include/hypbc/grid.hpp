#pragma once

// Uniform node grids on the rectangle (0, L1) x (0, L2), grid functions with
// n components per node, and the finite-difference / trapezoid kernels the
// certification routines share.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hypbc/linalg.hpp"

namespace hypbc {

/// W: x = 0, E: x = L1, S: y = 0, N: y = L2.
enum class Side { W, E, S, N };

inline constexpr Side kAllSides[] = {Side::W, Side::E, Side::S, Side::N};

std::string_view to_string(Side s) noexcept;
Side parse_side(std::string_view s);

class RectGrid {
 public:
  RectGrid() : RectGrid(1.0, 1.0, 8, 8) {}
  /// Throws InvalidArgument unless lengths are positive and nx, ny >= 8.
  RectGrid(double l1, double l2, int nx, int ny);

  [[nodiscard]] double l1() const noexcept { return l1_; }
  [[nodiscard]] double l2() const noexcept { return l2_; }
  [[nodiscard]] int nx() const noexcept { return nx_; }
  [[nodiscard]] int ny() const noexcept { return ny_; }
  [[nodiscard]] double hx() const noexcept { return l1_ / (nx_ - 1); }
  [[nodiscard]] double hy() const noexcept { return l2_ / (ny_ - 1); }
  [[nodiscard]] double x(int i) const noexcept { return i * hx(); }
  [[nodiscard]] double y(int j) const noexcept { return j * hy(); }
  [[nodiscard]] int nodes() const noexcept { return nx_ * ny_; }
  [[nodiscard]] int index(int i, int j) const noexcept { return j * nx_ + i; }

  /// Trapezoid weight of node (i, j), including hx * hy.
  [[nodiscard]] double weight(int i, int j) const noexcept;
  [[nodiscard]] bool on_side(Side s, int i, int j) const noexcept;
  /// "nx x ny" label used in reports.
  [[nodiscard]] std::string label() const;

  friend bool operator==(const RectGrid&, const RectGrid&) = default;

 private:
  double l1_;
  double l2_;
  int nx_;
  int ny_;
};

/// n real values per node, node-major storage.
class StateField {
 public:
  StateField() = default;
  StateField(const RectGrid& grid, int components);

  static StateField from_function(const RectGrid& grid, int components,
                                  const std::function<Vector(double, double)>& f);

  [[nodiscard]] const RectGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] int components() const noexcept { return comps_; }

  double& operator()(int i, int j, int c) { return data_(offset(i, j) + c); }
  double operator()(int i, int j, int c) const { return data_(offset(i, j) + c); }
  [[nodiscard]] auto node(int i, int j) { return data_.segment(offset(i, j), comps_); }
  [[nodiscard]] auto node(int i, int j) const { return data_.segment(offset(i, j), comps_); }

  [[nodiscard]] Vector& data() noexcept { return data_; }
  [[nodiscard]] const Vector& data() const noexcept { return data_; }

  /// Single component as its own scalar field.
  [[nodiscard]] StateField component(int c) const;
  /// Trapezoid L2 norm.
  [[nodiscard]] double l2_norm() const;
  [[nodiscard]] double max_abs() const;

 private:
  [[nodiscard]] Eigen::Index offset(int i, int j) const noexcept {
    return static_cast<Eigen::Index>(grid_.index(i, j)) * comps_;
  }

  RectGrid grid_;
  int comps_ = 0;
  Vector data_;
};

/// One matrix per node.
class MatrixField {
 public:
  MatrixField() = default;
  MatrixField(const RectGrid& grid, const std::function<Matrix(double, double)>& f);
  static MatrixField constant(const RectGrid& grid, const Matrix& m);

  [[nodiscard]] const RectGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] const Matrix& at(int i, int j) const { return values_[grid_.index(i, j)]; }
  [[nodiscard]] Matrix& at(int i, int j) { return values_[grid_.index(i, j)]; }
  [[nodiscard]] Eigen::Index order() const { return values_.empty() ? 0 : values_.front().rows(); }

  /// Field of M(i,j) * u(i,j).
  [[nodiscard]] StateField apply(const StateField& u) const;

 private:
  RectGrid grid_;
  std::vector<Matrix> values_;
};

/// Second-order centred differences inside, second-order one-sided at the ends.
StateField diff_x(const StateField& u);
StateField diff_y(const StateField& u);

/// Trapezoid approximation of the integral of u . v over the rectangle.
double inner(const StateField& u, const StateField& v);
/// Trapezoid approximation of the integral of u . v along one side.
double side_inner(const StateField& u, const StateField& v, Side s);

/// One certification outcome.
struct CertReport {
  std::string name;
  std::string grid;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::optional<double> rate;

  static CertReport make(std::string name, std::string grid, double residual, double tol,
                         std::optional<double> rate = std::nullopt);
  static std::string_view csv_header() noexcept { return "name,grid,residual,tol,verdict,rate"; }
  [[nodiscard]] std::string csv_row() const;
};

/// Least-squares slope of log(err) against log(h); expects err > 0.
double observed_order(const std::vector<double>& h, const std::vector<double>& err);

}  // namespace hypbc
