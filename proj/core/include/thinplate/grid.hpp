#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace thinplate {

/// Uniform node grid on the rectangle [x0, x0 + Lx] × [y0, y0 + Ly].
/// Node (i, j) has flat index i + nx * j.
struct Grid2 {
  double x0 = 0.0;
  double y0 = 0.0;
  double lx = 1.0;
  double ly = 1.0;
  std::size_t nx = 0;
  std::size_t ny = 0;

  Grid2() = default;
  /// Throws std::invalid_argument unless nx, ny ≥ 4 and the sides are positive.
  Grid2(double lx, double ly, std::size_t nx, std::size_t ny, double x0 = 0.0, double y0 = 0.0);

  std::size_t nodes() const { return nx * ny; }
  double dx() const { return lx / static_cast<double>(nx - 1); }
  double dy() const { return ly / static_cast<double>(ny - 1); }
  double x(std::size_t i) const { return x0 + dx() * static_cast<double>(i); }
  double y(std::size_t j) const { return y0 + dy() * static_cast<double>(j); }
  std::size_t index(std::size_t i, std::size_t j) const { return i + nx * j; }
  double area() const { return lx * ly; }

  /// Trapezoid quadrature weights, one per node.
  std::vector<double> weights() const;
};

/// One-dimensional difference stencil with at most four taps per node.
class Stencil1D {
 public:
  struct Row {
    std::size_t start = 0;
    std::size_t count = 0;
    std::array<double, 4> coef{};
  };

  /// Second-order first derivative: central inside, (-3, 4, -1)/(2h) at the ends.
  static Stencil1D first(std::size_t n, double h);
  /// Second-order second derivative: (1, -2, 1)/h² inside, (2, -5, 4, -1)/h² at the ends.
  static Stencil1D second(std::size_t n, double h);

  std::size_t size() const { return rows_.size(); }
  const Row& row(std::size_t i) const { return rows_[i]; }

 private:
  std::vector<Row> rows_;
};

/// Difference operators on node fields of a Grid2 together with their
/// adjoints (the adjoint variants accumulate into their output).
class DiffOps {
 public:
  explicit DiffOps(const Grid2& g);

  const Grid2& grid() const { return grid_; }

  void dx(std::span<const double> f, std::span<double> out) const;
  void dy(std::span<const double> f, std::span<double> out) const;
  void dxx(std::span<const double> f, std::span<double> out) const;
  void dyy(std::span<const double> f, std::span<double> out) const;
  /// Mixed derivative as dx ∘ dy.
  void dxy(std::span<const double> f, std::span<double> out) const;

  void dx_adj(std::span<const double> g, std::span<double> out) const;
  void dy_adj(std::span<const double> g, std::span<double> out) const;
  void dxx_adj(std::span<const double> g, std::span<double> out) const;
  void dyy_adj(std::span<const double> g, std::span<double> out) const;
  void dxy_adj(std::span<const double> g, std::span<double> out) const;

 private:
  void along_x(const Stencil1D& s, std::span<const double> f, std::span<double> out) const;
  void along_y(const Stencil1D& s, std::span<const double> f, std::span<double> out) const;
  void along_x_adj(const Stencil1D& s, std::span<const double> g, std::span<double> out) const;
  void along_y_adj(const Stencil1D& s, std::span<const double> g, std::span<double> out) const;

  Grid2 grid_;
  Stencil1D d1x_, d1y_, d2x_, d2y_;
};

}  // namespace thinplate
