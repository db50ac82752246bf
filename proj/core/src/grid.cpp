#include "thinplate/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace thinplate {

Grid2::Grid2(double lx_, double ly_, std::size_t nx_, std::size_t ny_, double x0_, double y0_)
    : x0(x0_), y0(y0_), lx(lx_), ly(ly_), nx(nx_), ny(ny_) {
  if (nx < 4 || ny < 4) throw std::invalid_argument("grid needs at least 4 nodes per direction");
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
    throw std::invalid_argument("grid side lengths must be positive and finite");
}

std::vector<double> Grid2::weights() const {
  std::vector<double> w(nodes());
  const double cell = dx() * dy();
  for (std::size_t j = 0; j < ny; ++j) {
    const double wy = (j == 0 || j + 1 == ny) ? 0.5 : 1.0;
    for (std::size_t i = 0; i < nx; ++i) {
      const double wx = (i == 0 || i + 1 == nx) ? 0.5 : 1.0;
      w[index(i, j)] = cell * wx * wy;
    }
  }
  return w;
}

Stencil1D Stencil1D::first(std::size_t n, double h) {
  Stencil1D s;
  s.rows_.resize(n);
  const double c = 1.0 / (2.0 * h);
  s.rows_[0] = {0, 3, {-3.0 * c, 4.0 * c, -1.0 * c, 0.0}};
  for (std::size_t i = 1; i + 1 < n; ++i) s.rows_[i] = {i - 1, 3, {-c, 0.0, c, 0.0}};
  s.rows_[n - 1] = {n - 3, 3, {c, -4.0 * c, 3.0 * c, 0.0}};
  return s;
}

Stencil1D Stencil1D::second(std::size_t n, double h) {
  Stencil1D s;
  s.rows_.resize(n);
  const double c = 1.0 / (h * h);
  s.rows_[0] = {0, 4, {2.0 * c, -5.0 * c, 4.0 * c, -1.0 * c}};
  for (std::size_t i = 1; i + 1 < n; ++i) s.rows_[i] = {i - 1, 3, {c, -2.0 * c, c, 0.0}};
  s.rows_[n - 1] = {n - 4, 4, {-1.0 * c, 4.0 * c, -5.0 * c, 2.0 * c}};
  return s;
}

DiffOps::DiffOps(const Grid2& g)
    : grid_(g),
      d1x_(Stencil1D::first(g.nx, g.dx())),
      d1y_(Stencil1D::first(g.ny, g.dy())),
      d2x_(Stencil1D::second(g.nx, g.dx())),
      d2y_(Stencil1D::second(g.ny, g.dy())) {}

void DiffOps::along_x(const Stencil1D& s, std::span<const double> f, std::span<double> out) const {
  const std::size_t nx = grid_.nx;
  for (std::size_t j = 0; j < grid_.ny; ++j) {
    const double* row = f.data() + nx * j;
    for (std::size_t i = 0; i < nx; ++i) {
      const auto& r = s.row(i);
      double acc = 0.0;
      for (std::size_t t = 0; t < r.count; ++t) acc += r.coef[t] * row[r.start + t];
      out[nx * j + i] = acc;
    }
  }
}

void DiffOps::along_y(const Stencil1D& s, std::span<const double> f, std::span<double> out) const {
  const std::size_t nx = grid_.nx;
  for (std::size_t j = 0; j < grid_.ny; ++j) {
    const auto& r = s.row(j);
    for (std::size_t i = 0; i < nx; ++i) {
      double acc = 0.0;
      for (std::size_t t = 0; t < r.count; ++t) acc += r.coef[t] * f[nx * (r.start + t) + i];
      out[nx * j + i] = acc;
    }
  }
}

void DiffOps::along_x_adj(const Stencil1D& s, std::span<const double> g, std::span<double> out) const {
  const std::size_t nx = grid_.nx;
  for (std::size_t j = 0; j < grid_.ny; ++j) {
    double* row = out.data() + nx * j;
    for (std::size_t i = 0; i < nx; ++i) {
      const auto& r = s.row(i);
      const double gi = g[nx * j + i];
      for (std::size_t t = 0; t < r.count; ++t) row[r.start + t] += r.coef[t] * gi;
    }
  }
}

void DiffOps::along_y_adj(const Stencil1D& s, std::span<const double> g, std::span<double> out) const {
  const std::size_t nx = grid_.nx;
  for (std::size_t j = 0; j < grid_.ny; ++j) {
    const auto& r = s.row(j);
    for (std::size_t i = 0; i < nx; ++i) {
      const double gj = g[nx * j + i];
      for (std::size_t t = 0; t < r.count; ++t) out[nx * (r.start + t) + i] += r.coef[t] * gj;
    }
  }
}

void DiffOps::dx(std::span<const double> f, std::span<double> out) const { along_x(d1x_, f, out); }
void DiffOps::dy(std::span<const double> f, std::span<double> out) const { along_y(d1y_, f, out); }
void DiffOps::dxx(std::span<const double> f, std::span<double> out) const { along_x(d2x_, f, out); }
void DiffOps::dyy(std::span<const double> f, std::span<double> out) const { along_y(d2y_, f, out); }

void DiffOps::dxy(std::span<const double> f, std::span<double> out) const {
  std::vector<double> tmp(grid_.nodes());
  along_y(d1y_, f, tmp);
  along_x(d1x_, tmp, out);
}

void DiffOps::dx_adj(std::span<const double> g, std::span<double> out) const { along_x_adj(d1x_, g, out); }
void DiffOps::dy_adj(std::span<const double> g, std::span<double> out) const { along_y_adj(d1y_, g, out); }
void DiffOps::dxx_adj(std::span<const double> g, std::span<double> out) const { along_x_adj(d2x_, g, out); }
void DiffOps::dyy_adj(std::span<const double> g, std::span<double> out) const { along_y_adj(d2y_, g, out); }

void DiffOps::dxy_adj(std::span<const double> g, std::span<double> out) const {
  std::vector<double> tmp(grid_.nodes(), 0.0);
  along_x_adj(d1x_, g, tmp);
  along_y_adj(d1y_, tmp, out);
}

}  // namespace thinplate
