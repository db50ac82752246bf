#pragma once

#include <functional>
#include <span>
#include <vector>

#include "thinplate/algebra.hpp"
#include "thinplate/density.hpp"
#include "thinplate/grid.hpp"
#include "thinplate/isometry.hpp"
#include "thinplate/plate.hpp"
#include "thinplate/quadform.hpp"

namespace thinplate {

/// Node grid on S × [-½, ½] with nz layers (nz + 1 node planes).
/// Node (i, j, l) has flat index i + nx (j + ny l).
struct Grid3 {
  Grid2 plane;
  std::size_t nz = 0;

  Grid3() = default;
  /// Throws std::invalid_argument for nz < 2.
  Grid3(const Grid2& plane, std::size_t nz);

  std::size_t nodes() const { return plane.nodes() * (nz + 1); }
  std::size_t cells() const { return (plane.nx - 1) * (plane.ny - 1) * nz; }
  double dz() const { return 1.0 / static_cast<double>(nz); }
  double z(std::size_t l) const { return -0.5 + dz() * static_cast<double>(l); }
  std::size_t index(std::size_t i, std::size_t j, std::size_t l) const {
    return i + plane.nx * (j + plane.ny * l);
  }
};

/// Deformation values at the nodes of a Grid3, stored as y[3 * node + c].
struct Deformation3 {
  Grid3 grid;
  std::vector<double> y;

  Deformation3() = default;
  explicit Deformation3(const Grid3& g) : grid(g), y(3 * g.nodes(), 0.0) {}

  Vec3 at(std::size_t node) const { return {{y[3 * node], y[3 * node + 1], y[3 * node + 2]}}; }
  void set(std::size_t node, const Vec3& p) {
    for (std::size_t c = 0; c < 3; ++c) y[3 * node + c] = p[c];
  }
};

struct FilmParams {
  double h = 1.0;
  double alpha = 2.0;
  double pi = 0.0;
  DensityModel density = DensityModel::neo_hookean(1.0, 1.0);

  /// Throws std::invalid_argument unless h ∈ (0, 1], α ≥ 1 and π finite.
  void validate() const;
};

/// The thin reference configuration id_h(x) = (x', h x3).
Deformation3 identity_deformation(const Grid3& grid, double h);

/// Σ_cells [W(∇_h y) + h^α π (det ∇_h y - 1)] · cell volume, with ∇_h y the
/// cell-centered gradient of the trilinear interpolant and the third column
/// divided by h. Returns +∞ if any cell is inadmissible; the gradient is then
/// left unspecified.
double eval_rescaled(const Deformation3& y, const FilmParams& p, std::span<double> grad = {});

struct Minimize3dOptions {
  double tol = 1e-7;  // on the gradient of h^{-2α} times the energy
  int max_iter = 20000;
};

struct Minimize3dResult {
  Deformation3 y;
  double value = 0.0;           // unscaled energy
  double rescaled_value = 0.0;  // h^{-2α} value
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;
};

/// Minimizes h^{-2α} eval_rescaled by L-BFGS, keeping the mean displacement at
/// zero during the iteration and removing the mean rotation at the end.
/// Throws std::invalid_argument if init has non-finite energy and
/// NumericalFailure on line-search starvation.
Minimize3dResult minimize3d(const FilmParams& p, const Deformation3& init, const Minimize3dOptions& opt = {});

/// Rigidly moves y so that its mean displacement vanishes and the mean
/// deformation gradient has no rotational part.
void align_rigid(Deformation3& y, double h);

/// Averaged in-plane and out-of-plane displacements with the gauge R = I and
/// c_h the mean of y - id_h:
///   u = min(h^{-2(α-1)}, h^{-α}) ∫(y' - x') dx3,   v = h^{-(α-1)} ∫ y3 dx3.
/// Throws std::invalid_argument for α ≤ 1.
PlateState extract_uv(const Deformation3& y, const FilmParams& p);

/// Closed-form plate displacement with derivatives, used to build recovery
/// sequences and their targets.
struct SmoothDisplacement {
  std::function<Vec2(double, double)> u;
  std::function<std::array<double, 4>(double, double)> grad_u;  // (∂1u1, ∂2u1, ∂1u2, ∂2u2)
  std::function<double(double, double)> v;
  std::function<Vec2(double, double)> grad_v;
  std::function<Mat2Sym(double, double)> hess_v;

  static SmoothDisplacement zero();
  /// u = 0, v = A sin(π x1) sin(π x2).
  static SmoothDisplacement sine_bump(double amplitude);
  /// u = β x', v = 0.
  static SmoothDisplacement affine_stretch(double beta);

  Mat2Sym strain(double x1, double x2) const;  // e'(u)
};

/// The optimal third-column fields of the Kirchhoff recovery sequence for a
/// cylinder, at a point: c̄ from Q2^π(Ḡ) and d̄ from Q2(II).
struct KirchhoffFields {
  Mat2Sym gbar;
  Vec3 beta;   // optimal a for Q2^π(Ḡ)
  Vec3 alpha;  // optimal a for Q2(II), possibly point dependent in general

  Vec3 cbar(const CylinderIsometry& iso, double x1, double x2) const;
  Vec3 dbar(const CylinderIsometry& iso, double x1, double x2) const;
};

KirchhoffFields make_kirchhoff_fields(const CylinderIsometry& iso, const QuadForm3& q3, double pi);

/// y_h = y + h(∇'y Ḡ x' + x3 b) + h²(x3 c̄ + x3²/2 d̄) sampled on the grid.
Deformation3 recovery_kirchhoff(const CylinderIsometry& iso, const KirchhoffFields& f, const Grid3& grid, double h);

/// y_h = id_h + (h^α u, h^{α-1} v) - h^α x3 (∇'v, 0) + h^{α+1}(x3 c + x3²/2 d)
/// with the optimal (c, d) of the reduction; c includes -½|∇'v|² e3 when α = 2.
/// Throws std::invalid_argument for α < 2.
Deformation3 recovery_vk(const SmoothDisplacement& disp, const QuadForm3& q3, double pi, double alpha,
                         const Grid3& grid, double h);

/// E^π_vK(u, v) + π²κ|S|/2 (α = 2) or E^π_vK,lin(u, v) + π²κ|S|/2 (α > 2),
/// by tensor Gauss-Legendre quadrature on the unit-offset rectangle of grid.
double vk_recovery_target(const SmoothDisplacement& disp, const QuadForm3& q3, double pi, double alpha,
                          const Grid2& plane, int order = 24);

/// E_ben(y) + m_π|S|/2 for the cylinder.
double kirchhoff_recovery_target(const CylinderIsometry& iso, const QuadForm3& q3, double pi, const Grid2& plane);

struct RecoveryRow {
  double h = 0.0;
  double rescaled_energy = 0.0;
  double target = 0.0;
  double residual = 0.0;  // |rescaled_energy - target| / |target|
};

struct RecoveryReport {
  std::vector<RecoveryRow> rows;
  double rate = 0.0;  // log-log slope of successive differences against h
  double final_residual = 0.0;
};

/// Least-squares slope of log|E_k - E_{k+1}| against log h_k.
double fit_successive_rate(std::span<const double> h, std::span<const double> e);

/// Grid for a given thickness; recovery runs refine the plane with h.
using GridForH = std::function<Grid3(double h)>;

RecoveryReport run_kirchhoff_recovery(double r, const FilmParams& base, std::span<const double> hs,
                                      const GridForH& grid_for);
RecoveryReport run_vk_recovery(const SmoothDisplacement& disp, const FilmParams& base, std::span<const double> hs,
                               const GridForH& grid_for);

struct SweepRow {
  double h = 0.0;
  double rescaled_min = 0.0;
  double u_err = 0.0;
  double v_err = 0.0;
  int iters = 0;
  double wallclock = 0.0;  // seconds
};

struct SweepOptions {
  Minimize3dOptions solver;
  Minimize2dOptions reference;
  bool parallel = true;
};

/// For each h: minimize3d from id_h, record the rescaled minimum, extract
/// (u, v) and its max-norm distance to the 2D minimizer on the same plane grid.
/// Requires a strictly decreasing h-list and α > 1.
std::vector<SweepRow> gamma_sweep(const FilmParams& base, std::span<const double> hs, const Grid3& grid,
                                  const SweepOptions& opt = {});

/// Lower end of the bracket the sweep minima should approach: the 2D minimum on
/// plane plus π²κ|S|/2 (α ≥ 2), or m_π|S|/2 (1 < α < 2, where the pressure only
/// shifts the bending functional by a constant).
double sweep_limit_value(const FilmParams& base, const Grid2& plane, const Minimize2dOptions& opt = {});

}  // namespace thinplate
