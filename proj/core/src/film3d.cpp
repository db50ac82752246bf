#include "thinplate/film3d.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "thinplate/lbfgs.hpp"
#include "thinplate/reduction.hpp"

namespace thinplate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct CellGeometry {
  double inv_dx, inv_dy, inv_dzh, vol;
};

CellGeometry cell_geometry(const Grid3& g, double h) {
  return {1.0 / (4.0 * g.plane.dx()), 1.0 / (4.0 * g.plane.dy()), 1.0 / (4.0 * g.dz() * h),
          g.plane.dx() * g.plane.dy() * g.dz()};
}

// Corner node indices of cell (i, j, l), ordered by (a, b, d) bits.
std::array<std::size_t, 8> corners(const Grid3& g, std::size_t i, std::size_t j, std::size_t l) {
  std::array<std::size_t, 8> c{};
  for (std::size_t k = 0; k < 8; ++k) c[k] = g.index(i + (k & 1), j + ((k >> 1) & 1), l + ((k >> 2) & 1));
  return c;
}

Mat3 cell_gradient(const std::vector<double>& y, const std::array<std::size_t, 8>& c, const CellGeometry& cg) {
  Mat3 f;
  for (std::size_t k = 0; k < 8; ++k) {
    const double sa = (k & 1) ? cg.inv_dx : -cg.inv_dx;
    const double sb = ((k >> 1) & 1) ? cg.inv_dy : -cg.inv_dy;
    const double sd = ((k >> 2) & 1) ? cg.inv_dzh : -cg.inv_dzh;
    const double* p = &y[3 * c[k]];
    for (std::size_t r = 0; r < 3; ++r) {
      f(r, 0) += sa * p[r];
      f(r, 1) += sb * p[r];
      f(r, 2) += sd * p[r];
    }
  }
  return f;
}

std::vector<double> layer_weights(const Grid3& g) {
  std::vector<double> w(g.nz + 1, g.dz());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

double regime_scale(const FilmParams& p) { return std::pow(p.h, -2.0 * p.alpha); }

}  // namespace

Grid3::Grid3(const Grid2& plane_, std::size_t nz_) : plane(plane_), nz(nz_) {
  if (nz < 2) throw std::invalid_argument("thickness grid needs at least 2 layers");
}

void FilmParams::validate() const {
  if (!(h > 0.0) || !(h <= 1.0)) throw std::invalid_argument("thickness h must lie in (0, 1]");
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be at least 1");
  if (!std::isfinite(pi)) throw std::invalid_argument("pressure must be finite");
}

Deformation3 identity_deformation(const Grid3& g, double h) {
  Deformation3 d(g);
  for (std::size_t l = 0; l <= g.nz; ++l)
    for (std::size_t j = 0; j < g.plane.ny; ++j)
      for (std::size_t i = 0; i < g.plane.nx; ++i)
        d.set(g.index(i, j, l), {{g.plane.x(i), g.plane.y(j), h * g.z(l)}});
  return d;
}

double eval_rescaled(const Deformation3& y, const FilmParams& p, std::span<double> grad) {
  const Grid3& g = y.grid;
  if (y.y.size() != 3 * g.nodes()) throw std::invalid_argument("deformation does not match its grid");
  if (!grad.empty() && grad.size() != y.y.size()) throw std::invalid_argument("gradient buffer has the wrong size");
  const CellGeometry cg = cell_geometry(g, p.h);
  const double eps = std::pow(p.h, p.alpha) * p.pi;
  const bool want_grad = !grad.empty();
  if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);

  double total = 0.0;
  for (std::size_t l = 0; l < g.nz; ++l) {
    for (std::size_t j = 0; j + 1 < g.plane.ny; ++j) {
      for (std::size_t i = 0; i + 1 < g.plane.nx; ++i) {
        const auto c = corners(g, i, j, l);
        const Mat3 f = cell_gradient(y.y, c, cg);
        const double w = eval_w(p.density, f);
        if (!std::isfinite(w)) return kInf;
        total += (w + eps * det_minus_one(f)) * cg.vol;
        if (!want_grad) continue;
        const Mat3 stress = cg.vol * (grad_w(p.density, f) + eps * cofactor(f));
        for (std::size_t k = 0; k < 8; ++k) {
          const double sa = (k & 1) ? cg.inv_dx : -cg.inv_dx;
          const double sb = ((k >> 1) & 1) ? cg.inv_dy : -cg.inv_dy;
          const double sd = ((k >> 2) & 1) ? cg.inv_dzh : -cg.inv_dzh;
          double* gp = &grad[3 * c[k]];
          for (std::size_t r = 0; r < 3; ++r) gp[r] += sa * stress(r, 0) + sb * stress(r, 1) + sd * stress(r, 2);
        }
      }
    }
  }
  return total;
}

void align_rigid(Deformation3& y, double h) {
  const Grid3& g = y.grid;
  const CellGeometry cg = cell_geometry(g, h);
  Mat3 mean;
  for (std::size_t l = 0; l < g.nz; ++l)
    for (std::size_t j = 0; j + 1 < g.plane.ny; ++j)
      for (std::size_t i = 0; i + 1 < g.plane.nx; ++i) mean = mean + cell_gradient(y.y, corners(g, i, j, l), cg);
  const Mat3 r = nearest_rotation(mean);
  const Mat3 rt = transpose(r);
  for (std::size_t n = 0; n < g.nodes(); ++n) y.set(n, rt * y.at(n));
  const Deformation3 id = identity_deformation(g, h);
  std::array<double, 3> shift{};
  for (std::size_t n = 0; n < g.nodes(); ++n)
    for (std::size_t c = 0; c < 3; ++c) shift[c] += y.y[3 * n + c] - id.y[3 * n + c];
  for (double& s : shift) s /= static_cast<double>(g.nodes());
  for (std::size_t n = 0; n < g.nodes(); ++n)
    for (std::size_t c = 0; c < 3; ++c) y.y[3 * n + c] -= shift[c];
}

Minimize3dResult minimize3d(const FilmParams& p, const Deformation3& init, const Minimize3dOptions& opt) {
  p.validate();
  const double scale = regime_scale(p);
  Deformation3 work = init;
  const Objective f = [&](std::span<const double> x, std::span<double> g) {
    std::copy(x.begin(), x.end(), work.y.begin());
    const double e = eval_rescaled(work, p, g);
    if (!std::isfinite(e)) return e;
    for (double& v : g) v *= scale;
    return scale * e;
  };
  if (!std::isfinite(eval_rescaled(init, p))) throw std::invalid_argument("initial deformation has infinite energy");

  // The energy is translation invariant; pin the centroid to that of id_h.
  const std::size_t nodes = init.grid.nodes();
  const Deformation3 id = identity_deformation(init.grid, p.h);
  std::array<double, 3> id_mean{};
  for (std::size_t n = 0; n < nodes; ++n)
    for (std::size_t c = 0; c < 3; ++c) id_mean[c] += id.y[3 * n + c];
  for (double& v : id_mean) v /= static_cast<double>(nodes);
  const Projector project = [&](std::span<double> x) {
    std::array<double, 3> m{};
    for (std::size_t n = 0; n < nodes; ++n)
      for (std::size_t c = 0; c < 3; ++c) m[c] += x[3 * n + c];
    for (std::size_t c = 0; c < 3; ++c) m[c] = m[c] / static_cast<double>(nodes) - id_mean[c];
    for (std::size_t n = 0; n < nodes; ++n)
      for (std::size_t c = 0; c < 3; ++c) x[3 * n + c] -= m[c];
  };

  LbfgsOptions lo;
  lo.tol = opt.tol;
  lo.max_iter = opt.max_iter;
  LbfgsResult r = lbfgs_minimize(f, init.y, lo, project);

  Minimize3dResult out;
  out.y = Deformation3(init.grid);
  out.y.y = std::move(r.x);
  align_rigid(out.y, p.h);
  out.value = eval_rescaled(out.y, p);
  out.rescaled_value = scale * out.value;
  out.iterations = r.iterations;
  out.converged = r.converged;
  out.grad_norm = r.grad_norm;
  return out;
}

PlateState extract_uv(const Deformation3& y, const FilmParams& p) {
  if (!(p.alpha > 1.0)) throw std::invalid_argument("extract_uv requires alpha > 1");
  const Grid3& g = y.grid;
  const Grid2& pl = g.plane;
  const auto wp = pl.weights();
  const auto wz = layer_weights(g);
  const Deformation3 id = identity_deformation(g, p.h);

  std::array<double, 3> ch{};
  double wsum = 0.0;
  for (std::size_t l = 0; l <= g.nz; ++l)
    for (std::size_t k = 0; k < pl.nodes(); ++k) {
      const std::size_t n = k + pl.nodes() * l;
      const double w = wp[k] * wz[l];
      wsum += w;
      for (std::size_t c = 0; c < 3; ++c) ch[c] += w * (y.y[3 * n + c] - id.y[3 * n + c]);
    }
  for (double& v : ch) v /= wsum;

  const double su = std::min(std::pow(p.h, -2.0 * (p.alpha - 1.0)), std::pow(p.h, -p.alpha));
  const double sv = std::pow(p.h, -(p.alpha - 1.0));
  PlateState s(pl);
  auto u1 = s.u1();
  auto u2 = s.u2();
  auto v = s.v();
  for (std::size_t l = 0; l <= g.nz; ++l)
    for (std::size_t k = 0; k < pl.nodes(); ++k) {
      const std::size_t n = k + pl.nodes() * l;
      u1[k] += su * wz[l] * (y.y[3 * n] - ch[0] - id.y[3 * n]);
      u2[k] += su * wz[l] * (y.y[3 * n + 1] - ch[1] - id.y[3 * n + 1]);
      v[k] += sv * wz[l] * (y.y[3 * n + 2] - ch[2]);
    }
  return s;
}

SmoothDisplacement SmoothDisplacement::zero() { return affine_stretch(0.0); }

SmoothDisplacement SmoothDisplacement::sine_bump(double a) {
  const double k = std::numbers::pi;
  SmoothDisplacement d;
  d.u = [](double, double) { return Vec2{}; };
  d.grad_u = [](double, double) { return std::array<double, 4>{}; };
  d.v = [=](double x, double y) { return a * std::sin(k * x) * std::sin(k * y); };
  d.grad_v = [=](double x, double y) {
    return Vec2{{a * k * std::cos(k * x) * std::sin(k * y), a * k * std::sin(k * x) * std::cos(k * y)}};
  };
  d.hess_v = [=](double x, double y) {
    const double s = a * k * k;
    return Mat2Sym{-s * std::sin(k * x) * std::sin(k * y), -s * std::sin(k * x) * std::sin(k * y),
                   s * std::cos(k * x) * std::cos(k * y)};
  };
  return d;
}

SmoothDisplacement SmoothDisplacement::affine_stretch(double beta) {
  SmoothDisplacement d;
  d.u = [=](double x, double y) { return Vec2{{beta * x, beta * y}}; };
  d.grad_u = [=](double, double) { return std::array<double, 4>{beta, 0.0, 0.0, beta}; };
  d.v = [](double, double) { return 0.0; };
  d.grad_v = [](double, double) { return Vec2{}; };
  d.hess_v = [](double, double) { return Mat2Sym{}; };
  return d;
}

Mat2Sym SmoothDisplacement::strain(double x1, double x2) const {
  const auto du = grad_u(x1, x2);
  return {du[0], du[3], 0.5 * (du[1] + du[2])};
}

Vec3 KirchhoffFields::cbar(const CylinderIsometry& iso, double x1, double x2) const {
  const Vec2 gx = gbar.apply({{x1, x2}});
  const Vec3 b = iso.normal(x1, x2);
  const Vec3 w{{dot(b, iso.d11(x1, x2)) * gx[0] + dot(b, iso.d12(x1, x2)) * gx[1],
                dot(b, iso.d12(x1, x2)) * gx[0] + dot(b, iso.d22(x1, x2)) * gx[1], 0.0}};
  const Mat3 r = Mat3::from_columns(iso.d1(x1, x2), iso.d2(x1, x2), b);
  return r * (beta - w);
}

Vec3 KirchhoffFields::dbar(const CylinderIsometry& iso, double x1, double x2) const {
  const Mat3 r = Mat3::from_columns(iso.d1(x1, x2), iso.d2(x1, x2), iso.normal(x1, x2));
  return r * alpha;
}

KirchhoffFields make_kirchhoff_fields(const CylinderIsometry& iso, const QuadForm3& q3, double pi) {
  KirchhoffFields f;
  const MPiResult m = m_pi(q3, pi);
  f.gbar = m.g;
  f.beta = q2pi_value(q3, pi, m.g).a;
  // The second fundamental form of a cylinder is constant.
  f.alpha = q2pi_value(q3, 0.0, iso.second_fundamental_form(0.0, 0.0)).a;
  return f;
}

Deformation3 recovery_kirchhoff(const CylinderIsometry& iso, const KirchhoffFields& f, const Grid3& g, double h) {
  if (!(h > 0.0) || !(h <= 1.0)) throw std::invalid_argument("thickness h must lie in (0, 1]");
  Deformation3 d(g);
  const Grid2& pl = g.plane;
  for (std::size_t j = 0; j < pl.ny; ++j) {
    for (std::size_t i = 0; i < pl.nx; ++i) {
      const double x1 = pl.x(i), x2 = pl.y(j);
      const Vec2 gx = f.gbar.apply({{x1, x2}});
      const Vec3 base = iso.position(x1, x2) + h * (gx[0] * iso.d1(x1, x2) + gx[1] * iso.d2(x1, x2));
      const Vec3 b = iso.normal(x1, x2);
      const Vec3 c = f.cbar(iso, x1, x2);
      const Vec3 dd = f.dbar(iso, x1, x2);
      for (std::size_t l = 0; l <= g.nz; ++l) {
        const double x3 = g.z(l);
        d.set(g.index(i, j, l), base + (h * x3) * b + (h * h) * (x3 * c + (0.5 * x3 * x3) * dd));
      }
    }
  }
  return d;
}

Deformation3 recovery_vk(const SmoothDisplacement& disp, const QuadForm3& q3, double pi, double alpha,
                         const Grid3& g, double h) {
  if (!(alpha >= 2.0)) throw std::invalid_argument("the von Karman recovery sequence needs alpha >= 2");
  if (!(h > 0.0) || !(h <= 1.0)) throw std::invalid_argument("thickness h must lie in (0, 1]");
  Deformation3 d(g);
  const Grid2& pl = g.plane;
  const bool quadratic = alpha == 2.0;
  const double ha = std::pow(h, alpha);
  const double ha1 = std::pow(h, alpha - 1.0);
  const double ha2 = std::pow(h, alpha + 1.0);
  for (std::size_t j = 0; j < pl.ny; ++j) {
    for (std::size_t i = 0; i < pl.nx; ++i) {
      const double x1 = pl.x(i), x2 = pl.y(j);
      const Vec2 u = disp.u(x1, x2);
      const double v = disp.v(x1, x2);
      const Vec2 gv = disp.grad_v(x1, x2);
      Mat2Sym s = disp.strain(x1, x2);
      if (quadratic) s = s + 0.5 * outer_sym(gv, gv);
      Vec3 c = q2pi_value(q3, pi, s).a;
      if (quadratic) c[2] -= 0.5 * dot(gv, gv);
      const Vec3 dd = q2pi_value(q3, 0.0, -1.0 * disp.hess_v(x1, x2)).a;
      for (std::size_t l = 0; l <= g.nz; ++l) {
        const double x3 = g.z(l);
        const Vec3 corr = x3 * c + (0.5 * x3 * x3) * dd;
        d.set(g.index(i, j, l), {{x1 + ha * u[0] - ha * x3 * gv[0] + ha2 * corr[0],
                                  x2 + ha * u[1] - ha * x3 * gv[1] + ha2 * corr[1],
                                  h * x3 + ha1 * v + ha2 * corr[2]}});
      }
    }
  }
  return d;
}

double vk_recovery_target(const SmoothDisplacement& disp, const QuadForm3& q3, double pi, double alpha,
                          const Grid2& plane, int order) {
  if (!(alpha >= 2.0)) throw std::invalid_argument("the von Karman target needs alpha >= 2");
  const QuadForm2 q2 = reduce_q2(q3);
  const PressureReduction red = extract_l_kappa(q3);
  const bool quadratic = alpha == 2.0;
  std::vector<double> gx, gw;
  gauss_legendre(order, gx, gw);
  double total = 0.0;
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b) {
      const double x1 = plane.x0 + 0.5 * plane.lx * (gx[a] + 1.0);
      const double x2 = plane.y0 + 0.5 * plane.ly * (gx[b] + 1.0);
      const double w = 0.25 * plane.lx * plane.ly * gw[a] * gw[b];
      const Vec2 gv = disp.grad_v(x1, x2);
      const Mat2Sym e = disp.strain(x1, x2);
      const Mat2Sym s = quadratic ? e + 0.5 * outer_sym(gv, gv) : e;
      double val = 0.5 * q2.value(s) + q2.value(disp.hess_v(x1, x2)) / 24.0;
      val += pi * (0.5 * red.apply_L(s) + e.trace() + (quadratic ? 0.5 * dot(gv, gv) : 0.0));
      val += 0.5 * pi * pi * red.kappa;
      total += w * val;
    }
  }
  return total;
}

double kirchhoff_recovery_target(const CylinderIsometry& iso, const QuadForm3& q3, double pi, const Grid2& plane) {
  const double r = iso.flat() ? INFINITY : iso.r;
  return eval_eben_cylinder(r, plane, q3) + 0.5 * m_pi(q3, pi).value * plane.area();
}

double fit_successive_rate(std::span<const double> h, std::span<const double> e) {
  if (h.size() != e.size() || h.size() < 3) return std::nan("");
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    const double d = std::abs(e[k] - e[k + 1]);
    if (d > 0.0) {
      lx.push_back(std::log(h[k]));
      ly.push_back(std::log(d));
    }
  }
  if (lx.size() < 2) return std::nan("");
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

RecoveryReport finish_report(std::vector<RecoveryRow> rows) {
  RecoveryReport rep;
  std::vector<double> hs, es;
  for (const auto& r : rows) {
    hs.push_back(r.h);
    es.push_back(r.rescaled_energy);
  }
  rep.rate = fit_successive_rate(hs, es);
  rep.final_residual = rows.empty() ? std::nan("") : rows.back().residual;
  rep.rows = std::move(rows);
  return rep;
}

void check_h_list(std::span<const double> hs) {
  if (hs.empty()) throw std::invalid_argument("h-list is empty");
  for (std::size_t k = 0; k < hs.size(); ++k) {
    if (!(hs[k] > 0.0) || !(hs[k] <= 1.0)) throw std::invalid_argument("every h must lie in (0, 1]");
    if (k > 0 && !(hs[k] < hs[k - 1])) throw std::invalid_argument("h-list must be strictly decreasing");
  }
}

}  // namespace

RecoveryReport run_kirchhoff_recovery(double r, const FilmParams& base, std::span<const double> hs,
                                      const GridForH& grid_for) {
  check_h_list(hs);
  const CylinderIsometry iso{r};
  const QuadForm3 q3 = hessian_at_identity(base.density);
  const KirchhoffFields fields = make_kirchhoff_fields(iso, q3, base.pi);
  std::vector<RecoveryRow> rows;
  for (double h : hs) {
    FilmParams p = base;
    p.h = h;
    p.alpha = 1.0;
    p.validate();
    const Grid3 g = grid_for(h);
    const double target = kirchhoff_recovery_target(iso, q3, p.pi, g.plane);
    const double e = regime_scale(p) * eval_rescaled(recovery_kirchhoff(iso, fields, g, h), p);
    rows.push_back({h, e, target, std::abs(e - target) / std::abs(target)});
  }
  return finish_report(std::move(rows));
}

RecoveryReport run_vk_recovery(const SmoothDisplacement& disp, const FilmParams& base, std::span<const double> hs,
                               const GridForH& grid_for) {
  check_h_list(hs);
  const QuadForm3 q3 = hessian_at_identity(base.density);
  std::vector<RecoveryRow> rows;
  for (double h : hs) {
    FilmParams p = base;
    p.h = h;
    p.validate();
    const Grid3 g = grid_for(h);
    const double target = vk_recovery_target(disp, q3, p.pi, p.alpha, g.plane);
    const double e = regime_scale(p) * eval_rescaled(recovery_vk(disp, q3, p.pi, p.alpha, g, h), p);
    rows.push_back({h, e, target, std::abs(e - target) / std::abs(target)});
  }
  return finish_report(std::move(rows));
}

namespace {

Regime regime_for(double alpha) {
  return alpha == 2.0 ? Regime::VonKarman : alpha > 2.0 ? Regime::VonKarmanLinear : Regime::BendingLinear;
}

}  // namespace

double sweep_limit_value(const FilmParams& base, const Grid2& plane, const Minimize2dOptions& opt) {
  if (!(base.alpha > 1.0)) throw std::invalid_argument("sweep limit requires alpha > 1");
  const Regime regime = regime_for(base.alpha);
  const QuadForm3 q3 = hessian_at_identity(base.density);
  const LimitFunctionalSpec spec = LimitFunctionalSpec::make(regime, base.pi, q3);
  const double area = plane.area();
  if (regime == Regime::BendingLinear) return minimize2d(spec, PlateState(plane), opt).value + 0.5 * spec.mpi.value * area;
  return minimize2d(spec, PlateState(plane), opt).value + 0.5 * base.pi * base.pi * spec.reduction.kappa * area;
}

std::vector<SweepRow> gamma_sweep(const FilmParams& base, std::span<const double> hs, const Grid3& grid,
                                  const SweepOptions& opt) {
  check_h_list(hs);
  if (!(base.alpha > 1.0)) throw std::invalid_argument("gamma sweep requires alpha > 1");
  const QuadForm3 q3 = hessian_at_identity(base.density);
  const Regime regime = regime_for(base.alpha);
  const LimitFunctionalSpec spec = LimitFunctionalSpec::make(regime, base.pi, q3);
  const Minimize2dResult ref = minimize2d(spec, PlateState(grid.plane), opt.reference);

  auto run_one = [&](double h) {
    const auto t0 = std::chrono::steady_clock::now();
    FilmParams p = base;
    p.h = h;
    p.validate();
    const Minimize3dResult m = minimize3d(p, identity_deformation(grid, h), opt.solver);
    PlateState uv = extract_uv(m.y, p);
    project_plate_gauge(uv, regime);
    SweepRow row;
    row.h = h;
    row.rescaled_min = m.rescaled_value;
    row.iters = m.iterations;
    const std::size_t n = uv.nodes();
    for (std::size_t k = 0; k < n; ++k) {
      const double du1 = uv.u1()[k] - ref.state.u1()[k];
      const double du2 = uv.u2()[k] - ref.state.u2()[k];
      row.u_err = std::max(row.u_err, std::hypot(du1, du2));
      row.v_err = std::max(row.v_err, std::abs(uv.v()[k] - ref.state.v()[k]));
    }
    row.wallclock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
  };

  std::vector<SweepRow> rows(hs.size());
  if (opt.parallel) {
    std::vector<std::future<SweepRow>> jobs;
    for (double h : hs) jobs.push_back(std::async(std::launch::async, run_one, h));
    for (std::size_t k = 0; k < jobs.size(); ++k) rows[k] = jobs[k].get();
  } else {
    for (std::size_t k = 0; k < hs.size(); ++k) rows[k] = run_one(hs[k]);
  }
  return rows;
}

}  // namespace thinplate
