#include "thinplate/plate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "thinplate/isometry.hpp"
#include "thinplate/lbfgs.hpp"
#include "thinplate/membrane.hpp"

namespace thinplate {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

struct Terms {
  bool nonlinear = false;  // ½∇v⊗∇v inside the strain
  bool stretch = false;
  bool bending = false;
  bool pressure = false;
};

struct Fields {
  std::vector<double> ux1, uy1, ux2, uy2, vx, vy, vxx, vyy, vxy;

  explicit Fields(std::size_t n)
      : ux1(n), uy1(n), ux2(n), uy2(n), vx(n), vy(n), vxx(n), vyy(n), vxy(n) {}
};

void compute_fields(const DiffOps& ops, const PlateState& s, Fields& f, bool need_u, bool need_v1, bool need_v2) {
  if (need_u) {
    ops.dx(s.u1(), f.ux1);
    ops.dy(s.u1(), f.uy1);
    ops.dx(s.u2(), f.ux2);
    ops.dy(s.u2(), f.uy2);
  }
  if (need_v1) {
    ops.dx(s.v(), f.vx);
    ops.dy(s.v(), f.vy);
  }
  if (need_v2) {
    ops.dxx(s.v(), f.vxx);
    ops.dyy(s.v(), f.vyy);
    ops.dxy(s.v(), f.vxy);
  }
}

// Derivative of Q2 with respect to the (xx, yy, xy) entries.
std::array<double, 3> dq2(const QuadForm2& q, const Mat2Sym& g) {
  const Mat2Sym a = q.apply(g);
  return {2.0 * a.xx, 2.0 * a.yy, 4.0 * a.xy};
}

void check_sizes(const PlateState& s, std::span<double> grad) {
  if (s.dofs.size() != 3 * s.grid.nodes()) throw std::invalid_argument("plate state does not match its grid");
  if (!grad.empty() && grad.size() != s.dofs.size()) throw std::invalid_argument("gradient buffer has the wrong size");
}

void require_regime(const LimitFunctionalSpec& spec, Regime r, const char* who) {
  if (spec.regime != r)
    throw std::invalid_argument(std::string(who) + " requires the " + std::string(regime_name(r)) + " regime");
}

double plate_energy(const PlateState& s, const LimitFunctionalSpec& spec, Terms t, std::span<double> grad) {
  check_sizes(s, grad);
  const Grid2& g = s.grid;
  const std::size_t n = g.nodes();
  const DiffOps ops(g);
  const auto w = g.weights();
  Fields f(n);
  const bool need_u = t.stretch || t.pressure;
  compute_fields(ops, s, f, need_u, t.nonlinear, t.bending);

  const bool want_grad = !grad.empty();
  Fields df(want_grad ? n : 0);
  const double pi = t.pressure ? spec.pi : 0.0;
  const std::array<double, 3> lcoef{spec.reduction.L[0], spec.reduction.L[1], kSqrt2 * spec.reduction.L[2]};

  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double e = 0.0;
    std::array<double, 3> ds{};  // dE/d(strain) before weighting
    if (need_u) {
      Mat2Sym strain{f.ux1[k], f.uy2[k], 0.5 * (f.uy1[k] + f.ux2[k])};
      if (t.nonlinear) strain = strain + 0.5 * outer_sym({{f.vx[k], f.vy[k]}}, {{f.vx[k], f.vy[k]}});
      if (t.stretch) {
        const Mat2Sym a = spec.q2.apply(strain);
        e += 0.5 * (a.xx * strain.xx + a.yy * strain.yy + 2.0 * a.xy * strain.xy);
        ds = {a.xx, a.yy, 2.0 * a.xy};
      }
      if (t.pressure) {
        e += pi * (0.5 * (lcoef[0] * strain.xx + lcoef[1] * strain.yy + lcoef[2] * strain.xy) + f.ux1[k] + f.uy2[k]);
        for (std::size_t c = 0; c < 3; ++c) ds[c] += 0.5 * pi * lcoef[c];
        if (t.nonlinear) e += 0.5 * pi * (f.vx[k] * f.vx[k] + f.vy[k] * f.vy[k]);
      }
    }
    Mat2Sym hess;
    if (t.bending) {
      hess = {f.vxx[k], f.vyy[k], f.vxy[k]};
      e += spec.q2.value(hess) / 24.0;
    }
    total += w[k] * e;

    if (want_grad) {
      const double wk = w[k];
      if (need_u) {
        const double sxx = wk * ds[0];
        const double syy = wk * ds[1];
        const double sxy = wk * ds[2];
        df.ux1[k] = sxx + wk * pi;
        df.uy2[k] = syy + wk * pi;
        df.uy1[k] = 0.5 * sxy;
        df.ux2[k] = 0.5 * sxy;
        if (t.nonlinear) {
          df.vx[k] = sxx * f.vx[k] + 0.5 * sxy * f.vy[k] + wk * pi * f.vx[k];
          df.vy[k] = syy * f.vy[k] + 0.5 * sxy * f.vx[k] + wk * pi * f.vy[k];
        }
      }
      if (t.bending) {
        const auto dk = dq2(spec.q2, hess);
        df.vxx[k] = wk * dk[0] / 24.0;
        df.vyy[k] = wk * dk[1] / 24.0;
        df.vxy[k] = wk * dk[2] / 24.0;
      }
    }
  }

  if (want_grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    auto gu1 = grad.subspan(0, n);
    auto gu2 = grad.subspan(n, n);
    auto gv = grad.subspan(2 * n, n);
    if (need_u) {
      ops.dx_adj(df.ux1, gu1);
      ops.dy_adj(df.uy1, gu1);
      ops.dx_adj(df.ux2, gu2);
      ops.dy_adj(df.uy2, gu2);
    }
    if (t.nonlinear) {
      ops.dx_adj(df.vx, gv);
      ops.dy_adj(df.vy, gv);
    }
    if (t.bending) {
      ops.dxx_adj(df.vxx, gv);
      ops.dyy_adj(df.vyy, gv);
      ops.dxy_adj(df.vxy, gv);
    }
  }
  return total;
}

double weighted_mean(std::span<const double> f, const std::vector<double>& w) {
  double a = 0.0, b = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    a += w[k] * f[k];
    b += w[k];
  }
  return a / b;
}

}  // namespace

Regime parse_regime(std::string_view name) {
  if (name == "vk") return Regime::VonKarman;
  if (name == "vklin") return Regime::VonKarmanLinear;
  if (name == "benlin") return Regime::BendingLinear;
  throw std::invalid_argument("unknown regime '" + std::string(name) + "' (expected vk, vklin or benlin)");
}

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::VonKarman:
      return "vk";
    case Regime::VonKarmanLinear:
      return "vklin";
    case Regime::BendingLinear:
      return "benlin";
  }
  return "unknown";
}

LimitFunctionalSpec LimitFunctionalSpec::make(Regime regime, double pi, const QuadForm3& q3) {
  if (!std::isfinite(pi)) throw std::invalid_argument("pressure must be finite");
  LimitFunctionalSpec s;
  s.regime = regime;
  s.pi = pi;
  s.q3 = q3;
  s.q2 = reduce_q2(q3);
  s.reduction = extract_l_kappa(q3);
  s.mpi = m_pi(q3, pi);
  return s;
}

double eval_evk(const PlateState& s, const LimitFunctionalSpec& spec, std::span<double> grad) {
  require_regime(spec, Regime::VonKarman, "eval_evk");
  return plate_energy(s, spec, {.nonlinear = true, .stretch = true, .bending = true, .pressure = false}, grad);
}

double eval_evk_pi(const PlateState& s, const LimitFunctionalSpec& spec, std::span<double> grad) {
  require_regime(spec, Regime::VonKarman, "eval_evk_pi");
  return plate_energy(s, spec, {.nonlinear = true, .stretch = true, .bending = true, .pressure = true}, grad);
}

double eval_evklin_pi(const PlateState& s, const LimitFunctionalSpec& spec, std::span<double> grad) {
  require_regime(spec, Regime::VonKarmanLinear, "eval_evklin_pi");
  return plate_energy(s, spec, {.nonlinear = false, .stretch = true, .bending = true, .pressure = true}, grad);
}

BendingValue eval_ebenlin(const PlateState& s, const LimitFunctionalSpec& spec, std::span<double> grad) {
  require_regime(spec, Regime::BendingLinear, "eval_ebenlin");
  BendingValue out;
  out.value = plate_energy(s, spec, {.nonlinear = false, .stretch = false, .bending = true, .pressure = false}, grad);

  const Grid2& g = s.grid;
  const std::size_t n = g.nodes();
  const DiffOps ops(g);
  const auto w = g.weights();
  Fields f(n);
  compute_fields(ops, s, f, true, true, true);
  double res = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Mat2Sym strain{f.ux1[k] + 0.5 * f.vx[k] * f.vx[k], f.uy2[k] + 0.5 * f.vy[k] * f.vy[k],
                         0.5 * (f.uy1[k] + f.ux2[k]) + 0.5 * f.vx[k] * f.vy[k]};
    const Mat2Sym hess{f.vxx[k], f.vyy[k], f.vxy[k]};
    res += w[k] * (strain.norm() + std::abs(hess.det()));
  }
  out.constraint_residual = res;
  return out;
}

double eval_bending_limit_pi(const PlateState& s, const LimitFunctionalSpec& spec, std::span<double> grad) {
  require_regime(spec, Regime::BendingLinear, "eval_bending_limit_pi");
  check_sizes(s, grad);
  const Grid2& g = s.grid;
  const std::size_t n = g.nodes();
  const DiffOps ops(g);
  const auto w = g.weights();
  Fields f(n);
  compute_fields(ops, s, f, false, false, true);

  // Two-point Gauss rule on (-½, ½), exact for quadratics in x3.
  const double z = 0.5 / std::sqrt(3.0);
  const std::array<double, 2> nodes{-z, z};
  const Mat2Sym gbar = spec.mpi.g;
  const double pi = spec.pi;
  const bool want_grad = !grad.empty();
  std::vector<double> dxx(want_grad ? n : 0), dyy(want_grad ? n : 0), dxy(want_grad ? n : 0);

  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Mat2Sym hess{f.vxx[k], f.vyy[k], f.vxy[k]};
    double e = 0.0;
    std::array<double, 3> dk{};
    for (double x3 : nodes) {
      const Mat2Sym gk = gbar - x3 * hess;
      const Q2PiResult q = q2pi_value(spec.q3, pi, gk);
      e += 0.5 * 0.5 * (q.value + 2.0 * pi * gk.trace());
      if (want_grad) {
        Mat3 full = gk.embed();
        full.set_column(2, full.column(2) + q.a);
        const Mat3 m = spec.q3.apply(full);
        // d/dG of ½·½[Q2^π(G) + 2π tr G], chained through G = Ḡ - x3 K.
        const std::array<double, 3> dg{2.0 * m(0, 0) + 2.0 * pi, 2.0 * m(1, 1) + 2.0 * pi, 2.0 * (m(0, 1) + m(1, 0))};
        for (std::size_t c = 0; c < 3; ++c) dk[c] += -x3 * 0.25 * dg[c];
      }
    }
    total += w[k] * e;
    if (want_grad) {
      dxx[k] = w[k] * dk[0];
      dyy[k] = w[k] * dk[1];
      dxy[k] = w[k] * dk[2];
    }
  }
  if (want_grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    auto gv = grad.subspan(2 * n, n);
    ops.dxx_adj(dxx, gv);
    ops.dyy_adj(dyy, gv);
    ops.dxy_adj(dxy, gv);
  }
  return total;
}

double eval_regime(const PlateState& s, const LimitFunctionalSpec& spec, std::span<double> grad) {
  switch (spec.regime) {
    case Regime::VonKarman:
      return eval_evk_pi(s, spec, grad);
    case Regime::VonKarmanLinear:
      return eval_evklin_pi(s, spec, grad);
    case Regime::BendingLinear:
      return plate_energy(s, spec, {.nonlinear = false, .stretch = false, .bending = true, .pressure = false}, grad);
  }
  return 0.0;
}

double eval_eben_cylinder(double r, const Grid2& grid, const QuadForm3& q3) {
  if (r == 0.0 || std::isnan(r)) throw std::invalid_argument("cylinder radius must be nonzero");
  const QuadForm2 q2 = reduce_q2(q3);
  const CylinderIsometry cyl{r};
  const auto w = grid.weights();
  double total = 0.0;
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i)
      total += w[grid.index(i, j)] * q2.value(cyl.second_fundamental_form(grid.x(i), grid.y(j))) / 24.0;
  return total;
}

double eval_membrane_example(std::span<const Vec3> y, double pi, const Grid2& grid, std::span<Vec3> grad) {
  if (!(pi >= 0.0)) throw std::invalid_argument("membrane example needs pi >= 0");
  const std::size_t n = grid.nodes();
  if (y.size() != n) throw std::invalid_argument("deformation does not match the grid");
  if (!grad.empty() && grad.size() != n) throw std::invalid_argument("gradient buffer has the wrong size");
  const ConjectureResult cert = conjecture_check(pi);
  if (!(cert.deviation < 1e-3)) throw NumericalFailure("membrane envelope is not constant for this pressure");

  const DiffOps ops(grid);
  const auto w = grid.weights();
  std::array<std::vector<double>, 3> d1, d2;
  std::vector<double> comp(n);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < n; ++k) comp[k] = y[k][c];
    d1[c].resize(n);
    d2[c].resize(n);
    ops.dx(comp, d1[c]);
    ops.dy(comp, d2[c]);
  }
  double total = 0.0;
  std::array<std::vector<double>, 3> g1, g2;
  if (!grad.empty())
    for (std::size_t c = 0; c < 3; ++c) {
      g1[c].assign(n, 0.0);
      g2[c].assign(n, 0.0);
    }
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3 a{{d1[0][k], d1[1][k], d1[2][k]}};
    const Vec3 b{{d2[0][k], d2[1][k], d2[2][k]}};
    const double na = norm(a);
    const double nb = norm(b);
    total += w[k] * ((na * na * na + nb * nb * nb) / 3.0 + cert.c_pi);
    if (!grad.empty())
      for (std::size_t c = 0; c < 3; ++c) {
        g1[c][k] = w[k] * na * a[c];
        g2[c][k] = w[k] * nb * b[c];
      }
  }
  if (!grad.empty()) {
    for (std::size_t c = 0; c < 3; ++c) {
      std::vector<double> acc(n, 0.0);
      ops.dx_adj(g1[c], acc);
      ops.dy_adj(g2[c], acc);
      for (std::size_t k = 0; k < n; ++k) grad[k][c] = acc[k];
    }
  }
  return total;
}

std::vector<Mat2Sym> linear_strain(const PlateState& s) {
  const std::size_t n = s.nodes();
  const DiffOps ops(s.grid);
  Fields f(n);
  compute_fields(ops, s, f, true, false, false);
  std::vector<Mat2Sym> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = {f.ux1[k], f.uy2[k], 0.5 * (f.uy1[k] + f.ux2[k])};
  return out;
}

void project_plate_gauge(PlateState& s, Regime regime) {
  const Grid2& g = s.grid;
  const std::size_t n = g.nodes();
  const auto w = g.weights();
  std::vector<double> xs(n), ys(n);
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      xs[g.index(i, j)] = g.x(i);
      ys[g.index(i, j)] = g.y(j);
    }
  const double xm = weighted_mean(xs, w);
  const double ym = weighted_mean(ys, w);
  for (std::size_t k = 0; k < n; ++k) {
    xs[k] -= xm;
    ys[k] -= ym;
  }

  auto u1 = s.u1();
  auto u2 = s.u2();
  auto v = s.v();
  const double m1 = weighted_mean(u1, w);
  const double m2 = weighted_mean(u2, w);
  const double mv = weighted_mean(v, w);
  for (std::size_t k = 0; k < n; ++k) {
    u1[k] -= m1;
    u2[k] -= m2;
    v[k] -= mv;
  }
  // Skew-linear field (-y, x).
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    num += w[k] * (-ys[k] * u1[k] + xs[k] * u2[k]);
    den += w[k] * (ys[k] * ys[k] + xs[k] * xs[k]);
  }
  const double theta = num / den;
  for (std::size_t k = 0; k < n; ++k) {
    u1[k] += theta * ys[k];
    u2[k] -= theta * xs[k];
  }
  if (regime != Regime::VonKarman) {
    // Centered coordinates are orthogonal to constants; orthogonalize y against x.
    double xx = 0.0, xy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      xx += w[k] * xs[k] * xs[k];
      xy += w[k] * xs[k] * ys[k];
    }
    std::vector<double> yo(n);
    for (std::size_t k = 0; k < n; ++k) yo[k] = ys[k] - xy / xx * xs[k];
    double vx = 0.0, vy = 0.0, yy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      vx += w[k] * v[k] * xs[k];
      vy += w[k] * v[k] * yo[k];
      yy += w[k] * yo[k] * yo[k];
    }
    for (std::size_t k = 0; k < n; ++k) v[k] -= vx / xx * xs[k] + vy / yy * yo[k];
  }
}

Minimize2dResult minimize2d(const LimitFunctionalSpec& spec, const PlateState& init, const Minimize2dOptions& opt) {
  if (init.dofs.size() != 3 * init.grid.nodes()) throw std::invalid_argument("initial state does not match its grid");
  PlateState work = init;
  const Objective f = [&](std::span<const double> x, std::span<double> g) {
    std::copy(x.begin(), x.end(), work.dofs.begin());
    return eval_regime(work, spec, g);
  };
  const Projector proj = [&](std::span<double> x) {
    PlateState tmp(init.grid);
    std::copy(x.begin(), x.end(), tmp.dofs.begin());
    project_plate_gauge(tmp, spec.regime);
    std::copy(tmp.dofs.begin(), tmp.dofs.end(), x.begin());
  };
  LbfgsOptions lo;
  lo.tol = opt.tol;
  lo.max_iter = opt.max_iter;
  LbfgsResult r = lbfgs_minimize(f, init.dofs, lo, proj);

  Minimize2dResult out;
  out.state = PlateState(init.grid);
  out.state.dofs = std::move(r.x);
  out.value = r.value;
  out.iterations = r.iterations;
  out.evaluations = r.evaluations;
  out.grad_norm = r.grad_norm;
  out.converged = r.converged;
  out.history = std::move(r.history);
  return out;
}

}  // namespace thinplate
