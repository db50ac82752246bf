#include "thinplate/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "linsolve.hpp"
#include "thinplate/errors.hpp"

namespace thinplate {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
// Flat indices of the third column, i.e. of a⊗e3.
constexpr std::array<std::size_t, 3> kThird{2, 5, 8};

std::array<Mat3, 3> sym_basis() {
  return {Mat2Sym{1.0, 0.0, 0.0}.embed(), Mat2Sym{0.0, 1.0, 0.0}.embed(), Mat2Sym{0.0, 0.0, 1.0 / kSqrt2}.embed()};
}

// Third-column block M and coupling r(F)_m = B(F, e_m⊗e3).
std::array<double, 9> third_block(const QuadForm3& q) {
  std::array<double, 9> m{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m[3 * i + j] = q(kThird[i], kThird[j]);
  return m;
}

std::array<double, 3> coupling(const QuadForm3& q, const Mat3& f) {
  std::array<double, 3> r{};
  for (std::size_t m = 0; m < 3; ++m) {
    double s = 0.0;
    for (std::size_t k = 0; k < 9; ++k) s += q(kThird[m], k) * f.a[k];
    r[m] = s;
  }
  return r;
}

}  // namespace

std::array<double, 3> sym_coords(const Mat2Sym& g) { return {g.xx, g.yy, kSqrt2 * g.xy}; }

Mat2Sym from_sym_coords(const std::array<double, 3>& c) { return {c[0], c[1], c[2] / kSqrt2}; }

double QuadForm3::bilinear(const Mat3& f, const Mat3& g) const {
  double s = 0.0;
  for (std::size_t i = 0; i < 9; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < 9; ++j) row += m[9 * i + j] * g.a[j];
    s += f.a[i] * row;
  }
  return s;
}

Mat3 QuadForm3::apply(const Mat3& f) const {
  Mat3 out;
  for (std::size_t i = 0; i < 9; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < 9; ++j) row += m[9 * i + j] * f.a[j];
    out.a[i] = row;
  }
  return out;
}

QuadForm3 QuadForm3::isotropic(double mu, double lambda) {
  QuadForm3 q;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const std::size_t p = 3 * i + j;
      q(p, p) += mu;
      q(p, 3 * j + i) += mu;
      if (i == j)
        for (std::size_t k = 0; k < 3; ++k) q(p, 4 * k) += lambda;
    }
  }
  return q;
}

double QuadForm2::bilinear(const Mat2Sym& g, const Mat2Sym& k) const {
  const auto a = sym_coords(g);
  const auto b = sym_coords(k);
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) s += a[i] * m[3 * i + j] * b[j];
  return s;
}

Mat2Sym QuadForm2::apply(const Mat2Sym& g) const {
  const auto a = sym_coords(g);
  std::array<double, 3> r{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r[i] += m[3 * i + j] * a[j];
  return from_sym_coords(r);
}

double PressureReduction::apply_L(const Mat2Sym& g) const {
  const auto c = sym_coords(g);
  return L[0] * c[0] + L[1] * c[1] + L[2] * c[2];
}

QuadForm2 reduce_q2(const QuadForm3& q3) {
  const auto m = third_block(q3);
  const auto basis = sym_basis();
  std::array<std::array<double, 3>, 3> r{};
  std::array<std::array<double, 3>, 3> minv_r{};
  for (std::size_t k = 0; k < 3; ++k) {
    r[k] = coupling(q3, basis[k]);
    minv_r[k] = detail::spd_solve<3>(m, r[k]);
  }
  QuadForm2 q2;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t l = k; l < 3; ++l) {
      double schur = q3.bilinear(basis[k], basis[l]);
      for (std::size_t i = 0; i < 3; ++i) schur -= r[k][i] * minv_r[l][i];
      q2(k, l) = schur;
      q2(l, k) = schur;
    }
  }
  return q2;
}

Q2PiResult q2pi_value(const QuadForm3& q3, double pi, const Mat2Sym& g) {
  const Mat3 f = g.embed();
  auto rhs = coupling(q3, f);
  rhs[2] += pi;
  const auto sol = detail::spd_solve<3>(third_block(q3), rhs);
  Q2PiResult out;
  out.value = q3.value(f) - (rhs[0] * sol[0] + rhs[1] * sol[1] + rhs[2] * sol[2]);
  out.a = {{-sol[0], -sol[1], -sol[2]}};
  return out;
}

PressureReduction extract_l_kappa(const QuadForm3& q3, std::uint64_t seed) {
  PressureReduction red;
  const Mat2Sym zero{};
  red.kappa = 0.5 * (q2pi_value(q3, 1.0, zero).value + q2pi_value(q3, -1.0, zero).value) -
              q2pi_value(q3, 0.0, zero).value;
  for (std::size_t k = 0; k < 3; ++k) {
    std::array<double, 3> c{};
    c[k] = 1.0;
    const Mat2Sym e = from_sym_coords(c);
    red.L[k] = 0.5 * (q2pi_value(q3, 1.0, e).value - q2pi_value(q3, -1.0, e).value);
  }

  const QuadForm2 q2 = reduce_q2(q3);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const Mat2Sym g{d(rng), d(rng), d(rng)};
    const double pi = d(rng);
    const double direct = q2pi_value(q3, pi, g).value;
    const double affine = q2.value(g) + pi * red.apply_L(g) + pi * pi * red.kappa;
    const double scale = std::abs(q2.value(g)) + std::abs(pi * red.apply_L(g)) + std::abs(pi * pi * red.kappa);
    worst = std::max(worst, std::abs(direct - affine) / (1.0 + scale));
  }
  red.residual = worst;
  if (!(worst < 1e-10)) throw NumericalFailure("pressure reduction is not affine-quadratic in pi");
  return red;
}

MPiResult m_pi(const QuadForm3& q3, double pi) {
  // Unknowns x = (c, a) with G = from_sym_coords(c); objective xᵀHx + 2 gᵀx.
  const auto basis = sym_basis();
  std::array<Mat3, 6> dirs{};
  for (std::size_t k = 0; k < 3; ++k) {
    dirs[k] = basis[k];
    dirs[3 + k] = outer(Vec3::unit(k), Vec3::unit(2));
  }
  std::array<double, 36> h{};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) h[6 * i + j] = q3.bilinear(dirs[i], dirs[j]);
  const std::array<double, 6> g{pi, pi, 0.0, 0.0, 0.0, pi};
  const auto x = detail::spd_solve<6>(h, g);
  MPiResult out;
  double gx = 0.0;
  for (std::size_t i = 0; i < 6; ++i) gx += g[i] * x[i];
  out.value = -gx;
  out.g = from_sym_coords({-x[0], -x[1], -x[2]});
  out.a = {{-x[3], -x[4], -x[5]}};
  return out;
}

MPiResult m_pi_from_reduction(const QuadForm2& q2, const PressureReduction& red, double pi) {
  // Linear term in coordinates: π L + 2π (1, 1, 0), written as 2 bᵀc.
  const std::array<double, 3> b{0.5 * pi * red.L[0] + pi, 0.5 * pi * red.L[1] + pi, 0.5 * pi * red.L[2]};
  const auto x = detail::spd_solve<3>(q2.m, b);
  MPiResult out;
  out.value = -(b[0] * x[0] + b[1] * x[1] + b[2] * x[2]) + pi * pi * red.kappa;
  out.g = from_sym_coords({-x[0], -x[1], -x[2]});
  return out;
}

IsotropicForms isotropic_closed_forms(double mu, double lambda, double pi) {
  if (!(mu > 0.0) || !(lambda > -2.0 * mu / 3.0) || !std::isfinite(mu) || !std::isfinite(lambda))
    throw std::invalid_argument("isotropic closed forms need mu > 0 and lambda > -2 mu / 3");
  const double k = 2.0 * mu + lambda;
  const double c = 2.0 * mu * lambda / k;
  IsotropicForms out;
  for (std::size_t i = 0; i < 3; ++i) out.q2(i, i) = 2.0 * mu;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) out.q2(i, j) += c;
  const double l = -2.0 * lambda / k;
  out.reduction.L = {l, l, 0.0};
  out.reduction.kappa = -1.0 / k;
  out.m_pi = -3.0 * pi * pi / (2.0 * mu + 3.0 * lambda);
  const double s = -pi / (2.0 * mu + 3.0 * lambda);
  out.g_min = {s, s, 0.0};
  return out;
}

}  // namespace thinplate
