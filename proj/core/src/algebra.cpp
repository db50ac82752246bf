#include "thinplate/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace thinplate {

Mat3 Mat3::from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
  Mat3 m;
  m.set_column(0, c0);
  m.set_column(1, c1);
  m.set_column(2, c2);
  return m;
}

void Mat3::set_column(std::size_t j, const Vec3& v) {
  for (std::size_t i = 0; i < 3; ++i) (*this)(i, j) = v[i];
}

double Mat2Sym::norm() const { return std::sqrt(xx * xx + yy * yy + 2.0 * xy * xy); }

Mat3 Mat2Sym::embed() const {
  Mat3 m;
  m(0, 0) = xx;
  m(1, 1) = yy;
  m(0, 1) = m(1, 0) = xy;
  return m;
}

Mat2Sym operator+(const Mat2Sym& a, const Mat2Sym& b) { return {a.xx + b.xx, a.yy + b.yy, a.xy + b.xy}; }
Mat2Sym operator-(const Mat2Sym& a, const Mat2Sym& b) { return {a.xx - b.xx, a.yy - b.yy, a.xy - b.xy}; }
Mat2Sym operator*(double s, const Mat2Sym& a) { return {s * a.xx, s * a.yy, s * a.xy}; }
Mat2Sym outer_sym(const Vec2& a, const Vec2& b) {
  return {a[0] * b[0], a[1] * b[1], 0.5 * (a[0] * b[1] + a[1] * b[0])};
}

Vec2 operator+(const Vec2& a, const Vec2& b) { return {{a[0] + b[0], a[1] + b[1]}}; }
Vec2 operator-(const Vec2& a, const Vec2& b) { return {{a[0] - b[0], a[1] - b[1]}}; }
Vec2 operator*(double s, const Vec2& a) { return {{s * a[0], s * a[1]}}; }
double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

Vec3 operator+(const Vec3& a, const Vec3& b) { return {{a[0] + b[0], a[1] + b[1], a[2] + b[2]}}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {{a[0] - b[0], a[1] - b[1], a[2] - b[2]}}; }
Vec3 operator-(const Vec3& a) { return {{-a[0], -a[1], -a[2]}}; }
Vec3 operator*(double s, const Vec3& a) { return {{s * a[0], s * a[1], s * a[2]}}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 wedge(const Vec3& u, const Vec3& v) {
  return {{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]}};
}

Mat3 operator+(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (std::size_t k = 0; k < 9; ++k) r.a[k] = a.a[k] + b.a[k];
  return r;
}

Mat3 operator-(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (std::size_t k = 0; k < 9; ++k) r.a[k] = a.a[k] - b.a[k];
  return r;
}

Mat3 operator*(double s, const Mat3& a) {
  Mat3 r;
  for (std::size_t k = 0; k < 9; ++k) r.a[k] = s * a.a[k];
  return r;
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
  return r;
}

Vec3 operator*(const Mat3& a, const Vec3& x) {
  return {{a(0, 0) * x[0] + a(0, 1) * x[1] + a(0, 2) * x[2],
           a(1, 0) * x[0] + a(1, 1) * x[1] + a(1, 2) * x[2],
           a(2, 0) * x[0] + a(2, 1) * x[1] + a(2, 2) * x[2]}};
}

Mat3 transpose(const Mat3& a) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) = a(j, i);
  return r;
}

Mat3 outer(const Vec3& a, const Vec3& b) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
  return r;
}

Mat3 sym(const Mat3& a) { return 0.5 * (a + transpose(a)); }

double trace(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

double det(const Mat3& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

double frobenius_dot(const Mat3& a, const Mat3& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < 9; ++k) s += a.a[k] * b.a[k];
  return s;
}

double frobenius_norm(const Mat3& a) { return std::sqrt(frobenius_dot(a, a)); }

Mat3 cofactor(const Mat3& a) {
  Mat3 c;
  c(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  c(0, 1) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
  c(0, 2) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
  c(1, 0) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
  c(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
  c(1, 2) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
  c(2, 0) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
  c(2, 1) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
  c(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return c;
}

Mat3 inverse(const Mat3& a) { return (1.0 / det(a)) * transpose(cofactor(a)); }

double iota2(const Mat3& f) {
  return f(0, 0) * f(1, 1) - f(0, 1) * f(1, 0) + f(0, 0) * f(2, 2) - f(0, 2) * f(2, 0) +
         f(1, 1) * f(2, 2) - f(1, 2) * f(2, 1);
}

double det_expansion_residual(const Mat3& f, double h) {
  const Mat3 m = Mat3::identity() + h * f;
  return det(m) - (1.0 + h * trace(f) + h * h * iota2(f) + h * h * h * det(f));
}

double det_minus_one(const Mat3& f) {
  const Mat3 d = f - Mat3::identity();
  return trace(d) + iota2(d) + det(d);
}

namespace {

// Cyclic Jacobi eigen-decomposition of a symmetric 3x3 matrix; on return the
// diagonal of s holds the eigenvalues and the columns of v the eigenvectors.
void jacobi_eigen(Mat3& s, Mat3& v) {
  v = Mat3::identity();
  double scale = 0.0;
  for (double x : s.a) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return;
  const double tol = 1e-12 * scale;
  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = std::abs(s(0, 1)) + std::abs(s(0, 2)) + std::abs(s(1, 2));
    if (off < tol * 1e-4) break;
    for (std::size_t p = 0; p < 2; ++p) {
      for (std::size_t q = p + 1; q < 3; ++q) {
        const double apq = s(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < 3; ++k) {
          const double skp = s(k, p);
          const double skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (std::size_t k = 0; k < 3; ++k) {
          const double spk = s(p, k);
          const double sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
        }
        for (std::size_t k = 0; k < 3; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
}

Vec3 normalized(const Vec3& x) {
  const double n = norm(x);
  return n > 0.0 ? (1.0 / n) * x : x;
}

}  // namespace

Svd3 svd3(const Mat3& f) {
  Mat3 s = transpose(f) * f;
  Mat3 v;
  jacobi_eigen(s, v);

  std::array<std::size_t, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return s(i, i) > s(j, j); });

  Svd3 out;
  for (std::size_t k = 0; k < 3; ++k) {
    out.sigma[k] = std::sqrt(std::max(0.0, s(order[k], order[k])));
    out.v.set_column(k, v.column(order[k]));
  }
  if (det(out.v) < 0.0) out.v.set_column(2, -out.v.column(2));

  // U columns from F v_k / sigma_k, completed to an orthonormal frame when
  // singular values vanish. U may be a reflection when det F < 0.
  const double tiny = 1e-14 * std::max(out.sigma[0], 1e-300);
  const Vec3 u0 = out.sigma[0] > tiny ? normalized(f * out.v.column(0)) : Vec3::unit(0);
  Vec3 u1;
  if (out.sigma[1] > tiny) {
    u1 = f * out.v.column(1);
    u1 = normalized(u1 - dot(u1, u0) * u0);
  } else {
    const Vec3 trial = std::abs(u0[0]) < 0.9 ? Vec3::unit(0) : Vec3::unit(1);
    u1 = normalized(trial - dot(trial, u0) * u0);
  }
  Vec3 u2 = wedge(u0, u1);
  if (out.sigma[2] > tiny && dot(u2, f * out.v.column(2)) < 0.0) u2 = -u2;
  out.u = Mat3::from_columns(u0, u1, u2);
  return out;
}

double dist_so3(const Mat3& f) {
  const Svd3 s = svd3(f);
  Vec3 sigma = s.sigma;
  if (det(f) <= 0.0) sigma[2] = -sigma[2];
  double acc = 0.0;
  for (std::size_t k = 0; k < 3; ++k) acc += (sigma[k] - 1.0) * (sigma[k] - 1.0);
  return std::sqrt(acc);
}

Mat3 nearest_rotation(const Mat3& f) {
  const Svd3 s = svd3(f);
  Mat3 u = s.u;
  if (det(u) < 0.0) u.set_column(2, -u.column(2));
  return u * transpose(s.v);
}

Mat3 rotation_axis_angle(const Vec3& axis, double angle) {
  const double n = norm(axis);
  if (n == 0.0 || angle == 0.0) return Mat3::identity();
  const Vec3 k = (1.0 / n) * axis;
  Mat3 kx;
  kx(0, 1) = -k[2];
  kx(0, 2) = k[1];
  kx(1, 0) = k[2];
  kx(1, 2) = -k[0];
  kx(2, 0) = -k[1];
  kx(2, 1) = k[0];
  return Mat3::identity() + std::sin(angle) * kx + (1.0 - std::cos(angle)) * (kx * kx);
}

Mat3 random_rotation(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double z = 2.0 * unit(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * unit(rng);
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  const Vec3 axis{{rho * std::cos(phi), rho * std::sin(phi), z}};
  const double angle = std::numbers::pi * unit(rng);
  return rotation_axis_angle(axis, angle);
}

}  // namespace thinplate
