#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace thinplate {

// Fixed-size vectors and matrices used throughout the library. Indices are
// zero-based; Mat3 is row-major, so F(i, j) is row i, column j and column j
// of F is the vector F_j in the column notation F = (F_1 | F_2 | F_3).

struct Vec2 {
  std::array<double, 2> c{};

  constexpr double& operator[](std::size_t i) { return c[i]; }
  constexpr double operator[](std::size_t i) const { return c[i]; }
};

struct Vec3 {
  std::array<double, 3> c{};

  constexpr double& operator[](std::size_t i) { return c[i]; }
  constexpr double operator[](std::size_t i) const { return c[i]; }

  static constexpr Vec3 unit(std::size_t i) {
    Vec3 e;
    e.c[i] = 1.0;
    return e;
  }
};

struct Mat3 {
  std::array<double, 9> a{};

  constexpr double& operator()(std::size_t i, std::size_t j) { return a[3 * i + j]; }
  constexpr double operator()(std::size_t i, std::size_t j) const { return a[3 * i + j]; }

  static constexpr Mat3 identity() {
    Mat3 m;
    m.a[0] = m.a[4] = m.a[8] = 1.0;
    return m;
  }
  static constexpr Mat3 diag(double d0, double d1, double d2) {
    Mat3 m;
    m.a[0] = d0;
    m.a[4] = d1;
    m.a[8] = d2;
    return m;
  }
  static Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2);

  Vec3 column(std::size_t j) const { return {{(*this)(0, j), (*this)(1, j), (*this)(2, j)}}; }
  void set_column(std::size_t j, const Vec3& v);
};

/// Symmetric 2x2 matrix stored by its three independent entries, so symmetry
/// cannot be broken.
struct Mat2Sym {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;

  static constexpr Mat2Sym identity() { return {1.0, 1.0, 0.0}; }

  constexpr double trace() const { return xx + yy; }
  constexpr double det() const { return xx * yy - xy * xy; }
  double norm() const;  // Frobenius

  /// Embeds into 3x3 with zero third row and column.
  Mat3 embed() const;
  Vec2 apply(const Vec2& x) const { return {{xx * x[0] + xy * x[1], xy * x[0] + yy * x[1]}}; }
};

Mat2Sym operator+(const Mat2Sym& a, const Mat2Sym& b);
Mat2Sym operator-(const Mat2Sym& a, const Mat2Sym& b);
Mat2Sym operator*(double s, const Mat2Sym& a);
Mat2Sym outer_sym(const Vec2& a, const Vec2& b);  // sym(a ⊗ b)

Vec2 operator+(const Vec2& a, const Vec2& b);
Vec2 operator-(const Vec2& a, const Vec2& b);
Vec2 operator*(double s, const Vec2& a);
double dot(const Vec2& a, const Vec2& b);

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a);
Vec3 operator*(double s, const Vec3& a);
double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);
Vec3 wedge(const Vec3& u, const Vec3& v);

Mat3 operator+(const Mat3& a, const Mat3& b);
Mat3 operator-(const Mat3& a, const Mat3& b);
Mat3 operator*(double s, const Mat3& a);
Mat3 operator*(const Mat3& a, const Mat3& b);
Vec3 operator*(const Mat3& a, const Vec3& x);
Mat3 transpose(const Mat3& a);
Mat3 outer(const Vec3& a, const Vec3& b);
Mat3 sym(const Mat3& a);
double trace(const Mat3& a);
double det(const Mat3& a);
double frobenius_dot(const Mat3& a, const Mat3& b);
double frobenius_norm(const Mat3& a);
/// Cofactor matrix; satisfies cof(F) = det(F) F^{-T} when F is invertible.
Mat3 cofactor(const Mat3& a);
Mat3 inverse(const Mat3& a);

/// Sum of the three principal 2x2 minors, the quadratic coefficient of
/// det(I + hF) = 1 + h tr F + h^2 iota2(F) + h^3 det F.
double iota2(const Mat3& f);

/// det(I + hF) minus its cubic expansion in h. Zero up to rounding.
double det_expansion_residual(const Mat3& f, double h);

/// det(F) - 1 evaluated through the expansion of det(I + D) with D = F - I,
/// which keeps relative accuracy when F is close to the identity.
double det_minus_one(const Mat3& f);

struct Svd3 {
  Mat3 u;
  Vec3 sigma;  // descending, nonnegative
  Mat3 v;
};

/// Singular value decomposition of a 3x3 matrix by cyclic Jacobi sweeps on
/// F^T F (tolerance 1e-12 relative to the largest entry).
Svd3 svd3(const Mat3& f);

/// Euclidean distance from F to SO(3).
double dist_so3(const Mat3& f);

/// Rotation closest to F in Frobenius norm (polar factor with det = +1).
Mat3 nearest_rotation(const Mat3& f);

/// Rodrigues rotation about a (not necessarily normalized) axis.
Mat3 rotation_axis_angle(const Vec3& axis, double angle);

/// Deterministic pseudo-random rotation: axis uniform on the sphere and angle
/// uniform in [0, pi), both drawn from a 64-bit Mersenne twister.
Mat3 random_rotation(std::uint64_t seed);

}  // namespace thinplate
