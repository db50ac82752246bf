#pragma once

#include <array>

#include "thinplate/algebra.hpp"

namespace thinplate {

/// Coordinates of a symmetric 2x2 matrix in the orthonormal basis
/// {e1⊗e1, e2⊗e2, (e1⊗e2 + e2⊗e1)/√2}.
std::array<double, 3> sym_coords(const Mat2Sym& g);
Mat2Sym from_sym_coords(const std::array<double, 3>& c);

/// Symmetric bilinear form on 3x3 matrices, stored as a 9x9 array acting on
/// the row-major flattening of its arguments.
struct QuadForm3 {
  std::array<double, 81> m{};

  double operator()(std::size_t i, std::size_t j) const { return m[9 * i + j]; }
  double& operator()(std::size_t i, std::size_t j) { return m[9 * i + j]; }

  double value(const Mat3& f) const { return bilinear(f, f); }
  double bilinear(const Mat3& f, const Mat3& g) const;
  /// The Riesz representative of B(f, ·), i.e. the gradient of value / 2.
  Mat3 apply(const Mat3& f) const;

  /// 2μ|sym F|² + λ(tr F)², built exactly.
  static QuadForm3 isotropic(double mu, double lambda);
};

/// Symmetric form on Mat2Sym in basis coordinates.
struct QuadForm2 {
  std::array<double, 9> m{};

  double operator()(std::size_t i, std::size_t j) const { return m[3 * i + j]; }
  double& operator()(std::size_t i, std::size_t j) { return m[3 * i + j]; }

  double value(const Mat2Sym& g) const { return bilinear(g, g); }
  double bilinear(const Mat2Sym& g, const Mat2Sym& k) const;
  /// Symmetric matrix A with value(g) = A : g for the caller's g, so that
  /// d value(g)[k] = 2 apply(g) : k.
  Mat2Sym apply(const Mat2Sym& g) const;
};

}  // namespace thinplate
