#pragma once

#include <cmath>

#include "thinplate/algebra.hpp"

namespace thinplate {

/// The cylindrical isometry y(x') = (x1, r sin(x2/r), r(1 - cos(x2/r))).
/// A non-finite radius gives the flat sheet (x', 0).
struct CylinderIsometry {
  double r = INFINITY;

  bool flat() const { return !std::isfinite(r); }

  Vec3 position(double x1, double x2) const;
  Vec3 d1(double x1, double x2) const;
  Vec3 d2(double x1, double x2) const;
  /// Second derivatives ∂11 y, ∂12 y, ∂22 y.
  Vec3 d11(double x1, double x2) const;
  Vec3 d12(double x1, double x2) const;
  Vec3 d22(double x1, double x2) const;
  /// Unit normal b = ∂1y ∧ ∂2y.
  Vec3 normal(double x1, double x2) const;
  /// ∂1 b, ∂2 b.
  Vec3 normal_d1(double x1, double x2) const;
  Vec3 normal_d2(double x1, double x2) const;
  /// Second fundamental form ∇'yᵀ∇'b.
  Mat2Sym second_fundamental_form(double x1, double x2) const;
};

}  // namespace thinplate
