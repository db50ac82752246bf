#include "thinplate/isometry.hpp"

namespace thinplate {

Vec3 CylinderIsometry::position(double x1, double x2) const {
  if (flat()) return {{x1, x2, 0.0}};
  const double t = x2 / r;
  return {{x1, r * std::sin(t), r * (1.0 - std::cos(t))}};
}

Vec3 CylinderIsometry::d1(double, double) const { return Vec3::unit(0); }

Vec3 CylinderIsometry::d2(double, double x2) const {
  if (flat()) return Vec3::unit(1);
  const double t = x2 / r;
  return {{0.0, std::cos(t), std::sin(t)}};
}

Vec3 CylinderIsometry::d11(double, double) const { return {}; }
Vec3 CylinderIsometry::d12(double, double) const { return {}; }

Vec3 CylinderIsometry::d22(double, double x2) const {
  if (flat()) return {};
  const double t = x2 / r;
  return {{0.0, -std::sin(t) / r, std::cos(t) / r}};
}

Vec3 CylinderIsometry::normal(double x1, double x2) const { return wedge(d1(x1, x2), d2(x1, x2)); }

Vec3 CylinderIsometry::normal_d1(double x1, double x2) const {
  return wedge(d11(x1, x2), d2(x1, x2)) + wedge(d1(x1, x2), d12(x1, x2));
}

Vec3 CylinderIsometry::normal_d2(double x1, double x2) const {
  return wedge(d12(x1, x2), d2(x1, x2)) + wedge(d1(x1, x2), d22(x1, x2));
}

Mat2Sym CylinderIsometry::second_fundamental_form(double x1, double x2) const {
  const Vec3 a1 = d1(x1, x2);
  const Vec3 a2 = d2(x1, x2);
  const Vec3 b1 = normal_d1(x1, x2);
  const Vec3 b2 = normal_d2(x1, x2);
  return {dot(a1, b1), dot(a2, b2), 0.5 * (dot(a1, b2) + dot(a2, b1))};
}

}  // namespace thinplate
