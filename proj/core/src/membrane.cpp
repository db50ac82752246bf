#include "thinplate/membrane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace thinplate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRhoCut = 1e6;

double cross(double ox, double oy, double ax, double ay, double bx, double by) {
  return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}

}  // namespace

Vec3 abar(const Vec3& v, double pi) {
  const double x = norm(v);
  if (!(x > 0.0)) throw std::invalid_argument("abar needs a nonzero vector");
  const double mag = std::sqrt(2.0 / (std::sqrt(4.0 * x + pi * pi * x * x * x * x) + pi * x * x));
  return (mag / x) * v;
}

double abar_quartic_residual(const Vec3& v, double pi, const Vec3& a) {
  const double x = norm(v);
  const double m2 = dot(a, a);
  return x * m2 * m2 + pi * x * x * m2 - 1.0;
}

double membrane_w_pi(const Vec3& xi1, const Vec3& xi2, const Vec3& a, double pi) {
  const double d = dot(wedge(xi1, xi2), a);
  if (!(d > 0.0)) return kInf;
  const double n1 = norm(xi1);
  const double n2 = norm(xi2);
  const double n3 = norm(a);
  return (n1 * n1 * n1 + n2 * n2 * n2 + n3 * n3 * n3) / 3.0 + 1.0 / d + pi * d;
}

double w_pi_zero(const Vec3& xi1, const Vec3& xi2, double pi) {
  const double x = norm(wedge(xi1, xi2));
  if (!(x > 0.0)) return kInf;
  const double n1 = norm(xi1);
  const double n2 = norm(xi2);
  return (n1 * n1 * n1 + n2 * n2 * n2) / 3.0 + std::sqrt(2.0) / 3.0 * rho_pi(x, pi);
}

double rho_j(double x, double pi) {
  if (x <= 0.0) return 0.0;
  return 4.0 * x * x / (std::sqrt(4.0 * x + pi * pi * x * x * x * x) + pi * x * x);
}

double rho_h(double y, double pi) {
  if (!(y > 0.0)) return kInf;
  const double s = std::sqrt(y);
  return 4.0 / s + pi * s;
}

double rho_pi(double x, double pi) {
  if (!(x > 0.0)) throw std::invalid_argument("rho_pi needs x > 0");
  return rho_h(rho_j(x, pi), pi);
}

RadialProfile make_radial_profile(double pi, double xmin, double xmax, std::size_t n) {
  if (!(xmin > 0.0) || !(xmax > xmin)) throw std::invalid_argument("profile range must satisfy 0 < xmin < xmax");
  if (n < 2) throw std::invalid_argument("profile needs at least two samples");
  RadialProfile p;
  p.pi = pi;
  p.x.resize(n);
  p.rho.resize(n);
  const double l0 = std::log(xmin);
  const double l1 = std::log(xmax);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n - 1);
    p.x[k] = k + 1 == n ? xmax : std::exp(l0 + t * (l1 - l0));
    p.rho[k] = rho_pi(p.x[k], pi);
  }
  return p;
}

EnvelopeResult convex_envelope_1d(const RadialProfile& profile) {
  const std::size_t n = profile.x.size();
  if (n < 100 || profile.rho.size() != n) throw std::invalid_argument("envelope needs at least 100 samples");

  std::vector<std::pair<double, double>> pts;
  pts.reserve(2 * n);
  for (std::size_t k = n; k-- > 0;)
    if (profile.rho[k] <= kRhoCut) pts.emplace_back(-profile.x[k], profile.rho[k]);
  for (std::size_t k = 0; k < n; ++k)
    if (profile.rho[k] <= kRhoCut) pts.emplace_back(profile.x[k], profile.rho[k]);
  if (pts.size() < 2) throw std::invalid_argument("profile has no samples below the cutoff");

  std::vector<std::pair<double, double>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2].first, hull[hull.size() - 2].second,
                                     hull.back().first, hull.back().second, p.first, p.second) <= 0.0)
      hull.pop_back();
    hull.push_back(p);
  }

  EnvelopeResult out;
  out.x = profile.x;
  out.hull.resize(n);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double xk = profile.x[k];
    if (xk < hull.front().first || xk > hull.back().first) {
      out.hull[k] = kInf;
      continue;
    }
    while (seg + 1 < hull.size() - 1 && hull[seg + 1].first < xk) ++seg;
    const auto& a = hull[seg];
    const auto& b = hull[seg + 1];
    const double t = (b.first > a.first) ? (xk - a.first) / (b.first - a.first) : 0.0;
    out.hull[k] = a.second + t * (b.second - a.second);
  }

  out.limit_constant = out.hull[n - 1];
  for (std::size_t k = n / 2; k < n; ++k)
    out.flatness = std::max(out.flatness, std::abs(out.hull[k] - out.limit_constant));
  std::size_t decade = 0;
  while (decade + 1 < n && profile.x[decade] < 0.1 * profile.x[n - 1]) ++decade;
  out.tail_drop = std::abs(profile.rho[decade] - profile.rho[n - 1]);
  out.deviation = std::max(out.flatness, out.tail_drop);
  out.max_excess = -kInf;
  for (std::size_t k = 0; k < n; ++k)
    if (std::isfinite(out.hull[k])) out.max_excess = std::max(out.max_excess, out.hull[k] - profile.rho[k]);

  // Convexity in the sample abscissae: slopes must be nondecreasing.
  out.min_second_difference = kInf;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (!std::isfinite(out.hull[k - 1]) || !std::isfinite(out.hull[k + 1])) continue;
    const double s0 = (out.hull[k] - out.hull[k - 1]) / (out.x[k] - out.x[k - 1]);
    const double s1 = (out.hull[k + 1] - out.hull[k]) / (out.x[k + 1] - out.x[k]);
    out.min_second_difference = std::min(out.min_second_difference, s1 - s0);
  }
  return out;
}

ConjectureResult conjecture_check(double pi, double xmin, double xmax, std::size_t n) {
  if (!(pi >= 0.0) || !std::isfinite(pi)) throw std::invalid_argument("conjecture check needs pi >= 0");
  const EnvelopeResult env = convex_envelope_1d(make_radial_profile(pi, xmin, xmax, n));
  ConjectureResult r;
  r.pi = pi;
  r.envelope_constant = env.limit_constant;
  r.c_pi = std::sqrt(2.0) / 3.0 * env.limit_constant;
  r.target = 2.0 * std::sqrt(pi);
  r.deviation = env.deviation;
  return r;
}

}  // namespace thinplate
