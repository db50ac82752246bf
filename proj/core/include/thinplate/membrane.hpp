#pragma once

#include <cstddef>
#include <vector>

#include "thinplate/algebra.hpp"

namespace thinplate {

/// Optimal third column for the membrane density under pressure π:
/// ā = |ā| v/|v| with |v||ā|⁴ + π|v|²|ā|² = 1. Throws std::invalid_argument
/// for v = 0.
Vec3 abar(const Vec3& v, double pi);

/// |v||a|⁴ + π|v|²|a|² - 1.
double abar_quartic_residual(const Vec3& v, double pi, const Vec3& a);

/// W^π((ξ1 | ξ2 | a)) for the membrane density.
double membrane_w_pi(const Vec3& xi1, const Vec3& xi2, const Vec3& a, double pi);

/// (W^π)_0(ξ) = (|ξ1|³ + |ξ2|³)/3 + (√2/3) ρ_π(|ξ1 ∧ ξ2|); +∞ when ξ1 ∧ ξ2 = 0.
double w_pi_zero(const Vec3& xi1, const Vec3& xi2, double pi);

/// j(x) = x√(4x + π²x⁴) - πx³, evaluated without cancellation.
double rho_j(double x, double pi);
/// h(y) = 4/√y + π√y, +∞ for y ≤ 0.
double rho_h(double y, double pi);
/// ρ_π(x) = h(j(x)). Throws std::invalid_argument for x ≤ 0.
double rho_pi(double x, double pi);

struct RadialProfile {
  double pi = 0.0;
  std::vector<double> x;
  std::vector<double> rho;
};

/// Log-spaced samples of ρ_π on [xmin, xmax].
RadialProfile make_radial_profile(double pi, double xmin = 1e-3, double xmax = 1e6, std::size_t n = 4000);

struct EnvelopeResult {
  std::vector<double> x;
  std::vector<double> hull;   // convex envelope at each sample abscissa
  double limit_constant = 0.0;
  double flatness = 0.0;      // max |hull - limit_constant| over the right half of the samples
  double tail_drop = 0.0;     // profile decrease over the last decade of samples
  double deviation = 0.0;     // max(flatness, tail_drop)
  double max_excess = 0.0;    // max (hull - profile), should be ≤ 0 up to rounding
  double min_second_difference = 0.0;
};

/// Convex envelope of the profile viewed as an even function on ℝ: the lower
/// hull (monotone chain) of the points (±x, ρ). Samples with ρ > 1e6 are left
/// out of the hull. For a decreasing profile the hull is flat at ρ(xmax) by
/// construction, so tail_drop is what tells whether xmax reached the limit.
/// Throws std::invalid_argument with fewer than 100 samples.
EnvelopeResult convex_envelope_1d(const RadialProfile& profile);

struct ConjectureResult {
  double pi = 0.0;
  double envelope_constant = 0.0;
  double c_pi = 0.0;    // (√2/3) envelope_constant
  double target = 0.0;  // 2√π
  double deviation = 0.0;
};

/// Envelope constant of ρ_π and the inferred membrane offset c_π. Requires π ≥ 0.
ConjectureResult conjecture_check(double pi, double xmin = 1e-3, double xmax = 1e6, std::size_t n = 4000);

}  // namespace thinplate
