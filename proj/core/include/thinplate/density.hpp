#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "thinplate/algebra.hpp"
#include "thinplate/quadform.hpp"

namespace thinplate {

enum class DensityKind { SaintVenantKirchhoff, NeoHookean, MembraneCubic };

/// Stored energy density on 3x3 matrices. Immutable once built; use the
/// factories, which validate the Lamé parameters.
class DensityModel {
 public:
  static DensityModel svk(double mu, double lambda);
  static DensityModel neo_hookean(double mu, double lambda);
  static DensityModel membrane_cubic();
  /// Accepts "svk", "neo-hookean" or "membrane-cubic".
  static DensityModel from_name(std::string_view kind, double mu, double lambda);

  DensityKind kind() const { return kind_; }
  double mu() const { return mu_; }
  double lambda() const { return lambda_; }
  std::string name() const;

  /// True when the energy is +∞ on det F ≤ 0.
  bool orientation_preserving() const { return kind_ != DensityKind::SaintVenantKirchhoff; }

 private:
  DensityModel(DensityKind k, double mu, double lambda) : kind_(k), mu_(mu), lambda_(lambda) {}

  DensityKind kind_;
  double mu_;
  double lambda_;
};

/// W(F); +∞ for inadmissible F.
double eval_w(const DensityModel& model, const Mat3& f);

/// W(F) + π det F.
double eval_w_pi(const DensityModel& model, double pi, const Mat3& f);

/// ∂W/∂F. Throws std::domain_error where W is infinite.
Mat3 grad_w(const DensityModel& model, const Mat3& f);

/// D²W(I) by central differences with step 1e-4, symmetrized.
/// Throws std::invalid_argument for the membrane density.
QuadForm3 hessian_at_identity(const DensityModel& model);

struct FrameIndifferenceReport {
  int samples = 0;
  double max_violation = 0.0;  // max |W(RF) - W(F)| / (1 + |W(F)|)
};

FrameIndifferenceReport check_frame_indifference(const DensityModel& model, int samples, std::uint64_t seed);

/// Growth bounds of the membrane density under pressure π.
struct MembraneAssumptionReport {
  double pi = 0.0;
  double c1 = 0.0;            // sharp lower constant, 1/(3√3)
  double c2 = 0.0;
  double delta = 0.1;
  double c_delta = 0.0;       // max(1/3, 1/δ)
  double upper_constant = 0.0;  // max(c_delta, |π|)
  double fitted_lower = 0.0;  // min over samples of (W^π + c2) / |F|³ + π⁻
  double fitted_upper = 0.0;  // max over samples with det ≥ δ of W^π / (1 + |F|³)
  int samples = 0;
};

/// Samples matrices with det F ∈ (0, 10] and checks
///   W^π(F) ≥ c1|F|³ - c2 - π⁻|F|³   and, for det F ≥ δ,
///   W^π(F) ≤ max(C_δ, |π|)(1 + |F|³).
/// Throws std::invalid_argument if π ≤ -c1 and std::runtime_error if a sample
/// violates a bound.
MembraneAssumptionReport check_membrane_assumptions(double pi, int samples, std::uint64_t seed);

/// Smallest observed W(F) / dist(F, SO(3))² over random F with det F > 0 and
/// dist > 1e-3.
double fit_coercivity_constant(const DensityModel& model, int samples, std::uint64_t seed);

}  // namespace thinplate
