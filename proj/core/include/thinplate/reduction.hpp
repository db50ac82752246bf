#pragma once

#include <array>
#include <cstdint>

#include "thinplate/algebra.hpp"
#include "thinplate/quadform.hpp"

namespace thinplate {

/// Q2^π(G) = Q2(G) + π L·G + π² κ, with L given by its coefficients in the
/// orthonormal Mat2Sym basis (see sym_coords).
struct PressureReduction {
  std::array<double, 3> L{};
  double kappa = 0.0;
  /// Largest relative residual of the affine-in-π identity on the check set.
  double residual = 0.0;

  double apply_L(const Mat2Sym& g) const;
};

/// Q2(G) = min over a of Q3(G + a⊗e3).
QuadForm2 reduce_q2(const QuadForm3& q3);

struct Q2PiResult {
  double value = 0.0;
  Vec3 a;  // minimizing third column
};

/// min over a of Q3(G + a⊗e3) + 2π a3, with its minimizer.
Q2PiResult q2pi_value(const QuadForm3& q3, double pi, const Mat2Sym& g);

/// Recovers L and κ from three pressure values and checks the identity on 100
/// random (G, π) drawn from the given seed. Throws NumericalFailure if the
/// relative residual exceeds 1e-10.
PressureReduction extract_l_kappa(const QuadForm3& q3, std::uint64_t seed = 0x5eed);

struct MPiResult {
  double value = 0.0;
  Mat2Sym g;  // argmin
  Vec3 a;     // optimal third column at the argmin
};

/// m_π = min over G of Q2^π(G) + 2π tr G, solved jointly in (G, a).
MPiResult m_pi(const QuadForm3& q3, double pi);

/// The same minimum computed from an already reduced (Q2, L, κ):
/// min over G of Q2(G) + π L·G + 2π tr G, plus π²κ.
MPiResult m_pi_from_reduction(const QuadForm2& q2, const PressureReduction& red, double pi);

struct IsotropicForms {
  QuadForm2 q2;
  PressureReduction reduction;
  double m_pi = 0.0;  // -3π²/(2μ + 3λ)
  Mat2Sym g_min;      // -π/(2μ + 3λ) I
};

/// Closed forms for Q3 = 2μ|sym F|² + λ(tr F)²:
///   Q2(G) = 2μ|G|² + 2μλ/(2μ+λ) (tr G)²,  L G = -2λ/(2μ+λ) tr G,  κ = -1/(2μ+λ).
/// Requires μ > 0 and λ > -2μ/3.
IsotropicForms isotropic_closed_forms(double mu, double lambda, double pi);

}  // namespace thinplate
