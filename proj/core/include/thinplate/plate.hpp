#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "thinplate/algebra.hpp"
#include "thinplate/grid.hpp"
#include "thinplate/quadform.hpp"
#include "thinplate/reduction.hpp"

namespace thinplate {

/// In-plane displacement u and out-of-plane displacement v on the nodes of a
/// grid. dofs is laid out as [u1 (N), u2 (N), v (N)].
struct PlateState {
  Grid2 grid;
  std::vector<double> dofs;

  PlateState() = default;
  explicit PlateState(const Grid2& g) : grid(g), dofs(3 * g.nodes(), 0.0) {}

  std::size_t nodes() const { return grid.nodes(); }
  std::span<double> u1() { return {dofs.data(), nodes()}; }
  std::span<double> u2() { return {dofs.data() + nodes(), nodes()}; }
  std::span<double> v() { return {dofs.data() + 2 * nodes(), nodes()}; }
  std::span<const double> u1() const { return {dofs.data(), nodes()}; }
  std::span<const double> u2() const { return {dofs.data() + nodes(), nodes()}; }
  std::span<const double> v() const { return {dofs.data() + 2 * nodes(), nodes()}; }
};

enum class Regime { VonKarman, VonKarmanLinear, BendingLinear };

/// Accepts "vk", "vklin" or "benlin".
Regime parse_regime(std::string_view name);
std::string_view regime_name(Regime r);

/// Everything a limit functional needs: the regime, the pressure and the
/// reduced forms of Q3.
struct LimitFunctionalSpec {
  Regime regime = Regime::VonKarman;
  double pi = 0.0;
  QuadForm3 q3;
  QuadForm2 q2;
  PressureReduction reduction;
  MPiResult mpi;

  static LimitFunctionalSpec make(Regime regime, double pi, const QuadForm3& q3);
};

// Each functional returns its value and, when grad is non-empty, writes the
// gradient with respect to state.dofs into it.

/// ½∫Q2(e'(u) + ½∇v⊗∇v) + (1/24)∫Q2(∇²v). Requires the vK regime.
double eval_evk(const PlateState& s, const LimitFunctionalSpec& spec, std::span<double> grad = {});

/// eval_evk + π∫(½ L(e'(u) + ½∇v⊗∇v) + div u + ½|∇v|²). Requires the vK regime.
double eval_evk_pi(const PlateState& s, const LimitFunctionalSpec& spec, std::span<double> grad = {});

/// ½∫Q2(e'(u)) + (1/24)∫Q2(∇²v) + π∫(½ L e'(u) + div u). Requires the vK-lin regime.
double eval_evklin_pi(const PlateState& s, const LimitFunctionalSpec& spec, std::span<double> grad = {});

struct BendingValue {
  double value = 0.0;
  double constraint_residual = 0.0;  // ∫|e'(u) + ½∇v⊗∇v| + ∫|det ∇²v|
};

/// (1/24)∫Q2(∇²v) with the linearized isometry constraint residual.
/// Requires the ben-lin regime.
BendingValue eval_ebenlin(const PlateState& s, const LimitFunctionalSpec& spec, std::span<double> grad = {});

/// Limit functional of the bending regimes with pressure, evaluated through
/// the thickness: ∫∫ ½[Q2^π(Ḡ - x3∇²v) + 2π tr(Ḡ - x3∇²v)] with Ḡ the
/// minimizer of m_π and Q2^π computed from Q3 directly. Requires ben-lin.
double eval_bending_limit_pi(const PlateState& s, const LimitFunctionalSpec& spec, std::span<double> grad = {});

/// The functional minimized in the configured regime: eval_evk_pi, eval_evklin_pi
/// or the value of eval_ebenlin.
double eval_regime(const PlateState& s, const LimitFunctionalSpec& spec, std::span<double> grad = {});

/// (1/24)∫_S Q2(II) for the cylinder of radius r (r = ±∞ is the flat sheet),
/// with II evaluated at every node. Throws std::invalid_argument for r = 0.
double eval_eben_cylinder(double r, const Grid2& grid, const QuadForm3& q3);

/// ∫_S (|∂1y|³ + |∂2y|³)/3 + c_π with c_π the certified membrane offset.
/// Throws std::invalid_argument for π < 0 and NumericalFailure if the
/// envelope is not constant within 1e-3.
double eval_membrane_example(std::span<const Vec3> y, double pi, const Grid2& grid,
                             std::span<Vec3> grad = {});

/// e'(u) at every node.
std::vector<Mat2Sym> linear_strain(const PlateState& s);

struct Minimize2dOptions {
  double tol = 1e-8;
  int max_iter = 20000;
};

struct Minimize2dResult {
  PlateState state;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  double grad_norm = 0.0;
  bool converged = false;
  std::vector<double> history;
};

/// L-BFGS minimization of eval_regime with null directions projected out after
/// every step: u to zero mean and zero mean rotation, v to zero mean (vK) or
/// zero mean and zero mean gradient (vK-lin, ben-lin).
Minimize2dResult minimize2d(const LimitFunctionalSpec& spec, const PlateState& init, const Minimize2dOptions& opt = {});

/// Projection used by minimize2d, exposed for tests.
void project_plate_gauge(PlateState& s, Regime regime);

}  // namespace thinplate
