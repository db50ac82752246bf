#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "thinplate/film3d.hpp"
#include "thinplate/reduction.hpp"

using namespace thinplate;

namespace {

const QuadForm3 kUnitLame = QuadForm3::isotropic(1, 1);

FilmParams params(double h, double alpha, double pi) {
  FilmParams p;
  p.h = h;
  p.alpha = alpha;
  p.pi = pi;
  return p;
}

Deformation3 perturbed_identity(const Grid3& g, double h, std::uint64_t seed, double amp) {
  Deformation3 y = identity_deformation(g, h);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  for (double& c : y.y) c += h * u(rng);
  return y;
}

double weighted_mean(const Grid2& g, std::span<const double> f) {
  const auto w = g.weights();
  double s = 0.0, ws = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    s += w[k] * f[k];
    ws += w[k];
  }
  return s / ws;
}

}  // namespace

TEST(Grid3, RejectsSingleLayer) { EXPECT_THROW(Grid3(Grid2(1, 1, 4, 4), 1), std::invalid_argument); }

TEST(FilmParams, Validation) {
  EXPECT_THROW(params(0.0, 2, 0).validate(), std::invalid_argument);
  EXPECT_THROW(params(1.5, 2, 0).validate(), std::invalid_argument);
  EXPECT_THROW(params(0.5, 0.5, 0).validate(), std::invalid_argument);
  EXPECT_THROW(params(0.5, 2, NAN).validate(), std::invalid_argument);
  EXPECT_NO_THROW(params(1.0, 1.0, -3.0).validate());
}

TEST(EvalRescaled, VanishesAtThinIdentity) {
  const Grid3 g(Grid2(1, 1, 6, 5), 3);
  for (double h : {1.0, 0.1, 1e-3}) {
    const Deformation3 id = identity_deformation(g, h);
    EXPECT_NEAR(eval_rescaled(id, params(h, 2, 0)), 0.0, 1e-14);
    EXPECT_NEAR(eval_rescaled(id, params(h, 2, 5)), 0.0, 1e-14);
  }
}

TEST(EvalRescaled, RigidMotionInvariant) {
  const Grid3 g(Grid2(1, 1, 5, 5), 3);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const double h = 0.3;
    const FilmParams p = params(h, 2, 1.5);
    Deformation3 y = perturbed_identity(g, h, seed, 0.05);
    const double e0 = eval_rescaled(y, p);
    const Mat3 r = random_rotation(seed + 100);
    const Vec3 c{{0.4, -1.2, 3.0}};
    for (std::size_t n = 0; n < g.nodes(); ++n) y.set(n, r * y.at(n) + c);
    EXPECT_NEAR(eval_rescaled(y, p), e0, 1e-9 * (1.0 + std::abs(e0)));
  }
}

TEST(EvalRescaled, GradientMatchesFiniteDifferences) {
  const Grid3 g(Grid2(1, 1, 4, 5), 2);
  for (double pi : {0.0, 2.0}) {
    const double h = 0.25;
    const FilmParams p = params(h, 2, pi);
    const Deformation3 y = perturbed_identity(g, h, 11, 0.05);
    std::vector<double> grad(y.y.size());
    eval_rescaled(y, p, grad);
    Deformation3 probe = y;
    const auto fd = oracle::fd_gradient(
        [&](std::span<const double> x) {
          std::copy(x.begin(), x.end(), probe.y.begin());
          return eval_rescaled(probe, p);
        },
        y.y, 1e-6);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < fd.size(); ++i) {
      err = std::max(err, std::abs(fd[i] - grad[i]));
      scale = std::max(scale, std::abs(fd[i]));
    }
    EXPECT_LT(err, 1e-6 * scale) << "pi " << pi;
  }
}

TEST(EvalRescaled, InvertedCellIsInadmissible) {
  const Grid3 g(Grid2(1, 1, 4, 4), 2);
  Deformation3 y = identity_deformation(g, 0.5);
  for (std::size_t n = 0; n < g.nodes(); ++n) y.y[3 * n + 2] = -y.y[3 * n + 2];
  EXPECT_TRUE(std::isinf(eval_rescaled(y, params(0.5, 2, 0))));
}

TEST(Minimize3d, NoPressureKeepsIdentity) {
  const Grid3 g(Grid2(1, 1, 5, 5), 2);
  const FilmParams p = params(0.25, 2, 0);
  const Minimize3dResult r = minimize3d(p, identity_deformation(g, p.h));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.rescaled_value, 0.0, 1e-12);
}

TEST(Minimize3d, PressureLowersEnergy) {
  const Grid3 g(Grid2(1, 1, 5, 5), 2);
  const FilmParams p = params(0.25, 2, 1);
  const Minimize3dResult r = minimize3d(p, identity_deformation(g, p.h));
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.rescaled_value, 0.0);
  EXPECT_NEAR(r.value, r.rescaled_value * std::pow(p.h, 4.0), 1e-14);
}

TEST(Minimize3d, InadmissibleStartThrows) {
  const Grid3 g(Grid2(1, 1, 4, 4), 2);
  Deformation3 y = identity_deformation(g, 0.5);
  for (std::size_t n = 0; n < g.nodes(); ++n) y.y[3 * n + 2] = -y.y[3 * n + 2];
  EXPECT_THROW(minimize3d(params(0.5, 2, 0), y), std::invalid_argument);
}

TEST(AlignRigid, UndoesRigidMotion) {
  const Grid3 g(Grid2(1, 1, 5, 5), 2);
  const double h = 0.2;
  const Deformation3 id = identity_deformation(g, h);
  Deformation3 y = id;
  const Mat3 r = rotation_axis_angle(Vec3{{0.2, 1.0, 0.3}}, 0.4);
  for (std::size_t n = 0; n < g.nodes(); ++n) y.set(n, r * y.at(n) + Vec3{{1, 2, 3}});
  align_rigid(y, h);
  for (std::size_t i = 0; i < y.y.size(); ++i) EXPECT_NEAR(y.y[i], id.y[i], 1e-12);
}

TEST(ExtractUv, IdentityGivesZero) {
  const Grid3 g(Grid2(1, 1, 5, 6), 2);
  const PlateState s = extract_uv(identity_deformation(g, 0.1), params(0.1, 2, 0));
  for (double d : s.dofs) EXPECT_NEAR(d, 0.0, 1e-12);
}

TEST(ExtractUv, TranslationIsRemoved) {
  const Grid3 g(Grid2(1, 1, 5, 5), 2);
  const double h = 0.2;
  const FilmParams p = params(h, 2.5, 0);
  const Deformation3 y = perturbed_identity(g, h, 3, 0.1);
  Deformation3 shifted = y;
  for (std::size_t n = 0; n < g.nodes(); ++n) shifted.set(n, y.at(n) + Vec3{{0.3, -0.2, 0.7}});
  const PlateState a = extract_uv(y, p), b = extract_uv(shifted, p);
  for (std::size_t i = 0; i < a.dofs.size(); ++i) EXPECT_NEAR(a.dofs[i], b.dofs[i], 1e-9 * (1.0 + std::abs(a.dofs[i])));
}

TEST(ExtractUv, RejectsAlphaOne) {
  const Grid3 g(Grid2(1, 1, 4, 4), 2);
  EXPECT_THROW(extract_uv(identity_deformation(g, 0.5), params(0.5, 1, 0)), std::invalid_argument);
}

TEST(ExtractUv, RecoversRecoveryDisplacement) {
  const SmoothDisplacement disp = SmoothDisplacement::sine_bump(0.1);
  const Grid3 g(Grid2(1, 1, 17, 17), 4);
  const double h = 1.0 / 16.0;
  const Deformation3 y = recovery_vk(disp, kUnitLame, 1.0, 2.0, g, h);
  const PlateState s = extract_uv(y, params(h, 2, 1));
  std::vector<double> vstar(g.plane.nodes());
  for (std::size_t j = 0; j < g.plane.ny; ++j)
    for (std::size_t i = 0; i < g.plane.nx; ++i) vstar[g.plane.index(i, j)] = disp.v(g.plane.x(i), g.plane.y(j));
  const double shift = weighted_mean(g.plane, vstar);
  for (std::size_t k = 0; k < vstar.size(); ++k) {
    EXPECT_NEAR(s.v()[k], vstar[k] - shift, 1e-3);
    EXPECT_NEAR(s.u1()[k], 0.0, 1e-2);
    EXPECT_NEAR(s.u2()[k], 0.0, 1e-2);
  }
}

TEST(Recovery, FlatPlateIsThinIdentity) {
  const Grid3 g(Grid2(1, 1, 5, 5), 2);
  const double h = 0.125;
  const Deformation3 id = identity_deformation(g, h);
  const Deformation3 yk = recovery_kirchhoff(CylinderIsometry{}, make_kirchhoff_fields(CylinderIsometry{}, kUnitLame, 0.0), g, h);
  const Deformation3 yv = recovery_vk(SmoothDisplacement::zero(), kUnitLame, 0.0, 2.0, g, h);
  for (std::size_t i = 0; i < id.y.size(); ++i) {
    EXPECT_NEAR(yk.y[i], id.y[i], 1e-14);
    EXPECT_NEAR(yv.y[i], id.y[i], 1e-14);
  }
}

TEST(Recovery, VkRejectsAlphaBelowTwo) {
  const Grid3 g(Grid2(1, 1, 4, 4), 2);
  EXPECT_THROW(recovery_vk(SmoothDisplacement::zero(), kUnitLame, 0.0, 1.5, g, 0.1), std::invalid_argument);
}

TEST(RecoveryTarget, SineBumpAgainstIndependentQuadrature) {
  const Grid2 plane(1, 1, 8, 8);
  const SmoothDisplacement bump = SmoothDisplacement::sine_bump(0.1);
  EXPECT_NEAR(vk_recovery_target(bump, kUnitLame, 0.0, 2.0, plane), 0.10924700140271798, 1e-10);
  EXPECT_NEAR(vk_recovery_target(bump, kUnitLame, 1.0, 2.0, plane), -0.0409703245954664, 1e-10);
}

TEST(RecoveryTarget, LinearRegimeClosedForm) {
  // With u = 0 only the bending term survives: A²π⁴/9, plus π²κ|S|/2 = -1/6.
  const Grid2 plane(1, 1, 8, 8);
  const double a = 0.1, p4 = std::pow(std::numbers::pi, 4);
  EXPECT_NEAR(vk_recovery_target(SmoothDisplacement::sine_bump(a), kUnitLame, 1.0, 3.0, plane),
              a * a * p4 / 9.0 - 1.0 / 6.0, 1e-12);
}

TEST(RecoveryTarget, StretchNoPressure) {
  // u = βx', v = 0: ½ Q2(β I) = ½ · 20/3 β² per unit area.
  const Grid2 plane(1, 1, 8, 8);
  EXPECT_NEAR(vk_recovery_target(SmoothDisplacement::affine_stretch(0.1), kUnitLame, 0.0, 2.0, plane),
              0.5 * 20.0 / 3.0 * 0.01, 1e-13);
}

TEST(RecoveryTarget, Cylinder) {
  const Grid2 plane(1, 1, 8, 8);
  EXPECT_NEAR(kirchhoff_recovery_target(CylinderIsometry{2.0}, kUnitLame, 1.0, plane), 1.0 / 36.0 - 0.3, 1e-12);
  EXPECT_NEAR(kirchhoff_recovery_target(CylinderIsometry{}, kUnitLame, 1.0, plane), -0.3, 1e-12);
}

TEST(KirchhoffFields, CylinderOptimalShifts) {
  const CylinderIsometry iso{2.0};
  const KirchhoffFields f = make_kirchhoff_fields(iso, kUnitLame, 1.0);
  // Ḡ = argmin Q2^π = -0.2 I at unit Lamé constants and pressure.
  EXPECT_NEAR(f.gbar.xx, -0.2, 1e-10);
  EXPECT_NEAR(f.gbar.yy, -0.2, 1e-10);
  EXPECT_NEAR(f.gbar.xy, 0.0, 1e-10);
}

TEST(SuccessiveRate, SyntheticPowerLaw) {
  const std::vector<double> hs{0.5, 0.25, 0.125, 0.0625};
  std::vector<double> e;
  for (double h : hs) e.push_back(3.0 + 2.0 * h * h);
  EXPECT_NEAR(fit_successive_rate(hs, e), 2.0, 1e-12);
  e.clear();
  for (double h : hs) e.push_back(-1.0 + 0.7 * h);
  EXPECT_NEAR(fit_successive_rate(hs, e), 1.0, 1e-12);
}

TEST(SuccessiveRate, TooFewPointsIsNan) {
  const std::vector<double> hs{0.5, 0.25}, e{1.0, 2.0};
  EXPECT_TRUE(std::isnan(fit_successive_rate(hs, e)));
}

TEST(RecoveryRuns, KirchhoffResidualShrinks) {
  FilmParams base = params(1.0, 2.0, 1.0);
  const std::vector<double> hs{0.25, 0.125, 0.0625};
  const RecoveryReport rep = run_kirchhoff_recovery(2.0, base, hs, [](double h) {
    const auto n = static_cast<std::size_t>(std::max(16.0, 2.0 / h)) + 1;
    return Grid3(Grid2(1, 1, n, n), 8);
  });
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_LT(rep.rows[2].residual, rep.rows[0].residual);
  // The neo-Hookean Hessian comes from finite differences, good to ~1e-8.
  for (const RecoveryRow& row : rep.rows) EXPECT_NEAR(row.target, 1.0 / 36.0 - 0.3, 1e-7);
}

TEST(GammaSweep, RejectsBadHList) {
  const Grid3 g(Grid2(1, 1, 4, 4), 2);
  const FilmParams base = params(1.0, 2.0, 1.0);
  const std::vector<double> inc{0.1, 0.2}, big{2.0, 0.5};
  EXPECT_THROW(gamma_sweep(base, inc, g), std::invalid_argument);
  EXPECT_THROW(gamma_sweep(base, big, g), std::invalid_argument);
}

TEST(GammaSweep, DeterministicAcrossRuns) {
  const Grid3 g(Grid2(1, 1, 5, 5), 2);
  const FilmParams base = params(1.0, 2.0, 1.0);
  const std::vector<double> hs{0.5, 0.25};
  const auto a = gamma_sweep(base, hs, g), b = gamma_sweep(base, hs, g);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].rescaled_min, b[k].rescaled_min);
    EXPECT_EQ(a[k].u_err, b[k].u_err);
    EXPECT_EQ(a[k].v_err, b[k].v_err);
    EXPECT_EQ(a[k].iters, b[k].iters);
  }
}

TEST(SweepLimit, HomogeneousPlate) {
  // Homogeneous strain gives -2/15 per area for linearized von Kármán; with
  // π²κ|S|/2 = -1/6 that lands on m_π|S|/2 = -0.3, as in the bending regime.
  const Grid2 plane(1, 1, 8, 8);
  FilmParams p = params(1.0, 3.0, 1.0);
  p.density = DensityModel::svk(1, 1);
  const double vklin = sweep_limit_value(p, plane);
  EXPECT_NEAR(vklin, -0.3, 1e-6);
  p.alpha = 1.5;
  EXPECT_NEAR(sweep_limit_value(p, plane), -0.3, 1e-7);
}
