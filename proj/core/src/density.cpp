#include "thinplate/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace thinplate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_lame(double mu, double lambda) {
  if (!std::isfinite(mu) || !std::isfinite(lambda)) throw std::invalid_argument("Lamé parameters must be finite");
  if (mu <= 0.0) throw std::invalid_argument("mu must be positive");
  if (lambda <= -2.0 * mu / 3.0) throw std::invalid_argument("lambda must exceed -2 mu / 3");
}

Mat3 random_matrix(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Mat3 f;
  for (double& x : f.a) x = d(rng);
  return f;
}

// Random matrix with positive determinant, obtained by flipping a column.
Mat3 random_orientation_preserving(std::mt19937_64& rng, double scale) {
  Mat3 f = random_matrix(rng, scale);
  if (det(f) < 0.0) f.set_column(0, -f.column(0));
  return f;
}

}  // namespace

DensityModel DensityModel::svk(double mu, double lambda) {
  require_lame(mu, lambda);
  return {DensityKind::SaintVenantKirchhoff, mu, lambda};
}

DensityModel DensityModel::neo_hookean(double mu, double lambda) {
  require_lame(mu, lambda);
  return {DensityKind::NeoHookean, mu, lambda};
}

DensityModel DensityModel::membrane_cubic() { return {DensityKind::MembraneCubic, 0.0, 0.0}; }

DensityModel DensityModel::from_name(std::string_view kind, double mu, double lambda) {
  if (kind == "svk") return svk(mu, lambda);
  if (kind == "neo-hookean") return neo_hookean(mu, lambda);
  if (kind == "membrane-cubic") return membrane_cubic();
  throw std::invalid_argument("unknown density kind '" + std::string(kind) + "'");
}

std::string DensityModel::name() const {
  switch (kind_) {
    case DensityKind::SaintVenantKirchhoff:
      return "svk";
    case DensityKind::NeoHookean:
      return "neo-hookean";
    case DensityKind::MembraneCubic:
      return "membrane-cubic";
  }
  return "unknown";
}

double eval_w(const DensityModel& model, const Mat3& f) {
  switch (model.kind()) {
    case DensityKind::SaintVenantKirchhoff: {
      const Mat3 e = transpose(f) * f - Mat3::identity();
      const double tr = trace(e);
      return 0.25 * model.mu() * frobenius_dot(e, e) + 0.125 * model.lambda() * tr * tr;
    }
    case DensityKind::NeoHookean: {
      const double jm1 = det_minus_one(f);
      if (!(jm1 > -1.0)) return kInf;
      const double logj = std::log1p(jm1);
      const Mat3 d = f - Mat3::identity();
      // |F|² - 3 = 2 tr D + |D|², accurate near the identity.
      const double norm_excess = 2.0 * trace(d) + frobenius_dot(d, d);
      return 0.5 * model.mu() * (norm_excess - 2.0 * logj) + 0.5 * model.lambda() * logj * logj;
    }
    case DensityKind::MembraneCubic: {
      const double j = det(f);
      if (!(j > 0.0)) return kInf;
      double cubes = 0.0;
      for (std::size_t c = 0; c < 3; ++c) {
        const double n = norm(f.column(c));
        cubes += n * n * n;
      }
      return cubes / 3.0 + 1.0 / j;
    }
  }
  return kInf;
}

double eval_w_pi(const DensityModel& model, double pi, const Mat3& f) {
  const double w = eval_w(model, f);
  if (!std::isfinite(w)) return w;
  return w + pi * det(f);
}

Mat3 grad_w(const DensityModel& model, const Mat3& f) {
  switch (model.kind()) {
    case DensityKind::SaintVenantKirchhoff: {
      const Mat3 e = transpose(f) * f - Mat3::identity();
      return model.mu() * (f * e) + (0.5 * model.lambda() * trace(e)) * f;
    }
    case DensityKind::NeoHookean: {
      const double jm1 = det_minus_one(f);
      if (!(jm1 > -1.0)) throw std::domain_error("neo-Hookean gradient requested at det F <= 0");
      const double j = 1.0 + jm1;
      const Mat3 finv_t = (1.0 / j) * cofactor(f);
      const double logj = std::log1p(jm1);
      return model.mu() * (f - finv_t) + (model.lambda() * logj) * finv_t;
    }
    case DensityKind::MembraneCubic: {
      const double j = det(f);
      if (!(j > 0.0)) throw std::domain_error("membrane density gradient requested at det F <= 0");
      Mat3 g;
      for (std::size_t c = 0; c < 3; ++c) {
        const Vec3 col = f.column(c);
        g.set_column(c, norm(col) * col);
      }
      return g - (1.0 / (j * j)) * cofactor(f);
    }
  }
  return {};
}

QuadForm3 hessian_at_identity(const DensityModel& model) {
  if (model.kind() == DensityKind::MembraneCubic)
    throw std::invalid_argument("hessian_at_identity is defined for the elastic densities only");
  constexpr double eps = 1e-4;
  const Mat3 id = Mat3::identity();
  auto w_at = [&](std::size_t i, double si, std::size_t j, double sj) {
    Mat3 f = id;
    f.a[i] += si * eps;
    f.a[j] += sj * eps;
    return eval_w(model, f);
  };
  QuadForm3 q;
  for (std::size_t i = 0; i < 9; ++i) {
    for (std::size_t j = i; j < 9; ++j) {
      const double v =
          (w_at(i, 1, j, 1) - w_at(i, 1, j, -1) - w_at(i, -1, j, 1) + w_at(i, -1, j, -1)) / (4.0 * eps * eps);
      q(i, j) = v;
      q(j, i) = v;
    }
  }
  return q;
}

FrameIndifferenceReport check_frame_indifference(const DensityModel& model, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FrameIndifferenceReport report;
  report.samples = samples;
  for (int s = 0; s < samples; ++s) {
    const Mat3 r = random_rotation(rng());
    const Mat3 f = random_orientation_preserving(rng, 2.0);
    const double w = eval_w(model, f);
    const double wr = eval_w(model, r * f);
    double violation = 0.0;
    if (std::isfinite(w) != std::isfinite(wr)) {
      violation = kInf;
    } else if (std::isfinite(w)) {
      violation = std::abs(wr - w) / (1.0 + std::abs(w));
    }
    report.max_violation = std::max(report.max_violation, violation);
  }
  return report;
}

MembraneAssumptionReport check_membrane_assumptions(double pi, int samples, std::uint64_t seed) {
  MembraneAssumptionReport rep;
  rep.pi = pi;
  rep.c1 = 1.0 / (3.0 * std::sqrt(3.0));
  rep.c2 = 0.0;
  rep.delta = 0.1;
  rep.c_delta = std::max(1.0 / 3.0, 1.0 / rep.delta);
  rep.upper_constant = std::max(rep.c_delta, std::abs(pi));
  rep.samples = samples;
  if (!std::isfinite(pi) || pi <= -rep.c1)
    throw std::invalid_argument("pressure must exceed -c1 = -1/(3 sqrt 3) for the membrane density");

  const DensityModel model = DensityModel::membrane_cubic();
  const double pi_minus = std::max(0.0, -pi);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> target_det(0.0, 10.0);
  rep.fitted_lower = kInf;
  rep.fitted_upper = 0.0;
  for (int s = 0; s < samples; ++s) {
    Mat3 f = random_orientation_preserving(rng, 2.0);
    double t = target_det(rng);
    if (t == 0.0) t = 1e-3;
    f = std::cbrt(t / det(f)) * f;
    const double w = eval_w_pi(model, pi, f);
    const double n = frobenius_norm(f);
    const double n3 = n * n * n;
    const double lower = rep.c1 * n3 - rep.c2 - pi_minus * n3;
    if (!(w >= lower - 1e-12 * (1.0 + std::abs(lower))))
      throw std::runtime_error("membrane lower growth bound violated at a sampled matrix");
    rep.fitted_lower = std::min(rep.fitted_lower, (w + rep.c2) / n3 + pi_minus);
    if (det(f) >= rep.delta) {
      const double upper = rep.upper_constant * (1.0 + n3);
      if (!(w <= upper)) throw std::runtime_error("membrane upper growth bound violated at a sampled matrix");
      rep.fitted_upper = std::max(rep.fitted_upper, w / (1.0 + n3));
    }
  }
  return rep;
}

double fit_coercivity_constant(const DensityModel& model, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double c = kInf;
  for (int s = 0; s < samples; ++s) {
    const Mat3 f = random_orientation_preserving(rng, 2.0);
    const double d = dist_so3(f);
    if (d <= 1e-3) continue;
    c = std::min(c, eval_w(model, f) / (d * d));
  }
  return c;
}

}  // namespace thinplate
