#include "thinplate/lbfgs.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <string>

namespace thinplate {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Pair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

void two_loop(const std::deque<Pair>& mem, std::span<const double> g, std::vector<double>& d) {
  d.assign(g.begin(), g.end());
  std::vector<double> alpha(mem.size());
  for (std::size_t k = mem.size(); k-- > 0;) {
    alpha[k] = mem[k].rho * dot(mem[k].s, d);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= alpha[k] * mem[k].y[i];
  }
  if (!mem.empty()) {
    const Pair& last = mem.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : d) v *= gamma;
  }
  for (std::size_t k = 0; k < mem.size(); ++k) {
    const double beta = mem[k].rho * dot(mem[k].y, d);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += (alpha[k] - beta) * mem[k].s[i];
  }
  for (double& v : d) v = -v;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& f, std::vector<double> x, const LbfgsOptions& opt,
                           const Projector& project) {
  const std::size_t n = x.size();
  LbfgsResult res;
  if (project) project(x);
  std::vector<double> g(n), g_new(n), x_new(n), d(n);
  double fx = f(x, g);
  res.evaluations = 1;
  if (!std::isfinite(fx)) throw std::invalid_argument("initial point has non-finite objective");
  res.history.push_back(fx);

  std::deque<Pair> mem;
  int stalls = 0;
  int iter = 0;
  double gnorm = std::sqrt(dot(g, g));
  while (gnorm >= opt.tol && iter < opt.max_iter) {
    two_loop(mem, g, d);
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      mem.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      slope = -gnorm * gnorm;
    }
    double step = mem.empty() ? std::fmin(1.0, 1.0 / gnorm) : 1.0;

    bool accepted = false;
    double f_new = fx;
    for (int bt = 0; bt < opt.max_backtracks; ++bt) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * d[i];
      f_new = f(x_new, g_new);
      ++res.evaluations;
      if (!std::isfinite(f_new)) {
        step *= opt.backtrack;
        continue;
      }
      if (f_new <= fx + opt.armijo * step * slope && f_new < fx) {
        accepted = true;
        break;
      }
      // Near the optimum the decrease drowns in roundoff; fall back on the
      // derivative along d (approximate Wolfe test).
      const double dphi = dot(g_new, d);
      if (std::abs(f_new - fx) <= opt.roundoff * std::abs(fx) && dphi <= (2.0 * opt.armijo - 1.0) * slope &&
          dphi >= opt.curvature * slope) {
        accepted = true;
        break;
      }
      step *= opt.backtrack;
    }

    if (!accepted) {
      ++stalls;
      if (stalls >= opt.max_stalls)
        throw NumericalFailure("line search failed to decrease the objective " + std::to_string(stalls) +
                               " consecutive times (gradient norm " + fmt_g(gnorm) + ", iteration " + std::to_string(iter) + ")");
      mem.clear();
      continue;
    }
    stalls = 0;
    if (project) project(x_new);

    Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      p.s[i] = x_new[i] - x[i];
      p.y[i] = g_new[i] - g[i];
    }
    const double sy = dot(p.s, p.y);
    if (sy > 1e-300 && sy > 1e-12 * std::sqrt(dot(p.s, p.s) * dot(p.y, p.y))) {
      p.rho = 1.0 / sy;
      mem.push_back(std::move(p));
      if (static_cast<int>(mem.size()) > opt.memory) mem.pop_front();
    }
    x.swap(x_new);
    g.swap(g_new);
    fx = f_new;
    gnorm = std::sqrt(dot(g, g));
    ++iter;
    res.history.push_back(fx);
  }

  res.x = std::move(x);
  res.value = fx;
  res.grad_norm = gnorm;
  res.iterations = iter;
  res.converged = gnorm < opt.tol;
  return res;
}

}  // namespace thinplate
