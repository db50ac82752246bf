#pragma once

#include <functional>
#include <span>
#include <vector>

#include "thinplate/errors.hpp"

namespace thinplate {

/// Objective returning f(x) and writing ∇f(x) into grad. May return +∞ to
/// mark x inadmissible; the gradient is then ignored.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

/// Maps an iterate onto a gauge slice of the objective's null directions. It
/// must leave the objective value and gradient unchanged.
using Projector = std::function<void(std::span<double> x)>;

struct LbfgsOptions {
  int memory = 10;
  double tol = 1e-8;          // on the Euclidean gradient norm
  int max_iter = 10000;
  double armijo = 1e-4;
  double curvature = 0.9;     // for the roundoff fallback
  double roundoff = 1e-12;    // relative objective noise tolerated by the fallback
  double backtrack = 0.5;
  int max_backtracks = 60;
  int max_stalls = 50;        // consecutive failed line searches before giving up
};

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::vector<double> history;  // objective after each accepted step, starting with f(x0)
};

/// Limited-memory BFGS with Armijo backtracking. Once objective differences
/// fall below roundoff * |f|, a step is also accepted on the approximate Wolfe
/// conditions, so the history may rise by at most that amount per step.
/// Throws std::invalid_argument if f(x0) is not finite and NumericalFailure
/// after max_stalls consecutive line searches without decrease.
LbfgsResult lbfgs_minimize(const Objective& f, std::vector<double> x0, const LbfgsOptions& opt = {},
                           const Projector& project = {});

}  // namespace thinplate
