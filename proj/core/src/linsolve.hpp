#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "thinplate/errors.hpp"

namespace thinplate::detail {

/// Solves A x = b for a small symmetric positive-definite A (row-major) by
/// Cholesky factorization. Throws NumericalFailure when a pivot is not
/// positive relative to the diagonal scale.
template <std::size_t N>
std::array<double, N> spd_solve(std::array<double, N * N> a, std::array<double, N> b) {
  double scale = 0.0;
  for (std::size_t i = 0; i < N; ++i) scale = std::fmax(scale, std::fabs(a[N * i + i]));
  const double floor = 1e-13 * (scale > 0.0 ? scale : 1.0);
  for (std::size_t j = 0; j < N; ++j) {
    double d = a[N * j + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[N * j + k] * a[N * j + k];
    if (!(d > floor)) throw NumericalFailure("quadratic form is not positive definite on the reduced variables");
    const double l = std::sqrt(d);
    a[N * j + j] = l;
    for (std::size_t i = j + 1; i < N; ++i) {
      double s = a[N * i + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[N * i + k] * a[N * j + k];
      a[N * i + j] = s / l;
    }
  }
  for (std::size_t i = 0; i < N; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[N * i + k] * b[k];
    b[i] = s / a[N * i + i];
  }
  for (std::size_t ii = N; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < N; ++k) s -= a[N * k + ii] * b[k];
    b[ii] = s / a[N * ii + ii];
  }
  return b;
}

}  // namespace thinplate::detail
