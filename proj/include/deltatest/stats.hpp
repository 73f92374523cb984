// Copyright 2026 The deltatest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

#include "deltatest/errors.hpp"

namespace deltatest {

/// One-tailed (greater-than) t test outcome.
struct TTestResult {
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
  double alpha = 0.05;
  bool reject = false;
};

namespace detail {

// Continued fraction for the incomplete beta function, modified Lentz.
// Converges for x < (a+1)/(a+b+2); the caller switches via the symmetry
// identity otherwise.
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr double kEps = 1e-12;
  constexpr double kTiny = 1e-300;
  constexpr int kMaxIterations = 300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error(
      "incomplete beta continued fraction failed to converge");
}

}  // namespace detail

/// Regularized incomplete beta function I_x(a, b).
inline double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("incomplete beta requires a, b > 0");
  if (std::isnan(x) || x < 0.0 || x > 1.0)
    throw std::invalid_argument("incomplete beta requires x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

/// Student's t upper tail P(T > t) with df degrees of freedom. Computed
/// directly so small p-values keep full relative precision.
inline double t_upper_tail(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("t distribution requires df > 0");
  if (std::isnan(t)) throw std::invalid_argument("t statistic is NaN");
  if (std::isinf(t)) return t > 0.0 ? 0.0 : 1.0;
  const double x = df / (df + t * t);
  const double half_tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x);
  return t >= 0.0 ? half_tail : 1.0 - half_tail;
}

/// Student's t CDF P(T <= t) with df degrees of freedom. Non-finite t
/// saturates to 0 or 1.
inline double t_cdf(double t, double df) { return 1.0 - t_upper_tail(t, df); }

namespace detail {

struct Moments {
  double mean = 0.0;
  double sum_sq_dev = 0.0;  // sum of squared deviations from the mean
  std::size_t n = 0;
  bool constant = false;  // all observations bitwise equal
};

inline Moments moments(std::span<const double> xs) {
  Moments m;
  m.n = xs.size();
  double sum = 0.0;
  m.constant = true;
  for (double x : xs) {
    sum += x;
    if (x != xs.front()) m.constant = false;
  }
  if (m.constant) {
    // summation noise must not fake a nonzero variance here
    m.mean = xs.front();
    return m;
  }
  m.mean = sum / static_cast<double>(m.n);
  for (double x : xs) {
    const double d = x - m.mean;
    m.sum_sq_dev += d * d;
  }
  return m;
}

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1)");
}

}  // namespace detail

/// One-sample one-tailed t test of H1: E(X) > mu0, with n-1 degrees of
/// freedom. Throws SampleTooSmallError for fewer than two observations and
/// ZeroVarianceError when all observations are identical.
inline TTestResult one_sample_greater(std::span<const double> xs, double mu0,
                                      double alpha) {
  detail::check_alpha(alpha);
  if (xs.size() < 2)
    throw SampleTooSmallError("one-sample t test needs at least 2 observations, got " +
                              std::to_string(xs.size()));
  const auto m = detail::moments(xs);
  if (m.constant || m.sum_sq_dev == 0.0)
    throw ZeroVarianceError("one-sample t test: all observations equal " +
                            std::to_string(m.mean));
  const double n = static_cast<double>(m.n);
  const double sd = std::sqrt(m.sum_sq_dev / (n - 1.0));
  TTestResult r;
  r.t_statistic = (m.mean - mu0) / (sd / std::sqrt(n));
  r.degrees_of_freedom = n - 1.0;
  r.p_value = t_upper_tail(r.t_statistic, r.degrees_of_freedom);
  r.alpha = alpha;
  r.reject = r.p_value < alpha;
  return r;
}

/// Welch's two-sample one-tailed t test of H1: E(X) > E(Y), unpaired,
/// unequal variances, Welch-Satterthwaite fractional degrees of freedom.
/// Throws if either sample has fewer than two observations or both have
/// zero variance.
inline TTestResult welch_greater(std::span<const double> xs,
                                 std::span<const double> ys, double alpha) {
  detail::check_alpha(alpha);
  if (xs.size() < 2 || ys.size() < 2)
    throw SampleTooSmallError("Welch t test needs at least 2 observations per sample");
  const auto mx = detail::moments(xs);
  const auto my = detail::moments(ys);
  const bool x_constant = mx.constant || mx.sum_sq_dev == 0.0;
  const bool y_constant = my.constant || my.sum_sq_dev == 0.0;
  if (x_constant && y_constant)
    throw ZeroVarianceError("Welch t test: both samples have zero variance");
  const double nx = static_cast<double>(mx.n);
  const double ny = static_cast<double>(my.n);
  const double vx = mx.sum_sq_dev / (nx - 1.0) / nx;  // s_x^2 / n_x
  const double vy = my.sum_sq_dev / (ny - 1.0) / ny;
  TTestResult r;
  r.t_statistic = (mx.mean - my.mean) / std::sqrt(vx + vy);
  r.degrees_of_freedom =
      (vx + vy) * (vx + vy) / (vx * vx / (nx - 1.0) + vy * vy / (ny - 1.0));
  r.p_value = t_upper_tail(r.t_statistic, r.degrees_of_freedom);
  r.alpha = alpha;
  r.reject = r.p_value < alpha;
  return r;
}

}  // namespace deltatest
