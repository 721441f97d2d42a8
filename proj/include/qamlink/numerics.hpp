#ifndef QAMLINK_NUMERICS_HPP
#define QAMLINK_NUMERICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qamlink/errors.hpp"

namespace qamlink {

/// Number of abscissae used by the fixed-order quadrature.
struct QuadratureSpec {
  std::size_t node_count = 64;

  static constexpr std::size_t kMinNodes = 16;

  void validate() const {
    if (node_count < kMinNodes)
      throw DomainError("quadrature node_count must be >= 16, got " +
                        std::to_string(node_count));
  }
};

/// Upper tail of the standard normal distribution, P[X > z].
inline double gaussian_q(double z) {
  if (!std::isfinite(z))
    throw DomainError("gaussian_q: non-finite argument");
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

/// Gauss-Legendre nodes and weights on [-1, 1].
///
/// Roots of P_n are refined by Newton iteration from the Chebyshev-like
/// initial guess cos(pi (i - 1/4) / (n + 1/2)); only half the roots are
/// computed and the rest mirrored.
class GaussLegendreRule {
public:
  explicit GaussLegendreRule(std::size_t n) : nodes_(n), weights_(n) {
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                          (static_cast<double>(n) + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
          const double kk = static_cast<double>(k);
          const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
          p0 = p1;
          p1 = p2;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x)))
          break;
      }
      // recompute derivative at the converged root for the weight
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes_[i] = -x;
      nodes_[n - 1 - i] = x;
      weights_[i] = w;
      weights_[n - 1 - i] = w;
    }
  }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  /// Shared, lazily built rule for a given order. Thread-safe.
  static const GaussLegendreRule& cached(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<const GaussLegendreRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot)
      slot = std::make_unique<const GaussLegendreRule>(n);
    return *slot;
  }

private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Definite integral of f over [lo, hi] by fixed-order Gauss-Legendre.
template <typename F>
double integrate(F&& f, double lo, double hi, QuadratureSpec spec = {}) {
  if (!(lo < hi))
    throw DomainError("integrate: requires lo < hi");
  spec.validate();
  const auto& rule = GaussLegendreRule::cached(spec.node_count);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  const auto x = rule.nodes();
  const auto w = rule.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    sum += w[i] * f(mid + half * x[i]);
  return half * sum;
}

/// Bisection for f(x) = target on a monotone f.
///
/// Stops once |f(x) - target| <= tol, or when the bracket can no longer be
/// split in floating point (the midpoint closest to target is returned).
template <typename F>
double solve_monotone(F&& f, double target, double lo, double hi, double tol) {
  if (!(tol > 0.0))
    throw DomainError("solve_monotone: tol must be positive");
  if (!(lo < hi))
    throw DomainError("solve_monotone: requires lo < hi");
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (target < std::min(f_lo, f_hi) || target > std::max(f_lo, f_hi))
    throw BracketError(target, f_lo, f_hi);
  if (std::abs(f_lo - target) <= tol)
    return lo;
  if (std::abs(f_hi - target) <= tol)
    return hi;

  const bool increasing = f_hi > f_lo;
  double best_x = lo;
  double best_err = std::abs(f_lo - target);
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi)
      break;
    const double fm = f(mid);
    const double err = std::abs(fm - target);
    if (err < best_err) {
      best_err = err;
      best_x = mid;
    }
    if (err <= tol)
      return mid;
    if ((fm < target) == increasing)
      lo = mid;
    else
      hi = mid;
  }
  return best_x;
}

} // namespace qamlink

#endif
