#include "hankel/special_functions.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "hankel/errors.hpp"

namespace hankel {

void laguerre_all(double t, std::span<double> out) {
  if (!(t >= 0.0)) throw ArgumentError("laguerre: t must be >= 0, got " + std::to_string(t));
  if (out.empty()) return;
  if (static_cast<int>(out.size()) - 1 > kMaxLaguerreDegree) {
    throw ArgumentError("laguerre: degree exceeds " + std::to_string(kMaxLaguerreDegree));
  }
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = 1.0 - t;
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    const double dn = static_cast<double>(n);
    out[n + 1] = ((2.0 * dn + 1.0 - t) * out[n] - dn * out[n - 1]) / (dn + 1.0);
  }
}

double laguerre(int n, double t) {
  if (n < 0 || n > kMaxLaguerreDegree) {
    throw ArgumentError("laguerre: degree " + std::to_string(n) + " outside [0, " +
                        std::to_string(kMaxLaguerreDegree) + "]");
  }
  if (!(t >= 0.0)) throw ArgumentError("laguerre: t must be >= 0, got " + std::to_string(t));
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 - t;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - t) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double laguerre_laplace_closed(int n, double lambda) {
  if (n < 0) throw ArgumentError("laguerre_laplace_closed: negative degree");
  if (!(lambda > -0.5)) {
    throw ArgumentError("laguerre_laplace_closed: requires lambda > -1/2, got " +
                        std::to_string(lambda));
  }
  const double ratio = (2.0 * lambda - 1.0) / (2.0 * lambda + 1.0);
  return std::pow(ratio, n) / (lambda + 0.5);
}

GaussRule gauss_legendre(int k) {
  if (k < 1 || k > kMaxGaussOrder) {
    throw ArgumentError("gauss_legendre: order " + std::to_string(k) + " outside [1, " +
                        std::to_string(kMaxGaussOrder) + "]");
  }
  GaussRule rule;
  rule.nodes.assign(k, 0.0);
  rule.weights.assign(k, 0.0);
  const int half = (k + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_k.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int j = 2; j <= k; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = k * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) <= 1e-15) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = z;
    for (int j = 2; j <= k; ++j) {
      const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = k * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // z is the i-th largest root.
    rule.nodes[k - 1 - i] = z;
    rule.nodes[i] = -z;
    rule.weights[k - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (k % 2 == 1) rule.nodes[k / 2] = 0.0;
  return rule;
}

const GaussRule& gauss_legendre_cached(int k) {
  static std::array<std::once_flag, kMaxGaussOrder + 1> flags;
  static std::array<GaussRule, kMaxGaussOrder + 1> rules;
  if (k < 1 || k > kMaxGaussOrder) {
    throw ArgumentError("gauss_legendre: order " + std::to_string(k) + " out of range");
  }
  std::call_once(flags[k], [k] { rules[k] = gauss_legendre(k); });
  return rules[k];
}

}  // namespace hankel
