#pragma once

#include <span>
#include <vector>

namespace hankel {

inline constexpr int kMaxLaguerreDegree = 128;
inline constexpr int kMaxGaussOrder = 128;

/// Laguerre polynomial L_n(t), normalized so that L_n(0) = 1, by the forward
/// three-term recurrence (n+1) L_{n+1} = (2n+1-t) L_n - n L_{n-1}.
/// Requires 0 <= n <= kMaxLaguerreDegree and t >= 0.
double laguerre(int n, double t);

/// Fills out[n] = L_n(t) for n = 0..out.size()-1 in one recurrence pass.
void laguerre_all(double t, std::span<double> out);

/// Closed form of  int_0^inf L_n(t) exp(-(1/2 + lambda) t) dt
///   = (lambda + 1/2)^{-1} ((2 lambda - 1) / (2 lambda + 1))^n,  lambda > -1/2.
double laguerre_laplace_closed(int n, double lambda);

struct GaussRule {
  std::vector<double> nodes;    // ascending, on [-1, 1]
  std::vector<double> weights;
};

/// k-point Gauss-Legendre rule on [-1, 1], 1 <= k <= kMaxGaussOrder.
/// Exact for polynomials of degree <= 2k - 1.
GaussRule gauss_legendre(int k);

/// Cached rule; the reference stays valid for the program lifetime.
const GaussRule& gauss_legendre_cached(int k);

}  // namespace hankel
