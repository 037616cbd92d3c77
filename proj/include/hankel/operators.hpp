#pragma once

// The power-series operator g -> sum g_n mu^n, its quadratic form and
// adjoint moments, and the chain that conjugates it into the Laplace
// transform: V (Moebius change of variable) and U (Laguerre expansion).

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hankel/expression.hpp"
#include "hankel/measure.hpp"
#include "hankel/moment_sequence.hpp"
#include "hankel/quadrature.hpp"

namespace hankel {

/// Finitely supported coefficient sequence (g_0, ..., g_{K-1}).
struct CoeffVector {
  std::vector<double> g;

  std::size_t size() const { return g.size(); }
};

enum class GridDomain { mu_interval, lambda_halfline, t_halfline };

/// Sampled function, evaluated by linear interpolation between nodes and
/// as zero outside [nodes.front(), nodes.back()].
struct GridFunction {
  std::vector<double> nodes;
  std::vector<double> values;
  GridDomain domain = GridDomain::mu_interval;

  /// Throws ArgumentError unless nodes are strictly increasing, inside the
  /// tagged domain and paired with values.
  void validate() const;
  double operator()(double x) const;
  Expr to_expr() const;
};

/// sum_{n<K} g_n mu^n by Horner's rule; requires |mu| <= 1.
double eval_power_series(const CoeffVector& g, double mu);

/// The power series as an expression in mu, without the |mu| <= 1 check.
Expr power_series_expr(const CoeffVector& g);

/// q[g, g] = sum_{n,m} q_{n+m} g_m g_n. Needs 2K - 1 moments.
double form_direct(const MomentSequence& q, const CoeffVector& g);

/// int |sum g_n mu^n|^2 dM(mu).
double form_integral(const Measure& m, const CoeffVector& g, const QuadratureConfig& cfg = {});

struct AdjointMoments {
  std::vector<double> values;     // u_n = int u(mu) mu^n dM(mu)
  double l2_partial_sum = 0.0;    // sum |u_n|^2
  double last_window_increment = 0.0;  // part of the sum from n in [N/2, N)
  bool l2_decaying = false;       // increment <= 10% of the partial sum
};

AdjointMoments adjoint_moments(const Measure& m, const Expr& u, std::size_t count,
                               const QuadratureConfig& cfg = {});
AdjointMoments adjoint_moments(const Measure& m, const GridFunction& u, std::size_t count,
                               const QuadratureConfig& cfg = {});

struct LaplaceOptions {
  /// f vanishes beyond this point; any real lambda is then allowed.
  std::optional<double> support_end;
  /// Bound on |f(t)| used to place the truncation point where
  /// envelope(t) exp(-lambda t) drops below 1e-18 of its peak.
  std::function<double(double)> envelope;
};

/// (Bf)(lambda) = int_0^inf exp(-t lambda) f(t) dt. Without support_end the
/// transform needs lambda > 0 (DivergenceError otherwise); without an
/// envelope the half-line is integrated with doubling panels.
double laplace(const Expr& f, double lambda, const LaplaceOptions& opts = {},
               const QuadratureConfig& cfg = {});
double laplace(const GridFunction& f, double lambda, const QuadratureConfig& cfg = {});

/// (B* v)(t) = int exp(-t lambda) v(lambda) dSigma(lambda), t > 0.
double laplace_adjoint(const Measure& sigma, const Expr& v, double t,
                       const QuadratureConfig& cfg = {});

/// (Vu)(lambda) = (lambda + 1/2)^{-1} u((2 lambda - 1) / (2 lambda + 1)).
Expr mobius_V(const Expr& u);

struct NormPair {
  double mu_side;      // ||u||^2 in L^2(M)
  double lambda_side;  // ||Vu||^2 in L^2(Sigma), Sigma = transport_to_sigma(M)
};

NormPair unitarity_norms(const Measure& m, const Expr& u, const QuadratureConfig& cfg = {});

/// (Ug)(t) = sum g_n L_n(t) exp(-t/2).
Expr laguerre_expand_U(const CoeffVector& g);

/// Pointwise bound on |(Ug)(t)|, from |L_n(t)| e^{-t/2} <= min(1, L_n(-t) e^{-t/2}).
std::function<double(double)> laguerre_envelope(const CoeffVector& g);

/// int_0^inf |(Ug)(t)|^2 dt.
double laguerre_norm_squared(const CoeffVector& g, const QuadratureConfig& cfg = {});

struct IntertwiningRow {
  double lambda;
  double lhs;  // (V A g)(lambda)
  double rhs;  // (B U g)(lambda)
  double diff;
};

struct IntertwiningReport {
  std::vector<IntertwiningRow> rows;
  double max_abs_deviation = 0.0;
};

/// 40 logarithmically spaced points in [0.05, 20].
std::vector<double> default_lambda_grid();

/// Compares V A g (power series then Moebius map) with B U g (Laguerre
/// expansion then numeric Laplace transform) on lambda_grid, all > 0.
IntertwiningReport verify_intertwining(const CoeffVector& g, std::span<const double> lambda_grid,
                                       const QuadratureConfig& cfg = {});

/// Same comparison on the lambda-images of a measure strictly inside (-1, 1):
/// its atoms and 16 sample points per density piece.
IntertwiningReport verify_intertwining(const CoeffVector& g, const Measure& m,
                                       const QuadratureConfig& cfg = {});

}  // namespace hankel
