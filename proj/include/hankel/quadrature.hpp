#pragma once

// Adaptive composite Gauss-Legendre quadrature for scalar and vector-valued
// integrands on finite and half-infinite intervals.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hankel {

struct QuadratureConfig {
  int base_order = 16;               // Gauss-Legendre points per panel
  double relative_tolerance = 1e-12;
  int max_subdivisions = 20000;
  double endpoint_refinement = 0.5;  // geometric ratio of graded panels at singular endpoints

  /// Throws ArgumentError unless base_order >= 2, 0 < tol < 1,
  /// max_subdivisions >= 1 and 0 < endpoint_refinement < 1.
  void validate() const;
};

enum class EndpointSingularity { none, left, right };

struct IntegrationHints {
  EndpointSingularity singular = EndpointSingularity::none;
  int initial_panels = 1;
};

/// Writes f(x) into out (out.size() == dim).
using VectorIntegrand = std::function<void(double x, std::span<double> out)>;

struct VectorIntegral {
  std::vector<double> value;
  std::vector<double> abs_value;  // integral of |f_k|, the scale used for relative accuracy
  int subdivisions = 0;
};

/// Integrates every component of f over [a, b]. Either endpoint may be
/// infinite. Component k is accepted once the error estimate is below
/// relative_tolerance * (integral of |f_k|).
///
/// Throws QuadratureError when max_subdivisions is exhausted and
/// DivergenceError when a half-infinite integral does not settle.
VectorIntegral integrate_vector(const VectorIntegrand& f, std::size_t dim, double a, double b,
                                const QuadratureConfig& cfg, IntegrationHints hints = {});

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg, IntegrationHints hints = {});

}  // namespace hankel
