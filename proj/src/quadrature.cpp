#include "hankel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hankel/errors.hpp"
#include "hankel/special_functions.hpp"

namespace hankel {

void QuadratureConfig::validate() const {
  if (base_order < 2 || base_order > kMaxGaussOrder) {
    throw ArgumentError("QuadratureConfig: base_order must be in [2, 128], got " +
                        std::to_string(base_order));
  }
  if (!(relative_tolerance > 0.0 && relative_tolerance < 1.0)) {
    throw ArgumentError("QuadratureConfig: relative_tolerance must lie in (0, 1)");
  }
  if (max_subdivisions < 1) throw ArgumentError("QuadratureConfig: max_subdivisions must be >= 1");
  if (!(endpoint_refinement > 0.0 && endpoint_refinement < 1.0)) {
    throw ArgumentError("QuadratureConfig: endpoint_refinement must lie in (0, 1)");
  }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Panel {
  double a;
  double b;
  std::vector<double> value;  // refined (two-half) estimate
  std::vector<double> abs_value;
  std::vector<double> error;  // |coarse - refined|
};

class PanelRule {
 public:
  PanelRule(const VectorIntegrand& f, std::size_t dim, int order)
      : f_(f), dim_(dim), rule_(gauss_legendre_cached(order)), scratch_(dim) {}

  // Gauss-Legendre estimate of the integral and of the integral of |f|.
  void apply(double a, double b, std::vector<double>& value, std::vector<double>& abs_value) {
    value.assign(dim_, 0.0);
    abs_value.assign(dim_, 0.0);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
      f_(mid + half * rule_.nodes[i], scratch_);
      const double w = rule_.weights[i] * half;
      for (std::size_t k = 0; k < dim_; ++k) {
        value[k] += w * scratch_[k];
        abs_value[k] += w * std::abs(scratch_[k]);
      }
    }
  }

  Panel make_panel(double a, double b) {
    Panel p{a, b, {}, {}, {}};
    std::vector<double> coarse;
    std::vector<double> coarse_abs;
    std::vector<double> left;
    std::vector<double> left_abs;
    std::vector<double> right;
    std::vector<double> right_abs;
    const double mid = 0.5 * (a + b);
    apply(a, b, coarse, coarse_abs);
    apply(a, mid, left, left_abs);
    apply(mid, b, right, right_abs);
    p.value.resize(dim_);
    p.abs_value.resize(dim_);
    p.error.resize(dim_);
    for (std::size_t k = 0; k < dim_; ++k) {
      p.value[k] = left[k] + right[k];
      p.abs_value[k] = left_abs[k] + right_abs[k];
      p.error[k] = std::abs(coarse[k] - p.value[k]);
    }
    return p;
  }

  std::size_t dim() const { return dim_; }

 private:
  const VectorIntegrand& f_;
  std::size_t dim_;
  const GaussRule& rule_;
  std::vector<double> scratch_;
};

// Initial panel edges on [a, b], graded geometrically toward a singular end.
std::vector<double> initial_edges(double a, double b, const QuadratureConfig& cfg,
                                  const IntegrationHints& hints) {
  std::vector<double> edges;
  const double length = b - a;
  const int n = std::max(1, hints.initial_panels);
  if (hints.singular == EndpointSingularity::none) {
    for (int i = 0; i <= n; ++i) edges.push_back(a + length * i / n);
    edges.back() = b;
    return edges;
  }
  const bool left = hints.singular == EndpointSingularity::left;
  const double end = left ? a : b;
  // Graded panels stop two ulps from a non-zero end (closer points round
  // onto it) and at 1e-30 of the length for an end at the origin.
  const double floor_width = end == 0.0
                                 ? 1e-30 * length
                                 : 2.0 * std::numeric_limits<double>::epsilon() * std::abs(end);
  // Distances from the singular end, largest first; the final sliver
  // [end, end + floor_width] is never evaluated.
  std::vector<double> dist{length};
  double w = length * cfg.endpoint_refinement;
  while (w > floor_width) {
    dist.push_back(w);
    w *= cfg.endpoint_refinement;
  }
  if (left) {
    for (auto it = dist.rbegin(); it != dist.rend(); ++it) edges.push_back(a + *it);
    edges.back() = b;
  } else {
    for (double d : dist) edges.push_back(b - d);
    edges.front() = a;
  }
  return edges;
}

VectorIntegral integrate_finite(PanelRule& rule, double a, double b, const QuadratureConfig& cfg,
                                const IntegrationHints& hints) {
  const std::size_t dim = rule.dim();
  VectorIntegral result;
  result.value.assign(dim, 0.0);
  result.abs_value.assign(dim, 0.0);
  if (a == b) return result;

  std::vector<Panel> panels;
  const std::vector<double> edges = initial_edges(a, b, cfg, hints);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) panels.push_back(rule.make_panel(edges[i], edges[i + 1]));

  std::vector<double> total(dim);
  std::vector<double> total_abs(dim);
  std::vector<double> total_err(dim);
  std::vector<double> previous(dim, std::numeric_limits<double>::quiet_NaN());
  const double rtol = cfg.relative_tolerance;

  for (int split = 0;; ++split) {
    std::fill(total.begin(), total.end(), 0.0);
    std::fill(total_abs.begin(), total_abs.end(), 0.0);
    std::fill(total_err.begin(), total_err.end(), 0.0);
    for (const Panel& p : panels) {
      for (std::size_t k = 0; k < dim; ++k) {
        total[k] += p.value[k];
        total_abs[k] += p.abs_value[k];
        total_err[k] += p.error[k];
      }
    }
    std::size_t worst_component = 0;
    double worst_ratio = 0.0;
    bool converged = true;
    for (std::size_t k = 0; k < dim; ++k) {
      if (!std::isfinite(total[k]) || !std::isfinite(total_abs[k])) {
        throw NumericalError("quadrature: non-finite integrand values on [" + std::to_string(a) +
                             ", " + std::to_string(b) + "]");
      }
      const double allowed = rtol * total_abs[k] + std::numeric_limits<double>::min();
      if (total_err[k] > allowed) {
        converged = false;
        const double ratio = total_err[k] / allowed;
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          worst_component = k;
        }
      }
    }
    if (converged) break;
    if (split >= cfg.max_subdivisions) {
      throw QuadratureError("quadrature: no convergence after " + std::to_string(split) +
                                " subdivisions on [" + std::to_string(a) + ", " +
                                std::to_string(b) + "]",
                            previous[worst_component], total[worst_component]);
    }
    previous = total;

    // Split the panel contributing the most normalized error.
    std::size_t worst = 0;
    double worst_score = -1.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      double score = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        score = std::max(score, panels[i].error[k] / (total_abs[k] + std::numeric_limits<double>::min()));
      }
      if (score > worst_score) {
        worst_score = score;
        worst = i;
      }
    }
    const double pa = panels[worst].a;
    const double pb = panels[worst].b;
    const double mid = 0.5 * (pa + pb);
    if (!(mid > pa && mid < pb)) {
      throw QuadratureError("quadrature: panel width reached machine resolution near " +
                                std::to_string(mid),
                            previous[worst_component], total[worst_component]);
    }
    panels[worst] = rule.make_panel(pa, mid);
    panels.push_back(rule.make_panel(mid, pb));
    ++result.subdivisions;
  }
  result.value = total;
  result.abs_value = total_abs;
  return result;
}

// [a, inf): panels of doubling width until the contributions are negligible
// and decreasing.
VectorIntegral integrate_half_line(PanelRule& rule, double a, const QuadratureConfig& cfg,
                                   IntegrationHints hints) {
  const std::size_t dim = rule.dim();
  VectorIntegral result;
  result.value.assign(dim, 0.0);
  result.abs_value.assign(dim, 0.0);
  std::vector<double> previous_abs(dim, kInf);
  int quiet_panels = 0;
  double start = a;
  double width = 1.0;
  constexpr int kMaxPanels = 1100;
  // Past x ~ 2^60 every remaining panel must be a negligible share of the total.
  constexpr int kDecayPanels = 60;
  constexpr double kDecayFraction = 1e-6;
  for (int panel = 0; panel < kMaxPanels; ++panel) {
    const double end = start + width;
    if (!std::isfinite(end)) break;
    VectorIntegral part = integrate_finite(rule, start, end, cfg, hints);
    hints.singular = EndpointSingularity::none;
    hints.initial_panels = 1;
    result.subdivisions += part.subdivisions;
    bool quiet = true;
    for (std::size_t k = 0; k < dim; ++k) {
      result.value[k] += part.value[k];
      result.abs_value[k] += part.abs_value[k];
      if (!std::isfinite(result.abs_value[k])) {
        throw DivergenceError("quadrature: integral over [" + std::to_string(a) +
                              ", inf) diverges");
      }
      const bool small = part.abs_value[k] <= 0.1 * cfg.relative_tolerance * result.abs_value[k];
      const bool decreasing = part.abs_value[k] <= previous_abs[k];
      if (!(small && decreasing)) quiet = false;
      previous_abs[k] = part.abs_value[k];
    }
    quiet_panels = quiet ? quiet_panels + 1 : 0;
    if (quiet_panels >= 3) return result;
    if (panel >= kDecayPanels) {
      for (std::size_t k = 0; k < dim; ++k) {
        if (part.abs_value[k] > kDecayFraction * result.abs_value[k]) {
          throw DivergenceError("quadrature: integral over [" + std::to_string(a) +
                                ", inf) diverges; contributions near x = " + std::to_string(end) +
                                " are not decaying");
        }
      }
    }
    start = end;
    width *= 2.0;
  }
  throw DivergenceError("quadrature: integral over [" + std::to_string(a) +
                        ", inf) does not settle; contributions are not decaying");
}

EndpointSingularity mirrored(EndpointSingularity s) {
  switch (s) {
    case EndpointSingularity::left: return EndpointSingularity::right;
    case EndpointSingularity::right: return EndpointSingularity::left;
    default: return s;
  }
}

}  // namespace

VectorIntegral integrate_vector(const VectorIntegrand& f, std::size_t dim, double a, double b,
                                const QuadratureConfig& cfg, IntegrationHints hints) {
  cfg.validate();
  if (std::isnan(a) || std::isnan(b)) throw ArgumentError("integrate: NaN interval endpoint");
  if (a > b) throw ArgumentError("integrate: interval endpoints out of order");
  if (dim == 0) return {};

  if (std::isfinite(a) && std::isfinite(b)) {
    PanelRule rule(f, dim, cfg.base_order);
    return integrate_finite(rule, a, b, cfg, hints);
  }
  if (std::isfinite(a)) {
    if (hints.singular == EndpointSingularity::right) {
      throw ArgumentError("integrate: singular endpoint at infinity");
    }
    PanelRule rule(f, dim, cfg.base_order);
    return integrate_half_line(rule, a, cfg, hints);
  }
  // Reflect x -> -x so the unbounded end is on the right.
  const VectorIntegrand reflected = [&f](double x, std::span<double> out) { f(-x, out); };
  if (std::isfinite(b)) {
    if (hints.singular == EndpointSingularity::left) {
      throw ArgumentError("integrate: singular endpoint at infinity");
    }
    hints.singular = mirrored(hints.singular);
    PanelRule rule(reflected, dim, cfg.base_order);
    return integrate_half_line(rule, -b, cfg, hints);
  }
  if (hints.singular != EndpointSingularity::none) {
    throw ArgumentError("integrate: singular endpoint at infinity");
  }
  PanelRule right_rule(f, dim, cfg.base_order);
  VectorIntegral right = integrate_half_line(right_rule, 0.0, cfg, hints);
  PanelRule left_rule(reflected, dim, cfg.base_order);
  VectorIntegral left = integrate_half_line(left_rule, 0.0, cfg, hints);
  for (std::size_t k = 0; k < dim; ++k) {
    right.value[k] += left.value[k];
    right.abs_value[k] += left.abs_value[k];
  }
  right.subdivisions += left.subdivisions;
  return right;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg, IntegrationHints hints) {
  const VectorIntegrand vf = [&f](double x, std::span<double> out) { out[0] = f(x); };
  return integrate_vector(vf, 1, a, b, cfg, hints).value[0];
}

}  // namespace hankel
