#include "hankel/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hankel/errors.hpp"
#include "hankel/special_functions.hpp"

namespace hankel {
namespace {

double horner(std::span<const double> g, double mu) {
  double acc = 0.0;
  for (auto it = g.rbegin(); it != g.rend(); ++it) acc = acc * mu + *it;
  return acc;
}

void check_finite(const CoeffVector& g) {
  for (double v : g.g) {
    if (!std::isfinite(v)) throw ArgumentError("coefficient vector has non-finite entries");
  }
}

// Truncation point of a non-negative bound b(t) on [0, inf): the first t past
// the running peak where b(t) < 1e-18 * peak.
double envelope_cutoff(const std::function<double(double)>& bound) {
  constexpr double kRelative = 1e-18;
  constexpr double kLimit = 1e7;
  double peak = bound(0.0);
  double t = 0.0;
  while (t < kLimit) {
    t += std::max(0.25, 0.02 * t);
    const double b = bound(t);
    if (!(b < std::numeric_limits<double>::infinity())) continue;
    if (b > peak) {
      peak = b;
      continue;
    }
    if (b <= kRelative * peak) return t;
  }
  throw DivergenceError("laplace: envelope does not decay below 1e-18 of its peak");
}

int panels_for(double length) {
  return static_cast<int>(std::clamp(std::ceil(length), 4.0, 512.0));
}

}  // namespace

void GridFunction::validate() const {
  if (nodes.size() != values.size()) throw ArgumentError("grid function: nodes/values size mismatch");
  if (nodes.empty()) throw ArgumentError("grid function: no nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i]) || !std::isfinite(values[i])) {
      throw ArgumentError("grid function: non-finite node or value");
    }
    if (i > 0 && !(nodes[i] > nodes[i - 1])) {
      throw ArgumentError("grid function: nodes must be strictly increasing");
    }
  }
  if (domain == GridDomain::mu_interval && (nodes.front() < -1.0 || nodes.back() > 1.0)) {
    throw ArgumentError("grid function: mu nodes must lie in [-1, 1]");
  }
  if (domain != GridDomain::mu_interval && nodes.front() < 0.0) {
    throw ArgumentError("grid function: half-line nodes must be >= 0");
  }
}

double GridFunction::operator()(double x) const {
  if (x < nodes.front() || x > nodes.back()) return 0.0;
  if (nodes.size() == 1) return values.front();
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  if (it == nodes.end()) return values.back();
  const std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
  const std::size_t lo = hi - 1;
  const double s = (x - nodes[lo]) / (nodes[hi] - nodes[lo]);
  return values[lo] + s * (values[hi] - values[lo]);
}

Expr GridFunction::to_expr() const {
  validate();
  GridFunction copy = *this;
  return Expr::function([copy](double x) { return copy(x); }, "grid");
}

double eval_power_series(const CoeffVector& g, double mu) {
  if (!(std::abs(mu) <= 1.0)) {
    throw ArgumentError("eval_power_series: requires |mu| <= 1, got " + std::to_string(mu));
  }
  return horner(g.g, mu);
}

Expr power_series_expr(const CoeffVector& g) {
  check_finite(g);
  std::vector<double> coeffs = g.g;
  return Expr::function([coeffs](double mu) { return horner(coeffs, mu); }, "Ag");
}

double form_direct(const MomentSequence& q, const CoeffVector& g) {
  check_finite(g);
  const std::size_t k = g.size();
  if (k == 0) return 0.0;
  if (q.size() < 2 * k - 1) {
    throw ArgumentError("form_direct: K = " + std::to_string(k) + " needs " +
                        std::to_string(2 * k - 1) + " moments, got " + std::to_string(q.size()));
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < k; ++n) {
    double row = 0.0;
    for (std::size_t m = 0; m < k; ++m) row += q.values[n + m] * g.g[m];
    sum += g.g[n] * row;
  }
  return sum;
}

double form_integral(const Measure& m, const CoeffVector& g, const QuadratureConfig& cfg) {
  check_finite(g);
  return m.integrate(
      [&g](double mu) {
        const double v = horner(g.g, mu);
        return v * v;
      },
      cfg);
}

AdjointMoments adjoint_moments(const Measure& m, const Expr& u, std::size_t count,
                               const QuadratureConfig& cfg) {
  if (count == 0) throw ArgumentError("adjoint_moments: count must be >= 1");
  const VectorIntegrand f = [&u](double x, std::span<double> out) {
    double p = u(x);
    for (double& v : out) {
      v = p;
      p *= x;
    }
  };
  AdjointMoments r;
  r.values = m.integrate_vector(f, count, cfg).value;
  for (std::size_t n = 0; n < count; ++n) {
    const double sq = r.values[n] * r.values[n];
    r.l2_partial_sum += sq;
    if (n >= count / 2) r.last_window_increment += sq;
  }
  r.l2_decaying = r.last_window_increment <= 0.1 * r.l2_partial_sum;
  return r;
}

AdjointMoments adjoint_moments(const Measure& m, const GridFunction& u, std::size_t count,
                               const QuadratureConfig& cfg) {
  if (u.domain != GridDomain::mu_interval) {
    throw ArgumentError("adjoint_moments: grid function must live on the mu interval");
  }
  return adjoint_moments(m, u.to_expr(), count, cfg);
}

double laplace(const Expr& f, double lambda, const LaplaceOptions& opts,
               const QuadratureConfig& cfg) {
  if (!std::isfinite(lambda)) throw ArgumentError("laplace: lambda must be finite");
  const auto integrand = [&f, lambda](double t) { return std::exp(-t * lambda) * f(t); };
  if (opts.support_end) {
    const double end = *opts.support_end;
    if (!(end >= 0.0)) throw ArgumentError("laplace: support end must be >= 0");
    return integrate(integrand, 0.0, end, cfg, {EndpointSingularity::none, panels_for(end)});
  }
  if (!(lambda > 0.0)) {
    throw DivergenceError("laplace: lambda = " + std::to_string(lambda) +
                          " <= 0 for a function that is not compactly supported");
  }
  if (opts.envelope) {
    const double cutoff = envelope_cutoff(
        [&opts, lambda](double t) { return opts.envelope(t) * std::exp(-t * lambda); });
    return integrate(integrand, 0.0, cutoff, cfg, {EndpointSingularity::none, panels_for(cutoff)});
  }
  return integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), cfg);
}

double laplace(const GridFunction& f, double lambda, const QuadratureConfig& cfg) {
  if (f.domain != GridDomain::t_halfline) {
    throw ArgumentError("laplace: grid function must live on the t half-line");
  }
  LaplaceOptions opts;
  opts.support_end = f.nodes.back();
  return laplace(f.to_expr(), lambda, opts, cfg);
}

double laplace_adjoint(const Measure& sigma, const Expr& v, double t, const QuadratureConfig& cfg) {
  if (!(t > 0.0)) throw ArgumentError("laplace_adjoint: t must be > 0");
  if (sigma.support().lo < 0.0) throw ArgumentError("laplace_adjoint: sigma must live on [0, inf)");
  const double value = sigma.integrate([&v, t](double lambda) { return std::exp(-t * lambda) * v(lambda); }, cfg);
  if (!std::isfinite(value)) throw DivergenceError("laplace_adjoint: integral diverges");
  return value;
}

Expr mobius_V(const Expr& u) {
  const Expr x = Expr::variable();
  return (1.0 / (x + 0.5)) * u.compose((2.0 * x - 1.0) / (2.0 * x + 1.0));
}

NormPair unitarity_norms(const Measure& m, const Expr& u, const QuadratureConfig& cfg) {
  const Measure sigma = transport_to_sigma(m);
  const Expr vu = mobius_V(u);
  NormPair p{};
  p.mu_side = m.integrate([&u](double mu) { return u(mu) * u(mu); }, cfg);
  p.lambda_side = sigma.integrate([&vu](double lambda) { return vu(lambda) * vu(lambda); }, cfg);
  return p;
}

Expr laguerre_expand_U(const CoeffVector& g) {
  check_finite(g);
  if (static_cast<int>(g.size()) - 1 > kMaxLaguerreDegree) {
    throw ArgumentError("laguerre_expand_U: degree exceeds " + std::to_string(kMaxLaguerreDegree));
  }
  std::vector<double> coeffs = g.g;
  return Expr::function(
      [coeffs](double t) {
        if (coeffs.empty()) return 0.0;
        std::vector<double> l(coeffs.size());
        laguerre_all(t, l);
        double sum = 0.0;
        for (std::size_t n = 0; n < coeffs.size(); ++n) sum += coeffs[n] * l[n];
        return sum * std::exp(-0.5 * t);
      },
      "Ug");
}

std::function<double(double)> laguerre_envelope(const CoeffVector& g) {
  std::vector<double> abs_g;
  for (double v : g.g) abs_g.push_back(std::abs(v));
  return [abs_g](double t) {
    // L_n(-t) = sum_m C(n, m) t^m / m! dominates |L_n(t)|.
    double prev = 1.0;
    double cur = 1.0 + t;
    const double damp = std::exp(-0.5 * t);
    double sum = 0.0;
    for (std::size_t n = 0; n < abs_g.size(); ++n) {
      const double dominant = n == 0 ? 1.0 : cur;
      const double bound = std::min(1.0, dominant * damp);
      sum += abs_g[n] * (std::isnan(bound) ? 1.0 : bound);
      if (n >= 1) {
        const double dn = static_cast<double>(n);
        const double next = ((2.0 * dn + 1.0 + t) * cur - dn * prev) / (dn + 1.0);
        prev = cur;
        cur = next;
      }
    }
    return sum;
  };
}

double laguerre_norm_squared(const CoeffVector& g, const QuadratureConfig& cfg) {
  if (g.size() == 0) return 0.0;
  const Expr ug = laguerre_expand_U(g);
  const auto env = laguerre_envelope(g);
  const double cutoff = envelope_cutoff([&env](double t) {
    const double e = env(t);
    return e * e;
  });
  return integrate(
      [&ug](double t) {
        const double v = ug(t);
        return v * v;
      },
      0.0, cutoff, cfg, {EndpointSingularity::none, panels_for(cutoff)});
}

std::vector<double> default_lambda_grid() {
  constexpr int kPoints = 40;
  std::vector<double> grid(kPoints);
  const double lo = std::log(0.05);
  const double hi = std::log(20.0);
  for (int i = 0; i < kPoints; ++i) grid[i] = std::exp(lo + (hi - lo) * i / (kPoints - 1));
  grid.front() = 0.05;
  grid.back() = 20.0;
  return grid;
}

IntertwiningReport verify_intertwining(const CoeffVector& g, std::span<const double> lambda_grid,
                                       const QuadratureConfig& cfg) {
  const Expr lhs = mobius_V(power_series_expr(g));
  const Expr ug = laguerre_expand_U(g);
  LaplaceOptions opts;
  opts.envelope = laguerre_envelope(g);
  IntertwiningReport report;
  for (double lambda : lambda_grid) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw ArgumentError("verify_intertwining: lambda grid must lie in (0, inf)");
    }
    IntertwiningRow row{lambda, lhs(lambda), laplace(ug, lambda, opts, cfg), 0.0};
    row.diff = row.lhs - row.rhs;
    report.max_abs_deviation = std::max(report.max_abs_deviation, std::abs(row.diff));
    report.rows.push_back(row);
  }
  return report;
}

IntertwiningReport verify_intertwining(const CoeffVector& g, const Measure& m,
                                       const QuadratureConfig& cfg) {
  std::vector<double> grid;
  for (const Atom& at : m.atoms()) {
    if (!(at.x > -1.0 && at.x < 1.0)) {
      throw ArgumentError("verify_intertwining: measure must lie strictly inside (-1, 1)");
    }
    grid.push_back(mobius_lambda(at.x));
  }
  for (const DensityPiece& p : m.densities()) {
    if (!(p.a > -1.0 && p.b < 1.0)) {
      throw ArgumentError("verify_intertwining: measure must lie strictly inside (-1, 1)");
    }
    constexpr int kSamples = 16;
    for (int i = 0; i < kSamples; ++i) {
      grid.push_back(mobius_lambda(p.a + (p.b - p.a) * (i + 0.5) / kSamples));
    }
  }
  // lambda = 0 (mu = -1) is excluded above, so every point is positive.
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return verify_intertwining(g, grid, cfg);
}

}  // namespace hankel
