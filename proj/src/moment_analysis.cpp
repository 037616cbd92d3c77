#include "hankel/moment_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "hankel/errors.hpp"
#include "hankel/spectral.hpp"

namespace hankel {

HankelSection hankel_section(const MomentSequence& q, std::size_t order, int shift) {
  if (shift != 0 && shift != 1) throw ArgumentError("hankel_section: shift must be 0 or 1");
  if (order == 0 || order > kMaxSectionOrder) {
    throw ArgumentError("hankel_section: order must lie in [1, " +
                        std::to_string(kMaxSectionOrder) + "]");
  }
  const std::size_t required = 2 * order - 1 + static_cast<std::size_t>(shift);
  if (q.size() < required) {
    throw ArgumentError("hankel_section: order " + std::to_string(order) + " with shift " +
                        std::to_string(shift) + " needs " + std::to_string(required) +
                        " moments, got " + std::to_string(q.size()));
  }
  HankelSection h;
  h.order = order;
  h.shift = shift;
  const auto n = static_cast<Eigen::Index>(order);
  h.entries.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) h.entries(i, j) = q.values[i + j + shift];
  }
  return h;
}

PsdResult is_psd(const HankelSection& h, double tol) {
  if (!h.entries.allFinite()) throw ArgumentError("is_psd: section has non-finite entries");
  if (h.entries.size() == 0) return {true, 0.0, 0.0};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("is_psd: eigensolver failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
  PsdResult r;
  r.min_eigenvalue = ev(0);
  r.spectral_norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  r.psd = r.min_eigenvalue >= -tol * std::max(1.0, r.spectral_norm);
  return r;
}

bool stieltjes_check(const MomentSequence& q, std::size_t order, double tol) {
  if (q.size() < 2 * order) {
    throw ArgumentError("stieltjes_check: order " + std::to_string(order) + " needs " +
                        std::to_string(2 * order) + " moments, got " + std::to_string(q.size()));
  }
  return is_psd(hankel_section(q, order, 0), tol).psd && is_psd(hankel_section(q, order, 1), tol).psd;
}

namespace {

struct Verdicts {
  bool closable;
  bool bounded;
  bool compact;
  double support_radius;
};

std::optional<Verdicts> symbolic_verdicts(const DecayDescriptor& d) {
  switch (d.kind) {
    case DecayClass::bounded_not_decaying: return Verdicts{false, false, false, 1.0};
    case DecayClass::tends_to_zero: return Verdicts{true, false, false, 1.0};
    case DecayClass::inverse_n: return Verdicts{true, true, false, 1.0};
    case DecayClass::little_o_inverse_n: return Verdicts{true, true, true, 1.0};
    case DecayClass::geometric:
    case DecayClass::little_o_geometric:
      // Geometric decay with rate below 1 is o(1/n); rates >= 1 decide nothing.
      if (d.rate < 1.0) return Verdicts{true, true, true, d.rate};
      return std::nullopt;
    case DecayClass::unknown: return std::nullopt;
  }
  return std::nullopt;
}

struct Heuristic {
  Verdicts verdicts;
  double confidence;
  std::optional<double> slope;
};

Heuristic heuristic_verdicts(const MomentSequence& q, const HeuristicParams& p) {
  const std::size_t n_total = q.size();
  const std::size_t start = n_total / 2;

  double q0 = std::abs(q.values[0]);
  if (q0 == 0.0) {
    for (double v : q.values) q0 = std::max(q0, std::abs(v));
  }
  const double tol_closable = p.closable_factor * q0;

  std::vector<double> log_n;
  std::vector<double> log_q;
  double window_max = 0.0;
  for (std::size_t n = start; n < n_total; ++n) {
    const double a = std::abs(q.values[n]);
    window_max = std::max(window_max, a);
    if (a > 0.0) {
      log_n.push_back(std::log(static_cast<double>(n)));
      log_q.push_back(std::log(a));
    }
  }
  if (log_q.empty()) return {{true, true, true, 0.0}, 1.0, std::nullopt};

  // Support radius: largest one-step growth factor over the window.
  double max_step = -std::numeric_limits<double>::infinity();
  for (std::size_t n = start; n + 1 < n_total; ++n) {
    const double a = std::abs(q.values[n]);
    const double b = std::abs(q.values[n + 1]);
    if (a > 0.0 && b > 0.0) max_step = std::max(max_step, std::log(b) - std::log(a));
  }
  const double radius = std::isfinite(max_step) ? std::max(0.0, std::exp(max_step)) : 0.0;

  double slope = 0.0;
  double r2 = 1.0;
  if (log_q.size() >= 2) {
    slope = fit_slope(log_n, log_q);
    const double mean_x = std::accumulate(log_n.begin(), log_n.end(), 0.0) / log_n.size();
    const double mean_y = std::accumulate(log_q.begin(), log_q.end(), 0.0) / log_q.size();
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < log_q.size(); ++i) {
      const double pred = mean_y + slope * (log_n[i] - mean_x);
      ss_res += (log_q[i] - pred) * (log_q[i] - pred);
      ss_tot += (log_q[i] - mean_y) * (log_q[i] - mean_y);
    }
    r2 = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  }

  const double first_weighted = static_cast<double>(start) * std::abs(q.values[start]);
  const double last_weighted = static_cast<double>(n_total - 1) * std::abs(q.values[n_total - 1]);
  double max_weighted = 0.0;
  for (std::size_t n = start; n < n_total; ++n) {
    max_weighted = std::max(max_weighted, static_cast<double>(n) * std::abs(q.values[n]));
  }

  Verdicts v{};
  v.closable = window_max < tol_closable;
  v.bounded = v.closable && slope <= -1.0 + p.slope_margin &&
              max_weighted <= (1.0 + p.slope_margin) * first_weighted;
  v.compact = v.bounded && first_weighted >= p.compact_drop * last_weighted;
  v.support_radius = radius;
  return {v, r2, slope};
}

}  // namespace

ClassificationReport classify(const MomentSequence& q, std::span<const std::size_t> orders,
                              double tol, const HeuristicParams& params) {
  validate(q);
  if (q.size() < 16) {
    throw ArgumentError("classify: needs at least 16 moments, got " + std::to_string(q.size()));
  }
  for (std::size_t order : orders) {
    if (order == 0 || 2 * order > q.size()) {
      throw ArgumentError("classify: order " + std::to_string(order) + " needs " +
                          std::to_string(2 * order) + " moments, got " + std::to_string(q.size()));
    }
  }

  ClassificationReport report;
  for (std::size_t order : orders) {
    for (int shift : {0, 1}) {
      const PsdResult r = is_psd(hankel_section(q, order, shift), tol);
      report.psd_evidence.push_back({order, shift, r.psd, r.min_eigenvalue});
      if (!r.psd) {
        if (shift == 0) report.positive_semidefinite = false;
        report.stieltjes = false;
      }
    }
  }

  const bool all_zero =
      std::all_of(q.values.begin(), q.values.end(), [](double v) { return v == 0.0; });
  if (all_zero) {
    report.closable = report.bounded = report.compact = true;
    report.support_radius = 0.0;
    report.mode = q.decay ? ClassificationMode::symbolic : ClassificationMode::heuristic;
    report.confidence = 1.0;
    report.note = "zero sequence: the zero form is closed, bounded and compact";
    return report;
  }

  std::optional<Verdicts> symbolic;
  if (q.decay) symbolic = symbolic_verdicts(*q.decay);
  const Heuristic h = heuristic_verdicts(q, params);
  report.decay_slope = h.slope;
  if (symbolic) {
    report.mode = ClassificationMode::symbolic;
    report.confidence = 1.0;
    report.closable = symbolic->closable;
    report.bounded = symbolic->bounded;
    report.compact = symbolic->compact;
    report.support_radius = symbolic->support_radius;
    report.note = "verdicts read from decay descriptor '" +
                  std::string(decay_symbol(q.decay->kind)) + "'";
  } else {
    report.mode = ClassificationMode::heuristic;
    report.confidence = h.confidence;
    report.closable = h.verdicts.closable;
    report.bounded = h.verdicts.bounded;
    report.compact = h.verdicts.compact;
    report.support_radius = h.verdicts.support_radius;
    report.note =
        "heuristic: finite data cannot decide limit conditions; thresholds are engineering "
        "choices (window [N/2, N), closable factor " +
        std::to_string(params.closable_factor) + ", slope margin " +
        std::to_string(params.slope_margin) + ", compact drop " +
        std::to_string(params.compact_drop) + ")";
  }
  report.bounded = report.bounded && report.closable;
  report.compact = report.compact && report.bounded;
  return report;
}

TailEvidence widom_tail_check(const Measure& m, std::span<const double> eps_grid,
                              const QuadratureConfig& cfg) {
  if (eps_grid.empty()) throw ArgumentError("widom_tail_check: empty eps grid");
  TailEvidence ev;
  ev.eps.assign(eps_grid.begin(), eps_grid.end());
  std::sort(ev.eps.begin(), ev.eps.end(), std::greater<>());
  for (double eps : ev.eps) {
    ev.right_ratio.push_back(tail_mass(m, Side::right, eps, cfg) / eps);
    ev.left_ratio.push_back(tail_mass(m, Side::left, eps, cfg) / eps);
  }
  for (std::size_t i = 0; i < ev.eps.size(); ++i) {
    ev.bounded_evidence = std::max({ev.bounded_evidence, ev.right_ratio[i], ev.left_ratio[i]});
  }
  auto trend = [](const std::vector<double>& r) {
    return r.front() > 0.0 ? r.back() / r.front() : 0.0;
  };
  ev.compact_evidence = std::max(trend(ev.right_ratio), trend(ev.left_ratio));
  for (const Atom& at : m.atoms()) {
    if (at.x == 1.0) ev.atom_at_plus_one += at.w;
    if (at.x == -1.0) ev.atom_at_minus_one += at.w;
  }
  return ev;
}

}  // namespace hankel
