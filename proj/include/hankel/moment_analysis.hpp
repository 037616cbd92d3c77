#pragma once

// Finite Hankel sections of moment sequences and the positivity,
// closability, boundedness and compactness criteria built on them.

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hankel/measure.hpp"
#include "hankel/moment_sequence.hpp"

namespace hankel {

inline constexpr std::size_t kMaxSectionOrder = 4096;

/// N x N matrix with entry(n, m) = q_{n+m+shift}, shift in {0, 1}.
struct HankelSection {
  std::size_t order = 0;
  int shift = 0;
  Eigen::MatrixXd entries;

  double operator()(std::size_t n, std::size_t m) const {
    return entries(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  }
};

/// Needs at least 2N - 1 + shift values; throws ArgumentError naming the
/// required count otherwise.
HankelSection hankel_section(const MomentSequence& q, std::size_t order, int shift = 0);

struct PsdResult {
  bool psd = false;
  double min_eigenvalue = 0.0;
  double spectral_norm = 0.0;
};

/// psd iff lambda_min >= -tol * max(1, ||H||). Rejects non-finite entries.
PsdResult is_psd(const HankelSection& h, double tol = 1e-10);

/// Both the shift-0 and the shift-1 section of order N are PSD.
bool stieltjes_check(const MomentSequence& q, std::size_t order, double tol = 1e-10);

struct PsdEvidence {
  std::size_t order = 0;
  int shift = 0;
  bool psd = false;
  double min_eigenvalue = 0.0;
};

enum class ClassificationMode { symbolic, heuristic };

/// Thresholds for the finite-data surrogate of the limit conditions.
struct HeuristicParams {
  double closable_factor = 1e-3;  // closable if max |q_n| over the window < factor * |q_0|
  double slope_margin = 0.15;     // bounded if the log-log slope <= -1 + margin
  double compact_drop = 1.5;      // compact if n |q_n| falls by this factor across the window
};

struct ClassificationReport {
  bool positive_semidefinite = true;
  std::vector<PsdEvidence> psd_evidence;
  bool closable = false;
  bool bounded = false;
  bool compact = false;
  double support_radius = 0.0;
  bool stieltjes = true;
  ClassificationMode mode = ClassificationMode::heuristic;
  double confidence = 1.0;            // fit R^2 in heuristic mode, 1 in symbolic mode
  std::optional<double> decay_slope;  // log|q_n| vs log n over the top dyadic window
  std::string note;
};

/// Symbolic verdicts when q.decay decides them, heuristic log-log regression
/// over the window [N/2, N) otherwise. PSD evidence for every requested
/// order at shifts 0 and 1. Requires q.size() >= 16 and 2N <= q.size() for
/// every order. Always satisfies compact => bounded => closable.
ClassificationReport classify(const MomentSequence& q, std::span<const std::size_t> orders,
                              double tol = 1e-10, const HeuristicParams& params = {});

struct TailEvidence {
  std::vector<double> eps;
  std::vector<double> right_ratio;  // M((1-eps, 1)) / eps
  std::vector<double> left_ratio;   // M((-1, -1+eps)) / eps
  double bounded_evidence = 0.0;    // sup of all ratios
  double compact_evidence = 0.0;    // last/first ratio over decreasing eps, worst side
  double atom_at_plus_one = 0.0;    // weights of endpoint atoms, reported separately
  double atom_at_minus_one = 0.0;
};

/// Tabulates the tail ratios over eps_grid (sorted into decreasing order).
TailEvidence widom_tail_check(const Measure& m, std::span<const double> eps_grid,
                              const QuadratureConfig& cfg = {});

}  // namespace hankel
