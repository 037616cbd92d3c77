#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hankel/moment_analysis.hpp"

namespace hankel {

/// Largest k eigenvalues of a (numerically) PSD section, descending.
/// Throws ArgumentError when k > N or the section is not PSD within tol.
std::vector<double> section_spectrum(const HankelSection& h, std::size_t k, double tol = 1e-10);

/// Finite-section evidence only: a plateau suggests a bounded form, growth
/// suggests an unbounded one. Nothing here certifies the infinite operator.
struct SpectralProfile {
  std::vector<std::size_t> orders;
  std::vector<double> norms;
  std::vector<std::vector<double>> top_eigenvalues;
  double growth_fit = 0.0;  // slope of log(norm) vs log(N) over the top three orders
  bool monotone = true;
};

/// orders must be strictly increasing; q needs 2 * max(orders) - 1 values.
SpectralProfile norm_profile(const MomentSequence& q, std::span<const std::size_t> orders,
                             std::size_t top_k = 5);

/// Least-squares slope of ys against xs.
double fit_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace hankel
