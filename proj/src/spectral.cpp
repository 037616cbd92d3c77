#include "hankel/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hankel/errors.hpp"

namespace hankel {

double fit_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw ArgumentError("fit_slope: needs at least two paired points");
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw ArgumentError("fit_slope: abscissae are all equal");
  return sxy / sxx;
}

namespace {

Eigen::VectorXd eigenvalues_ascending(const HankelSection& h) {
  if (!h.entries.allFinite()) throw ArgumentError("section_spectrum: non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("section_spectrum: eigensolver failed");
  return solver.eigenvalues();
}

}  // namespace

std::vector<double> section_spectrum(const HankelSection& h, std::size_t k, double tol) {
  if (k > h.order) {
    throw ArgumentError("section_spectrum: k = " + std::to_string(k) + " exceeds order " +
                        std::to_string(h.order));
  }
  const Eigen::VectorXd ev = eigenvalues_ascending(h);
  const double norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  if (ev(0) < -tol * std::max(1.0, norm)) {
    throw ArgumentError("section_spectrum: section is not PSD (lambda_min = " +
                        std::to_string(ev(0)) + ")");
  }
  std::vector<double> top(k);
  for (std::size_t i = 0; i < k; ++i) top[i] = ev(ev.size() - 1 - static_cast<Eigen::Index>(i));
  return top;
}

SpectralProfile norm_profile(const MomentSequence& q, std::span<const std::size_t> orders,
                             std::size_t top_k) {
  if (orders.empty()) throw ArgumentError("norm_profile: no orders given");
  for (std::size_t i = 1; i < orders.size(); ++i) {
    if (orders[i] <= orders[i - 1]) throw ArgumentError("norm_profile: orders must increase");
  }
  SpectralProfile profile;
  profile.orders.assign(orders.begin(), orders.end());
  for (std::size_t order : orders) {
    const Eigen::VectorXd ev = eigenvalues_ascending(hankel_section(q, order, 0));
    profile.norms.push_back(std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1))));
    std::vector<double> top;
    for (std::size_t i = 0; i < std::min(top_k, order); ++i) {
      top.push_back(ev(ev.size() - 1 - static_cast<Eigen::Index>(i)));
    }
    profile.top_eigenvalues.push_back(std::move(top));
  }
  for (std::size_t i = 1; i < profile.norms.size(); ++i) {
    if (profile.norms[i] + 1e-10 < profile.norms[i - 1]) profile.monotone = false;
  }
  const bool has_zero_norm =
      std::any_of(profile.norms.begin(), profile.norms.end(), [](double v) { return v <= 0.0; });
  if (profile.orders.size() >= 2 && !has_zero_norm) {
    const std::size_t first = profile.orders.size() >= 3 ? profile.orders.size() - 3 : 0;
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = first; i < profile.orders.size(); ++i) {
      xs.push_back(std::log(static_cast<double>(profile.orders[i])));
      ys.push_back(std::log(profile.norms[i]));
    }
    profile.growth_fit = fit_slope(xs, ys);
  }
  return profile;
}

}  // namespace hankel
