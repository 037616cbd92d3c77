#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

/// Cyclic Jacobi rotations; eigenvalues ascending.
inline std::vector<double> jacobi_eigenvalues(Matrix a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline Matrix hankel_matrix(const std::function<double(int)>& q, int n, int shift = 0) {
  Matrix h(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h[i][j] = q(i + j + shift);
  return h;
}

/// Composite Simpson with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

/// L_n(t) from the explicit sum  sum_m n! / ((n-m)! (m!)^2) (-t)^m.
inline double laguerre_explicit(int n, double t) {
  double sum = 0.0;
  for (int m = 0; m <= n; ++m) {
    // binomial(n, m) / m!
    double c = 1.0;
    for (int i = 1; i <= m; ++i) c *= static_cast<double>(n - m + i) / i / i;
    sum += c * std::pow(-t, m);
  }
  return sum;
}

}  // namespace oracle
