#pragma once

// Non-negative measures on an interval of the real line: finitely many atoms
// plus piecewise densities given as expressions.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hankel/expression.hpp"
#include "hankel/moment_sequence.hpp"
#include "hankel/quadrature.hpp"

namespace hankel {

struct Atom {
  double x;
  double w;
};

struct DensityPiece {
  double a;
  double b;  // may be +infinity; a may be -infinity
  Expr density;
  EndpointSingularity singular = EndpointSingularity::none;
};

struct Interval {
  double lo;
  double hi;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Name and parameters of a recognized family, kept for serialization and
/// for family-specific moment routines.
struct FamilyTag {
  std::string name;
  std::map<std::string, double> params;
};

class Measure {
 public:
  /// Validates: atom weights >= 0, density pieces with a < b and a density
  /// that is finite and non-negative on a sample grid, declared support (when
  /// given) containing everything. Throws ArgumentError.
  Measure(std::vector<Atom> atoms, std::vector<DensityPiece> densities,
          std::optional<Interval> declared_support = std::nullopt);

  /// Lebesgue measure on [0, 1].
  static Measure lebesgue01();
  /// Same measure as lebesgue01; moments 1/(n+1) generate the Hilbert matrix.
  static Measure hilbert();
  /// x^{-log x} (1 + theta sin(2 pi log x)) dx on [0, inf), theta in [-1, 1].
  static Measure stieltjes(double theta);
  static Measure point_mass(double x, double w = 1.0);
  /// Density 1 - x on [0, 1].
  static Measure compact();
  /// Density (-log x)^{-1/2} / sqrt(pi) on [0, 1]; moments (n+1)^{-1/2}.
  static Measure slow();
  /// Density -log x on [0, 1]; moments (n+1)^{-2}.
  static Measure inverse_square();
  /// Atom at `rate`; moments rate^n.
  static Measure geometric(double rate);
  /// Looks up a family by name; throws ArgumentError for unknown names or
  /// missing parameters.
  static Measure from_family(const std::string& name, const std::map<std::string, double>& params);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensityPiece>& densities() const { return densities_; }
  const Interval& support() const { return support_; }
  const std::optional<FamilyTag>& family() const { return family_; }

  /// Symbolic decay of the moment sequence when the family determines it.
  std::optional<DecayDescriptor> decay() const;

  /// Sum over atoms of w f(x) plus the quadrature of f times each density.
  double integrate(const std::function<double(double)>& f, const QuadratureConfig& cfg) const;
  VectorIntegral integrate_vector(const VectorIntegrand& f, std::size_t dim,
                                  const QuadratureConfig& cfg) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<DensityPiece> densities_;
  Interval support_;
  std::optional<FamilyTag> family_;
};

enum class Side { left, right };

struct LogMoments {
  std::vector<double> log_abs;  // log |q_n|, -inf for q_n == 0
  std::vector<int> sign;        // -1, 0 or +1
};

/// Largest moment magnitude returned in linear space; beyond it the
/// linear API throws OverflowError.
inline constexpr double kMomentOverflow = 1e300;

double total_mass(const Measure& m, const QuadratureConfig& cfg = {});

/// q_n = sum w x^n + int x^n density. Throws DivergenceError for divergent
/// moments, OverflowError above kMomentOverflow.
double moment(const Measure& m, int n, const QuadratureConfig& cfg = {});

/// (q_0, ..., q_{count-1}) from one shared quadrature pass; attaches the
/// family decay descriptor and the origin measure.
MomentSequence moments(const Measure& m, std::size_t count, const QuadratureConfig& cfg = {});

/// Moments in log space; the Stieltjes family is evaluated without ever
/// forming the large values.
LogMoments log_moments(const Measure& m, std::size_t count, const QuadratureConfig& cfg = {});

/// M((1-eps, 1)) for the right side, M((-1, -1+eps)) for the left side.
/// Atoms at +-1 are excluded. Requires support within [-1, 1].
double tail_mass(const Measure& m, Side side, double eps, const QuadratureConfig& cfg = {});

/// Maps dM on (-1, 1) to dSigma on (0, inf) via mu = (2 lambda - 1)/(2 lambda + 1),
/// dSigma(lambda) = (lambda + 1/2)^2 dM(mu). Atoms keep their position under
/// the map with weights scaled by (lambda + 1/2)^2; densities become
/// sigma(lambda) = eta(mu(lambda)). Throws ArgumentError when the support
/// touches +-1.
Measure transport_to_sigma(const Measure& m);

/// lambda(mu) = (1 + mu) / (2 (1 - mu)) and its inverse.
double mobius_lambda(double mu);
double mobius_mu(double lambda);

}  // namespace hankel
