#include "hankel/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hankel/errors.hpp"

namespace hankel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Interior sample points of a piece for the non-negativity spot check.
std::vector<double> sample_points(double a, double b) {
  std::vector<double> xs;
  constexpr int kSamples = 33;
  if (std::isfinite(a) && std::isfinite(b)) {
    for (int i = 0; i < kSamples; ++i) xs.push_back(a + (b - a) * (i + 0.5) / kSamples);
  } else if (std::isfinite(a)) {
    for (int i = 0; i < kSamples; ++i) xs.push_back(a + std::ldexp(1.0, i - 8));
  } else if (std::isfinite(b)) {
    for (int i = 0; i < kSamples; ++i) xs.push_back(b - std::ldexp(1.0, i - 8));
  } else {
    for (int i = 0; i < kSamples; ++i) {
      xs.push_back(std::ldexp(1.0, i - 8));
      xs.push_back(-std::ldexp(1.0, i - 8));
    }
  }
  return xs;
}

}  // namespace

Measure::Measure(std::vector<Atom> atoms, std::vector<DensityPiece> densities,
                 std::optional<Interval> declared_support)
    : atoms_(std::move(atoms)), densities_(std::move(densities)) {
  double lo = kInf;
  double hi = -kInf;
  for (const Atom& at : atoms_) {
    if (!std::isfinite(at.x)) throw ArgumentError("measure: atom location must be finite");
    if (!(at.w >= 0.0) || !std::isfinite(at.w)) {
      throw ArgumentError("measure: atom weight must be finite and >= 0, got " + std::to_string(at.w));
    }
    lo = std::min(lo, at.x);
    hi = std::max(hi, at.x);
  }
  for (const DensityPiece& p : densities_) {
    if (std::isnan(p.a) || std::isnan(p.b) || !(p.a < p.b)) {
      throw ArgumentError("measure: density piece needs a < b");
    }
    if ((p.singular == EndpointSingularity::left && !std::isfinite(p.a)) ||
        (p.singular == EndpointSingularity::right && !std::isfinite(p.b))) {
      throw ArgumentError("measure: singular endpoint must be finite");
    }
    for (double x : sample_points(p.a, p.b)) {
      const double v = p.density(x);
      if (std::isnan(v) || v < -1e-14 || v == kInf) {
        throw ArgumentError("measure: density '" + p.density.to_string() +
                            "' is negative or not finite at x = " + std::to_string(x));
      }
    }
    lo = std::min(lo, p.a);
    hi = std::max(hi, p.b);
  }
  if (lo > hi) {
    lo = 0.0;
    hi = 0.0;
  }
  if (declared_support) {
    if (declared_support->lo > lo || declared_support->hi < hi) {
      throw ArgumentError("measure: declared support does not contain all atoms and densities");
    }
    support_ = *declared_support;
  } else {
    support_ = {lo, hi};
  }
}

Measure Measure::lebesgue01() {
  Measure m({}, {{0.0, 1.0, Expr::constant(1.0)}});
  m.family_ = FamilyTag{"lebesgue01", {}};
  return m;
}

Measure Measure::hilbert() {
  Measure m = lebesgue01();
  m.family_ = FamilyTag{"hilbert", {}};
  return m;
}

Measure Measure::stieltjes(double theta) {
  if (!(theta >= -1.0 && theta <= 1.0)) {
    throw ArgumentError("stieltjes family: theta must lie in [-1, 1]");
  }
  const Expr x = Expr::variable();
  const Expr density = pow(x, -log(x)) * (1.0 + theta * sin(2.0 * std::numbers::pi * log(x)));
  Measure m({}, {{0.0, kInf, density}});
  m.family_ = FamilyTag{"stieltjes", {{"theta", theta}}};
  return m;
}

Measure Measure::point_mass(double x, double w) {
  Measure m({{x, w}}, {});
  m.family_ = FamilyTag{"point_mass", {{"x", x}, {"w", w}}};
  return m;
}

Measure Measure::compact() {
  Measure m({}, {{0.0, 1.0, Expr::parse("1 - x")}});
  m.family_ = FamilyTag{"compact", {}};
  return m;
}

Measure Measure::slow() {
  const Expr x = Expr::variable();
  Measure m({}, {{0.0, 1.0, pow(-log(x), -0.5) / std::sqrt(std::numbers::pi),
                  EndpointSingularity::right}});
  m.family_ = FamilyTag{"slow", {}};
  return m;
}

Measure Measure::inverse_square() {
  Measure m({}, {{0.0, 1.0, Expr::parse("-log(x)"), EndpointSingularity::left}});
  m.family_ = FamilyTag{"inverse_square", {}};
  return m;
}

Measure Measure::geometric(double rate) {
  Measure m({{rate, 1.0}}, {});
  m.family_ = FamilyTag{"geometric", {{"rate", rate}}};
  return m;
}

Measure Measure::from_family(const std::string& name, const std::map<std::string, double>& params) {
  auto param = [&](const std::string& key, std::optional<double> fallback) {
    auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (fallback) return *fallback;
    throw ArgumentError("family '" + name + "' requires parameter '" + key + "'");
  };
  if (name == "lebesgue01") return lebesgue01();
  if (name == "hilbert") return hilbert();
  if (name == "stieltjes") return stieltjes(param("theta", 0.0));
  if (name == "point_mass") return point_mass(param("x", std::nullopt), param("w", 1.0));
  if (name == "ones") {
    Measure m = point_mass(1.0, 1.0);
    m.family_ = FamilyTag{"ones", {}};
    return m;
  }
  if (name == "compact") return compact();
  if (name == "slow") return slow();
  if (name == "inverse_square") return inverse_square();
  if (name == "geometric") return geometric(param("rate", 0.5));
  throw ArgumentError("unknown measure family '" + name + "'");
}

std::optional<DecayDescriptor> Measure::decay() const {
  if (!family_) return std::nullopt;
  const std::string& name = family_->name;
  if (name == "lebesgue01" || name == "hilbert") return DecayDescriptor{DecayClass::inverse_n};
  if (name == "compact" || name == "inverse_square") {
    return DecayDescriptor{DecayClass::little_o_inverse_n};
  }
  if (name == "slow") return DecayDescriptor{DecayClass::tends_to_zero};
  if (name == "ones") return DecayDescriptor{DecayClass::bounded_not_decaying};
  if (name == "geometric" || name == "point_mass") {
    const double r = std::abs(atoms_.front().x);
    if (atoms_.front().w == 0.0) return DecayDescriptor{DecayClass::geometric, 0.0};
    if (r < 1.0) return DecayDescriptor{DecayClass::geometric, r};
    if (r == 1.0) return DecayDescriptor{DecayClass::bounded_not_decaying};
  }
  return std::nullopt;
}

VectorIntegral Measure::integrate_vector(const VectorIntegrand& f, std::size_t dim,
                                         const QuadratureConfig& cfg) const {
  VectorIntegral total;
  total.value.assign(dim, 0.0);
  total.abs_value.assign(dim, 0.0);
  std::vector<double> buf(dim);
  for (const Atom& at : atoms_) {
    f(at.x, buf);
    for (std::size_t k = 0; k < dim; ++k) {
      total.value[k] += at.w * buf[k];
      total.abs_value[k] += at.w * std::abs(buf[k]);
    }
  }
  for (const DensityPiece& p : densities_) {
    const Expr& rho = p.density;
    const VectorIntegrand weighted = [&f, &rho](double x, std::span<double> out) {
      f(x, out);
      const double r = rho(x);
      for (double& v : out) v *= r;
    };
    VectorIntegral part = hankel::integrate_vector(weighted, dim, p.a, p.b, cfg, {p.singular, 1});
    for (std::size_t k = 0; k < dim; ++k) {
      total.value[k] += part.value[k];
      total.abs_value[k] += part.abs_value[k];
    }
    total.subdivisions += part.subdivisions;
  }
  return total;
}

double Measure::integrate(const std::function<double(double)>& f, const QuadratureConfig& cfg) const {
  const VectorIntegrand vf = [&f](double x, std::span<double> out) { out[0] = f(x); };
  return integrate_vector(vf, 1, cfg).value[0];
}

double total_mass(const Measure& m, const QuadratureConfig& cfg) {
  return m.integrate([](double) { return 1.0; }, cfg);
}

namespace {

bool is_stieltjes(const Measure& m) { return m.family() && m.family()->name == "stieltjes"; }

// log q_n for the Stieltjes family. With x = e^t the moment becomes
//   e^{(n+1)^2/4} int exp(-s^2) (1 + theta sin(2 pi (s + (n+1)/2))) ds,
// truncated where exp(-s^2) < 1e-18.
double stieltjes_log_moment(double theta, int n, const QuadratureConfig& cfg) {
  const double c = 0.5 * (n + 1.0);
  const double cutoff = std::sqrt(std::log(1e18));
  const double integral = integrate(
      [theta, c](double s) {
        return std::exp(-s * s) * (1.0 + theta * std::sin(2.0 * std::numbers::pi * (s + c)));
      },
      -cutoff, cutoff, cfg, {EndpointSingularity::none, 8});
  return c * c + std::log(integral);
}

void check_overflow(double v, int n) {
  if (!std::isfinite(v) || std::abs(v) > kMomentOverflow) {
    throw OverflowError("moment q_" + std::to_string(n) +
                        " exceeds the linear range; request log-space moments");
  }
}

}  // namespace

double moment(const Measure& m, int n, const QuadratureConfig& cfg) {
  if (n < 0) throw ArgumentError("moment: order must be >= 0");
  if (is_stieltjes(m)) {
    const double v = std::exp(stieltjes_log_moment(m.family()->params.at("theta"), n, cfg));
    check_overflow(v, n);
    return v;
  }
  const double v = m.integrate_vector(
                        [n](double x, std::span<double> out) { out[0] = std::pow(x, n); }, 1, cfg)
                       .value[0];
  check_overflow(v, n);
  return v;
}

MomentSequence moments(const Measure& m, std::size_t count, const QuadratureConfig& cfg) {
  if (count < 1) throw ArgumentError("moments: count must be >= 1");
  MomentSequence q;
  if (is_stieltjes(m)) {
    const LogMoments lm = log_moments(m, count, cfg);
    q.values.resize(count);
    for (std::size_t n = 0; n < count; ++n) {
      q.values[n] = lm.sign[n] * std::exp(lm.log_abs[n]);
      check_overflow(q.values[n], static_cast<int>(n));
    }
  } else {
    const VectorIntegrand powers = [](double x, std::span<double> out) {
      double p = 1.0;
      for (double& v : out) {
        v = p;
        p *= x;
      }
    };
    q.values = m.integrate_vector(powers, count, cfg).value;
    for (std::size_t n = 0; n < count; ++n) check_overflow(q.values[n], static_cast<int>(n));
  }
  q.decay = m.decay();
  q.origin = std::make_shared<const Measure>(m);
  return q;
}

LogMoments log_moments(const Measure& m, std::size_t count, const QuadratureConfig& cfg) {
  LogMoments out;
  out.log_abs.resize(count);
  out.sign.resize(count);
  if (is_stieltjes(m)) {
    const double theta = m.family()->params.at("theta");
    for (std::size_t n = 0; n < count; ++n) {
      out.log_abs[n] = stieltjes_log_moment(theta, static_cast<int>(n), cfg);
      out.sign[n] = 1;
    }
    return out;
  }
  const MomentSequence q = moments(m, count, cfg);
  for (std::size_t n = 0; n < count; ++n) {
    const double v = q.values[n];
    out.log_abs[n] = std::log(std::abs(v));
    out.sign[n] = (v > 0) - (v < 0);
  }
  return out;
}

double tail_mass(const Measure& m, Side side, double eps, const QuadratureConfig& cfg) {
  if (!(eps > 0.0 && eps < 1.0)) throw ArgumentError("tail_mass: eps must lie in (0, 1)");
  const Interval& s = m.support();
  if (s.lo < -1.0 || s.hi > 1.0) throw ArgumentError("tail_mass: support must lie within [-1, 1]");

  const double lo = side == Side::right ? 1.0 - eps : -1.0;
  const double hi = side == Side::right ? 1.0 : -1.0 + eps;
  double mass = 0.0;
  for (const Atom& at : m.atoms()) {
    if (at.x > lo && at.x < hi) mass += at.w;
  }
  for (const DensityPiece& p : m.densities()) {
    const double a = std::max(p.a, lo);
    const double b = std::min(p.b, hi);
    if (!(a < b)) continue;
    IntegrationHints hints;
    if (p.singular == EndpointSingularity::left && a == p.a) hints.singular = EndpointSingularity::left;
    if (p.singular == EndpointSingularity::right && b == p.b) hints.singular = EndpointSingularity::right;
    mass += integrate([&p](double x) { return p.density(x); }, a, b, cfg, hints);
  }
  return mass;
}

double mobius_lambda(double mu) { return (1.0 + mu) / (2.0 * (1.0 - mu)); }
double mobius_mu(double lambda) { return (2.0 * lambda - 1.0) / (2.0 * lambda + 1.0); }

Measure transport_to_sigma(const Measure& m) {
  std::vector<Atom> atoms;
  for (const Atom& at : m.atoms()) {
    if (!(at.x > -1.0 && at.x < 1.0)) {
      throw ArgumentError("transport_to_sigma: atom at " + std::to_string(at.x) +
                          " lies outside (-1, 1); the map sends mu = +-1 to lambda = 0 or infinity");
    }
    const double lambda = mobius_lambda(at.x);
    atoms.push_back({lambda, at.w * (lambda + 0.5) * (lambda + 0.5)});
  }
  const Expr to_mu = Expr::parse("(2*x - 1) / (2*x + 1)");
  std::vector<DensityPiece> pieces;
  for (const DensityPiece& p : m.densities()) {
    if (!(p.a > -1.0 && p.b < 1.0)) {
      throw ArgumentError("transport_to_sigma: density support [" + std::to_string(p.a) + ", " +
                          std::to_string(p.b) + "] touches +-1");
    }
    pieces.push_back({mobius_lambda(p.a), mobius_lambda(p.b), p.density.compose(to_mu), p.singular});
  }
  return Measure(std::move(atoms), std::move(pieces));
}

}  // namespace hankel
