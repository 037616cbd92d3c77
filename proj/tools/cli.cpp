#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hankel/errors.hpp"
#include "hankel/json_io.hpp"
#include "hankel/measure.hpp"
#include "hankel/moment_analysis.hpp"
#include "hankel/operators.hpp"
#include "hankel/special_functions.hpp"
#include "hankel/spectral.hpp"

namespace hankel::cli {
namespace {

using nlohmann::json;

// Thrown when a verification suite breaches its tolerance.
struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::optional<double> tol;
  unsigned long long seed = 0;
  std::string config_path;
  std::string out_path;
  bool log_space = false;
};

struct RunContext {
  GlobalOptions global;
  QuadratureConfig cfg;
  std::string command;
  std::vector<std::string> inputs;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// A family name or a path to a measure document.
Measure load_measure(const std::string& spec) {
  static const std::vector<std::string> kFamilies = {
      "lebesgue01", "hilbert", "stieltjes", "ones", "compact", "slow", "inverse_square", "geometric"};
  if (std::find(kFamilies.begin(), kFamilies.end(), spec) != kFamilies.end()) {
    try {
      return Measure::from_family(spec, {});
    } catch (const ArgumentError& e) {
      throw SchemaError(e.what());
    }
  }
  return measure_from_json(read_json_file(spec));
}

void emit(const RunContext& ctx, json payload, std::ostream& out) {
  payload["schema"] = kSchemaVersion;
  json manifest;
  manifest["command"] = ctx.command;
  manifest["inputs"] = ctx.inputs;
  manifest["config"] = quadrature_config_to_json(ctx.cfg);
  manifest["seed"] = ctx.global.seed;
  if (ctx.global.tol) manifest["tol"] = *ctx.global.tol;
  manifest["outputs"] = json::array({ctx.global.out_path.empty() ? "stdout" : ctx.global.out_path});
  manifest["tool_version"] = kToolVersion;
  manifest["timestamp"] = utc_timestamp();
  payload["manifest"] = manifest;
  const std::string text = payload.dump(2) + "\n";
  if (ctx.global.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(ctx.global.out_path);
  if (!file) throw SchemaError("cannot write '" + ctx.global.out_path + "'");
  file << text;
}

std::vector<double> random_coefficients(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> g(k);
  for (double& v : g) v = dist(rng);
  return g;
}

std::vector<std::size_t> fitting_orders(const std::vector<std::size_t>& requested,
                                        const MomentSequence& q, bool explicit_request) {
  if (explicit_request) return requested;
  std::vector<std::size_t> orders;
  for (std::size_t n : requested) {
    if (2 * n <= q.size()) orders.push_back(n);
  }
  if (orders.empty()) throw ArgumentError("no default order fits " + std::to_string(q.size()) + " moments");
  return orders;
}

// ---- commands -------------------------------------------------------------

void cmd_moments(RunContext& ctx, const std::string& measure_path, std::size_t count,
                 std::ostream& out, std::ostream& err) {
  ctx.inputs = {measure_path};
  const Measure m = load_measure(measure_path);
  const bool stieltjes = m.family() && m.family()->name == "stieltjes";
  constexpr std::size_t kLinearStieltjesLimit = 41;  // n <= 40
  json payload;
  if (ctx.global.log_space || (stieltjes && count > kLinearStieltjesLimit)) {
    if (!ctx.global.log_space) {
      err << "note: Stieltjes moments beyond n = 40 are emitted in log space\n";
    }
    payload = log_moments_to_json(log_moments(m, count, ctx.cfg), m.decay());
  } else {
    payload = moments_to_json(moments(m, count, ctx.cfg));
  }
  payload["measure"] = measure_to_json(m);
  emit(ctx, payload, out);
}

void cmd_classify(RunContext& ctx, const std::string& path, std::vector<std::size_t> orders,
                  bool explicit_orders, std::ostream& out) {
  ctx.inputs = {path};
  const MomentSequence q = moments_from_json(read_json_file(path));
  orders = fitting_orders(orders, q, explicit_orders);
  const ClassificationReport report = classify(q, orders, ctx.global.tol.value_or(1e-10));
  emit(ctx, report_to_json(report), out);
}

void cmd_spectrum(RunContext& ctx, const std::string& path, std::vector<std::size_t> orders,
                  bool explicit_orders, std::size_t k, std::ostream& out) {
  ctx.inputs = {path};
  MomentSequence q = moments_from_json(read_json_file(path));
  std::vector<std::size_t> fit;
  for (std::size_t n : orders) {
    if (2 * n - 1 <= q.size()) fit.push_back(n);
  }
  if (explicit_orders && fit.size() != orders.size()) {
    throw ArgumentError("spectrum: requested orders need " + std::to_string(2 * orders.back() - 1) +
                        " moments, got " + std::to_string(q.size()));
  }
  if (fit.empty()) throw ArgumentError("spectrum: no order fits the available moments");
  emit(ctx, profile_to_json(norm_profile(q, fit, k)), out);
}

void cmd_verify_form(RunContext& ctx, const std::string& measure_spec, std::size_t k,
                     std::size_t trials, std::ostream& out, std::ostream& err) {
  ctx.inputs = {measure_spec};
  if (k == 0) throw ArgumentError("verify form: K must be >= 1");
  const double tol = ctx.global.tol.value_or(1e-9);
  const Measure m = load_measure(measure_spec);
  const MomentSequence q = moments(m, 2 * k - 1, ctx.cfg);
  std::mt19937_64 rng(ctx.global.seed);
  json table = json::array();
  double worst = 0.0;
  std::optional<std::string> offending;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const CoeffVector g{random_coefficients(rng, k)};
    const double direct = form_direct(q, g);
    const double integral = form_integral(m, g, ctx.cfg);
    const double dev = std::abs(direct - integral) / (1.0 + std::abs(direct));
    worst = std::max(worst, dev);
    table.push_back({trial, direct, integral, dev});
    if (dev > tol && !offending) {
      offending = "trial " + std::to_string(trial) + ": g = " + json(g.g).dump() +
                  ", direct = " + std::to_string(direct) + ", integral = " + std::to_string(integral);
    }
  }
  emit(ctx, {{"suite", "form"}, {"tolerance", tol}, {"max_deviation", worst}, {"rows", table}}, out);
  if (offending) throw VerificationFailure("form identity breached at " + *offending);
  err << "form: max scaled deviation " << worst << " over " << trials << " trials\n";
}

void cmd_verify_intertwine(RunContext& ctx, std::size_t k, std::size_t trials,
                           std::ostream& out, std::ostream& err) {
  if (k == 0) throw ArgumentError("verify intertwine: K must be >= 1");
  const double tol = ctx.global.tol.value_or(1e-8);
  const std::vector<double> grid = default_lambda_grid();
  std::mt19937_64 rng(ctx.global.seed);
  json reports = json::array();
  double worst = 0.0;
  std::optional<std::string> offending;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const CoeffVector g{random_coefficients(rng, k)};
    const IntertwiningReport r = verify_intertwining(g, grid, ctx.cfg);
    worst = std::max(worst, r.max_abs_deviation);
    reports.push_back({{"g", g.g}, {"max_abs_deviation", r.max_abs_deviation},
                       {"rows", intertwining_to_json(r)}});
    if (r.max_abs_deviation > tol && !offending) {
      offending = "trial " + std::to_string(trial) + ": g = " + json(g.g).dump();
    }
  }
  emit(ctx, {{"suite", "intertwine"}, {"tolerance", tol}, {"max_deviation", worst}, {"trials", reports}},
       out);
  if (offending) throw VerificationFailure("intertwining breached at " + *offending);
  err << "intertwine: max deviation " << worst << "\n";
}

void cmd_verify_laguerre(RunContext& ctx, int max_n, std::ostream& out, std::ostream& err) {
  if (max_n < 0 || max_n > kMaxLaguerreDegree) {
    throw ArgumentError("verify laguerre: --max-n must lie in [0, " +
                        std::to_string(kMaxLaguerreDegree) + "]");
  }
  const double tol = ctx.global.tol.value_or(1e-9);
  const std::vector<double> lambdas = {0.1, 0.5, 1.0, 2.0, 10.0};
  json rows = json::array();
  double worst = 0.0;
  std::optional<std::string> offending;
  for (int n = 0; n <= max_n; ++n) {
    CoeffVector unit{std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0)};
    unit.g.back() = 1.0;
    const Expr ug = laguerre_expand_U(unit);
    LaplaceOptions opts;
    opts.envelope = laguerre_envelope(unit);
    for (double lambda : lambdas) {
      const double numeric = laplace(ug, lambda, opts, ctx.cfg);
      const double closed = laguerre_laplace_closed(n, lambda);
      const double dev = std::abs(numeric - closed);
      worst = std::max(worst, dev);
      rows.push_back({n, lambda, numeric, closed, dev});
      if (dev > tol && !offending) {
        offending = "n = " + std::to_string(n) + ", lambda = " + std::to_string(lambda);
      }
    }
  }
  emit(ctx, {{"suite", "laguerre"}, {"tolerance", tol}, {"max_deviation", worst}, {"rows", rows}}, out);
  if (offending) throw VerificationFailure("Laguerre-Laplace identity breached at " + *offending);
  err << "laguerre: max deviation " << worst << "\n";
}

void cmd_verify_transport(RunContext& ctx, const std::string& measure_spec, std::ostream& out,
                          std::ostream& err) {
  const double tol = ctx.global.tol.value_or(1e-10);
  Measure m({}, {{-0.5, 0.5, Expr::constant(1.0)}});
  if (!measure_spec.empty()) {
    ctx.inputs = {measure_spec};
    m = load_measure(measure_spec);
  }
  const Measure sigma = transport_to_sigma(m);
  const double mass = total_mass(m, ctx.cfg);
  const double pulled_back =
      sigma.integrate([](double lambda) { return 1.0 / ((lambda + 0.5) * (lambda + 0.5)); }, ctx.cfg);
  const double growth =
      sigma.integrate([](double lambda) { return 1.0 / ((lambda + 1.0) * (lambda + 1.0)); }, ctx.cfg);
  const NormPair norms = unitarity_norms(m, Expr::variable(), ctx.cfg);
  const double mass_dev = std::abs(mass - pulled_back) / std::max(1.0, std::abs(mass));
  const double norm_dev =
      std::abs(norms.mu_side - norms.lambda_side) / std::max(1.0, std::abs(norms.mu_side));
  const double worst = std::max(mass_dev, norm_dev);
  emit(ctx,
       {{"suite", "transport"},
        {"tolerance", tol},
        {"mass", mass},
        {"mass_via_sigma", pulled_back},
        {"growth_condition_k2", growth},
        {"norm_sq_mu", norms.mu_side},
        {"norm_sq_lambda", norms.lambda_side},
        {"max_deviation", worst}},
       out);
  if (!(worst <= tol)) {
    throw VerificationFailure("transport breached: mass deviation " + std::to_string(mass_dev) +
                              ", norm deviation " + std::to_string(norm_dev));
  }
  err << "transport: max relative deviation " << worst << "\n";
}

void cmd_stieltjes_demo(RunContext& ctx, const std::vector<double>& thetas, std::size_t count,
                        std::ostream& out, std::ostream& err) {
  if (thetas.empty()) throw ArgumentError("stieltjes-demo: no theta given");
  if (count == 0) throw ArgumentError("stieltjes-demo: count must be >= 1");
  std::vector<LogMoments> columns;
  for (double theta : thetas) {
    if (!(theta >= -1.0 && theta <= 1.0)) {
      throw ArgumentError("stieltjes-demo: theta must lie in [-1, 1], got " + std::to_string(theta));
    }
    columns.push_back(log_moments(Measure::stieltjes(theta), count, ctx.cfg));
  }
  constexpr double kAgreement = 1e-6;
  constexpr std::size_t kCheckedUpTo = 10;
  constexpr std::size_t kLinearUpTo = 40;
  const bool log_space = ctx.global.log_space;
  json rows = json::array();
  std::optional<std::string> offending;
  for (std::size_t n = 0; n < count; ++n) {
    const double closed_log = 0.5 * std::log(std::numbers::pi) + 0.25 * (n + 1.0) * (n + 1.0);
    double pairwise = 0.0;
    double to_closed = 0.0;
    json values = json::array();
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const double li = columns[i].log_abs[n];
      to_closed = std::max(to_closed, std::abs(std::expm1(li - closed_log)));
      for (std::size_t j = 0; j < i; ++j) {
        pairwise = std::max(pairwise, std::abs(std::expm1(li - columns[j].log_abs[n])));
      }
      values.push_back(log_space || n > kLinearUpTo ? li : std::exp(li));
    }
    json row = {{"n", n},
                {log_space || n > kLinearUpTo ? "log_values" : "values", values},
                {"closed_form", log_space || n > kLinearUpTo ? closed_log : std::exp(closed_log)},
                {"max_pairwise_rel", pairwise},
                {"max_rel_to_closed_form", to_closed}};
    rows.push_back(row);
    if (n <= kCheckedUpTo && (pairwise > kAgreement || to_closed > kAgreement) && !offending) {
      offending = "n = " + std::to_string(n) + " (pairwise " + std::to_string(pairwise) +
                  ", closed form " + std::to_string(to_closed) + ")";
    }
  }
  emit(ctx, {{"suite", "stieltjes-demo"}, {"theta", thetas}, {"tolerance", kAgreement}, {"rows", rows}},
       out);
  if (offending) throw VerificationFailure("Stieltjes moments disagree at " + *offending);
  err << "stieltjes-demo: moments agree across theta for n <= " << std::min(count - 1, kCheckedUpTo)
      << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hankel moment-sequence toolkit", "hankel"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  RunContext ctx;
  GlobalOptions& g = ctx.global;
  app.add_option("--tol", g.tol, "PSD tolerance, or the suite tolerance for verify");
  app.add_option("--seed", g.seed, "Seed for randomized trials")->capture_default_str();
  app.add_option("--config", g.config_path, "QuadratureConfig overrides (JSON file)");
  app.add_option("--out", g.out_path, "Write the result document here instead of stdout");
  app.add_flag("--log-space", g.log_space, "Emit moments as log |q_n|");

  std::string measure_path;
  std::size_t count = 10;
  auto* moments_cmd = app.add_subcommand("moments", "Moments of a measure");
  moments_cmd->add_option("measure", measure_path, "Measure JSON file or family name")->required();
  moments_cmd->add_option("--count", count, "Number of moments")->capture_default_str();

  std::string moments_path;
  std::vector<std::size_t> orders;
  auto* classify_cmd = app.add_subcommand("classify", "Positivity and decay verdicts");
  classify_cmd->add_option("moments", moments_path, "Moment sequence JSON file")->required();
  auto* classify_orders =
      classify_cmd->add_option("--orders", orders, "Section orders")->delimiter(',');

  std::size_t top_k = 5;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Norm profile of Hankel sections");
  spectrum_cmd->add_option("moments", moments_path, "Moment sequence JSON file")->required();
  auto* spectrum_orders =
      spectrum_cmd->add_option("--orders", orders, "Section orders")->delimiter(',');
  spectrum_cmd->add_option("--k", top_k, "Eigenvalues kept per order")->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "Run an invariant suite");
  verify_cmd->require_subcommand(1);
  std::string verify_measure;
  std::size_t k_coeffs = 16;
  std::size_t trials = 100;
  auto* form_cmd = verify_cmd->add_subcommand("form", "Direct vs integral quadratic form");
  form_cmd->add_option("--measure", verify_measure, "Measure JSON file or family name")
      ->default_val("lebesgue01");
  form_cmd->add_option("--K", k_coeffs, "Coefficient count")->capture_default_str();
  form_cmd->add_option("--trials", trials, "Random trials")->capture_default_str();

  std::size_t intertwine_k = 8;
  std::size_t intertwine_trials = 10;
  auto* intertwine_cmd = verify_cmd->add_subcommand("intertwine", "V A g against B U g");
  intertwine_cmd->add_option("--K", intertwine_k, "Coefficient count")->capture_default_str();
  intertwine_cmd->add_option("--trials", intertwine_trials, "Random trials")->capture_default_str();

  int max_n = 20;
  auto* laguerre_cmd = verify_cmd->add_subcommand("laguerre", "Laguerre-Laplace closed form");
  laguerre_cmd->add_option("--max-n", max_n, "Largest degree")->capture_default_str();

  std::string transport_measure;
  auto* transport_cmd = verify_cmd->add_subcommand("transport", "Moebius transport of a measure");
  transport_cmd->add_option("--measure", transport_measure,
                            "Measure inside (-1, 1); default Lebesgue on [-1/2, 1/2]");

  std::vector<double> thetas = {-1.0, 0.0, 1.0};
  std::size_t demo_count = 11;
  auto* demo_cmd = app.add_subcommand("stieltjes-demo", "Theta-independence of Stieltjes moments");
  demo_cmd->add_option("--theta", thetas, "Theta values in [-1, 1]")->delimiter(',');
  demo_cmd->add_option("--count", demo_count, "Number of moments")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (!g.config_path.empty()) ctx.cfg = quadrature_config_from_json(read_json_file(g.config_path));
    if (g.tol && !(*g.tol > 0.0)) throw ArgumentError("--tol must be > 0");

    if (*moments_cmd) {
      ctx.command = "moments";
      cmd_moments(ctx, measure_path, count, out, err);
    } else if (*classify_cmd) {
      ctx.command = "classify";
      cmd_classify(ctx, moments_path, orders.empty() ? std::vector<std::size_t>{8, 16} : orders,
                   classify_orders->count() > 0, out);
    } else if (*spectrum_cmd) {
      ctx.command = "spectrum";
      cmd_spectrum(ctx, moments_path,
                   orders.empty() ? std::vector<std::size_t>{8, 16, 32, 64, 128, 256} : orders,
                   spectrum_orders->count() > 0, top_k, out);
    } else if (*verify_cmd) {
      if (*form_cmd) {
        ctx.command = "verify form";
        cmd_verify_form(ctx, verify_measure, k_coeffs, trials, out, err);
      } else if (*intertwine_cmd) {
        ctx.command = "verify intertwine";
        cmd_verify_intertwine(ctx, intertwine_k, intertwine_trials, out, err);
      } else if (*laguerre_cmd) {
        ctx.command = "verify laguerre";
        cmd_verify_laguerre(ctx, max_n, out, err);
      } else if (*transport_cmd) {
        ctx.command = "verify transport";
        cmd_verify_transport(ctx, transport_measure, out, err);
      }
    } else if (*demo_cmd) {
      ctx.command = "stieltjes-demo";
      cmd_stieltjes_demo(ctx, thetas, demo_count, out, err);
    }
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const SchemaError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ArgumentError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
  return kOk;
}

}  // namespace hankel::cli
