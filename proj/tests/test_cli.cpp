#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sys/wait.h>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "hankel/json_io.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "hankel");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = hankel::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("hankel_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string moments_file(const std::string& name, const hankel::MomentSequence& q) {
  return write_file(name, hankel::moments_to_json(q).dump());
}

}  // namespace

TEST_CASE("moments of a family") {
  const Result r = run({"moments", "lebesgue01", "--count", "5"});
  REQUIRE(r.code == 0);
  const json j = r.doc();
  CHECK(j["schema"] == "hankel/v1");
  for (int n = 0; n < 5; ++n) CHECK(j["values"][n].get<double>() == doctest::Approx(1.0 / (n + 1)).epsilon(1e-14));
  CHECK(j["manifest"]["command"] == "moments");
  CHECK(j["manifest"]["tool_version"] == hankel::cli::kToolVersion);
}

TEST_CASE("Stieltjes moments in log space") {
  const std::string path = write_file("stieltjes.json", R"({"family": "stieltjes", "params": {"theta": 1}})");
  const Result r = run({"--log-space", "moments", path, "--count", "4"});
  REQUIRE(r.code == 0);
  const double expected = 0.5 * std::log(std::numbers::pi) + 4.0;
  CHECK(r.doc()["log_values"][3].get<double>() == doctest::Approx(expected).epsilon(1e-10));

  // Counts past the double range switch to log space on their own.
  const Result big = run({"moments", path, "--count", "60"});
  REQUIRE(big.code == 0);
  CHECK(big.doc().contains("log_values"));
  CHECK(big.err.find("log space") != std::string::npos);
}

TEST_CASE("input errors exit 2") {
  CHECK(run({"moments", write_file("broken.json", "{\"atoms\": [")}).code == 2);
  CHECK(run({"moments", (scratch() / "missing.json").string()}).code == 2);
  CHECK(run({"moments", write_file("bad_measure.json", R"({"atoms": [{"x": 0, "w": -1}]})")}).code == 2);
  CHECK(run({"classify", write_file("bad_moments.json", R"({"values": [1, 2]})")}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"moments"}).code == 2);
  CHECK(run({"--tol", "-1", "verify", "laguerre"}).code == 2);
  CHECK(run({"stieltjes-demo", "--theta", "2"}).code == 2);
  CHECK(run({"--config", write_file("cfg.json", R"({"base_order": 0})"), "moments", "hilbert"}).code == 2);
}

TEST_CASE("numerical failures exit 3") {
  const std::string cauchy =
      write_file("cauchy.json", R"j({"densities": [{"a": 0, "b": "inf", "expr": "1/(1 + x^2)"}]})j");
  const Result r = run({"moments", cauchy, "--count", "3"});
  CHECK(r.code == 3);
  CHECK(r.err.find("numerical failure") != std::string::npos);
}

TEST_CASE("classify verdicts") {
  const Result hilbert = run({"classify", moments_file("hilbert.json", hankel::families::hilbert(64))});
  REQUIRE(hilbert.code == 0);
  CHECK(hilbert.doc()["bounded"] == true);
  CHECK(hilbert.doc()["compact"] == false);
  CHECK(hilbert.doc()["psd_evidence"].size() == 4);

  const Result ones = run({"classify", moments_file("ones.json", hankel::families::all_ones(64))});
  REQUIRE(ones.code == 0);
  CHECK(ones.doc()["closable"] == false);

  const Result inv = run({"classify", moments_file("inv.json", hankel::families::inverse_square(64)),
                          "--orders", "4,8,32"});
  REQUIRE(inv.code == 0);
  CHECK(inv.doc()["compact"] == true);
  CHECK(inv.doc()["psd_evidence"].size() == 6);

  CHECK(run({"classify", moments_file("short.json", hankel::families::hilbert(20)), "--orders", "16"}).code == 2);
}

TEST_CASE("spectrum profile") {
  const std::string path = moments_file("ones511.json", hankel::families::all_ones(511));
  const Result r = run({"spectrum", path, "--k", "2"});
  REQUIRE(r.code == 0);
  const json j = r.doc();
  CHECK(j["mode"] == "evidence");
  CHECK(j["orders"].size() == 6);
  CHECK(j["growth_fit"].get<double>() == doctest::Approx(1.0));
  CHECK(run({"spectrum", path, "--orders", "512"}).code == 2);
}

TEST_CASE("verify suites pass") {
  const Result laguerre = run({"verify", "laguerre", "--max-n", "20"});
  CHECK(laguerre.code == 0);
  CHECK(laguerre.doc()["max_deviation"].get<double>() <= 1e-9);

  const Result form = run({"verify", "form", "--measure", "lebesgue01", "--K", "16", "--trials", "100", "--seed", "7"});
  CHECK(form.code == 0);
  CHECK(form.doc()["rows"].size() == 100);
  CHECK(form.doc()["manifest"]["seed"] == 7);

  CHECK(run({"verify", "intertwine", "--K", "8"}).code == 0);
  CHECK(run({"verify", "transport"}).code == 0);
  CHECK(run({"verify", "transport", "--measure", "compact"}).code == 2);
  const std::string inner = write_file("inner.json", R"({"atoms": [{"x": 0.2, "w": 1}],
      "densities": [{"a": -0.9, "b": 0.9, "expr": "1 + x^2"}]})");
  CHECK(run({"verify", "transport", "--measure", inner}).code == 0);
}

TEST_CASE("tolerance breaches exit 1") {
  const Result r = run({"--tol", "1e-30", "verify", "laguerre", "--max-n", "5"});
  CHECK(r.code == 1);
  CHECK(r.err.find("breached at n = ") != std::string::npos);
  CHECK(run({"--tol", "1e-300", "verify", "intertwine", "--K", "4", "--trials", "2"}).code == 1);
}

TEST_CASE("stieltjes demo") {
  const Result r = run({"stieltjes-demo", "--theta", "-1,0,1", "--count", "11"});
  REQUIRE(r.code == 0);
  const json rows = r.doc()["rows"];
  CHECK(rows[0]["closed_form"].get<double>() == doctest::Approx(2.27587579446875).epsilon(1e-13));
  CHECK(rows[1]["values"][2].get<double>() == doctest::Approx(4.81802909469872).epsilon(1e-8));
  for (const json& row : rows) CHECK(row["max_pairwise_rel"].get<double>() <= 1e-6);
}

TEST_CASE("runs are deterministic apart from the timestamp") {
  auto strip = [](json j) {
    j["manifest"].erase("timestamp");
    return j.dump();
  };
  const std::vector<std::string> args{"--seed", "3", "verify", "form", "--measure", "compact", "--K", "8", "--trials", "10"};
  CHECK(strip(run(args).doc()) == strip(run(args).doc()));
  const std::vector<std::string> other{"--seed", "4", "verify", "form", "--measure", "compact", "--K", "8", "--trials", "10"};
  CHECK(strip(run(args).doc()) != strip(run(other).doc()));
}

TEST_CASE("--out writes the document to a file") {
  const std::string path = (scratch() / "out.json").string();
  const Result r = run({"--out", path, "moments", "hilbert", "--count", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const json j = json::parse(in);
  CHECK(j["values"].size() == 3);
  CHECK(j["manifest"]["outputs"][0] == path);
}

TEST_CASE("the installed binary reports exit codes") {
  const std::string bin = HANKEL_BINARY;
  const std::string quiet = " > /dev/null 2>&1";
  auto status = [](int raw) { return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1; };
  CHECK(status(std::system((bin + " moments lebesgue01 --count 3" + quiet).c_str())) == 0);
  CHECK(status(std::system((bin + " moments /nonexistent.json" + quiet).c_str())) == 2);
  CHECK(status(std::system((bin + " --tol 1e-30 verify laguerre --max-n 2" + quiet).c_str())) == 1);
}
