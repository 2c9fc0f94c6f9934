// End-to-end checks of the command line binary. The path to the built binary
// arrives through the ONEGRAB_CLI environment variable.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

using json = nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

std::string cli_path() {
  const char* path = std::getenv("ONEGRAB_CLI");
  REQUIRE_MESSAGE(path != nullptr, "ONEGRAB_CLI must point at the binary");
  return path;
}

RunResult run(const std::string& args, bool capture_stderr = false) {
  const std::string redirect =
      capture_stderr ? " 2>&1 1>/dev/null" : " 2>/dev/null";
  const std::string command = cli_path() + " " + args + redirect;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

}  // namespace

TEST_CASE("minsize emits the documented json shape") {
  const RunResult result = run(
      "minsize --population 10 --structure-sizes 3,3 --dof 1 "
      "--confidence 0.8 --method exact");
  REQUIRE(result.exit_code == 0);
  const json out = json::parse(result.output);
  CHECK(out.at("r") == 5);
  CHECK(out.at("method") == "exact");
  CHECK(out.at("achieved").get<double>() == doctest::Approx(5.0 / 6.0));
  CHECK(out.at("variant").at("p0") == "safe");
  CHECK(out.at("variant").at("delta") == "strict");
  CHECK(out.at("fallback_used") == false);
}

TEST_CASE("usage problems exit with 2 and a diagnostic") {
  const RunResult unknown = run("minsize --bogus", true);
  CHECK(unknown.exit_code == 2);
  CHECK(unknown.output.find("usage") != std::string::npos);

  const RunResult missing = run("minsize --population 10 --dof 1 --confidence 0.5",
                                true);
  CHECK(missing.exit_code == 2);

  const RunResult no_seed = run(
      "minsize --population 10 --structure-sizes 3,3 --dof 1 "
      "--confidence 0.5 --method mc",
      true);
  CHECK(no_seed.exit_code == 2);
}

TEST_CASE("infeasible requirements exit with 3") {
  const RunResult result = run(
      "minsize --population 10 --structure-sizes 1,1 --dof 2 "
      "--confidence 0.9 --method exact",
      true);
  CHECK(result.exit_code == 3);
  const json diagnostic = json::parse(lines_of(result.output).back());
  CHECK(diagnostic.at("error") == "infeasible");
  CHECK(diagnostic.contains("message"));
}

TEST_CASE("numeric domain problems exit with 4") {
  const RunResult result = run(
      "minsize --population 0 --structure-sizes 3 --dof 1 "
      "--confidence 0.9 --method exact",
      true);
  CHECK(result.exit_code == 4);
  const json diagnostic = json::parse(lines_of(result.output).back());
  CHECK(diagnostic.at("error") == "domain");
}

TEST_CASE("prob reports bound, exact and mc views together") {
  const RunResult result = run(
      "prob --population 10 --structure-sizes 3,3 --dof 1 --r 4 "
      "--seed 7 --trials 20000");
  REQUIRE(result.exit_code == 0);
  const json out = json::parse(result.output);
  CHECK(out.at("exact").get<double>() ==
        doctest::Approx(0.6714285714285715).epsilon(1e-14));
  CHECK(out.at("bound").at("lower_bound").get<double>() ==
        doctest::Approx(0.568).epsilon(1e-12));
  const double p_hat = out.at("mc").at("p_hat").get<double>();
  CHECK(std::abs(p_hat - 0.6714285714285715) < 0.015);
  CHECK(out.at("mc").at("trials") == 20000);
}

TEST_CASE("curve csv has the fixed header and sane rows") {
  const std::string args =
      "curve --population 100 --structure-size 10 --structures 5 --dof 2 "
      "--confidence-grid 0.90:0.99:0.01 --trials 50 --repeats 3 --seed 5";
  const RunResult result = run(args);
  REQUIRE(result.exit_code == 0);
  const std::vector<std::string> lines = lines_of(result.output);
  REQUIRE(lines.size() == 11);
  CHECK(lines[0] == "p_target,r_bound,r_exact,r_mc_mean,r_mc_std");
  double previous_p = 0.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    double p = 0.0;
    long long r_bound = 0;
    long long r_exact = 0;
    double mc_mean = 0.0;
    double mc_std = 0.0;
    REQUIRE(std::sscanf(lines[i].c_str(), "%lf,%lld,%lld,%lf,%lf", &p,
                        &r_bound, &r_exact, &mc_mean, &mc_std) == 5);
    CHECK(p > previous_p);
    CHECK(r_bound >= r_exact);
    CHECK(mc_std >= 0.0);
    previous_p = p;
  }

  const RunResult again = run(args);
  CHECK(again.output == result.output);  // byte-identical reruns
}

TEST_CASE("curve omits the exact column for very large populations") {
  const RunResult result = run(
      "curve --population 3000 --structure-size 300 --structures 5 --dof 2 "
      "--confidence-grid 0.95:0.95:0.01 --trials 20 --repeats 2 --seed 9");
  REQUIRE(result.exit_code == 0);
  const std::vector<std::string> lines = lines_of(result.output);
  REQUIRE(lines.size() == 2);
  // p,r_bound,,mc_mean,mc_std — the empty field stays in place.
  CHECK(lines[1].find(",,") != std::string::npos);
}

TEST_CASE("compare lists the one-grab and sequential budgets") {
  const RunResult result = run(
      "compare --population 100 --structure-sizes 30,30 --dof 2 "
      "--confidence 0.99");
  REQUIRE(result.exit_code == 0);
  const std::vector<std::string> lines = lines_of(result.output);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "method,hypotheses,points_touched");
  CHECK(lines[1].rfind("one_grab_bound,1,", 0) == 0);
  CHECK(lines[2].rfind("one_grab_exact,1,", 0) == 0);
  CHECK(lines[3] == "sequential_ransac,72,144");
}

TEST_CASE("demo reports rates in range and honors an explicit r") {
  const std::string args =
      "demo --population 60 --structure-size 15 --structures 3 "
      "--geometry line2d --noise 0.01 --threshold 0.03 --r 40 "
      "--trials 5 --seed 3";
  const RunResult result = run(args);
  REQUIRE(result.exit_code == 0);
  const json out = json::parse(result.output);
  CHECK(out.at("r_used") == 40);
  const double coverage = out.at("coverage_rate").get<double>();
  const double recovery = out.at("recovery_rate").get<double>();
  CHECK(coverage >= 0.0);
  CHECK(coverage <= 1.0);
  CHECK(recovery >= 0.0);
  CHECK(recovery <= 1.0);

  const RunResult again = run(args);
  CHECK(again.output == result.output);
}

TEST_CASE("help exits cleanly") {
  const RunResult result = run("--help");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("minsize") != std::string::npos);
}
