// Command-line front end: runs convergence scenarios (CSV/JSON export),
// lists the scenario catalog, and drives the verification suite.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 verification
// failure.

#include "ccf/acceptance.hpp"
#include "ccf/errors.hpp"
#include "ccf/harness.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kNumerical = 2, kVerification = 3 };

int run_one(const ccf::ScenarioConfig& config, const std::string& format,
            const std::string& out) {
  ccf::ConvergenceReport report = ccf::run_scenario(config);
  ccf::export_report(report, format, out);
  int failed = 0;
  for (const auto& row : report.rows)
    if (!row.ok) {
      ++failed;
      std::fprintf(stderr, "%s: n=%d failed: %s\n", config.scenario_id.c_str(), row.n,
                   row.error.c_str());
    }
  if (out != "-")
    std::fprintf(stderr, "%s: %zu rows (%d failed) -> %s\n", config.scenario_id.c_str(),
                 report.rows.size(), failed, out.c_str());
  return failed == 0 ? kOk : kNumerical;
}

int run_command(const ccf::ScenarioConfig& cli_config, const std::string& format,
                const std::string& out, const std::string& config_path) {
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::fprintf(stderr, "cannot open config file: %s\n", config_path.c_str());
      return kUsage;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::vector<ccf::JobSpec> jobs = ccf::parse_config(buf.str());
    if (jobs.empty()) {
      std::fprintf(stderr, "config file has no scenario blocks\n");
      return kUsage;
    }
    int worst = kOk;
    for (const ccf::JobSpec& job : jobs)
      worst = std::max(worst, run_one(job.config, job.format, job.out));
    return worst;
  }
  if (cli_config.scenario_id.empty() || out.empty()) {
    std::fprintf(stderr, "run needs either --config or both --scenario and --out\n");
    return kUsage;
  }
  return run_one(cli_config, format, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Christoffel function convergence experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a scenario and export its report");
  ccf::ScenarioConfig config;
  std::string scenario, out, format = "csv", config_path;
  double alpha = 0, tau = 0;
  int nmax = 0;
  unsigned bits = 0;
  run->add_option("--scenario", scenario, "Scenario id (see: list)");
  auto* alpha_opt = run->add_option("--alpha", alpha, "Power-weight exponent (> -1)");
  auto* nmax_opt = run->add_option("--nmax", nmax, "Truncate/extend the default degree ladder");
  auto* bits_opt =
      run->add_option("--precision-bits", bits, "Seed precision of the engine's ladder");
  auto* tau_opt = run->add_option("--tau", tau, "Window exponent (constructions_local only)");
  run->add_option("--out", out, "Output path ('-' for stdout)");
  run->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--config", config_path,
                  "Run key=value blocks from a file instead (one scenario per block)");

  auto* list = app.add_subcommand("list", "List registered scenarios");
  auto* verify = app.add_subcommand("verify", "Run the full verification suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (list->parsed()) {
      for (const ccf::ScenarioInfo& info : ccf::list_scenarios()) {
        std::printf("%-24s default alpha %-5g ladder", info.id.c_str(), info.default_alpha);
        for (int n : info.default_ladder) std::printf(" %d", n);
        std::printf("\n    %s\n", info.description.c_str());
      }
      return kOk;
    }
    if (verify->parsed()) {
      int failures = ccf::run_verification(std::cout);
      return failures == 0 ? kOk : kVerification;
    }
    config.scenario_id = scenario;
    if (*alpha_opt) config.alpha = alpha;
    if (*nmax_opt) config.nmax = nmax;
    if (*bits_opt) config.precision_bits = bits;
    if (*tau_opt) config.tau = tau;
    return run_command(config, format, out, config_path);
  } catch (const ccf::InvalidInputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const ccf::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumerical;
  }
}
