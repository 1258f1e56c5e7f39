#pragma once

// Scenario runner: binds the measures, the Christoffel engine, and the
// equilibrium/Bessel predictors into reproducible convergence experiments.
//
// A scenario fixes a support, a base point, and a weight family; a run
// evaluates lambda_n along a ladder of degrees, scales each value by n^kappa
// (kappa picked from the base point's interior/endpoint classification),
// attaches the predicted limit constant, and extrapolates the scaled column.
// The comparison scenarios (identity_*) instead pair each lambda_n with the
// matching lambda_{2n} of a transformed measure, and constructions_local
// reports window integrals of the local product construction.
//
// Runs are seed-free and sequential; identical configs produce byte-identical
// CSV output.  Timing appears in the JSON export only.

#include "ccf/real.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ccf {

struct ScenarioConfig {
  std::string scenario_id;
  std::optional<double> alpha;           // default: per-scenario
  std::optional<int> nmax;               // truncates/extends the default ladder
  std::vector<int> n_ladder;             // explicit ladder; overrides nmax
  std::optional<unsigned> precision_bits;  // seed of the engine's ladder
  std::optional<double> tau;             // constructions_local only
};

struct ScenarioInfo {
  std::string id;
  std::string description;
  double default_alpha = 0;
  bool fixed_alpha = false;  // the scenario's measure pins alpha
  std::vector<int> default_ladder;
};

struct ReportRow {
  int n = 0;
  double lambda = 0;     // lambda_n (or the window integral for constructions)
  double scaled = 0;     // n^kappa * lambda
  double predicted = 0;  // limit constant, or n^kappa * lambda_{2n} for identities
  double ratio = 0;      // scaled / predicted
  bool ok = false;
  std::string error;     // failure note when !ok; values are NaN then
};

struct ConvergenceReport {
  std::string scenario_id;
  double alpha = 0;
  double kappa = 0;
  double predicted_limit = 0;    // asymptotic constant for the scaled column
  unsigned precision_bits = 0;   // 0 = engine default
  std::optional<double> tau;
  std::vector<int> ladder;
  std::vector<ReportRow> rows;
  double extrapolated_limit = 0;
  double extrapolated_ratio = 0;  // extrapolated_limit / predicted_limit
  double fit_residual = 0;
  bool degenerate_fit = false;
  double total_seconds = 0;       // JSON only; never exported to CSV
};

// The registered catalog, in registration order.
const std::vector<ScenarioInfo>& list_scenarios();

// The ladder a config resolves to: explicit n_ladder if given, otherwise the
// scenario default truncated to nmax (with nmax itself appended when it
// exceeds every default entry).
std::vector<int> resolve_ladder(const ScenarioInfo& info, const ScenarioConfig& config);

// Runs one scenario.  Engine failures on individual ladder entries are
// recorded in their rows and the run continues.
ConvergenceReport run_scenario(const ScenarioConfig& config);

// Fixed schema: header "n,lambda,kappa,scaled,predicted,ratio", one row per
// ladder entry, 17 significant digits, '.' decimal separator, '\n' endings.
std::string to_csv(const ConvergenceReport& report);

// Mirrors every report field, timing included.
std::string to_json(const ConvergenceReport& report);
ConvergenceReport report_from_json(const std::string& text);

// format is "csv" or "json"; writes to path ("-" for stdout).
void export_report(const ConvergenceReport& report, const std::string& format,
                   const std::string& path);

// One scenario per block in a plain-text key=value config; blocks are
// separated by blank lines and '#' starts a comment.  Keys: scenario, alpha,
// nmax, precision_bits, tau, out, format.
struct JobSpec {
  ScenarioConfig config;
  std::string out;
  std::string format = "csv";
};
std::vector<JobSpec> parse_config(const std::string& text);

}  // namespace ccf
