#include "ccf/harness.hpp"

#include "ccf/asymptotics.hpp"
#include "ccf/christoffel.hpp"
#include "ccf/constructions.hpp"
#include "ccf/equilibrium.hpp"
#include "ccf/errors.hpp"
#include "ccf/measure.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <utility>

namespace ccf {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const std::vector<int> kDefaultLadder{16, 25, 40, 64, 100, 160, 200};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

const std::vector<ScenarioInfo>& registry() {
  static const std::vector<ScenarioInfo> kScenarios = {
      {"model1", "power weight |x|^a on [0,1], base point at the endpoint 0", 0.0, false,
       kDefaultLadder},
      {"model2", "power weight |x|^a on [-1,1], base point at the interior 0", 0.0, false,
       kDefaultLadder},
      {"circle_lebesgue", "arclength on the unit circle, base point 1 (exact: 2 pi/(n+1))", 0.0,
       true, kDefaultLadder},
      {"circle_power", "weight |z-i|^a on the unit circle, base point i", 1.0, false,
       kDefaultLadder},
      {"circle_wT", "weight |z^2+1|^a |z^2-1| / 2^(a+1) on the unit circle, base point i", 1.0,
       false, kDefaultLadder},
      {"lemniscate_power", "weight |z-z0|^a on {|z^2-1/2|=1}, base point z0 with z0^2-1/2 = i",
       0.0, false, kDefaultLadder},
      {"interval_interior", "weight |x-1/2|^a on [-1,1], base point 1/2", 0.0, false,
       kDefaultLadder},
      {"interval_endpoint", "weight |x-1|^a on [-1,1], base point at the endpoint 1", 1.0, false,
       kDefaultLadder},
      {"two_intervals_interior", "weight |x-0.6|^a on [-1,-1/4] u [1/4,1], base point 0.6", 0.0,
       false, kDefaultLadder},
      {"two_intervals_endpoint",
       "weight |x-1|^a on [-1,-1/4] u [1/4,1], base point at the endpoint 1", 0.0, false,
       kDefaultLadder},
      {"identity_mod01",
       "fold comparison: lambda_n of |x|^((a-1)/2) on [0,1] at 0 against lambda_2n of |x|^a on "
       "[-1,1] at 0",
       2.0, false, {5, 10, 20, 40}},
      {"identity_pullback",
       "square-root pullback comparison: lambda_n of |x|^a on [0,1] at 0 against lambda_2n of "
       "the pulled-back measure on [-1,1] at 0",
       0.0, false, {10, 20, 40}},
      {"constructions_local",
       "local product construction on [-1,1]: scaled window integrals of |C_n|^2 against the "
       "interior limit",
       0.0, false, kDefaultLadder},
  };
  return kScenarios;
}

const ScenarioInfo& find_scenario(const std::string& id) {
  for (const ScenarioInfo& info : registry())
    if (info.id == id) return info;
  throw InvalidInputError("unknown scenario '" + id + "' (see the list command)");
}

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

struct Resolved {
  std::string id;
  double alpha = 0;
  std::vector<int> ladder;
  std::optional<unsigned> precision_bits;
  std::optional<double> tau;
};

Resolved resolve(const ScenarioConfig& config) {
  const ScenarioInfo& info = find_scenario(config.scenario_id);
  Resolved r;
  r.id = info.id;
  r.alpha = config.alpha.value_or(info.default_alpha);
  if (!(r.alpha > -1)) throw InvalidInputError("alpha must be > -1");
  if (info.fixed_alpha && r.alpha != info.default_alpha)
    throw InvalidInputError("scenario '" + info.id + "' fixes alpha = " +
                            detail::sci(info.default_alpha));
  r.ladder = resolve_ladder(info, config);
  r.precision_bits = config.precision_bits;
  if (config.tau && info.id != "constructions_local")
    throw InvalidInputError("tau applies only to constructions_local");
  r.tau = config.tau;
  return r;
}

ReportRow failed_row(int n, const std::string& why) {
  ReportRow row;
  row.n = n;
  row.lambda = row.scaled = row.predicted = row.ratio = kNaN;
  row.ok = false;
  row.error = why;
  return row;
}

void finish_report(ConvergenceReport& report) {
  PrecisionGuard guard(192);
  std::vector<std::pair<int, Real>> pairs;
  for (const ReportRow& row : report.rows)
    if (row.ok) pairs.emplace_back(row.n, Real(row.scaled));
  if (pairs.size() >= 3) {
    Extrapolation ex = extrapolate(pairs);
    report.extrapolated_limit = to_double(ex.limit);
    report.fit_residual = to_double(ex.residual);
    report.degenerate_fit = ex.degenerate;
  } else if (!pairs.empty()) {
    report.extrapolated_limit = to_double(pairs.back().second);
    report.fit_residual = std::numeric_limits<double>::infinity();
    report.degenerate_fit = true;
  } else {
    report.extrapolated_limit = kNaN;
    report.fit_residual = std::numeric_limits<double>::infinity();
    report.degenerate_fit = true;
  }
  report.extrapolated_ratio = report.extrapolated_limit / report.predicted_limit;
}

// Scales lambda_n by n^kappa against a constant predicted limit.
ConvergenceReport run_direct(const Resolved& r, const PowerWeightMeasure& mu,
                             const Prediction& pred) {
  ConvergenceReport report;
  report.scenario_id = r.id;
  report.alpha = r.alpha;
  report.precision_bits = r.precision_bits.value_or(0);
  report.tau = r.tau;
  report.ladder = r.ladder;
  PrecisionGuard guard(192);
  report.kappa = to_double(pred.kappa);
  report.predicted_limit = to_double(pred.limit);

  std::vector<ChristoffelResult> results;
  bool swept = true;
  try {
    results = lambda_sweep(mu, r.ladder, r.precision_bits);
  } catch (const Error&) {
    swept = false;  // retry one ladder entry at a time below
  }
  for (std::size_t i = 0; i < r.ladder.size(); ++i) {
    int n = r.ladder[i];
    try {
      ChristoffelResult res = swept ? results[i] : lambda_n(mu, n, r.precision_bits);
      ReportRow row;
      row.n = n;
      Real scaled = pow_real(Real(n), pred.kappa) * res.lambda;
      row.lambda = to_double(res.lambda);
      row.scaled = to_double(scaled);
      row.predicted = report.predicted_limit;
      row.ratio = to_double(scaled / pred.limit);
      row.ok = true;
      report.rows.push_back(row);
    } catch (const Error& e) {
      report.rows.push_back(failed_row(n, e.what()));
    }
  }
  finish_report(report);
  return report;
}

// Pairs lambda_n(lhs) with lambda_{2n}(rhs); their ratio tends to one.  The
// predicted column carries n^kappa * lambda_{2n}(rhs) so that every row keeps
// ratio = scaled/predicted, and the scaled column is still extrapolated
// against the asymptotic constant of the lhs measure.
ConvergenceReport run_paired(const Resolved& r, const PowerWeightMeasure& lhs,
                             const PowerWeightMeasure& rhs, const Prediction& pred) {
  ConvergenceReport report;
  report.scenario_id = r.id;
  report.alpha = r.alpha;
  report.precision_bits = r.precision_bits.value_or(0);
  report.tau = r.tau;
  report.ladder = r.ladder;
  PrecisionGuard guard(192);
  report.kappa = to_double(pred.kappa);
  report.predicted_limit = to_double(pred.limit);

  std::vector<int> doubled;
  doubled.reserve(r.ladder.size());
  for (int n : r.ladder) doubled.push_back(2 * n);
  std::vector<ChristoffelResult> left, right;
  bool swept = true;
  try {
    left = lambda_sweep(lhs, r.ladder, r.precision_bits);
    right = lambda_sweep(rhs, doubled, r.precision_bits);
  } catch (const Error&) {
    swept = false;
  }
  for (std::size_t i = 0; i < r.ladder.size(); ++i) {
    int n = r.ladder[i];
    try {
      Real lam = swept ? left[i].lambda : lambda_n(lhs, n, r.precision_bits).lambda;
      Real lam2 = swept ? right[i].lambda : lambda_n(rhs, 2 * n, r.precision_bits).lambda;
      ReportRow row;
      row.n = n;
      Real nk = pow_real(Real(n), pred.kappa);
      row.lambda = to_double(lam);
      row.scaled = to_double(nk * lam);
      row.predicted = to_double(nk * lam2);
      row.ratio = to_double(lam / lam2);
      row.ok = true;
      report.rows.push_back(row);
    } catch (const Error& e) {
      report.rows.push_back(failed_row(n, e.what()));
    }
  }
  finish_report(report);
  return report;
}

ConvergenceReport run_constructions(const Resolved& r) {
  ConvergenceReport report;
  report.scenario_id = r.id;
  report.alpha = r.alpha;
  report.precision_bits = r.precision_bits.value_or(0);
  report.tau = r.tau;
  report.ladder = r.ladder;
  report.kappa = r.alpha + 1;

  PowerWeightMeasure mu = make_measure({RealInterval{-1, 1}}, Cd(0.0, 0.0), r.alpha);
  EquilibriumDensity eq = density_intervals({-1, 1});
  LocalBehaviorConfig cfg;
  cfg.tau = r.tau;
  {
    PrecisionGuard guard(192);
    report.predicted_limit =
        to_double(predict_interior(mu.weight_at(singular_center(mu)),
                                   eq.eval(Real(0)), Real(r.alpha)).limit);
  }
  for (int n : r.ladder) {
    try {
      std::vector<LocalReport> reps = verify_local_behavior(mu, eq, {n}, cfg);
      const LocalReport& rep = reps.at(0);
      ReportRow row;
      row.n = n;
      row.lambda = rep.scaled_integral / std::pow(double(n), r.alpha + 1);
      row.scaled = rep.scaled_integral;
      row.predicted = rep.limit_constant;
      row.ratio = rep.ratio;
      row.ok = true;
      report.rows.push_back(row);
    } catch (const Error& e) {
      report.rows.push_back(failed_row(n, e.what()));
    }
  }
  finish_report(report);
  return report;
}

Complex complex_i() { return Complex(Real(0), Real(1)); }

std::function<Real(const Complex&)> wt_weight(double alpha) {
  return [alpha](const Complex& z) {
    Real a(alpha);
    Complex i = complex_i();
    Real f = abs(z - Complex(Real(1))) * abs(z + Complex(Real(1)));
    Real g = abs(z + i);
    return pow_real(g, a) * f / pow_real(Real(2), a + 1);
  };
}

ConvergenceReport dispatch(const Resolved& r) {
  const double a = r.alpha;
  PrecisionGuard guard(192);

  if (r.id == "model1") {
    PowerWeightMeasure mu = make_measure({RealInterval{0, 1}}, Cd(0.0, 0.0), a);
    Prediction pred = predict_endpoint(Real(1), endpoint_constant({0, 1}, 0.0), Real(a));
    return run_direct(r, mu, pred);
  }
  if (r.id == "model2") {
    PowerWeightMeasure mu = make_measure({RealInterval{-1, 1}}, Cd(0.0, 0.0), a);
    Prediction pred =
        predict_interior(Real(1), density_intervals({-1, 1}).eval(Real(0)), Real(a));
    return run_direct(r, mu, pred);
  }
  if (r.id == "circle_lebesgue") {
    PowerWeightMeasure mu = make_measure({UnitCircle{}}, Cd(1.0, 0.0), 0.0);
    Prediction pred = predict_interior(Real(1), 1 / (2 * const_pi()), Real(0));
    return run_direct(r, mu, pred);
  }
  if (r.id == "circle_power") {
    PowerWeightMeasure mu = make_measure({UnitCircle{}}, Cd(0.0, 1.0), a);
    Prediction pred = predict_interior(Real(1), 1 / (2 * const_pi()), Real(a));
    return run_direct(r, mu, pred);
  }
  if (r.id == "circle_wT") {
    // |z^2+1|^a |z^2-1| / 2^(a+1) restricted to the unit circle equals
    // |cos t|^a |sin t| in the angle; it is analytic between its zeros
    // z = 1, -1, -i (the fourth zero, z0 = i, is the anchored |z-z0|^a
    // factor), so the support is split into three arcs at exactly those
    // points and the leftover weight is smooth inside each arc.
    std::vector<SupportComponent> arcs{
        CircularArc{Cd(0.0, 0.0), 1.0, -M_PI / 2, 0.0},
        CircularArc{Cd(0.0, 0.0), 1.0, 0.0, M_PI},
        CircularArc{Cd(0.0, 0.0), 1.0, M_PI, 3 * M_PI / 2},
    };
    PowerWeightMeasure mu = make_measure(arcs, Cd(0.0, 1.0), a, wt_weight(a));
    Real w0 = mu.weight_at(singular_center(mu));
    Prediction pred = predict_interior(w0, 1 / (2 * const_pi()), Real(a));
    return run_direct(r, mu, pred);
  }
  if (r.id == "lemniscate_power") {
    ComplexPolynomial t({Cd(-0.5, 0.0), Cd(0.0, 0.0), Cd(1.0, 0.0)});
    Cd z0 = std::sqrt(Cd(0.5, 1.0));
    PowerWeightMeasure mu = make_measure({Lemniscate{t, 0, nullptr}}, z0, a);
    Prediction pred =
        predict_interior(Real(1), density_lemniscate(t).eval(Complex(z0)), Real(a));
    return run_direct(r, mu, pred);
  }
  if (r.id == "interval_interior") {
    PowerWeightMeasure mu = make_measure({RealInterval{-1, 1}}, Cd(0.5, 0.0), a);
    Prediction pred =
        predict_interior(Real(1), density_intervals({-1, 1}).eval(Real(0.5)), Real(a));
    return run_direct(r, mu, pred);
  }
  if (r.id == "interval_endpoint") {
    PowerWeightMeasure mu = make_measure({RealInterval{-1, 1}}, Cd(1.0, 0.0), a);
    Prediction pred = predict_endpoint(Real(1), endpoint_constant({-1, 1}, 1.0), Real(a));
    return run_direct(r, mu, pred);
  }
  if (r.id == "two_intervals_interior") {
    PowerWeightMeasure mu =
        make_measure({RealInterval{-1, -0.25}, RealInterval{0.25, 1}}, Cd(0.6, 0.0), a);
    Prediction pred = predict_interior(
        Real(1), density_intervals({-1, -0.25, 0.25, 1}).eval(Real(0.6)), Real(a));
    return run_direct(r, mu, pred);
  }
  if (r.id == "two_intervals_endpoint") {
    PowerWeightMeasure mu =
        make_measure({RealInterval{-1, -0.25}, RealInterval{0.25, 1}}, Cd(1.0, 0.0), a);
    Prediction pred =
        predict_endpoint(Real(1), endpoint_constant({-1, -0.25, 0.25, 1}, 1.0), Real(a));
    return run_direct(r, mu, pred);
  }
  if (r.id == "identity_mod01") {
    double half = (a - 1) / 2;
    PowerWeightMeasure lhs = make_measure({RealInterval{0, 1}}, Cd(0.0, 0.0), half);
    PowerWeightMeasure rhs = make_measure({RealInterval{-1, 1}}, Cd(0.0, 0.0), a);
    Prediction pred = predict_endpoint(Real(1), endpoint_constant({0, 1}, 0.0), Real(half));
    return run_paired(r, lhs, rhs, pred);
  }
  if (r.id == "identity_pullback") {
    PowerWeightMeasure lhs = make_measure({RealInterval{0, 1}}, Cd(0.0, 0.0), a);
    PowerWeightMeasure rhs = sqrt_pullback(lhs);
    Prediction pred = predict_endpoint(Real(1), endpoint_constant({0, 1}, 0.0), Real(a));
    return run_paired(r, lhs, rhs, pred);
  }
  // constructions_local
  return run_constructions(r);
}

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// JSON has no literals for non-finite numbers; encode them as strings so a
// report with failed rows or a degenerate fit still round-trips.
nlohmann::json json_num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double num_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    if (s == "nan") return kNaN;
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw InvalidInputError("report JSON: bad numeric string '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

const std::vector<ScenarioInfo>& list_scenarios() { return registry(); }

std::vector<int> resolve_ladder(const ScenarioInfo& info, const ScenarioConfig& config) {
  if (!config.n_ladder.empty()) {
    std::vector<int> ladder = config.n_ladder;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      if (ladder[i] < 1) throw InvalidInputError("ladder entries must be >= 1");
      if (i > 0 && ladder[i] <= ladder[i - 1])
        throw InvalidInputError("ladder must be strictly ascending");
    }
    return ladder;
  }
  if (!config.nmax) return info.default_ladder;
  int nmax = *config.nmax;
  if (nmax < 1) throw InvalidInputError("nmax must be >= 1");
  std::vector<int> ladder;
  for (int n : info.default_ladder)
    if (n <= nmax) ladder.push_back(n);
  if (ladder.empty() || ladder.back() < nmax) ladder.push_back(nmax);
  return ladder;
}

ConvergenceReport run_scenario(const ScenarioConfig& config) {
  Resolved r = resolve(config);
  double start = now_seconds();
  ConvergenceReport report = dispatch(r);
  report.total_seconds = now_seconds() - start;
  return report;
}

std::string to_csv(const ConvergenceReport& report) {
  std::string out = "n,lambda,kappa,scaled,predicted,ratio\n";
  for (const ReportRow& row : report.rows) {
    out += std::to_string(row.n);
    out += ',';
    out += fmt17(row.lambda);
    out += ',';
    out += fmt17(report.kappa);
    out += ',';
    out += fmt17(row.scaled);
    out += ',';
    out += fmt17(row.predicted);
    out += ',';
    out += fmt17(row.ratio);
    out += '\n';
  }
  return out;
}

std::string to_json(const ConvergenceReport& report) {
  nlohmann::json j;
  j["scenario_id"] = report.scenario_id;
  j["alpha"] = report.alpha;
  j["kappa"] = report.kappa;
  j["predicted_limit"] = report.predicted_limit;
  j["precision_bits"] = report.precision_bits;
  if (report.tau)
    j["tau"] = *report.tau;
  else
    j["tau"] = nullptr;
  j["ladder"] = report.ladder;
  j["rows"] = nlohmann::json::array();
  for (const ReportRow& row : report.rows) {
    nlohmann::json rj;
    rj["n"] = row.n;
    rj["lambda"] = json_num(row.lambda);
    rj["scaled"] = json_num(row.scaled);
    rj["predicted"] = json_num(row.predicted);
    rj["ratio"] = json_num(row.ratio);
    rj["ok"] = row.ok;
    rj["error"] = row.error;
    j["rows"].push_back(std::move(rj));
  }
  j["extrapolated_limit"] = json_num(report.extrapolated_limit);
  j["extrapolated_ratio"] = json_num(report.extrapolated_ratio);
  j["fit_residual"] = json_num(report.fit_residual);
  j["degenerate_fit"] = report.degenerate_fit;
  j["timing"]["total_seconds"] = report.total_seconds;
  return j.dump(2) + "\n";
}

ConvergenceReport report_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ConvergenceReport report;
  report.scenario_id = j.at("scenario_id").get<std::string>();
  report.alpha = j.at("alpha").get<double>();
  report.kappa = j.at("kappa").get<double>();
  report.predicted_limit = j.at("predicted_limit").get<double>();
  report.precision_bits = j.at("precision_bits").get<unsigned>();
  if (!j.at("tau").is_null()) report.tau = j.at("tau").get<double>();
  report.ladder = j.at("ladder").get<std::vector<int>>();
  for (const auto& rj : j.at("rows")) {
    ReportRow row;
    row.n = rj.at("n").get<int>();
    row.lambda = num_from_json(rj.at("lambda"));
    row.scaled = num_from_json(rj.at("scaled"));
    row.predicted = num_from_json(rj.at("predicted"));
    row.ratio = num_from_json(rj.at("ratio"));
    row.ok = rj.at("ok").get<bool>();
    row.error = rj.at("error").get<std::string>();
    report.rows.push_back(std::move(row));
  }
  report.extrapolated_limit = num_from_json(j.at("extrapolated_limit"));
  report.extrapolated_ratio = num_from_json(j.at("extrapolated_ratio"));
  report.fit_residual = num_from_json(j.at("fit_residual"));
  report.degenerate_fit = j.at("degenerate_fit").get<bool>();
  report.total_seconds = j.at("timing").at("total_seconds").get<double>();
  return report;
}

void export_report(const ConvergenceReport& report, const std::string& format,
                   const std::string& path) {
  std::string payload;
  if (format == "csv")
    payload = to_csv(report);
  else if (format == "json")
    payload = to_json(report);
  else
    throw InvalidInputError("format must be csv or json");
  if (path == "-") {
    std::cout << payload;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << payload;
  out.close();
  if (!out) throw Error("failed writing output file: " + path);
}

std::vector<JobSpec> parse_config(const std::string& text) {
  std::vector<JobSpec> jobs;
  std::istringstream in(text);
  std::string line;
  bool in_block = false;
  JobSpec job;
  auto flush = [&]() {
    if (!in_block) return;
    if (job.config.scenario_id.empty())
      throw InvalidInputError("config block is missing the scenario key");
    if (job.out.empty()) throw InvalidInputError("config block is missing the out key");
    jobs.push_back(job);
    job = JobSpec{};
    in_block = false;
  };
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      flush();
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInputError("config line " + std::to_string(line_no) + ": expected key=value");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw InvalidInputError("config line " + std::to_string(line_no) + ": empty key or value");
    in_block = true;
    try {
      if (key == "scenario")
        job.config.scenario_id = value;
      else if (key == "alpha")
        job.config.alpha = std::stod(value);
      else if (key == "nmax")
        job.config.nmax = std::stoi(value);
      else if (key == "precision_bits")
        job.config.precision_bits = static_cast<unsigned>(std::stoul(value));
      else if (key == "tau")
        job.config.tau = std::stod(value);
      else if (key == "out")
        job.out = value;
      else if (key == "format")
        job.format = value;
      else
        throw InvalidInputError("config line " + std::to_string(line_no) + ": unknown key '" +
                                key + "'");
    } catch (const std::logic_error&) {
      throw InvalidInputError("config line " + std::to_string(line_no) + ": bad number '" +
                              value + "'");
    }
  }
  flush();
  return jobs;
}

}  // namespace ccf
