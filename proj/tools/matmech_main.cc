//
// Copyright 2026 the matmech authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// matmech: build query workloads, factor them, calibrate Gaussian noise,
// and emit sandwich reports that pin empirical error between certified
// lower and upper bounds.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "matmech/bounds.h"
#include "matmech/factorization.h"
#include "matmech/harness.h"
#include "matmech/matrix.h"
#include "matmech/mechanism.h"
#include "matmech/workloads.h"

namespace {

using matmech::BoundCertificate;
using matmech::ExperimentConfig;
using matmech::Factorization;
using matmech::FactorizationMethod;
using matmech::KappaEstimate;
using matmech::NormOrder;
using matmech::WorkloadKind;
using matmech::WorkloadMatrix;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WorkloadOptions {
  std::string kind;
  std::string file;
  std::size_t n = 0;
  std::size_t rows = 0;
  int d = 0;
  int w = 0;
  std::uint64_t workload_seed = 0;
  bool workload_seed_set = false;
};

void AddWorkloadFlags(CLI::App* cmd, WorkloadOptions* opts,
                      bool with_file = true) {
  cmd->add_option("--workload", opts->kind,
                  "workload kind: prefix, parity, identity, random_sign");
  if (with_file) {
    cmd->add_option("--workload-file", opts->file,
                    "load a saved workload file instead of building one");
  }
  cmd->add_option("--n", opts->n, "number of columns (database length)");
  cmd->add_option("--rows", opts->rows, "number of rows for random_sign");
  cmd->add_option("--d", opts->d, "parity universe size (d <= 16)");
  cmd->add_option("--w", opts->w, "parity subset width (1 <= w <= d)");
  cmd->add_option("--workload-seed", opts->workload_seed,
                  "seed for random_sign entries");
}

WorkloadMatrix ResolveWorkload(const WorkloadOptions& opts) {
  if (!opts.file.empty()) {
    if (!opts.kind.empty()) {
      throw UsageError("pass --workload or --workload-file, not both");
    }
    return matmech::LoadWorkload(opts.file);
  }
  if (opts.kind.empty()) {
    throw UsageError("--workload or --workload-file is required");
  }
  switch (matmech::ParseWorkloadKind(opts.kind)) {
    case WorkloadKind::kPrefix:
      if (opts.n == 0) throw UsageError("prefix needs --n >= 1");
      return matmech::PrefixMatrix(opts.n);
    case WorkloadKind::kIdentity:
      if (opts.n == 0) throw UsageError("identity needs --n >= 1");
      return matmech::IdentityWorkload(opts.n);
    case WorkloadKind::kParity:
      if (opts.d < 1 || opts.w < 1) {
        throw UsageError("parity needs --d and --w");
      }
      return matmech::ParityMatrix(opts.d, opts.w);
    case WorkloadKind::kRandomSign:
      if (opts.n == 0 || opts.rows == 0) {
        throw UsageError("random_sign needs --rows and --n");
      }
      if (!opts.workload_seed_set) {
        throw UsageError("random_sign needs --workload-seed");
      }
      return matmech::RandomSignWorkload(opts.rows, opts.n,
                                         opts.workload_seed);
    case WorkloadKind::kCustom:
      break;
  }
  throw UsageError("custom workloads must come from --workload-file");
}

Factorization BuildByMethod(const WorkloadMatrix& workload,
                            FactorizationMethod method) {
  switch (method) {
    case FactorizationMethod::kTrivialLeft:
      return matmech::TrivialFactorization(workload,
                                           matmech::TrivialSide::kLeft);
    case FactorizationMethod::kTrivialRight:
      return matmech::TrivialFactorization(workload,
                                           matmech::TrivialSide::kRight);
    case FactorizationMethod::kSqrtPrefix:
      return matmech::SqrtPrefixFactorization(workload.matrix.rows());
    case FactorizationMethod::kBinaryTreePrefix:
      return matmech::BinaryTreeFactorization(workload.matrix.rows());
    case FactorizationMethod::kCustom:
      break;
  }
  throw UsageError("custom factorizations must come from a file");
}

std::vector<FactorizationMethod> ParseMethods(
    const std::vector<std::string>& names) {
  std::vector<FactorizationMethod> methods;
  methods.reserve(names.size());
  for (const std::string& name : names) {
    methods.push_back(matmech::ParseFactorizationMethod(name));
  }
  return methods;
}

std::vector<FactorizationMethod> DefaultMethods(WorkloadKind kind) {
  if (kind == WorkloadKind::kPrefix) {
    return {FactorizationMethod::kSqrtPrefix,
            FactorizationMethod::kBinaryTreePrefix};
  }
  return {FactorizationMethod::kTrivialLeft};
}

nlohmann::json WorkloadSummary(const WorkloadMatrix& workload) {
  return nlohmann::json{{"kind", matmech::WorkloadKindName(workload.kind)},
                        {"label", workload.label},
                        {"rows", workload.matrix.rows()},
                        {"cols", workload.matrix.cols()}};
}

nlohmann::json KappaJson(const KappaEstimate& kappa) {
  nlohmann::json out = {{"lower", kappa.lower},
                        {"upper", kappa.upper},
                        {"method_notes", kappa.method_notes}};
  if (kappa.analytic.has_value()) out["analytic"] = *kappa.analytic;
  return out;
}

void PrintJson(const nlohmann::json& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
  out << payload.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + out_path);
}

int RunWorkloadCommand(const WorkloadOptions& opts,
                       const std::string& out_path) {
  const WorkloadMatrix workload = ResolveWorkload(opts);
  matmech::SaveWorkload(workload, out_path);
  nlohmann::json summary = WorkloadSummary(workload);
  summary["out"] = out_path;
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int RunFactorizeCommand(const WorkloadOptions& opts, const std::string& method,
                        const std::string& out_path) {
  const WorkloadMatrix workload = ResolveWorkload(opts);
  const Factorization factorization =
      BuildByMethod(workload, matmech::ParseFactorizationMethod(method));
  const matmech::ValidationReport check =
      matmech::ValidateFactorization(workload, factorization);
  if (!out_path.empty()) matmech::SaveFactorization(factorization, out_path);
  const nlohmann::json summary = {
      {"workload", WorkloadSummary(workload)},
      {"method", matmech::FactorizationMethodName(factorization.method)},
      {"left_rows", factorization.left.rows()},
      {"left_cols", factorization.left.cols()},
      {"right_rows", factorization.right.rows()},
      {"right_cols", factorization.right.cols()},
      {"max_deviation", check.max_deviation},
      {"right_norm_1to2", check.right_norm_1to2},
      {"left_norm_2toinf", check.left_norm_2toinf},
      {"pass", check.pass},
  };
  std::cout << summary.dump(2) << '\n';
  return check.pass ? 0 : 1;
}

int RunBoundsCommand(const WorkloadOptions& opts,
                     const std::vector<std::string>& p_names,
                     const std::vector<std::string>& method_names,
                     std::size_t starts, std::size_t iters,
                     std::uint64_t seed, const std::string& out_path) {
  const WorkloadMatrix workload = ResolveWorkload(opts);
  std::vector<FactorizationMethod> methods = ParseMethods(method_names);
  std::vector<Factorization> factorizations;
  for (FactorizationMethod method : methods) {
    factorizations.push_back(BuildByMethod(workload, method));
  }

  const KappaEstimate kappa =
      matmech::KappaEstimateFor(workload, starts, iters, seed);
  nlohmann::json per_p = nlohmann::json::array();
  for (const std::string& p_name : p_names) {
    const NormOrder p = NormOrder::Parse(p_name);
    const double schatten = matmech::GammaPLower(workload.matrix, p);
    double gamma_lower = schatten;
    nlohmann::json entry = {{"p", p.ToString()},
                            {"gamma_lower_schatten", schatten}};
    if (workload.kind == WorkloadKind::kPrefix) {
      const double explicit_lower =
          matmech::GammaPLowerPrefix(workload.matrix.cols(), p);
      entry["gamma_lower_prefix_explicit"] = explicit_lower;
      gamma_lower = std::max(gamma_lower, explicit_lower);
    }
    entry["gamma_lower"] = gamma_lower;
    nlohmann::json uppers = nlohmann::json::object();
    for (std::size_t i = 0; i < factorizations.size(); ++i) {
      uppers[matmech::FactorizationMethodName(methods[i])] =
          matmech::GammaPUpper(factorizations[i], p);
    }
    if (!uppers.empty()) entry["gamma_upper"] = uppers;
    per_p.push_back(std::move(entry));
  }
  const nlohmann::json payload = {{"workload", WorkloadSummary(workload)},
                                  {"kappa", KappaJson(kappa)},
                                  {"bounds", per_p}};
  PrintJson(payload, out_path);
  return 0;
}

int RunCalibrateCommand(const WorkloadOptions& opts, const std::string& method,
                        const std::string& factorization_file, double eps,
                        double delta) {
  Factorization factorization =
      factorization_file.empty()
          ? BuildByMethod(ResolveWorkload(opts),
                          matmech::ParseFactorizationMethod(method))
          : matmech::LoadFactorization(factorization_file);
  const matmech::PrivacyParams params(eps, delta);
  const matmech::NoiseCalibration calibration =
      matmech::Calibrate(params, factorization.right);
  const nlohmann::json payload = {
      {"method", matmech::FactorizationMethodName(factorization.method)},
      {"eps", eps},
      {"delta", delta},
      {"sensitivity", calibration.sensitivity},
      {"sigma", calibration.sigma},
      {"extrapolated", calibration.extrapolated},
  };
  std::cout << payload.dump(2) << '\n';
  return 0;
}

int RunSimulateCommand(const WorkloadOptions& opts, const std::string& method,
                       const std::string& factorization_file,
                       const std::string& p_name, double eps, double delta,
                       std::size_t trials, std::uint64_t seed,
                       std::size_t workers) {
  Factorization factorization =
      factorization_file.empty()
          ? BuildByMethod(ResolveWorkload(opts),
                          matmech::ParseFactorizationMethod(method))
          : matmech::LoadFactorization(factorization_file);
  const NormOrder p = NormOrder::Parse(p_name);
  const matmech::PrivacyParams params(eps, delta);
  const matmech::NoiseCalibration calibration =
      matmech::Calibrate(params, factorization.right);
  const std::vector<double> data(factorization.right.cols(), 0.0);
  const matmech::ErrorEstimate estimate = matmech::MonteCarloError(
      factorization, calibration, p, data, trials, seed, workers);
  nlohmann::json payload = {
      {"method", matmech::FactorizationMethodName(factorization.method)},
      {"p", p.ToString()},
      {"eps", eps},
      {"delta", delta},
      {"sigma", calibration.sigma},
      {"mc_mean", estimate.mc_mean},
      {"mc_stderr", estimate.mc_stderr},
      {"trials", estimate.trials},
      {"seed", seed},
      {"workers", workers},
  };
  if (estimate.analytic.has_value()) payload["analytic"] = *estimate.analytic;
  std::cout << payload.dump(2) << '\n';
  return 0;
}

int RunCertifyCommand(const WorkloadOptions& opts,
                      const std::vector<std::string>& method_names,
                      const std::string& p_name, double eps, double delta,
                      std::size_t starts, std::size_t iters,
                      std::uint64_t seed, const std::string& out_path) {
  const WorkloadMatrix workload = ResolveWorkload(opts);
  std::vector<FactorizationMethod> methods =
      method_names.empty() ? DefaultMethods(workload.kind)
                           : ParseMethods(method_names);
  const NormOrder p = NormOrder::Parse(p_name);
  const std::size_t m = workload.matrix.rows();
  const std::size_t n = workload.matrix.cols();

  double gamma_lower = matmech::GammaPLower(workload.matrix, p);
  if (workload.kind == WorkloadKind::kPrefix) {
    gamma_lower = std::max(gamma_lower, matmech::GammaPLowerPrefix(n, p));
  }

  std::vector<Factorization> factorizations;
  std::vector<double> gamma_uppers;
  for (FactorizationMethod method : methods) {
    factorizations.push_back(BuildByMethod(workload, method));
    gamma_uppers.push_back(matmech::GammaPUpper(factorizations.back(), p));
  }
  const double best_gamma_upper =
      *std::min_element(gamma_uppers.begin(), gamma_uppers.end());

  const KappaEstimate kappa =
      matmech::KappaEstimateFor(workload, starts, iters, seed);
  const double kappa_lower = kappa.analytic.value_or(kappa.lower);
  const matmech::DeltaRange range =
      matmech::DeltaRangeAdditive(kappa_lower, eps, p, n, best_gamma_upper);

  nlohmann::json lower = nlohmann::json::array();
  if (eps < 0.5) {
    lower.push_back(matmech::CertificateToJson(
        matmech::GeneralLowerCertificate(gamma_lower, eps, delta, p, m, n)));
  }
  {
    BoundCertificate additive = matmech::AdditiveLowerCertificate(
        gamma_lower, eps, delta, p, m, n, delta <= range.max_delta);
    additive.delta_range = range.max_delta;
    lower.push_back(matmech::CertificateToJson(additive));
  }
  if (workload.kind == WorkloadKind::kPrefix && eps < 1.0 / 6.0) {
    lower.push_back(matmech::CertificateToJson(
        matmech::PrefixLowerCertificate(n, eps, delta, p)));
  }
  if (workload.kind == WorkloadKind::kParity) {
    lower.push_back(matmech::CertificateToJson(
        matmech::ParityLowerCertificate(workload.d, workload.w, eps, delta,
                                        p)));
  }

  const matmech::PrivacyParams params(eps, delta);
  nlohmann::json upper = nlohmann::json::array();
  for (std::size_t i = 0; i < methods.size(); ++i) {
    nlohmann::json entry = matmech::CertificateToJson(
        matmech::UpperCertificate(gamma_uppers[i], params, p, m, n));
    entry["method"] = matmech::FactorizationMethodName(methods[i]);
    entry["gamma_upper"] = gamma_uppers[i];
    upper.push_back(std::move(entry));
  }

  const nlohmann::json payload = {
      {"workload", WorkloadSummary(workload)},
      {"p", p.ToString()},
      {"eps", eps},
      {"delta", delta},
      {"kappa", KappaJson(kappa)},
      {"gamma_lower", gamma_lower},
      {"delta_range", range.max_delta},
      {"lower", lower},
      {"upper", upper},
  };
  PrintJson(payload, out_path);
  return 0;
}

struct ReportOptions {
  WorkloadOptions workload;
  std::string config_file;
  std::vector<std::string> methods;
  std::vector<std::string> p_names;
  std::vector<double> eps_grid;
  std::vector<double> delta_grid;
  std::size_t trials = 100000;
  bool no_monte_carlo = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t workers = 1;
  std::size_t kappa_starts = 100;
  std::size_t kappa_iters = 1000;
  std::string format = "csv";
  std::string out_path;
};

ExperimentConfig BuildReportConfig(const ReportOptions& opts) {
  ExperimentConfig config;
  if (!opts.config_file.empty()) {
    std::ifstream in(opts.config_file);
    if (!in) {
      throw std::runtime_error("cannot open config: " + opts.config_file);
    }
    nlohmann::json parsed;
    in >> parsed;
    config = matmech::ConfigFromJson(parsed);
  } else {
    if (opts.workload.kind.empty()) {
      throw UsageError("report needs --workload or --config");
    }
    config.kind = matmech::ParseWorkloadKind(opts.workload.kind);
    config.n = opts.workload.n;
    config.rows = opts.workload.rows;
    config.d = opts.workload.d;
    config.w = opts.workload.w;
    config.workload_seed = opts.workload.workload_seed;
    config.methods = opts.methods.empty() ? DefaultMethods(config.kind)
                                          : ParseMethods(opts.methods);
    for (const std::string& p_name : opts.p_names) {
      config.p_grid.push_back(NormOrder::Parse(p_name));
    }
    if (config.p_grid.empty()) config.p_grid.push_back(NormOrder(2.0));
    config.eps_grid = opts.eps_grid;
    config.delta_grid = opts.delta_grid;
    config.trials = opts.trials;
    config.run_monte_carlo = !opts.no_monte_carlo;
    config.workers = opts.workers;
    config.kappa_starts = opts.kappa_starts;
    config.kappa_iters = opts.kappa_iters;
  }
  if (opts.seed_set) {
    config.seed = opts.seed;
  } else if (opts.config_file.empty()) {
    throw UsageError("report needs --seed");
  }
  return config;
}

int RunReportCommand(const ReportOptions& opts) {
  const ExperimentConfig config = BuildReportConfig(opts);
  const matmech::SandwichReport report = matmech::RunExperiment(config);
  const matmech::ReportFormat format = opts.format == "json"
                                           ? matmech::ReportFormat::kJson
                                           : matmech::ReportFormat::kCsv;
  if (opts.out_path.empty()) {
    if (format == matmech::ReportFormat::kCsv) {
      std::cout << matmech::ReportCsv(report);
    } else {
      std::cout << matmech::ReportToJson(report).dump(2) << '\n';
    }
  } else {
    matmech::EmitReport(report, format, opts.out_path);
  }
  std::size_t passed = 0;
  for (const matmech::AssertionRecord& assertion : report.assertions) {
    if (assertion.pass) ++passed;
  }
  std::cerr << "assertions: " << passed << "/" << report.assertions.size()
            << " passed\n";
  return report.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "matmech: factorization mechanisms for private linear queries"};
  app.require_subcommand(1);

  WorkloadOptions workload_opts;
  std::string workload_out;
  CLI::App* workload_cmd =
      app.add_subcommand("workload", "build a workload and save it");
  AddWorkloadFlags(workload_cmd, &workload_opts);
  workload_cmd->add_option("--out", workload_out, "output path")->required();

  WorkloadOptions factorize_workload;
  std::string factorize_method = "trivial_left";
  std::string factorize_out;
  CLI::App* factorize_cmd = app.add_subcommand(
      "factorize", "factor a workload and validate the product");
  AddWorkloadFlags(factorize_cmd, &factorize_workload);
  factorize_cmd->add_option(
      "--method", factorize_method,
      "trivial_left, trivial_right, sqrt_prefix, binary_tree");
  factorize_cmd->add_option("--out", factorize_out,
                            "where to save the factorization");

  WorkloadOptions bounds_workload;
  std::vector<std::string> bounds_p = {"2"};
  std::vector<std::string> bounds_methods;
  std::size_t bounds_starts = 100;
  std::size_t bounds_iters = 1000;
  std::uint64_t bounds_seed = 0;
  std::string bounds_out;
  CLI::App* bounds_cmd = app.add_subcommand(
      "bounds", "gamma lower/upper bounds and the kappa search");
  AddWorkloadFlags(bounds_cmd, &bounds_workload);
  bounds_cmd->add_option("--p", bounds_p, "norm orders (numbers or inf)");
  bounds_cmd->add_option("--method", bounds_methods,
                         "factorizations to score with gamma upper bounds");
  bounds_cmd->add_option("--kappa-starts", bounds_starts,
                         "random restarts for the kappa search");
  bounds_cmd->add_option("--kappa-iters", bounds_iters,
                         "subgradient iterations per restart");
  bounds_cmd->add_option("--seed", bounds_seed,
                         "seed for the kappa search restarts (default 0)");
  bounds_cmd->add_option("--out", bounds_out, "write JSON here (else stdout)");

  WorkloadOptions calibrate_workload;
  std::string calibrate_method = "trivial_left";
  std::string calibrate_file;
  double calibrate_eps = 0.0;
  double calibrate_delta = 0.0;
  CLI::App* calibrate_cmd = app.add_subcommand(
      "calibrate", "Gaussian noise scale for a factorization");
  AddWorkloadFlags(calibrate_cmd, &calibrate_workload);
  calibrate_cmd->add_option("--method", calibrate_method,
                            "factorization method");
  calibrate_cmd->add_option("--factorization-file", calibrate_file,
                            "use a saved factorization");
  calibrate_cmd->add_option("--eps", calibrate_eps, "privacy epsilon")
      ->required();
  calibrate_cmd->add_option("--delta", calibrate_delta, "privacy delta")
      ->required();

  WorkloadOptions simulate_workload;
  std::string simulate_method = "trivial_left";
  std::string simulate_file;
  std::string simulate_p = "2";
  double simulate_eps = 0.0;
  double simulate_delta = 0.0;
  std::size_t simulate_trials = 100000;
  std::uint64_t simulate_seed = 0;
  std::size_t simulate_workers = 1;
  CLI::App* simulate_cmd = app.add_subcommand(
      "simulate", "Monte Carlo error estimate for a mechanism");
  AddWorkloadFlags(simulate_cmd, &simulate_workload);
  simulate_cmd->add_option("--method", simulate_method,
                           "factorization method");
  simulate_cmd->add_option("--factorization-file", simulate_file,
                           "use a saved factorization");
  simulate_cmd->add_option("--p", simulate_p, "norm order");
  simulate_cmd->add_option("--eps", simulate_eps, "privacy epsilon")
      ->required();
  simulate_cmd->add_option("--delta", simulate_delta, "privacy delta")
      ->required();
  simulate_cmd->add_option("--trials", simulate_trials, "trial count");
  simulate_cmd->add_option("--seed", simulate_seed, "master seed")
      ->required();
  simulate_cmd->add_option("--workers", simulate_workers, "worker threads");

  WorkloadOptions certify_workload;
  std::vector<std::string> certify_methods;
  std::string certify_p = "2";
  double certify_eps = 0.0;
  double certify_delta = 0.0;
  std::size_t certify_starts = 100;
  std::size_t certify_iters = 1000;
  std::uint64_t certify_seed = 0;
  std::string certify_out;
  CLI::App* certify_cmd = app.add_subcommand(
      "certify", "lower and upper error certificates for a workload");
  AddWorkloadFlags(certify_cmd, &certify_workload);
  certify_cmd->add_option("--method", certify_methods,
                          "factorizations for the upper certificates");
  certify_cmd->add_option("--p", certify_p, "norm order");
  certify_cmd->add_option("--eps", certify_eps, "privacy epsilon")
      ->required();
  certify_cmd->add_option("--delta", certify_delta, "privacy delta")
      ->required();
  certify_cmd->add_option("--kappa-starts", certify_starts,
                          "random restarts for the kappa search");
  certify_cmd->add_option("--kappa-iters", certify_iters,
                          "subgradient iterations per restart");
  certify_cmd->add_option("--seed", certify_seed,
                          "seed for the kappa search restarts (default 0)");
  certify_cmd->add_option("--out", certify_out,
                          "write JSON here (else stdout)");

  ReportOptions report_opts;
  CLI::App* report_cmd = app.add_subcommand(
      "report", "full sandwich report over a parameter grid");
  AddWorkloadFlags(report_cmd, &report_opts.workload,
                   /*with_file=*/false);
  report_cmd->add_option("--config", report_opts.config_file,
                         "JSON config file (overrides workload flags)");
  report_cmd->add_option("--method", report_opts.methods,
                         "factorization methods");
  report_cmd->add_option("--p", report_opts.p_names,
                         "norm orders (default 2)");
  report_cmd->add_option("--eps", report_opts.eps_grid, "epsilon grid");
  report_cmd->add_option("--delta", report_opts.delta_grid, "delta grid");
  report_cmd->add_option("--trials", report_opts.trials,
                         "Monte Carlo trials per cell");
  report_cmd->add_flag("--no-monte-carlo", report_opts.no_monte_carlo,
                       "skip the Monte Carlo estimates");
  report_cmd->add_option("--seed", report_opts.seed, "master seed");
  report_cmd->add_option("--workers", report_opts.workers, "worker threads");
  report_cmd->add_option("--kappa-starts", report_opts.kappa_starts,
                         "random restarts for the kappa search");
  report_cmd->add_option("--kappa-iters", report_opts.kappa_iters,
                         "subgradient iterations per restart");
  report_cmd->add_option("--format", report_opts.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  report_cmd->add_option("--out", report_opts.out_path,
                         "write the report here (else stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  workload_opts.workload_seed_set =
      workload_cmd->count("--workload-seed") > 0;
  factorize_workload.workload_seed_set =
      factorize_cmd->count("--workload-seed") > 0;
  bounds_workload.workload_seed_set =
      bounds_cmd->count("--workload-seed") > 0;
  calibrate_workload.workload_seed_set =
      calibrate_cmd->count("--workload-seed") > 0;
  simulate_workload.workload_seed_set =
      simulate_cmd->count("--workload-seed") > 0;
  certify_workload.workload_seed_set =
      certify_cmd->count("--workload-seed") > 0;
  report_opts.workload.workload_seed_set =
      report_cmd->count("--workload-seed") > 0;
  report_opts.seed_set = report_cmd->count("--seed") > 0;

  try {
    if (workload_cmd->parsed()) {
      return RunWorkloadCommand(workload_opts, workload_out);
    }
    if (factorize_cmd->parsed()) {
      return RunFactorizeCommand(factorize_workload, factorize_method,
                                 factorize_out);
    }
    if (bounds_cmd->parsed()) {
      return RunBoundsCommand(bounds_workload, bounds_p, bounds_methods,
                              bounds_starts, bounds_iters, bounds_seed,
                              bounds_out);
    }
    if (calibrate_cmd->parsed()) {
      return RunCalibrateCommand(calibrate_workload, calibrate_method,
                                 calibrate_file, calibrate_eps,
                                 calibrate_delta);
    }
    if (simulate_cmd->parsed()) {
      return RunSimulateCommand(simulate_workload, simulate_method,
                                simulate_file, simulate_p, simulate_eps,
                                simulate_delta, simulate_trials,
                                simulate_seed, simulate_workers);
    }
    if (certify_cmd->parsed()) {
      return RunCertifyCommand(certify_workload, certify_methods, certify_p,
                               certify_eps, certify_delta, certify_starts,
                               certify_iters, certify_seed, certify_out);
    }
    if (report_cmd->parsed()) {
      return RunReportCommand(report_opts);
    }
  } catch (const matmech::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
