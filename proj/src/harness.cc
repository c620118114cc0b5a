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

#include "matmech/harness.h"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <utility>

#include "matmech/mechanism.h"
#include "matmech/text_io.h"

namespace matmech {

namespace {

constexpr double kAssertSlack = 1e-9;
// Odd 64-bit stride; consecutive Monte Carlo cells get distinct keys.
constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ULL;

std::string JoinProblems(const std::vector<std::string>& problems) {
  std::string message = "invalid experiment config:";
  for (const std::string& problem : problems) message += "\n  - " + problem;
  return message;
}

void AddProblem(std::vector<std::string>& problems, const std::string& text) {
  if (std::find(problems.begin(), problems.end(), text) == problems.end()) {
    problems.push_back(text);
  }
}

std::string LowerCertQuantity(TheoremTag tag) {
  switch (tag) {
    case TheoremTag::kGeneralLower:
      return "general";
    case TheoremTag::kAdditiveNoiseLower:
      return "additive";
    case TheoremTag::kPrefixLower:
      return "prefix";
    case TheoremTag::kParityLower:
      return "parity";
    case TheoremTag::kFactorizationUpper:
      break;
  }
  throw std::logic_error("not a lower-bound theorem tag");
}

WorkloadMatrix BuildWorkload(const ExperimentConfig& config) {
  switch (config.kind) {
    case WorkloadKind::kPrefix:
      return PrefixMatrix(config.n);
    case WorkloadKind::kParity:
      return ParityMatrix(config.d, config.w);
    case WorkloadKind::kIdentity:
      return IdentityWorkload(config.n);
    case WorkloadKind::kRandomSign:
      return RandomSignWorkload(config.rows, config.n, config.workload_seed);
    case WorkloadKind::kCustom:
      break;
  }
  throw std::logic_error("custom workloads are not runnable from a config");
}

Factorization BuildFactorization(const WorkloadMatrix& workload,
                                 FactorizationMethod method) {
  switch (method) {
    case FactorizationMethod::kTrivialLeft:
      return TrivialFactorization(workload, TrivialSide::kLeft);
    case FactorizationMethod::kTrivialRight:
      return TrivialFactorization(workload, TrivialSide::kRight);
    case FactorizationMethod::kSqrtPrefix:
      return SqrtPrefixFactorization(workload.matrix.rows());
    case FactorizationMethod::kBinaryTreePrefix:
      return BinaryTreeFactorization(workload.matrix.rows());
    case FactorizationMethod::kCustom:
      break;
  }
  throw std::logic_error("custom factorizations are not runnable from a config");
}

std::string FormatOptionalBool(const std::optional<bool>& value) {
  if (!value.has_value()) return "";
  return *value ? "true" : "false";
}

std::optional<bool> ParseOptionalBool(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text == "true") return true;
  if (text == "false") return false;
  throw std::runtime_error("bad boolean field: " + text);
}

bool NormOrderEqual(const NormOrder& a, const NormOrder& b) {
  if (a.is_infinite() || b.is_infinite()) {
    return a.is_infinite() && b.is_infinite();
  }
  return a.value() == b.value();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::invalid_argument(JoinProblems(problems)),
      problems_(std::move(problems)) {}

std::vector<std::string> ValidateConfig(const ExperimentConfig& config) {
  std::vector<std::string> problems;
  switch (config.kind) {
    case WorkloadKind::kPrefix:
    case WorkloadKind::kIdentity:
      if (config.n == 0) {
        AddProblem(problems, "workload size n must be >= 1");
      }
      break;
    case WorkloadKind::kRandomSign:
      if (config.n == 0 || config.rows == 0) {
        AddProblem(problems, "random_sign needs rows >= 1 and n >= 1");
      }
      break;
    case WorkloadKind::kParity:
      if (config.d < 1 || config.w < 1 || config.w > config.d ||
          config.d > 16) {
        AddProblem(problems, "parity needs 1 <= w <= d <= 16");
      }
      break;
    case WorkloadKind::kCustom:
      AddProblem(problems, "custom workloads cannot be built from a config");
      break;
  }
  if (config.methods.empty()) {
    AddProblem(problems, "factorization methods list is empty");
  }
  for (FactorizationMethod method : config.methods) {
    if (method == FactorizationMethod::kCustom) {
      AddProblem(problems,
                 "custom factorizations cannot be built from a config");
    } else if ((method == FactorizationMethod::kSqrtPrefix ||
                method == FactorizationMethod::kBinaryTreePrefix) &&
               config.kind != WorkloadKind::kPrefix) {
      AddProblem(problems, FactorizationMethodName(method) +
                               " applies to the prefix workload only");
    }
  }
  if (config.p_grid.empty()) AddProblem(problems, "p grid is empty");
  for (const NormOrder& p : config.p_grid) {
    if (!p.is_infinite() && p.value() < 2.0) {
      AddProblem(problems, "p grid entries must satisfy p >= 2");
    }
  }
  if (config.eps_grid.empty()) AddProblem(problems, "eps grid is empty");
  for (double eps : config.eps_grid) {
    if (!(eps > 0.0)) AddProblem(problems, "eps entries must be positive");
  }
  if (config.delta_grid.empty()) AddProblem(problems, "delta grid is empty");
  for (double delta : config.delta_grid) {
    if (!(delta > 0.0 && delta < 1.0)) {
      AddProblem(problems, "delta entries must lie in (0, 1)");
    }
  }
  if (config.run_monte_carlo && config.trials < 100) {
    AddProblem(problems, "trials must be >= 100");
  }
  if (config.workers < 1) AddProblem(problems, "workers must be >= 1");
  if (config.kappa_starts < 1 || config.kappa_iters < 1) {
    AddProblem(problems, "kappa search needs starts >= 1 and iters >= 1");
  }
  return problems;
}

bool operator==(const ReportRow& a, const ReportRow& b) {
  return a.workload == b.workload && a.n == b.n && a.m == b.m &&
         NormOrderEqual(a.p, b.p) && a.eps == b.eps && a.delta == b.delta &&
         a.quantity == b.quantity && a.theorem == b.theorem &&
         a.value == b.value && a.constant_known == b.constant_known &&
         a.pass == b.pass;
}

SandwichReport RunExperiment(const ExperimentConfig& config) {
  std::vector<std::string> problems = ValidateConfig(config);
  if (!problems.empty()) throw ConfigError(std::move(problems));

  const WorkloadMatrix workload = BuildWorkload(config);
  const std::size_t m = workload.matrix.rows();
  const std::size_t n = workload.matrix.cols();

  std::vector<Factorization> factorizations;
  std::vector<std::string> method_names;
  for (FactorizationMethod method : config.methods) {
    factorizations.push_back(BuildFactorization(workload, method));
    method_names.push_back(FactorizationMethodName(method));
    const ValidationReport check =
        ValidateFactorization(workload, factorizations.back());
    if (!check.pass) {
      throw std::runtime_error("factorization " + method_names.back() +
                               " failed reconstruction, deviation " +
                               FormatDouble(check.max_deviation));
    }
  }

  SandwichReport report;
  report.config = config;
  report.workload_label = workload.label;
  report.workload_rows = m;
  report.workload_cols = n;
  report.kappa = KappaEstimateFor(workload, config.kappa_starts,
                                  config.kappa_iters, config.seed);
  const double kappa_lower = report.kappa.analytic.value_or(report.kappa.lower);
  const std::string workload_name = WorkloadKindName(workload.kind);

  std::uint64_t monte_carlo_ordinal = 0;
  for (const NormOrder& p : config.p_grid) {
    const double schatten_lower = GammaPLower(workload.matrix, p);
    double gamma_lower = schatten_lower;
    std::optional<double> prefix_lower;
    if (workload.kind == WorkloadKind::kPrefix) {
      prefix_lower = GammaPLowerPrefix(n, p);
      gamma_lower = std::max(gamma_lower, *prefix_lower);
    }
    std::vector<double> gamma_uppers;
    gamma_uppers.reserve(factorizations.size());
    for (const Factorization& factorization : factorizations) {
      gamma_uppers.push_back(GammaPUpper(factorization, p));
    }
    const double best_gamma_upper =
        *std::min_element(gamma_uppers.begin(), gamma_uppers.end());

    for (double eps : config.eps_grid) {
      for (double delta : config.delta_grid) {
        const PrivacyParams params(eps, delta);

        auto emit = [&](const std::string& quantity,
                        const std::string& theorem, double value,
                        std::optional<bool> constant_known = std::nullopt,
                        std::optional<bool> pass = std::nullopt) {
          report.rows.push_back(ReportRow{workload_name, n, m, p, eps, delta,
                                          quantity, theorem, value,
                                          constant_known, pass});
        };
        auto assert_leq = [&](const std::string& name, double lhs,
                              double rhs) {
          const bool pass = lhs <= rhs + kAssertSlack;
          report.assertions.push_back(
              AssertionRecord{name, p, eps, delta, lhs, rhs, rhs - lhs, pass});
          emit("assert/" + name, "", rhs - lhs, std::nullopt, pass);
          if (!pass) report.all_pass = false;
        };

        emit("kappa/lower", "", report.kappa.lower);
        emit("kappa/upper", "", report.kappa.upper);
        emit("gamma_lower/schatten", "", schatten_lower);
        if (prefix_lower.has_value()) {
          emit("gamma_lower/prefix_explicit", "", *prefix_lower);
        }
        for (std::size_t i = 0; i < factorizations.size(); ++i) {
          emit("gamma_upper/" + method_names[i], "", gamma_uppers[i]);
        }

        const DeltaRange range =
            DeltaRangeAdditive(kappa_lower, eps, p, n, best_gamma_upper);
        emit("delta_range/additive", "", range.max_delta);

        std::vector<BoundCertificate> lower_certificates;
        if (eps < 0.5) {
          lower_certificates.push_back(
              GeneralLowerCertificate(gamma_lower, eps, delta, p, m, n));
        }
        {
          BoundCertificate additive = AdditiveLowerCertificate(
              gamma_lower, eps, delta, p, m, n, delta <= range.max_delta);
          additive.delta_range = range.max_delta;
          lower_certificates.push_back(std::move(additive));
        }
        if (workload.kind == WorkloadKind::kPrefix && eps < 1.0 / 6.0) {
          lower_certificates.push_back(
              PrefixLowerCertificate(n, eps, delta, p));
        }
        if (workload.kind == WorkloadKind::kParity) {
          lower_certificates.push_back(ParityLowerCertificate(
              workload.d, workload.w, eps, delta, p));
        }
        for (const BoundCertificate& certificate : lower_certificates) {
          emit("lower_cert/" + LowerCertQuantity(certificate.theorem),
               TheoremTagName(certificate.theorem), certificate.value,
               certificate.constant_known);
        }

        for (std::size_t i = 0; i < factorizations.size(); ++i) {
          const Factorization& factorization = factorizations[i];
          const std::string& name = method_names[i];
          const NoiseCalibration calibration =
              Calibrate(params, factorization.right);
          emit("noise_sigma/" + name, "", calibration.sigma);

          std::optional<double> analytic;
          if (!p.is_infinite()) {
            analytic = AnalyticError(factorization, calibration, p);
            emit("analytic_error/" + name, "", *analytic);
          }

          const BoundCertificate upper =
              UpperCertificate(gamma_uppers[i], params, p, m, n);
          emit("upper_cert/" + name, TheoremTagName(upper.theorem),
               upper.value, upper.constant_known);

          if (config.run_monte_carlo) {
            ++monte_carlo_ordinal;
            const std::uint64_t cell_seed =
                config.seed + kSeedStride * monte_carlo_ordinal;
            const ErrorEstimate estimate = MonteCarloError(
                factorization, calibration, p, std::vector<double>(n, 0.0),
                config.trials, cell_seed, config.workers);
            emit("mc_mean/" + name, "", estimate.mc_mean);
            emit("mc_stderr/" + name, "", estimate.mc_stderr);
          }

          assert_leq("gamma_sandwich/" + name, gamma_lower, gamma_uppers[i]);
          if (analytic.has_value()) {
            assert_leq("analytic_leq_upper/" + name, *analytic, upper.value);
            for (const BoundCertificate& certificate : lower_certificates) {
              if (!certificate.constant_known || !certificate.applicable) {
                continue;
              }
              if (certificate.delta_range.has_value() &&
                  delta > *certificate.delta_range) {
                continue;
              }
              assert_leq("lower_leq_analytic/" +
                             LowerCertQuantity(certificate.theorem) + "/" +
                             name,
                         certificate.value, *analytic);
            }
          }
        }
      }
    }
  }
  return report;
}

std::string ReportCsv(const SandwichReport& report) {
  std::ostringstream out;
  char stamp[64];
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &utc);
  out << "# generated " << stamp << '\n';
  out << kReportCsvHeader << '\n';
  for (const ReportRow& row : report.rows) {
    out << row.workload << ',' << row.n << ',' << row.m << ','
        << row.p.ToString() << ',' << FormatDouble(row.eps) << ','
        << FormatDouble(row.delta) << ',' << row.quantity << ','
        << row.theorem << ',' << FormatDouble(row.value) << ','
        << FormatOptionalBool(row.constant_known) << ','
        << FormatOptionalBool(row.pass) << '\n';
  }
  return out.str();
}

std::string CsvBody(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    out << line << '\n';
  }
  return out.str();
}

std::vector<ReportRow> ParseCsvRows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  bool seen_header = false;
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      if (line != kReportCsvHeader) {
        throw std::runtime_error("unexpected CSV header: " + line);
      }
      seen_header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t begin = 0;
    while (true) {
      const std::size_t comma = line.find(',', begin);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(begin));
        break;
      }
      fields.push_back(line.substr(begin, comma - begin));
      begin = comma + 1;
    }
    if (fields.size() != 11) {
      throw std::runtime_error("expected 11 CSV fields, got " +
                               std::to_string(fields.size()));
    }
    ReportRow row;
    row.workload = fields[0];
    row.n = std::stoull(fields[1]);
    row.m = std::stoull(fields[2]);
    row.p = NormOrder::Parse(fields[3]);
    row.eps = std::stod(fields[4]);
    row.delta = std::stod(fields[5]);
    row.quantity = fields[6];
    row.theorem = fields[7];
    row.value = std::stod(fields[8]);
    row.constant_known = ParseOptionalBool(fields[9]);
    row.pass = ParseOptionalBool(fields[10]);
    rows.push_back(std::move(row));
  }
  if (!seen_header) throw std::runtime_error("CSV has no header line");
  return rows;
}

nlohmann::json ReportToJson(const SandwichReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ReportRow& row : report.rows) {
    nlohmann::json entry = {
        {"workload", row.workload}, {"n", row.n},
        {"m", row.m},               {"p", row.p.ToString()},
        {"eps", row.eps},           {"delta", row.delta},
        {"quantity", row.quantity}, {"theorem", row.theorem},
        {"value", row.value},
    };
    if (row.constant_known.has_value()) {
      entry["constant_known"] = *row.constant_known;
    }
    if (row.pass.has_value()) entry["pass"] = *row.pass;
    rows.push_back(std::move(entry));
  }

  nlohmann::json assertions = nlohmann::json::array();
  for (const AssertionRecord& assertion : report.assertions) {
    assertions.push_back({{"name", assertion.name},
                          {"p", assertion.p.ToString()},
                          {"eps", assertion.eps},
                          {"delta", assertion.delta},
                          {"lhs", assertion.lhs},
                          {"rhs", assertion.rhs},
                          {"slack", assertion.slack},
                          {"pass", assertion.pass}});
  }

  nlohmann::json kappa = {{"lower", report.kappa.lower},
                          {"upper", report.kappa.upper},
                          {"method_notes", report.kappa.method_notes}};
  if (report.kappa.analytic.has_value()) {
    kappa["analytic"] = *report.kappa.analytic;
  }

  return nlohmann::json{
      {"config", ConfigToJson(report.config)},
      {"workload",
       {{"label", report.workload_label},
        {"rows", report.workload_rows},
        {"cols", report.workload_cols}}},
      {"kappa", std::move(kappa)},
      {"rows", std::move(rows)},
      {"assertions", std::move(assertions)},
      {"all_pass", report.all_pass},
  };
}

void EmitReport(const SandwichReport& report, ReportFormat format,
                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  if (format == ReportFormat::kCsv) {
    out << ReportCsv(report);
  } else {
    out << ReportToJson(report).dump(2) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

nlohmann::json ConfigToJson(const ExperimentConfig& config) {
  nlohmann::json methods = nlohmann::json::array();
  for (FactorizationMethod method : config.methods) {
    methods.push_back(FactorizationMethodName(method));
  }
  nlohmann::json p_grid = nlohmann::json::array();
  for (const NormOrder& p : config.p_grid) p_grid.push_back(p.ToString());
  return nlohmann::json{
      {"workload",
       {{"kind", WorkloadKindName(config.kind)},
        {"n", config.n},
        {"rows", config.rows},
        {"d", config.d},
        {"w", config.w},
        {"seed", config.workload_seed}}},
      {"methods", std::move(methods)},
      {"p", std::move(p_grid)},
      {"eps", config.eps_grid},
      {"delta", config.delta_grid},
      {"trials", config.trials},
      {"monte_carlo", config.run_monte_carlo},
      {"seed", config.seed},
      {"workers", config.workers},
      {"kappa",
       {{"starts", config.kappa_starts}, {"iters", config.kappa_iters}}},
  };
}

ExperimentConfig ConfigFromJson(const nlohmann::json& json) {
  ExperimentConfig config;
  if (json.contains("workload")) {
    const nlohmann::json& workload = json.at("workload");
    config.kind =
        ParseWorkloadKind(workload.value("kind", std::string("prefix")));
    config.n = workload.value("n", std::size_t{0});
    config.rows = workload.value("rows", std::size_t{0});
    config.d = workload.value("d", 0);
    config.w = workload.value("w", 0);
    config.workload_seed = workload.value("seed", std::uint64_t{0});
  }
  if (json.contains("methods")) {
    for (const nlohmann::json& name : json.at("methods")) {
      config.methods.push_back(
          ParseFactorizationMethod(name.get<std::string>()));
    }
  }
  if (json.contains("p")) {
    for (const nlohmann::json& entry : json.at("p")) {
      if (entry.is_string()) {
        config.p_grid.push_back(NormOrder::Parse(entry.get<std::string>()));
      } else {
        config.p_grid.push_back(NormOrder(entry.get<double>()));
      }
    }
  }
  if (json.contains("eps")) {
    config.eps_grid = json.at("eps").get<std::vector<double>>();
  }
  if (json.contains("delta")) {
    config.delta_grid = json.at("delta").get<std::vector<double>>();
  }
  config.trials = json.value("trials", config.trials);
  config.run_monte_carlo = json.value("monte_carlo", config.run_monte_carlo);
  config.seed = json.value("seed", config.seed);
  config.workers = json.value("workers", config.workers);
  if (json.contains("kappa")) {
    const nlohmann::json& kappa = json.at("kappa");
    config.kappa_starts = kappa.value("starts", config.kappa_starts);
    config.kappa_iters = kappa.value("iters", config.kappa_iters);
  }
  return config;
}

}  // namespace matmech
