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

#ifndef MATMECH_HARNESS_H_
#define MATMECH_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "matmech/bounds.h"
#include "matmech/factorization.h"
#include "matmech/matrix.h"
#include "matmech/workloads.h"

namespace matmech {

// Carries every config problem found, not just the first one.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct ExperimentConfig {
  WorkloadKind kind = WorkloadKind::kPrefix;
  // Histogram size for prefix/identity; column count for random_sign.
  std::size_t n = 0;
  // Row count for random_sign; ignored elsewhere.
  std::size_t rows = 0;
  // Parity parameters.
  int d = 0;
  int w = 0;
  std::uint64_t workload_seed = 0;

  std::vector<FactorizationMethod> methods;
  std::vector<NormOrder> p_grid;
  std::vector<double> eps_grid;
  std::vector<double> delta_grid;

  int trials = 100000;
  bool run_monte_carlo = true;
  std::uint64_t seed = 0;
  int workers = 1;
  int kappa_starts = 100;
  int kappa_iters = 1000;
};

// Empty when the config is runnable; otherwise one message per problem.
std::vector<std::string> ValidateConfig(const ExperimentConfig& config);

struct ReportRow {
  std::string workload;
  std::size_t n = 0;
  std::size_t m = 0;
  NormOrder p{2.0};
  double eps = 0.0;
  double delta = 0.0;
  std::string quantity;
  std::string theorem;
  double value = 0.0;
  std::optional<bool> constant_known;
  std::optional<bool> pass;
};

bool operator==(const ReportRow& a, const ReportRow& b);

struct AssertionRecord {
  std::string name;
  NormOrder p{2.0};
  double eps = 0.0;
  double delta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;
};

struct SandwichReport {
  ExperimentConfig config;
  std::string workload_label;
  std::size_t workload_rows = 0;
  std::size_t workload_cols = 0;
  KappaEstimate kappa;
  std::vector<ReportRow> rows;
  std::vector<AssertionRecord> assertions;
  bool all_pass = true;
};

// Runs the full sandwich study: workload, factorizations, kappa search,
// lower and upper certificates, analytic errors, Monte Carlo estimates, and
// assertion rows for every sound inequality among them. Deterministic for a
// fixed config (including the master seed). Throws ConfigError on invalid
// configs.
SandwichReport RunExperiment(const ExperimentConfig& config);

inline constexpr char kReportCsvHeader[] =
    "workload,n,m,p,eps,delta,quantity,theorem,value,constant_known,pass";

enum class ReportFormat { kCsv, kJson };

// Full CSV text: one timestamp comment line, the fixed header, one row per
// (quantity, parameter point). Everything after the comment line is
// deterministic.
std::string ReportCsv(const SandwichReport& report);

// The CSV minus comment lines; the byte-comparable part.
std::string CsvBody(const std::string& csv);

// Parses ReportCsv output back into rows; rejects a wrong header.
std::vector<ReportRow> ParseCsvRows(const std::string& csv);

nlohmann::json ReportToJson(const SandwichReport& report);

void EmitReport(const SandwichReport& report, ReportFormat format,
                const std::string& path);

nlohmann::json ConfigToJson(const ExperimentConfig& config);
ExperimentConfig ConfigFromJson(const nlohmann::json& json);

}  // namespace matmech

#endif  // MATMECH_HARNESS_H_
