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

// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Criterion 10 drives the command line binary whose path
// arrives as argv[1]; everything else links the library directly.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "matmech/bounds.h"
#include "matmech/factorization.h"
#include "matmech/harness.h"
#include "matmech/matrix.h"
#include "matmech/mechanism.h"
#include "matmech/rng.h"
#include "matmech/workloads.h"

namespace {

using matmech::AnalyticError;
using matmech::BinomialCoefficient;
using matmech::BoundCertificate;
using matmech::Calibrate;
using matmech::ErrorEstimate;
using matmech::Factorization;
using matmech::GammaPLower;
using matmech::GammaPUpper;
using matmech::KappaEstimate;
using matmech::KappaEstimateFor;
using matmech::KappaSearch;
using matmech::Matrix;
using matmech::MonteCarloError;
using matmech::NoiseCalibration;
using matmech::NormOrder;
using matmech::ParityMatrix;
using matmech::PolytopeWidth;
using matmech::PrefixLowerCertificate;
using matmech::PrefixMatrix;
using matmech::PrivacyParams;
using matmech::SqrtPrefixFactorization;
using matmech::TrivialFactorization;
using matmech::TrivialSide;
using matmech::UpperCertificate;
using matmech::ValidateFactorization;
using matmech::WallisCoefficients;
using matmech::WorkloadMatrix;

struct CriterionResult {
  std::string label;
  double budget_seconds = 0.0;
  bool pass = true;
  double seconds = 0.0;
  std::string details;
};

std::string Num(double value, int digits = 6) {
  std::ostringstream out;
  out << std::setprecision(digits) << value;
  return out.str();
}

bool RelClose(double value, double golden, double tolerance) {
  return std::fabs(value - golden) <= tolerance * std::fabs(golden);
}

// ---------------------------------------------------------------------------
// 1. Identity workloads close the factorization-norm sandwich exactly.

void CheckIdentityEndpoints(CriterionResult& result) {
  double worst = 0.0;
  const std::vector<NormOrder> orders = {NormOrder(2.0), NormOrder(3.0),
                                         NormOrder(4.0),
                                         NormOrder::Infinity()};
  for (std::size_t n : {4, 16, 64}) {
    const WorkloadMatrix workload = matmech::IdentityWorkload(n);
    const Factorization trivial =
        TrivialFactorization(workload, TrivialSide::kLeft);
    for (const NormOrder& p : orders) {
      const double expected =
          p.is_infinite() ? 1.0
                          : std::pow(static_cast<double>(n), 1.0 / p.value());
      const double lower = GammaPLower(workload.matrix, p);
      const double upper = GammaPUpper(trivial, p);
      worst = std::max(worst, std::fabs(lower - expected));
      worst = std::max(worst, std::fabs(upper - expected));
    }
  }
  result.pass = worst <= 1e-9;
  result.details = "largest deviation from n^(1/p): " + Num(worst, 3);
}

// ---------------------------------------------------------------------------
// 2. Parity query matrices have a flat singular spectrum.

void CheckParitySpectrum(CriterionResult& result) {
  double worst_sigma = 0.0;
  double worst_schatten = 0.0;
  for (int d = 1; d <= 8; ++d) {
    const double flat = std::pow(2.0, d / 2.0);
    for (int w = 1; w <= d; ++w) {
      const Matrix q = ParityMatrix(d, w).matrix;
      for (double sigma : matmech::Svd(q).values) {
        worst_sigma = std::max(worst_sigma, std::fabs(sigma - flat));
      }
      const double expected =
          static_cast<double>(BinomialCoefficient(d, w)) * flat;
      worst_schatten = std::max(
          worst_schatten,
          std::fabs(matmech::Schatten1(q) - expected) / expected);
    }
  }
  result.pass = worst_sigma <= 1e-9 && worst_schatten <= 1e-9;
  result.details = "singular value deviation " + Num(worst_sigma, 3) +
                   ", schatten relative deviation " + Num(worst_schatten, 3);
}

// ---------------------------------------------------------------------------
// 3. The smooth lower-triangular square-root factorization reconstructs the
//    running-sum matrix and its right factor obeys the harmonic norm cap.

void CheckSqrtFactorization(CriterionResult& result) {
  double worst_deviation = 0.0;
  bool norm_ok = true;
  for (std::size_t n : {2, 16, 256, 4096}) {
    const WorkloadMatrix workload = PrefixMatrix(n);
    const Factorization fact = SqrtPrefixFactorization(n);
    const matmech::ValidationReport report =
        ValidateFactorization(workload, fact);
    worst_deviation = std::max(worst_deviation, report.max_deviation);
    double harmonic = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
      harmonic += 1.0 / static_cast<double>(k);
    }
    const double cap = 1.0 + harmonic / M_PI;
    const double squared = report.right_norm_1to2 * report.right_norm_1to2;
    if (squared > cap) norm_ok = false;
  }

  const std::vector<double> coefficients = WallisCoefficients(10001);
  bool decay_ok = true;
  for (std::size_t k = 1; k <= 10000; ++k) {
    if (coefficients[k] * std::sqrt(M_PI * static_cast<double>(k)) > 1.0) {
      decay_ok = false;
      break;
    }
  }

  result.pass = worst_deviation <= 1e-10 && norm_ok && decay_ok;
  result.details = "max reconstruction deviation " + Num(worst_deviation, 3) +
                   ", harmonic norm cap " + (norm_ok ? "held" : "violated") +
                   ", coefficient decay " + (decay_ok ? "held" : "violated");
}

// ---------------------------------------------------------------------------
// 4. The interval-tree factorization is exact in integer arithmetic.

void CheckBinaryTree(CriterionResult& result) {
  bool exact = true;
  bool norms = true;
  std::vector<std::size_t> sizes;
  for (std::size_t n = 1; n <= 64; ++n) sizes.push_back(n);
  sizes.push_back(100);
  sizes.push_back(1000);
  for (std::size_t n : sizes) {
    const WorkloadMatrix workload = PrefixMatrix(n);
    const Factorization fact = matmech::BinaryTreeFactorization(n);
    const matmech::ValidationReport report =
        ValidateFactorization(workload, fact);
    if (report.max_deviation != 0.0) exact = false;
    std::size_t levels = 1;
    while ((std::size_t{1} << (levels - 1)) < n) ++levels;
    if (report.right_norm_1to2 >
        std::sqrt(static_cast<double>(levels)) + 1e-12) {
      norms = false;
    }
  }
  result.pass = exact && norms;
  result.details = std::string("reconstruction ") +
                   (exact ? "exact" : "inexact") + ", depth norm cap " +
                   (norms ? "held" : "violated");
}

// ---------------------------------------------------------------------------
// 5. Width searches. Three parts: the running-sum width window, grid
//    agreement on full-row-rank sign matrices, and rank-deficient nulling.

double GridMinWidth2(const Matrix& a, int count) {
  std::vector<double> theta(2);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    const double angle = M_PI * static_cast<double>(i) / count;
    theta[0] = std::cos(angle);
    theta[1] = std::sin(angle);
    best = std::min(best, PolytopeWidth(a, theta));
  }
  return best;
}

double GridMinWidth3(const Matrix& a, int count) {
  const double golden_angle = M_PI * (3.0 - std::sqrt(5.0));
  std::vector<double> theta(3);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    const double y = 1.0 - 2.0 * (i + 0.5) / count;
    const double radius = std::sqrt(std::max(0.0, 1.0 - y * y));
    const double phi = golden_angle * i;
    theta[0] = radius * std::cos(phi);
    theta[1] = y;
    theta[2] = radius * std::sin(phi);
    const double norm = std::sqrt(theta[0] * theta[0] + theta[1] * theta[1] +
                                  theta[2] * theta[2]);
    theta[0] /= norm;
    theta[1] /= norm;
    theta[2] /= norm;
    best = std::min(best, PolytopeWidth(a, theta));
  }
  return best;
}

WorkloadMatrix FullRankSigns(std::size_t rows, std::size_t cols) {
  for (std::uint64_t seed = 1; seed < 64; ++seed) {
    const WorkloadMatrix candidate =
        matmech::RandomSignWorkload(rows, cols, seed);
    if (matmech::Svd(candidate.matrix).values.back() > 1e-9) {
      return candidate;
    }
  }
  throw std::runtime_error("no full-row-rank sign draw found");
}

void CheckWidthSearch(CriterionResult& result) {
  // Part a: the acceptance window [2, 2.05] for running-sum widths, with an
  // exact value of 2 on record. The measured minima do not support this
  // window: sign-alternating unit directions certify width 2/sqrt(4n-3),
  // strictly below 2 for every n >= 2, and the search reproduces exactly
  // that value. The failure is reported rather than masked; see the README
  // section on the known failing check.
  bool window_pass = true;
  std::string measured;
  for (std::size_t n : {2, 4, 8, 16}) {
    const KappaEstimate estimate =
        KappaEstimateFor(PrefixMatrix(n), 100, 1000, 2026);
    const bool in_window = estimate.upper >= 2.0 && estimate.upper <= 2.05 &&
                           estimate.analytic.has_value() &&
                           *estimate.analytic == 2.0;
    if (!in_window) window_pass = false;
    if (!measured.empty()) measured += ", ";
    measured += "n=" + std::to_string(n) + ": " + Num(estimate.upper, 6) +
                " (certified " +
                Num(2.0 / std::sqrt(4.0 * static_cast<double>(n) - 3.0), 6) +
                ")";
  }

  // Part b: projected subgradient search agrees with a dense direction grid
  // on full-row-rank sign matrices.
  const WorkloadMatrix two = FullRankSigns(2, 3);
  const KappaEstimate est2 = KappaSearch(two.matrix, 60, 800, 7);
  const double grid2 = GridMinWidth2(two.matrix, 200000);
  const WorkloadMatrix three = FullRankSigns(3, 4);
  const KappaEstimate est3 = KappaSearch(three.matrix, 60, 800, 7);
  const double grid3 = GridMinWidth3(three.matrix, 2000000);
  const bool grid_pass =
      std::fabs(est2.upper - grid2) <= 1e-2 &&
      std::fabs(est3.upper - grid3) <= 1e-2;

  // Part c: dependent rows admit directions of width zero.
  const double null_one = KappaSearch(Matrix(2, 1, {1.0, 1.0}), 20, 200, 5)
                              .upper;
  const double null_two =
      KappaSearch(Matrix(2, 2, {1.0, 2.0, 2.0, 4.0}), 20, 200, 5).upper;
  const bool null_pass = null_one <= 1e-6 && null_two <= 1e-6;

  result.pass = window_pass && grid_pass && null_pass;
  result.details =
      std::string("window [2, 2.05] ") + (window_pass ? "met" : "missed") +
      " (measured minima " + measured +
      "; alternating-sign directions certify 2/sqrt(4n-3), so no exact "
      "value of 2 is recorded); grid agreement " +
      (grid_pass ? "met" : "missed") + " (2-row gap " +
      Num(std::fabs(est2.upper - grid2), 3) + ", 3-row gap " +
      Num(std::fabs(est3.upper - grid3), 3) + "); rank-deficient nulling " +
      (null_pass ? "met" : "missed") + " (widths " + Num(null_one, 3) +
      ", " + Num(null_two, 3) + ")";
}

// ---------------------------------------------------------------------------
// 6. Monte Carlo error estimates agree with the closed form.

void CheckMonteCarloOracle(CriterionResult& result) {
  const Factorization fact = SqrtPrefixFactorization(256);
  const PrivacyParams params(1.0, 1e-9);
  const NoiseCalibration calibration = Calibrate(params, fact.right);
  const std::vector<double> x(256, 0.0);
  bool pass = true;
  std::string detail;
  for (double order : {2.0, 4.0}) {
    const NormOrder p(order);
    const ErrorEstimate estimate =
        MonteCarloError(fact, calibration, p, x, 100000, 2026);
    const double analytic = AnalyticError(fact, calibration, p);
    const double gap = std::fabs(estimate.mc_mean - analytic);
    if (gap > 4.0 * estimate.mc_stderr) pass = false;
    if (!detail.empty()) detail += ", ";
    detail += "p=" + Num(order, 2) + ": |mc-analytic|=" + Num(gap, 3) +
              " vs 4*stderr=" + Num(4.0 * estimate.mc_stderr, 3);
  }
  result.pass = pass;
  result.details = detail;
}

// ---------------------------------------------------------------------------
// 7. The calibrated mechanism's closed-form error never exceeds its
//    upper-bound certificate across the whole workload grid.

void CheckUpperSoundness(CriterionResult& result) {
  struct Cell {
    WorkloadMatrix workload;
    std::vector<Factorization> factorizations;
  };
  std::vector<Cell> cells;
  for (std::size_t n : {16, 64, 256}) {
    Cell cell{PrefixMatrix(n), {}};
    cell.factorizations.push_back(SqrtPrefixFactorization(n));
    cell.factorizations.push_back(matmech::BinaryTreeFactorization(n));
    cell.factorizations.push_back(
        TrivialFactorization(cell.workload, TrivialSide::kLeft));
    cells.push_back(std::move(cell));
  }
  for (const WorkloadMatrix& workload :
       {ParityMatrix(6, 3), matmech::IdentityWorkload(64)}) {
    Cell cell{workload, {}};
    cell.factorizations.push_back(
        TrivialFactorization(workload, TrivialSide::kLeft));
    cell.factorizations.push_back(
        TrivialFactorization(workload, TrivialSide::kRight));
    cells.push_back(std::move(cell));
  }

  int checked = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  bool pass = true;
  for (const Cell& cell : cells) {
    const std::size_t m = cell.workload.matrix.rows();
    const std::size_t n = cell.workload.matrix.cols();
    for (const Factorization& fact : cell.factorizations) {
      for (double order : {2.0, 3.0, 4.0}) {
        const NormOrder p(order);
        const double gamma_upper = GammaPUpper(fact, p);
        for (double eps : {0.1, 1.0}) {
          for (double delta : {1e-6, 1e-9}) {
            const PrivacyParams params(eps, delta);
            const NoiseCalibration calibration =
                Calibrate(params, fact.right);
            const double analytic = AnalyticError(fact, calibration, p);
            const BoundCertificate upper =
                UpperCertificate(gamma_upper, params, p, m, n);
            ++checked;
            worst_margin =
                std::min(worst_margin, upper.value - analytic);
            if (analytic > upper.value + 1e-9) pass = false;
          }
        }
      }
    }
  }
  result.pass = pass;
  result.details = std::to_string(checked) +
                   " cells, smallest certificate margin " +
                   Num(worst_margin, 6);
}

// ---------------------------------------------------------------------------
// 8. Running-sum sandwich: the lower certificate stays below the realized
//    error and the certificate ratio tracks frozen reference values.

struct SandwichGolden {
  std::size_t n;
  double delta_range;
  double gamma_upper;
  double lower;
  double analytic;
  double upper;
  double ratio;
};

void CheckPrefixSandwich(CriterionResult& result) {
  const SandwichGolden goldens[] = {
      {64, 3.185193e-4, 17.8374117726511, 3.46573590271923,
       1989.00814828255, 2812.88229897178, 811.626268685038},
      {256, 2.663477e-4, 42.7005172989656, 9.24196240725127,
       4761.43500671675, 6733.68596285686, 728.599150930714},
      {1024, 2.288615e-4, 99.513277022098, 23.1049060181282,
       11096.4932234579, 15692.8112113953, 679.198227384378},
  };
  const double eps = 0.1;
  const NormOrder p(2.0);
  bool pass = true;
  std::string detail;
  for (const SandwichGolden& golden : goldens) {
    const Factorization fact = SqrtPrefixFactorization(golden.n);
    const double range =
        *PrefixLowerCertificate(golden.n, eps, 0.0, p).delta_range;
    const double delta = std::min(1e-12, range);
    const BoundCertificate lower =
        PrefixLowerCertificate(golden.n, eps, delta, p);
    const PrivacyParams params(eps, delta);
    const NoiseCalibration calibration = Calibrate(params, fact.right);
    const double analytic = AnalyticError(fact, calibration, p);
    const double gamma_upper = GammaPUpper(fact, p);
    const double upper =
        UpperCertificate(gamma_upper, params, p, golden.n, golden.n).value;
    const double ratio = upper / lower.value;
    const double band = 30.0 * std::log(1.0 / delta);

    const bool ordered = lower.value <= analytic;
    const bool banded = ratio <= band;
    const bool frozen = RelClose(range, golden.delta_range, 1e-6) &&
                        RelClose(gamma_upper, golden.gamma_upper, 1e-9) &&
                        RelClose(lower.value, golden.lower, 1e-9) &&
                        RelClose(analytic, golden.analytic, 1e-9) &&
                        RelClose(upper, golden.upper, 1e-9) &&
                        RelClose(ratio, golden.ratio, 1e-9);
    if (!(ordered && banded && frozen)) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += "n=" + std::to_string(golden.n) + " ratio " + Num(ratio, 6) +
              " vs band " + Num(band, 6) +
              (frozen ? "" : " (reference drift)");
  }
  result.pass = pass;
  result.details = detail;
}

// ---------------------------------------------------------------------------
// 9. The realized error of the smooth factorization grows like
//    n^{1/p} log n: the normalized curve stays within a factor of 4.

void CheckScalingBand(CriterionResult& result) {
  const PrivacyParams params(1.0, 1e-9);
  bool pass = true;
  std::string detail;
  for (double order : {2.0, 3.0}) {
    const NormOrder p(order);
    double low = std::numeric_limits<double>::infinity();
    double high = 0.0;
    for (std::size_t n = 16; n <= 4096; n *= 2) {
      const Factorization fact = SqrtPrefixFactorization(n);
      const NoiseCalibration calibration = Calibrate(params, fact.right);
      const double analytic = AnalyticError(fact, calibration, p);
      const double rate = std::pow(static_cast<double>(n), 1.0 / order) *
                          std::log(static_cast<double>(n));
      const double normalized = analytic / rate;
      low = std::min(low, normalized);
      high = std::max(high, normalized);
    }
    const double spread = high / low;
    if (spread > 4.0) pass = false;
    if (!detail.empty()) detail += ", ";
    detail += "p=" + Num(order, 2) + ": spread " + Num(spread, 4);
  }
  result.pass = pass;
  result.details = detail;
}

// ---------------------------------------------------------------------------
// 10. The report pipeline is deterministic and worker-count independent,
//     exercised through the installed command line binary.

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void CheckReportDeterminism(CriterionResult& result, const char* cli_path) {
  if (cli_path == nullptr) {
    result.pass = false;
    result.details = "command line binary path missing from argv[1]";
    return;
  }
  const std::string base =
      std::string(cli_path) +
      " report --workload prefix --n 32 --method sqrt_prefix"
      " --method binary_tree --p 2 --p inf --eps 0.5 --delta 1e-9"
      " --trials 2000 --seed 12345 --kappa-starts 20 --kappa-iters 200"
      " --format csv";
  const std::string first_path = "/tmp/matmech_accept_first.csv";
  const std::string second_path = "/tmp/matmech_accept_second.csv";
  const std::string threaded_path = "/tmp/matmech_accept_threaded.csv";

  const int status_first = std::system(
      (base + " --workers 1 --out " + first_path + " 2>/dev/null").c_str());
  const int status_second = std::system(
      (base + " --workers 1 --out " + second_path + " 2>/dev/null").c_str());
  const int status_threaded = std::system(
      (base + " --workers 3 --out " + threaded_path + " 2>/dev/null")
          .c_str());
  if (status_first != 0 || status_second != 0 || status_threaded != 0) {
    result.pass = false;
    result.details = "report runs exited nonzero";
    return;
  }

  const std::string first = ReadFile(first_path);
  const std::string second = ReadFile(second_path);
  const std::string threaded = ReadFile(threaded_path);
  std::remove(first_path.c_str());
  std::remove(second_path.c_str());
  std::remove(threaded_path.c_str());

  const bool bytes_equal =
      !first.empty() && matmech::CsvBody(first) == matmech::CsvBody(second);

  bool monte_carlo_equal = true;
  int monte_carlo_rows = 0;
  const std::vector<matmech::ReportRow> serial = matmech::ParseCsvRows(first);
  const std::vector<matmech::ReportRow> parallel =
      matmech::ParseCsvRows(threaded);
  if (serial.size() != parallel.size()) {
    monte_carlo_equal = false;
  } else {
    for (std::size_t i = 0; i < serial.size(); ++i) {
      const bool monte_carlo_row =
          serial[i].quantity.rfind("mc_mean/", 0) == 0 ||
          serial[i].quantity.rfind("mc_stderr/", 0) == 0;
      if (!monte_carlo_row) continue;
      ++monte_carlo_rows;
      if (!(serial[i] == parallel[i])) monte_carlo_equal = false;
    }
  }

  result.pass = bytes_equal && monte_carlo_equal && monte_carlo_rows > 0;
  result.details = std::string("csv bodies ") +
                   (bytes_equal ? "identical" : "differ") + ", " +
                   std::to_string(monte_carlo_rows) +
                   " monte carlo rows across worker counts " +
                   (monte_carlo_equal ? "identical" : "differ");
}

}  // namespace

int main(int argc, char** argv) {
  const char* cli_path = argc > 1 ? argv[1] : nullptr;

  std::vector<CriterionResult> results = {
      {"identity gamma endpoints", 1.0},
      {"parity singular spectrum", 10.0},
      {"square-root factorization", 30.0},
      {"interval-tree factorization", 10.0},
      {"width search", 60.0},
      {"monte carlo oracle", 60.0},
      {"upper certificate soundness", 60.0},
      {"running-sum sandwich", 60.0},
      {"error scaling band", 30.0},
      {"report determinism", 120.0},
  };

  for (std::size_t i = 0; i < results.size(); ++i) {
    CriterionResult& result = results[i];
    const auto start = std::chrono::steady_clock::now();
    try {
      switch (i) {
        case 0: CheckIdentityEndpoints(result); break;
        case 1: CheckParitySpectrum(result); break;
        case 2: CheckSqrtFactorization(result); break;
        case 3: CheckBinaryTree(result); break;
        case 4: CheckWidthSearch(result); break;
        case 5: CheckMonteCarloOracle(result); break;
        case 6: CheckUpperSoundness(result); break;
        case 7: CheckPrefixSandwich(result); break;
        case 8: CheckScalingBand(result); break;
        case 9: CheckReportDeterminism(result, cli_path); break;
      }
    } catch (const std::exception& error) {
      result.pass = false;
      result.details = std::string("exception: ") + error.what();
    }
    result.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    if (result.seconds > result.budget_seconds) {
      result.pass = false;
      result.details += " [over time budget]";
    }
    std::cout << (result.pass ? "PASS" : "FAIL") << " criterion " << i + 1
              << ": " << result.label << " (" << result.details << "; "
              << Num(result.seconds, 3) << " s, budget "
              << Num(result.budget_seconds, 3) << " s)" << std::endl;
  }

  int failed = 0;
  for (const CriterionResult& result : results) {
    if (!result.pass) ++failed;
  }
  std::cout << results.size() - failed << " of " << results.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
