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

#include "matmech/mechanism.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "matmech/rng.h"

namespace matmech {

namespace {

// S_t for one trial: draw z, push it through the left factor, take the
// l_p^p statistic (max-abs for infinite p).
double TrialStatistic(const Matrix& left, double sigma, NormOrder p,
                      std::uint64_t seed, std::uint64_t trial,
                      std::vector<double>& z) {
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = sigma * NormalDraw(seed, trial, i);
  }
  double statistic = 0.0;
  for (std::size_t j = 0; j < left.rows(); ++j) {
    const double* row = left.row(j);
    double coordinate = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) coordinate += row[i] * z[i];
    if (p.is_infinite()) {
      statistic = std::max(statistic, std::fabs(coordinate));
    } else {
      statistic += std::pow(std::fabs(coordinate), p.value());
    }
  }
  return statistic;
}

}  // namespace

PrivacyParams::PrivacyParams(double eps_in, double delta_in)
    : eps(eps_in), delta(delta_in) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
}

NoiseCalibration Calibrate(const PrivacyParams& params, const Matrix& r) {
  const double sensitivity = OpNorm1To2(r);
  const double sigma = sensitivity * 3.0 *
                       std::sqrt(std::log(1.0 / params.delta)) /
                       (std::sqrt(2.0) * params.eps);
  return NoiseCalibration{sigma, sensitivity, params, params.eps > 1.0};
}

std::vector<double> SampleMechanism(const Factorization& factorization,
                                    const NoiseCalibration& calibration,
                                    const std::vector<double>& x,
                                    std::uint64_t seed, std::uint64_t trial) {
  const Matrix& l = factorization.left;
  const Matrix& r = factorization.right;
  if (x.size() != r.cols()) {
    throw std::invalid_argument("input length must match workload columns");
  }

  std::vector<double> noised(r.rows());
  for (std::size_t i = 0; i < r.rows(); ++i) {
    const double* row = r.row(i);
    double dot = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) dot += row[j] * x[j];
    noised[i] = dot + calibration.sigma * NormalDraw(seed, trial, i);
  }

  std::vector<double> output(l.rows());
  for (std::size_t j = 0; j < l.rows(); ++j) {
    const double* row = l.row(j);
    double dot = 0.0;
    for (std::size_t i = 0; i < noised.size(); ++i) dot += row[i] * noised[i];
    output[j] = dot;
  }
  return output;
}

double AnalyticError(const Factorization& factorization,
                     const NoiseCalibration& calibration, NormOrder p) {
  if (p.is_infinite()) {
    throw std::invalid_argument(
        "analytic error covers finite p only; use the Monte Carlo path");
  }
  const double order = p.value();
  if (order < 2.0) throw std::invalid_argument("analytic error needs p >= 2");

  const std::vector<double> row_squares =
      RowSquaredNorms(factorization.left);
  double largest = 0.0;
  std::vector<double> scales(row_squares.size());
  for (std::size_t i = 0; i < row_squares.size(); ++i) {
    scales[i] = calibration.sigma * std::sqrt(row_squares[i]);
    largest = std::max(largest, scales[i]);
  }
  if (largest == 0.0) return 0.0;

  // (sum_i c_p scale_i^p)^{1/p} = largest * (c_p * sum (scale/largest)^p)^{1/p}
  double sum = 0.0;
  for (double scale : scales) sum += std::pow(scale / largest, order);
  const double unit_moment = GaussianAbsMoment(order, 1.0);
  return largest * std::pow(unit_moment * sum, 1.0 / order);
}

ErrorEstimate MonteCarloError(const Factorization& factorization,
                              const NoiseCalibration& calibration, NormOrder p,
                              const std::vector<double>& x, int trials,
                              std::uint64_t seed, int workers) {
  if (trials < 100) {
    throw std::invalid_argument(
        "Monte Carlo needs trials >= 100 for a meaningful standard error");
  }
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (x.size() != factorization.right.cols()) {
    throw std::invalid_argument("input length must match workload columns");
  }

  const Matrix& left = factorization.left;
  const std::size_t noise_dim = left.cols();

  // Every trial lands in its fixed slot; the reduction below runs in index
  // order, so the worker split cannot change the result.
  std::vector<double> statistics(static_cast<std::size_t>(trials));
  const int used_workers = std::min(workers, trials);
  auto run_range = [&](int begin, int end) {
    std::vector<double> z(noise_dim);
    for (int t = begin; t < end; ++t) {
      statistics[static_cast<std::size_t>(t)] =
          TrialStatistic(left, calibration.sigma, p, seed,
                         static_cast<std::uint64_t>(t), z);
    }
  };
  if (used_workers == 1) {
    run_range(0, trials);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(used_workers));
    const int chunk = (trials + used_workers - 1) / used_workers;
    for (int w = 0; w < used_workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(trials, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
    for (std::thread& thread : pool) thread.join();
  }

  double mean = 0.0;
  for (double s : statistics) mean += s;
  mean /= static_cast<double>(trials);
  double variance = 0.0;
  for (double s : statistics) variance += (s - mean) * (s - mean);
  variance /= static_cast<double>(trials - 1);
  const double mean_stderr =
      std::sqrt(variance / static_cast<double>(trials));

  ErrorEstimate estimate{p, std::nullopt, 0.0, 0.0, trials, seed};
  if (p.is_infinite()) {
    estimate.mc_mean = mean;
    estimate.mc_stderr = mean_stderr;
  } else {
    const double order = p.value();
    estimate.analytic = AnalyticError(factorization, calibration, p);
    estimate.mc_mean = std::pow(mean, 1.0 / order);
    estimate.mc_stderr =
        mean > 0.0 ? mean_stderr * std::pow(mean, 1.0 / order - 1.0) / order
                   : 0.0;
  }
  return estimate;
}

BoundCertificate UpperCertificate(double gamma_upper,
                                  const PrivacyParams& params, NormOrder p,
                                  std::size_t m, std::size_t n) {
  if (gamma_upper < 0.0) {
    throw std::invalid_argument("gamma upper bound must be >= 0");
  }
  const double log_term = std::log(2.0 * static_cast<double>(m));
  const double order_term =
      p.is_infinite() ? log_term : std::min(p.value(), log_term);
  const double value =
      3.0 * gamma_upper *
      std::sqrt(std::log(1.0 / params.delta) * order_term /
                (2.0 * params.eps * params.eps));
  return BoundCertificate{
      TheoremTag::kFactorizationUpper, value, true, std::nullopt,
      CertificateParams{params.eps, params.delta, p, m, n}};
}

}  // namespace matmech
