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

#ifndef MATMECH_MECHANISM_H_
#define MATMECH_MECHANISM_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "matmech/bounds.h"
#include "matmech/factorization.h"
#include "matmech/matrix.h"

namespace matmech {

struct PrivacyParams {
  PrivacyParams(double eps, double delta);

  double eps;
  double delta;
};

struct NoiseCalibration {
  double sigma = 0.0;
  // The l1-to-l2 operator norm of the right factor, the per-input
  // sensitivity of R*x under single-unit histogram changes.
  double sensitivity = 0.0;
  PrivacyParams params;
  // The calibration constant is only stated for eps <= 1; larger eps is
  // allowed but tagged so reports can flag it.
  bool extrapolated = false;
};

// Smallest sigma satisfying sigma^2 >= 9 Delta^2 ln(1/delta) / (2 eps^2)
// with Delta = ||R||_{1->2}.
NoiseCalibration Calibrate(const PrivacyParams& params, const Matrix& r);

// One mechanism output L(Rx + z) with z i.i.d. N(0, sigma^2). Draws are
// keyed by (seed, trial, coordinate), so outputs are reproducible and
// trials are independent streams.
std::vector<double> SampleMechanism(const Factorization& factorization,
                                    const NoiseCalibration& calibration,
                                    const std::vector<double>& x,
                                    std::uint64_t seed,
                                    std::uint64_t trial = 0);

// Exact (E ||M(x) - Ax||_p^p)^{1/p} for finite p >= 2: the error is L z,
// coordinate i is Gaussian with scale sigma * sqrt((L L^T)_{ii}), and the
// absolute moments sum in closed form. Infinite p is rejected; use the
// Monte Carlo path for it.
double AnalyticError(const Factorization& factorization,
                     const NoiseCalibration& calibration, NormOrder p);

struct ErrorEstimate {
  NormOrder p;
  // Closed-form error; absent when p is infinite.
  std::optional<double> analytic;
  double mc_mean = 0.0;
  double mc_stderr = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo estimate of the mechanism error. The per-trial statistic is
// S_t = ||L z_t||_p^p (max-abs for infinite p); the reported mean is the
// p-th root of the trial average and the standard error follows by the
// delta method. The trial vector is reduced in a fixed order, so the result
// does not depend on `workers`. x is validated for shape but the error of
// this mechanism does not depend on it. Requires trials >= 100.
ErrorEstimate MonteCarloError(const Factorization& factorization,
                              const NoiseCalibration& calibration, NormOrder p,
                              const std::vector<double>& x, int trials,
                              std::uint64_t seed, int workers = 1);

// Upper-bound certificate for the calibrated mechanism built from a
// factorization with norm bound gamma_upper:
// 3 * gamma_upper * sqrt(ln(1/delta) * min{p, ln(2m)} / (2 eps^2)).
BoundCertificate UpperCertificate(double gamma_upper,
                                  const PrivacyParams& params, NormOrder p,
                                  std::size_t m, std::size_t n);

}  // namespace matmech

#endif  // MATMECH_MECHANISM_H_
