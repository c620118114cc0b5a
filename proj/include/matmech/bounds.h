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

#ifndef MATMECH_BOUNDS_H_
#define MATMECH_BOUNDS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "matmech/matrix.h"
#include "matmech/workloads.h"

namespace matmech {

// Width of the sensitivity polytope A*B1 in direction theta, which is
// 2 * ||A^T theta||_inf. theta must be a unit vector (within 1e-9).
double PolytopeWidth(const Matrix& a, const std::vector<double>& theta);

// Bracket for kappa(A), the minimal polytope width over unit directions.
// The search only certifies an upper bound, so the bracket stays explicit.
struct KappaEstimate {
  // 2 * min over visited directions of ||A^T theta||_inf.
  double upper = 0.0;
  // 2 * sigma_min(A) / sqrt(n); zero when the rows are dependent.
  double lower = 0.0;
  // Exact value when one is known; absent otherwise.
  std::optional<double> analytic;
  std::string method_notes;
};

// Multi-start projected subgradient descent of ||A^T theta||_inf over the
// unit sphere: `starts` random starts plus deterministic ones (coordinate
// directions, the smallest left singular vector, sign-alternating vectors).
// Step 1/sqrt(t), renormalized every iteration, best visited width kept.
// Deterministic for a fixed seed.
KappaEstimate KappaSearch(const Matrix& a, int starts, int iters,
                          std::uint64_t seed);

// KappaSearch plus workload-specific refinements (width floor for the
// row-orthogonal parity family, extra witness directions for prefix).
KappaEstimate KappaEstimateFor(const WorkloadMatrix& workload, int starts,
                               int iters, std::uint64_t seed);

// Schatten-1 lower bound m^{1/p - 1/2} * ||A||_S1 / sqrt(n) on the optimal
// factorization norm. Requires p >= 2.
double GammaPLower(const Matrix& a, NormOrder p);

// Closed-form lower bound on the p=2 factorization norm of the prefix
// workload: (sqrt(n)/pi) * (2 + ln((2n+1)/5) + ln(2n+1)/(2n)).
double Gamma2PrefixExplicit(std::size_t n);

// n^{1/p - 1/2} * Gamma2PrefixExplicit(n); requires p >= 2.
double GammaPLowerPrefix(std::size_t n, NormOrder p);

struct DeltaRange {
  double max_delta = 0.0;
  bool rank_deficient = false;
};

// Largest delta for which the additive-noise lower certificate is claimed:
// (1 - e^{-eps})/2 * min{1/16, eps^2, eps*kappa*n^{1/p-1/2}/(12*gamma_ub)}.
// Feeding a kappa lower bound and a gamma upper bound keeps the range
// conservative. kappa_lower <= 0 yields zero with the rank_deficient flag.
DeltaRange DeltaRangeAdditive(double kappa_lower, double eps, NormOrder p,
                              std::size_t n, double gamma_upper);

enum class TheoremTag {
  kGeneralLower,
  kAdditiveNoiseLower,
  kPrefixLower,
  kParityLower,
  kFactorizationUpper,
};

std::string TheoremTagName(TheoremTag tag);
TheoremTag ParseTheoremTag(const std::string& name);

struct CertificateParams {
  double eps;
  double delta;
  NormOrder p;
  std::size_t m;
  std::size_t n;
};

// One bound on the optimal mechanism error, tagged with the statement it
// instantiates. Certificates whose statement hides its constant carry
// constant_known = false and never gate a sandwich assertion.
struct BoundCertificate {
  TheoremTag theorem;
  double value;
  bool constant_known;
  std::optional<double> delta_range;
  CertificateParams params;
  bool applicable = true;
};

// (1 - dt) * gamma_lower / (48 eps) with dt = 2 e^{2 eps} (e^{1/2} - 1)
// delta / (e^eps - 1), clamped at zero once dt >= 1. Requires
// 0 < eps < 1/2. The 48 instantiates an unspecified universal constant, so
// constant_known is false.
BoundCertificate GeneralLowerCertificate(double gamma_lower, double eps,
                                         double delta, NormOrder p,
                                         std::size_t m, std::size_t n);

// (1 - d') * gamma_lower / (8 (e^{3 eps} - 1)) with d' = 2 delta /
// (1 - e^{-eps}). Valid only for delta inside DeltaRangeAdditive; pass the
// check result as in_range, which lands in `applicable`.
BoundCertificate AdditiveLowerCertificate(double gamma_lower, double eps,
                                          double delta, NormOrder p,
                                          std::size_t m, std::size_t n,
                                          bool in_range);

// Prefix-workload certificate (1 - dt) * n^{1/p} ln(n) / (96 eps) with
// dt = 2 delta e^eps / (1 - e^{-eps}), valid for delta up to the attached
// delta_range. Requires 0 < eps < 1/6.
BoundCertificate PrefixLowerCertificate(std::size_t n, double eps,
                                        double delta, NormOrder p);

// Parity-workload certificate (1 - delta) C(d,w)^{1/2 + 1/p} /
// (e^{3 eps} - 1); asymptotic statement, so constant_known is false.
BoundCertificate ParityLowerCertificate(int d, int w, double eps,
                                        double delta, NormOrder p);

nlohmann::json CertificateToJson(const BoundCertificate& certificate);
BoundCertificate CertificateFromJson(const nlohmann::json& json);

}  // namespace matmech

#endif  // MATMECH_BOUNDS_H_
