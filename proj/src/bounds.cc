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

#include "matmech/bounds.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "matmech/rng.h"

namespace matmech {

namespace {

constexpr double kUnitTolerance = 1e-9;

double VectorNorm(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

// out = A^T theta, streamed along the rows of A; returns argmax_j |out[j]|.
std::size_t ApplyTranspose(const Matrix& a, const std::vector<double>& theta,
                           std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double weight = theta[i];
    if (weight == 0.0) continue;
    const double* row = a.row(i);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += weight * row[j];
  }
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double magnitude = std::fabs(out[j]);
    if (magnitude > best) {
      best = magnitude;
      arg = j;
    }
  }
  return arg;
}

// Direction of the smallest singular value of A, found by accumulating the
// Jacobi rotations that orthogonalize the columns of A^T. Also the right
// place to pick up an exact null direction when the rows are dependent.
std::vector<double> SmallestLeftSingularDirection(const Matrix& a) {
  const JacobiSweepResult sweep = OneSidedJacobi(a.Transposed(), true);
  std::size_t arg = 0;
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < sweep.column_norms.size(); ++j) {
    if (sweep.column_norms[j] < smallest) {
      smallest = sweep.column_norms[j];
      arg = j;
    }
  }
  std::vector<double> direction(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    direction[i] = sweep.rotations(i, arg);
  }
  return direction;
}

}  // namespace

double PolytopeWidth(const Matrix& a, const std::vector<double>& theta) {
  if (theta.size() != a.rows()) {
    throw std::invalid_argument("direction length must match row count");
  }
  if (std::fabs(VectorNorm(theta) - 1.0) > kUnitTolerance) {
    throw std::invalid_argument("width direction must be a unit vector");
  }
  std::vector<double> image(a.cols());
  const std::size_t arg = ApplyTranspose(a, theta, image);
  return 2.0 * std::fabs(image[arg]);
}

KappaEstimate KappaSearch(const Matrix& a, int starts, int iters,
                          std::uint64_t seed) {
  if (starts < 1 || iters < 1) {
    throw std::invalid_argument("kappa search needs starts >= 1, iters >= 1");
  }
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  // Deterministic starts first. The objective is symmetric under negation,
  // so one sign per coordinate direction is enough; the smallest singular
  // direction lands directly on a degenerate width when rows are dependent.
  std::vector<std::vector<double>> initial;
  const std::size_t coordinate_cap = std::min<std::size_t>(m, 64);
  for (std::size_t i = 0; i < coordinate_cap; ++i) {
    std::vector<double> basis(m, 0.0);
    basis[i] = 1.0;
    initial.push_back(std::move(basis));
  }
  {
    std::vector<double> uniform(m, 1.0 / std::sqrt(static_cast<double>(m)));
    initial.push_back(uniform);
    for (std::size_t i = 1; i < m; i += 2) uniform[i] = -uniform[i];
    initial.push_back(std::move(uniform));
  }
  initial.push_back(SmallestLeftSingularDirection(a));
  const std::size_t deterministic = initial.size();

  for (int s = 0; s < starts; ++s) {
    std::vector<double> random(m);
    for (std::size_t i = 0; i < m; ++i) {
      random[i] = NormalDraw(seed, static_cast<std::uint64_t>(s), i);
    }
    const double norm = VectorNorm(random);
    if (norm < 1e-30) {
      random.assign(m, 0.0);
      random[static_cast<std::size_t>(s) % m] = 1.0;
    } else {
      for (double& x : random) x /= norm;
    }
    initial.push_back(std::move(random));
  }

  double best_half_width = std::numeric_limits<double>::infinity();
  std::vector<double> image(n);
  for (const std::vector<double>& start : initial) {
    std::vector<double> theta = start;
    for (int t = 1; t <= iters; ++t) {
      const std::size_t arg = ApplyTranspose(a, theta, image);
      const double half_width = std::fabs(image[arg]);
      best_half_width = std::min(best_half_width, half_width);
      if (half_width == 0.0) break;
      const double sign = image[arg] >= 0.0 ? 1.0 : -1.0;
      const double step = 1.0 / std::sqrt(static_cast<double>(t));
      for (std::size_t i = 0; i < m; ++i) {
        theta[i] -= step * sign * a(i, arg);
      }
      const double norm = VectorNorm(theta);
      if (norm == 0.0) break;
      for (double& x : theta) x /= norm;
    }
    // A step can cancel theta exactly; the zero vector is not a direction,
    // so only score the endpoint of trajectories that kept one.
    if (VectorNorm(theta) > 0.0) {
      const std::size_t arg = ApplyTranspose(a, theta, image);
      best_half_width = std::min(best_half_width, std::fabs(image[arg]));
    }
  }

  KappaEstimate estimate;
  estimate.upper = 2.0 * best_half_width;
  double sigma_min = 0.0;
  if (m <= n) sigma_min = Svd(a).values.back();
  estimate.lower = 2.0 * sigma_min / std::sqrt(static_cast<double>(n));
  estimate.method_notes =
      "projected subgradient over the unit sphere, " +
      std::to_string(initial.size()) + " starts (" +
      std::to_string(deterministic) + " deterministic, " +
      std::to_string(starts) + " random), " + std::to_string(iters) +
      " iterations, step 1/sqrt(t)";
  return estimate;
}

KappaEstimate KappaEstimateFor(const WorkloadMatrix& workload, int starts,
                               int iters, std::uint64_t seed) {
  KappaEstimate estimate =
      KappaSearch(workload.matrix, starts, iters, seed);
  if (workload.kind == WorkloadKind::kPrefix) {
    // Unit direction whose query-space image alternates between +c and -c
    // with c = 1/sqrt(4n-3); its width beats the width 2 of the first
    // coordinate direction for every n >= 2.
    const std::size_t n = workload.matrix.rows();
    const double c = 1.0 / std::sqrt(4.0 * static_cast<double>(n) - 3.0);
    std::vector<double> witness(n);
    for (std::size_t i = 0; i < n; ++i) {
      witness[i] = (i % 2 == 0 ? 2.0 : -2.0) * c;
    }
    witness[n - 1] *= 0.5;
    estimate.upper = std::min(estimate.upper,
                              PolytopeWidth(workload.matrix, witness));
    estimate.method_notes +=
        "; no exact value recorded: alternating-sign directions certify "
        "width 2/sqrt(4n-3), below the width 2 of coordinate directions";
  }
  if (workload.kind == WorkloadKind::kParity) {
    estimate.lower = std::max(estimate.lower, 2.0);
    estimate.method_notes +=
        "; width floor 2 from pairwise-orthogonal rows with entries of "
        "modulus 1";
  }
  return estimate;
}

double GammaPLower(const Matrix& a, NormOrder p) {
  if (!p.is_infinite() && p.value() < 2.0) {
    throw std::invalid_argument("factorization norm bounds need p >= 2");
  }
  const double exponent = p.Reciprocal() - 0.5;
  return std::pow(static_cast<double>(a.rows()), exponent) * Schatten1(a) /
         std::sqrt(static_cast<double>(a.cols()));
}

double Gamma2PrefixExplicit(std::size_t n) {
  if (n == 0) throw std::invalid_argument("prefix bound needs n >= 1");
  const double nd = static_cast<double>(n);
  return std::sqrt(nd) / M_PI *
         (2.0 + std::log((2.0 * nd + 1.0) / 5.0) +
          std::log(2.0 * nd + 1.0) / (2.0 * nd));
}

double GammaPLowerPrefix(std::size_t n, NormOrder p) {
  if (!p.is_infinite() && p.value() < 2.0) {
    throw std::invalid_argument("factorization norm bounds need p >= 2");
  }
  const double exponent = p.Reciprocal() - 0.5;
  return std::pow(static_cast<double>(n), exponent) * Gamma2PrefixExplicit(n);
}

DeltaRange DeltaRangeAdditive(double kappa_lower, double eps, NormOrder p,
                              std::size_t n, double gamma_upper) {
  if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
  if (gamma_upper <= 0.0) {
    throw std::invalid_argument("gamma upper bound must be positive");
  }
  if (kappa_lower <= 0.0) return DeltaRange{0.0, true};
  const double scaling =
      std::pow(static_cast<double>(n), p.Reciprocal() - 0.5);
  const double width_term =
      eps * kappa_lower * scaling / (12.0 * gamma_upper);
  const double cap = std::min({1.0 / 16.0, eps * eps, width_term});
  return DeltaRange{0.5 * (-std::expm1(-eps)) * cap, false};
}

std::string TheoremTagName(TheoremTag tag) {
  switch (tag) {
    case TheoremTag::kGeneralLower:
      return "general_lower";
    case TheoremTag::kAdditiveNoiseLower:
      return "additive_noise_lower";
    case TheoremTag::kPrefixLower:
      return "prefix_lower";
    case TheoremTag::kParityLower:
      return "parity_lower";
    case TheoremTag::kFactorizationUpper:
      return "factorization_upper";
  }
  throw std::invalid_argument("unknown theorem tag");
}

TheoremTag ParseTheoremTag(const std::string& name) {
  if (name == "general_lower") return TheoremTag::kGeneralLower;
  if (name == "additive_noise_lower") return TheoremTag::kAdditiveNoiseLower;
  if (name == "prefix_lower") return TheoremTag::kPrefixLower;
  if (name == "parity_lower") return TheoremTag::kParityLower;
  if (name == "factorization_upper") return TheoremTag::kFactorizationUpper;
  throw std::invalid_argument("unknown theorem tag: " + name);
}

BoundCertificate GeneralLowerCertificate(double gamma_lower, double eps,
                                         double delta, NormOrder p,
                                         std::size_t m, std::size_t n) {
  if (eps <= 0.0 || eps >= 0.5) {
    throw std::invalid_argument("general certificate needs 0 < eps < 1/2");
  }
  if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");
  if (gamma_lower < 0.0) {
    throw std::invalid_argument("gamma lower bound must be >= 0");
  }
  const double shifted_delta =
      2.0 * std::exp(2.0 * eps) * std::expm1(0.5) * delta / std::expm1(eps);
  const double value =
      std::max(0.0, 1.0 - shifted_delta) * gamma_lower / (48.0 * eps);
  return BoundCertificate{TheoremTag::kGeneralLower, value, false,
                          std::nullopt,
                          CertificateParams{eps, delta, p, m, n}};
}

BoundCertificate AdditiveLowerCertificate(double gamma_lower, double eps,
                                          double delta, NormOrder p,
                                          std::size_t m, std::size_t n,
                                          bool in_range) {
  if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
  if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");
  if (gamma_lower < 0.0) {
    throw std::invalid_argument("gamma lower bound must be >= 0");
  }
  const double shifted_delta = 2.0 * delta / (-std::expm1(-eps));
  const double value = std::max(0.0, 1.0 - shifted_delta) * gamma_lower /
                       (8.0 * std::expm1(3.0 * eps));
  BoundCertificate certificate{TheoremTag::kAdditiveNoiseLower, value, true,
                               std::nullopt,
                               CertificateParams{eps, delta, p, m, n}};
  certificate.applicable = in_range;
  return certificate;
}

BoundCertificate PrefixLowerCertificate(std::size_t n, double eps,
                                        double delta, NormOrder p) {
  if (n == 0) throw std::invalid_argument("prefix certificate needs n >= 1");
  if (eps <= 0.0 || eps >= 1.0 / 6.0) {
    throw std::invalid_argument("prefix certificate needs 0 < eps < 1/6");
  }
  if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");
  const double nd = static_cast<double>(n);
  const double one_minus = -std::expm1(-eps);
  const double shifted_delta = 2.0 * delta * std::exp(eps) / one_minus;
  const double value = std::max(0.0, 1.0 - shifted_delta) *
                       std::pow(nd, p.Reciprocal()) * std::log(nd) /
                       (96.0 * eps);
  const double c_eps =
      std::min(eps * one_minus * std::exp(-eps) /
                   (12.0 * (1.0 + std::log(4.0 * nd / 5.0) / M_PI)),
               eps * eps * std::exp(-eps) * one_minus / 2.0);
  const double range = c_eps * std::pow(nd, p.Reciprocal() - 0.5);
  return BoundCertificate{TheoremTag::kPrefixLower, value, true, range,
                          CertificateParams{eps, delta, p, n, n}};
}

BoundCertificate ParityLowerCertificate(int d, int w, double eps,
                                        double delta, NormOrder p) {
  if (d < 1 || w < 1 || w > d || d > 32) {
    throw std::invalid_argument("parity certificate needs 1 <= w <= d <= 32");
  }
  if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
  if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");
  const double queries =
      static_cast<double>(BinomialCoefficient(d, w));
  const double value = std::max(0.0, 1.0 - delta) *
                       std::pow(queries, 0.5 + p.Reciprocal()) /
                       std::expm1(3.0 * eps);
  return BoundCertificate{
      TheoremTag::kParityLower, value, false, std::nullopt,
      CertificateParams{eps, delta, p,
                        static_cast<std::size_t>(BinomialCoefficient(d, w)),
                        std::size_t{1} << d}};
}

nlohmann::json CertificateToJson(const BoundCertificate& certificate) {
  nlohmann::json json = {
      {"theorem", TheoremTagName(certificate.theorem)},
      {"value", certificate.value},
      {"constant_known", certificate.constant_known},
      {"applicable", certificate.applicable},
      {"params",
       {{"eps", certificate.params.eps},
        {"delta", certificate.params.delta},
        {"p", certificate.params.p.ToString()},
        {"m", certificate.params.m},
        {"n", certificate.params.n}}},
  };
  if (certificate.delta_range.has_value()) {
    json["delta_range"] = *certificate.delta_range;
  }
  return json;
}

BoundCertificate CertificateFromJson(const nlohmann::json& json) {
  const nlohmann::json& params = json.at("params");
  BoundCertificate certificate{
      ParseTheoremTag(json.at("theorem").get<std::string>()),
      json.at("value").get<double>(),
      json.at("constant_known").get<bool>(),
      std::nullopt,
      CertificateParams{params.at("eps").get<double>(),
                        params.at("delta").get<double>(),
                        NormOrder::Parse(params.at("p").get<std::string>()),
                        params.at("m").get<std::size_t>(),
                        params.at("n").get<std::size_t>()},
      json.value("applicable", true)};
  if (json.contains("delta_range")) {
    certificate.delta_range = json.at("delta_range").get<double>();
  }
  return certificate;
}

}  // namespace matmech
