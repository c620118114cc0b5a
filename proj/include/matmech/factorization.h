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

#ifndef MATMECH_FACTORIZATION_H_
#define MATMECH_FACTORIZATION_H_

#include <cstddef>
#include <string>
#include <vector>

#include "matmech/matrix.h"
#include "matmech/workloads.h"

namespace matmech {

enum class FactorizationMethod {
  kTrivialLeft,
  kTrivialRight,
  kSqrtPrefix,
  kBinaryTreePrefix,
  kCustom,
};

std::string FactorizationMethodName(FactorizationMethod method);
FactorizationMethod ParseFactorizationMethod(const std::string& name);

// An explicit split A = left * right. The mechanism adds noise to right * x
// and maps it back through left, so all error bounds downstream are driven
// by norms of these two factors.
struct Factorization {
  Matrix left;
  Matrix right;
  FactorizationMethod method = FactorizationMethod::kCustom;
  // Label of the workload this factors, for reports and serialized files.
  std::string target;
};

enum class TrivialSide { kLeft, kRight };

// Baseline splits: kLeft is (A, I), kRight is (I, A).
Factorization TrivialFactorization(const WorkloadMatrix& workload,
                                   TrivialSide side);

// First `count` coefficients of the sequence f(0)=1,
// f(k) = (1 - 1/(2k)) f(k-1). Satisfies f(k) <= 1/sqrt(pi*k).
std::vector<double> WallisCoefficients(std::size_t count);

// Square-root factorization of the prefix workload: left = right, both
// lower-triangular Toeplitz with entry f(i-j) on diagonal i-j.
Factorization SqrtPrefixFactorization(std::size_t n);

// Binary tree factorization of the prefix workload. right computes every
// dyadic interval sum of a complete tree over the next power of two
// (phantom nodes and columns dropped), left covers each prefix with its
// canonical dyadic intervals using 0/1 coefficients. Reconstruction is
// exact in integer arithmetic.
Factorization BinaryTreeFactorization(std::size_t n);

struct ValidationReport {
  double max_deviation = 0.0;
  std::size_t worst_row = 0;
  std::size_t worst_col = 0;
  double tolerance = 0.0;
  double right_norm_1to2 = 0.0;
  double left_norm_2toinf = 0.0;
  bool pass = false;
};

// Checks left * right against the workload entrywise. Passes iff the largest
// deviation is at most 1e-10 * max(1, largest |A| entry).
ValidationReport ValidateFactorization(const WorkloadMatrix& workload,
                                       const Factorization& factorization);

// sqrt(tr_{p/2}(L L^T)) * ||R||_{1->2}, an upper bound on the optimal
// factorization norm of the target. Requires p >= 2; non-increasing in p.
double GammaPUpper(const Factorization& factorization, NormOrder p);

void SaveFactorization(const Factorization& factorization,
                       const std::string& path);
Factorization LoadFactorization(const std::string& path);

}  // namespace matmech

#endif  // MATMECH_FACTORIZATION_H_
