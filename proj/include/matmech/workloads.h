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

#ifndef MATMECH_WORKLOADS_H_
#define MATMECH_WORKLOADS_H_

#include <cstddef>
#include <cstdint>
#include <string>

#include "matmech/matrix.h"

namespace matmech {

enum class WorkloadKind { kPrefix, kParity, kIdentity, kRandomSign, kCustom };

std::string WorkloadKindName(WorkloadKind kind);
WorkloadKind ParseWorkloadKind(const std::string& name);

// A linear query workload: row i of `matrix` is one query over the histogram
// domain, so the true answer vector is matrix * x.
struct WorkloadMatrix {
  Matrix matrix;
  WorkloadKind kind = WorkloadKind::kCustom;
  // Parity parameters; zero for every other kind.
  int d = 0;
  int w = 0;
  // Generator seed; meaningful only for kRandomSign.
  std::uint64_t seed = 0;
  std::string label = {};
};

// Lower-triangular all-ones n x n matrix: query i answers the running count
// over the first i cells.
WorkloadMatrix PrefixMatrix(std::size_t n);

// Sylvester Hadamard matrix of order 2^d. Signs are fixed in integer
// arithmetic, so H * H^T = 2^d I holds exactly. d > 20 raises
// std::length_error.
Matrix Hadamard(int d);

// All C(d,w) weight-w parity queries over {+1,-1}^d, one row per subset in
// lexicographic order. Columns enumerate the domain lexicographically with
// +1 before -1 in each coordinate, which makes every row literally a row of
// Hadamard(d). Requires 1 <= w <= d <= 16.
WorkloadMatrix ParityMatrix(int d, int w);

WorkloadMatrix IdentityWorkload(std::size_t n);

// m x n matrix of i.i.d. signs, reproducible for a given seed.
WorkloadMatrix RandomSignWorkload(std::size_t m, std::size_t n,
                                  std::uint64_t seed);

WorkloadMatrix CustomWorkload(Matrix matrix, std::string label);

// Text round trip; LoadWorkload(SaveWorkload(w)) reproduces entries and
// metadata bit for bit. Malformed input raises ParseError.
void SaveWorkload(const WorkloadMatrix& workload, const std::string& path);
WorkloadMatrix LoadWorkload(const std::string& path);

// Exact C(n, k); overflow raises std::overflow_error.
std::uint64_t BinomialCoefficient(int n, int k);

}  // namespace matmech

#endif  // MATMECH_WORKLOADS_H_
