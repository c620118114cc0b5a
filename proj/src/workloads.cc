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

#include "matmech/workloads.h"

#include <bit>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "matmech/rng.h"
#include "matmech/text_io.h"

namespace matmech {

namespace {

constexpr int kMaxHadamardOrder = 20;
constexpr int kMaxParityDimension = 16;
constexpr char kWorkloadHeader[] = "matmech-workload v1";

std::string ParityLabel(int d, int w) {
  return "parity(" + std::to_string(d) + "," + std::to_string(w) + ")";
}

}  // namespace

std::string WorkloadKindName(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::kPrefix:
      return "prefix";
    case WorkloadKind::kParity:
      return "parity";
    case WorkloadKind::kIdentity:
      return "identity";
    case WorkloadKind::kRandomSign:
      return "random_sign";
    case WorkloadKind::kCustom:
      return "custom";
  }
  throw std::invalid_argument("unknown workload kind");
}

WorkloadKind ParseWorkloadKind(const std::string& name) {
  if (name == "prefix") return WorkloadKind::kPrefix;
  if (name == "parity") return WorkloadKind::kParity;
  if (name == "identity") return WorkloadKind::kIdentity;
  if (name == "random_sign") return WorkloadKind::kRandomSign;
  if (name == "custom") return WorkloadKind::kCustom;
  throw std::invalid_argument("unknown workload kind: " + name);
}

WorkloadMatrix PrefixMatrix(std::size_t n) {
  if (n == 0) throw std::invalid_argument("prefix workload needs n >= 1");
  Matrix matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) matrix(i, j) = 1.0;
  }
  WorkloadMatrix workload{std::move(matrix), WorkloadKind::kPrefix};
  workload.label = "prefix(" + std::to_string(n) + ")";
  return workload;
}

Matrix Hadamard(int d) {
  if (d < 0) throw std::invalid_argument("Hadamard order must be >= 0");
  if (d > kMaxHadamardOrder) {
    throw std::length_error("Hadamard order capped at 2^" +
                            std::to_string(kMaxHadamardOrder));
  }
  const std::size_t n = std::size_t{1} << d;
  Matrix matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      matrix(i, j) = (std::popcount(i & j) & 1) ? -1.0 : 1.0;
    }
  }
  return matrix;
}

WorkloadMatrix ParityMatrix(int d, int w) {
  if (d < 1 || w < 1 || w > d) {
    throw std::invalid_argument("parity workload needs 1 <= w <= d");
  }
  if (d > kMaxParityDimension) {
    throw std::invalid_argument("parity dimension capped at " +
                                std::to_string(kMaxParityDimension));
  }
  const std::size_t rows =
      static_cast<std::size_t>(BinomialCoefficient(d, w));
  const std::size_t cols = std::size_t{1} << d;
  Matrix matrix(rows, cols);

  // Walk the weight-w subsets of {1..d} in lexicographic order. A subset P
  // maps to the Hadamard row index with bit d-i set for each i in P, so the
  // query row is that row of Hadamard(d).
  std::vector<int> subset(w);
  for (int i = 0; i < w; ++i) subset[i] = i + 1;
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t mask = 0;
    for (int i : subset) mask |= std::size_t{1} << (d - i);
    for (std::size_t j = 0; j < cols; ++j) {
      matrix(r, j) = (std::popcount(mask & j) & 1) ? -1.0 : 1.0;
    }
    int k = w - 1;
    while (k >= 0 && subset[k] == d - (w - 1 - k)) --k;
    if (k < 0) break;
    ++subset[k];
    for (int i = k + 1; i < w; ++i) subset[i] = subset[i - 1] + 1;
  }

  WorkloadMatrix workload{std::move(matrix), WorkloadKind::kParity, d, w};
  workload.label = ParityLabel(d, w);
  return workload;
}

WorkloadMatrix IdentityWorkload(std::size_t n) {
  WorkloadMatrix workload{Matrix::Identity(n), WorkloadKind::kIdentity};
  workload.label = "identity(" + std::to_string(n) + ")";
  return workload;
}

WorkloadMatrix RandomSignWorkload(std::size_t m, std::size_t n,
                                  std::uint64_t seed) {
  if (m == 0 || n == 0) {
    throw std::invalid_argument("random sign workload needs positive size");
  }
  std::vector<double> entries(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      entries[i * n + j] = UniformDraw(seed, i, j) < 0.5 ? -1.0 : 1.0;
    }
  }
  WorkloadMatrix workload{Matrix(m, n, std::move(entries)),
                          WorkloadKind::kRandomSign};
  workload.seed = seed;
  workload.label = "random_sign(" + std::to_string(m) + "x" +
                   std::to_string(n) + ",seed=" + std::to_string(seed) + ")";
  return workload;
}

WorkloadMatrix CustomWorkload(Matrix matrix, std::string label) {
  WorkloadMatrix workload{std::move(matrix), WorkloadKind::kCustom};
  workload.label = std::move(label);
  return workload;
}

void SaveWorkload(const WorkloadMatrix& workload, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << kWorkloadHeader << '\n';
  out << "kind " << WorkloadKindName(workload.kind) << '\n';
  out << "rows " << workload.matrix.rows() << '\n';
  out << "cols " << workload.matrix.cols() << '\n';
  if (workload.kind == WorkloadKind::kParity) {
    out << "d " << workload.d << '\n';
    out << "w " << workload.w << '\n';
  }
  if (workload.kind == WorkloadKind::kRandomSign) {
    out << "seed " << workload.seed << '\n';
  }
  if (!workload.label.empty()) out << "label " << workload.label << '\n';
  out << "matrix\n";
  WriteMatrixRows(out, workload.matrix);
  out << "end\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

WorkloadMatrix LoadWorkload(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  int line = 0;
  std::string text;
  if (!ReadDataLine(in, &text, &line) || text != kWorkloadHeader) {
    throw ParseError(path, line, "missing workload header");
  }

  bool have_kind = false;
  WorkloadKind kind = WorkloadKind::kCustom;
  std::size_t rows = 0;
  std::size_t cols = 0;
  int d = 0;
  int w = 0;
  std::uint64_t seed = 0;
  std::string label;

  while (true) {
    if (!ReadDataLine(in, &text, &line)) {
      throw ParseError(path, line, "file ends before matrix section");
    }
    if (text == "matrix") break;
    std::istringstream fields(text);
    std::string key;
    fields >> key;
    if (key == "kind") {
      std::string name;
      if (!(fields >> name)) throw ParseError(path, line, "kind needs a value");
      kind = ParseWorkloadKind(name);
      have_kind = true;
    } else if (key == "rows") {
      if (!(fields >> rows)) throw ParseError(path, line, "bad row count");
    } else if (key == "cols") {
      if (!(fields >> cols)) throw ParseError(path, line, "bad column count");
    } else if (key == "d") {
      if (!(fields >> d)) throw ParseError(path, line, "bad d value");
    } else if (key == "w") {
      if (!(fields >> w)) throw ParseError(path, line, "bad w value");
    } else if (key == "seed") {
      if (!(fields >> seed)) throw ParseError(path, line, "bad seed value");
    } else if (key == "label") {
      const auto start = text.find(' ');
      label = start == std::string::npos ? "" : text.substr(start + 1);
    } else {
      throw ParseError(path, line, "unknown field: " + key);
    }
  }
  if (!have_kind) throw ParseError(path, line, "missing kind field");
  if (rows == 0 || cols == 0) {
    throw ParseError(path, line, "missing or zero matrix dimensions");
  }

  Matrix matrix = ReadMatrixRows(in, rows, cols, path, &line);
  if (!ReadDataLine(in, &text, &line) || text != "end") {
    throw ParseError(path, line, "missing end marker");
  }

  WorkloadMatrix workload{std::move(matrix), kind, d, w, seed,
                          std::move(label)};
  return workload;
}

std::uint64_t BinomialCoefficient(int n, int k) {
  if (n < 0 || k < 0 || k > n) {
    throw std::invalid_argument("binomial coefficient needs 0 <= k <= n");
  }
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    const auto factor = static_cast<std::uint64_t>(n - k + i);
    if (result > std::numeric_limits<std::uint64_t>::max() / factor) {
      throw std::overflow_error("binomial coefficient exceeds 64 bits");
    }
    result = result * factor / static_cast<std::uint64_t>(i);
  }
  return result;
}

}  // namespace matmech
