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

#include "matmech/factorization.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "matmech/text_io.h"

namespace matmech {

namespace {

constexpr double kReconstructionTolerance = 1e-10;
constexpr char kFactorizationHeader[] = "matmech-factorization v1";

std::size_t NextPowerOfTwo(std::size_t n) {
  std::size_t power = 1;
  while (power < n) power <<= 1;
  return power;
}

}  // namespace

std::string FactorizationMethodName(FactorizationMethod method) {
  switch (method) {
    case FactorizationMethod::kTrivialLeft:
      return "trivial_left";
    case FactorizationMethod::kTrivialRight:
      return "trivial_right";
    case FactorizationMethod::kSqrtPrefix:
      return "sqrt_prefix";
    case FactorizationMethod::kBinaryTreePrefix:
      return "binary_tree";
    case FactorizationMethod::kCustom:
      return "custom";
  }
  throw std::invalid_argument("unknown factorization method");
}

FactorizationMethod ParseFactorizationMethod(const std::string& name) {
  if (name == "trivial_left") return FactorizationMethod::kTrivialLeft;
  if (name == "trivial_right") return FactorizationMethod::kTrivialRight;
  if (name == "sqrt_prefix") return FactorizationMethod::kSqrtPrefix;
  if (name == "binary_tree") return FactorizationMethod::kBinaryTreePrefix;
  if (name == "custom") return FactorizationMethod::kCustom;
  throw std::invalid_argument("unknown factorization method: " + name);
}

Factorization TrivialFactorization(const WorkloadMatrix& workload,
                                   TrivialSide side) {
  const Matrix& a = workload.matrix;
  if (side == TrivialSide::kLeft) {
    return Factorization{a, Matrix::Identity(a.cols()),
                         FactorizationMethod::kTrivialLeft, workload.label};
  }
  return Factorization{Matrix::Identity(a.rows()), a,
                       FactorizationMethod::kTrivialRight, workload.label};
}

std::vector<double> WallisCoefficients(std::size_t count) {
  std::vector<double> f(count);
  if (count == 0) return f;
  f[0] = 1.0;
  for (std::size_t k = 1; k < count; ++k) {
    f[k] = f[k - 1] * (1.0 - 1.0 / (2.0 * static_cast<double>(k)));
  }
  return f;
}

Factorization SqrtPrefixFactorization(std::size_t n) {
  if (n == 0) throw std::invalid_argument("factorization needs n >= 1");
  const std::vector<double> f = WallisCoefficients(n);
  Matrix left(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) left(i, j) = f[i - j];
  }
  Matrix right = left;
  return Factorization{std::move(left), std::move(right),
                       FactorizationMethod::kSqrtPrefix,
                       "prefix(" + std::to_string(n) + ")"};
}

Factorization BinaryTreeFactorization(std::size_t n) {
  if (n == 0) throw std::invalid_argument("factorization needs n >= 1");
  const std::size_t padded = NextPowerOfTwo(n);

  // Enumerate tree nodes level by level, leaves first. A node at level l
  // with within-level index k covers cells [k*2^l + 1, (k+1)*2^l]; nodes
  // that start past n are phantoms of the padded tree and get no row.
  struct Node {
    std::size_t start;  // 0-based first cell
    std::size_t width;
  };
  std::vector<Node> nodes;
  std::vector<std::vector<std::ptrdiff_t>> row_of_node;
  for (std::size_t width = 1; width <= padded; width <<= 1) {
    auto& level_rows = row_of_node.emplace_back(padded / width, -1);
    for (std::size_t k = 0; k * width < padded; ++k) {
      const std::size_t start = k * width;
      if (start >= n) break;
      level_rows[k] = static_cast<std::ptrdiff_t>(nodes.size());
      nodes.push_back(Node{start, width});
    }
  }

  Matrix right(nodes.size(), n);
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    const std::size_t stop = std::min(nodes[r].start + nodes[r].width, n);
    for (std::size_t j = nodes[r].start; j < stop; ++j) right(r, j) = 1.0;
  }

  // Each prefix [1,t] decomposes into at most one node per level. Walk down
  // from the root along the node containing the boundary t: whenever the
  // boundary falls in the right half, the left child is fully covered and
  // gets emitted; a node whose right edge is exactly t finishes the cover.
  Matrix left(n, nodes.size());
  for (std::size_t t = 1; t <= n; ++t) {
    std::size_t level = row_of_node.size() - 1;
    std::size_t index = 0;
    std::size_t width = padded;
    while (true) {
      const std::size_t start = index * width;
      if (t == start + width) {
        left(t - 1, static_cast<std::size_t>(row_of_node[level][index])) = 1.0;
        break;
      }
      const std::size_t half = width / 2;
      --level;
      width = half;
      index *= 2;
      if (t > start + half) {
        left(t - 1, static_cast<std::size_t>(row_of_node[level][index])) = 1.0;
        ++index;
      }
    }
  }

  return Factorization{std::move(left), std::move(right),
                       FactorizationMethod::kBinaryTreePrefix,
                       "prefix(" + std::to_string(n) + ")"};
}

ValidationReport ValidateFactorization(const WorkloadMatrix& workload,
                                       const Factorization& factorization) {
  const Matrix& a = workload.matrix;
  const Matrix& l = factorization.left;
  const Matrix& r = factorization.right;
  if (l.rows() != a.rows() || r.cols() != a.cols() || l.cols() != r.rows()) {
    throw std::invalid_argument("factorization shape does not match workload");
  }

  ValidationReport report;
  report.tolerance = kReconstructionTolerance * std::max(1.0, a.MaxAbs());

  // Stream one reconstructed row at a time; skipping zero left entries makes
  // the triangular and 0/1 factor families cheap.
  std::vector<double> reconstructed(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(reconstructed.begin(), reconstructed.end(), 0.0);
    for (std::size_t k = 0; k < l.cols(); ++k) {
      const double weight = l(i, k);
      if (weight == 0.0) continue;
      const double* row = r.row(k);
      for (std::size_t j = 0; j < a.cols(); ++j) {
        reconstructed[j] += weight * row[j];
      }
    }
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double deviation = std::fabs(reconstructed[j] - a(i, j));
      if (deviation > report.max_deviation) {
        report.max_deviation = deviation;
        report.worst_row = i;
        report.worst_col = j;
      }
    }
  }

  report.right_norm_1to2 = OpNorm1To2(r);
  report.left_norm_2toinf = OpNorm2ToInf(l);
  report.pass = report.max_deviation <= report.tolerance;
  return report;
}

double GammaPUpper(const Factorization& factorization, NormOrder p) {
  if (!p.is_infinite() && p.value() < 2.0) {
    throw std::invalid_argument("factorization norm bound needs p >= 2");
  }
  const std::vector<double> gram_diagonal =
      RowSquaredNorms(factorization.left);
  const double trace = PTraceOfDiagonal(gram_diagonal, p.Half());
  return std::sqrt(trace) * OpNorm1To2(factorization.right);
}

void SaveFactorization(const Factorization& factorization,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << kFactorizationHeader << '\n';
  out << "method " << FactorizationMethodName(factorization.method) << '\n';
  if (!factorization.target.empty()) {
    out << "target " << factorization.target << '\n';
  }
  out << "left " << factorization.left.rows() << ' '
      << factorization.left.cols() << '\n';
  WriteMatrixRows(out, factorization.left);
  out << "right " << factorization.right.rows() << ' '
      << factorization.right.cols() << '\n';
  WriteMatrixRows(out, factorization.right);
  out << "end\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

Factorization LoadFactorization(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  int line = 0;
  std::string text;
  if (!ReadDataLine(in, &text, &line) || text != kFactorizationHeader) {
    throw ParseError(path, line, "missing factorization header");
  }

  FactorizationMethod method = FactorizationMethod::kCustom;
  bool have_method = false;
  std::string target;
  Matrix left(1, 1);
  Matrix right(1, 1);
  bool have_left = false;
  bool have_right = false;

  while (ReadDataLine(in, &text, &line)) {
    if (text == "end") {
      if (!have_method) throw ParseError(path, line, "missing method field");
      if (!have_left || !have_right) {
        throw ParseError(path, line, "missing factor block");
      }
      return Factorization{std::move(left), std::move(right), method,
                           std::move(target)};
    }
    std::istringstream fields(text);
    std::string key;
    fields >> key;
    if (key == "method") {
      std::string name;
      if (!(fields >> name)) {
        throw ParseError(path, line, "method needs a value");
      }
      method = ParseFactorizationMethod(name);
      have_method = true;
    } else if (key == "target") {
      const auto start = text.find(' ');
      target = start == std::string::npos ? "" : text.substr(start + 1);
    } else if (key == "left" || key == "right") {
      std::size_t rows = 0;
      std::size_t cols = 0;
      if (!(fields >> rows >> cols) || rows == 0 || cols == 0) {
        throw ParseError(path, line, "bad factor dimensions");
      }
      Matrix block = ReadMatrixRows(in, rows, cols, path, &line);
      if (key == "left") {
        left = std::move(block);
        have_left = true;
      } else {
        right = std::move(block);
        have_right = true;
      }
    } else {
      throw ParseError(path, line, "unknown field: " + key);
    }
  }
  throw ParseError(path, line, "missing end marker");
}

}  // namespace matmech
