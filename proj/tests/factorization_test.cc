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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "matmech/factorization.h"
#include "matmech/matrix.h"
#include "matmech/text_io.h"
#include "matmech/workloads.h"

using matmech::BinaryTreeFactorization;
using matmech::Factorization;
using matmech::FactorizationMethod;
using matmech::FactorizationMethodName;
using matmech::GammaPUpper;
using matmech::IdentityWorkload;
using matmech::LoadFactorization;
using matmech::Matrix;
using matmech::Multiply;
using matmech::NormOrder;
using matmech::ParseError;
using matmech::ParseFactorizationMethod;
using matmech::PrefixMatrix;
using matmech::SaveFactorization;
using matmech::SqrtPrefixFactorization;
using matmech::TrivialFactorization;
using matmech::TrivialSide;
using matmech::ValidateFactorization;
using matmech::ValidationReport;
using matmech::WallisCoefficients;
using matmech::WorkloadMatrix;

namespace {

std::filesystem::path TempPath(const std::string& stem) {
  return std::filesystem::temp_directory_path() / stem;
}

}  // namespace

TEST_CASE("method names round trip") {
  for (FactorizationMethod method :
       {FactorizationMethod::kTrivialLeft, FactorizationMethod::kTrivialRight,
        FactorizationMethod::kSqrtPrefix,
        FactorizationMethod::kBinaryTreePrefix,
        FactorizationMethod::kCustom}) {
    CHECK(ParseFactorizationMethod(FactorizationMethodName(method)) ==
          method);
  }
  CHECK_THROWS_AS(ParseFactorizationMethod("nope"), std::invalid_argument);
}

TEST_CASE("trivial factorizations") {
  const WorkloadMatrix prefix = PrefixMatrix(3);

  const Factorization left = TrivialFactorization(prefix, TrivialSide::kLeft);
  CHECK(left.left == prefix.matrix);
  CHECK(left.right == Matrix::Identity(3));
  CHECK(left.method == FactorizationMethod::kTrivialLeft);
  CHECK(left.target == prefix.label);
  CHECK(ValidateFactorization(prefix, left).pass);

  const Factorization right =
      TrivialFactorization(prefix, TrivialSide::kRight);
  CHECK(right.left == Matrix::Identity(3));
  CHECK(right.right == prefix.matrix);
  CHECK(ValidateFactorization(prefix, right).pass);
}

TEST_CASE("wallis coefficients") {
  const std::vector<double> f = WallisCoefficients(11);
  REQUIRE(f.size() == 11);
  CHECK(f[0] == 1.0);
  CHECK(f[1] == 0.5);
  CHECK(f[2] == 0.375);
  CHECK(f[3] == 0.3125);
  for (std::size_t k = 1; k < f.size(); ++k) {
    CHECK(f[k] < f[k - 1]);
    CHECK(f[k] > 0.0);
    // f(k) * sqrt(pi k) <= 1.
    CHECK(f[k] * std::sqrt(M_PI * static_cast<double>(k)) <= 1.0);
  }
}

TEST_CASE("sqrt factorization of the prefix workload") {
  const Factorization sqrt3 = SqrtPrefixFactorization(3);
  CHECK(sqrt3.method == FactorizationMethod::kSqrtPrefix);
  CHECK(sqrt3.left == sqrt3.right);
  const Matrix expected(3, 3,
                        {1.0, 0.0, 0.0, 0.5, 1.0, 0.0, 0.375, 0.5, 1.0});
  CHECK(sqrt3.right == expected);

  // Squared max column norm is 1 + 1/4 + 9/64 = 89/64 at n = 3.
  const double norm = matmech::OpNorm1To2(sqrt3.right);
  CHECK(norm * norm == doctest::Approx(89.0 / 64.0).epsilon(1e-15));

  for (std::size_t n : {1, 2, 5, 16, 33}) {
    const WorkloadMatrix prefix = PrefixMatrix(n);
    const ValidationReport report =
        ValidateFactorization(prefix, SqrtPrefixFactorization(n));
    CHECK(report.pass);
    CHECK(report.max_deviation <= 1e-10);
  }
}

TEST_CASE("validation flags a corrupted factor") {
  const WorkloadMatrix prefix = PrefixMatrix(5);
  Factorization broken = SqrtPrefixFactorization(5);
  broken.left(0, 0) += 1e-6;
  const ValidationReport report = ValidateFactorization(prefix, broken);
  CHECK_FALSE(report.pass);
  CHECK(report.max_deviation > 1e-8);
  CHECK(report.worst_row == 0);
  CHECK(report.worst_col == 0);

  // Shape mismatch is a hard error, not a failed report.
  const WorkloadMatrix other = PrefixMatrix(4);
  CHECK_THROWS_AS(ValidateFactorization(other, SqrtPrefixFactorization(5)),
                  std::invalid_argument);
}

TEST_CASE("binary tree factorization small cases") {
  const Factorization one = BinaryTreeFactorization(1);
  CHECK(one.left == Matrix(1, 1, {1.0}));
  CHECK(one.right == Matrix(1, 1, {1.0}));

  const Factorization two = BinaryTreeFactorization(2);
  // Nodes in leaves-first level order: [0,1), [1,2), [0,2).
  CHECK(two.right == Matrix(3, 2, {1.0, 0.0, 0.0, 1.0, 1.0, 1.0}));
  CHECK(two.left == Matrix(2, 3, {1.0, 0.0, 0.0, 0.0, 0.0, 1.0}));

  const Factorization four = BinaryTreeFactorization(4);
  CHECK(four.right.rows() == 7);
  CHECK(four.left.rows() == 4);
  // Prefix of length 3 is the left subtree root plus the third leaf.
  const Matrix product = Multiply(four.left, four.right);
  CHECK(product == PrefixMatrix(4).matrix);
}

TEST_CASE("binary tree reconstruction is exact") {
  for (std::size_t n : {1, 2, 3, 5, 7, 8, 9, 31, 32, 33, 100}) {
    const WorkloadMatrix prefix = PrefixMatrix(n);
    const Factorization tree = BinaryTreeFactorization(n);
    const ValidationReport report = ValidateFactorization(prefix, tree);
    CHECK(report.pass);
    CHECK(report.max_deviation == 0.0);

    // Each output needs at most one node per tree level.
    const double level_count =
        n == 1 ? 1.0 : std::ceil(std::log2(static_cast<double>(n))) + 1.0;
    CHECK(matmech::OpNorm1To2(tree.right) <= std::sqrt(level_count) + 1e-12);
    CHECK(matmech::OpNorm2ToInf(tree.left) <= std::sqrt(level_count) + 1e-12);
  }

  // Phantom nodes are dropped: n=5 pads to 8 (15 nodes) and loses the
  // three phantom leaves and the [6,8) interval.
  CHECK(BinaryTreeFactorization(5).right.rows() == 11);
}

TEST_CASE("gamma upper bounds") {
  const WorkloadMatrix eye = IdentityWorkload(16);
  const Factorization trivial = TrivialFactorization(eye, TrivialSide::kLeft);
  for (double p : {2.0, 3.0, 4.0}) {
    CHECK(GammaPUpper(trivial, NormOrder(p)) ==
          doctest::Approx(std::pow(16.0, 1.0 / p)).epsilon(1e-12));
  }
  CHECK(GammaPUpper(trivial, NormOrder::Infinity()) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Non-increasing in p.
  const Factorization sqrt32 = SqrtPrefixFactorization(32);
  const double g2 = GammaPUpper(sqrt32, NormOrder(2.0));
  const double g3 = GammaPUpper(sqrt32, NormOrder(3.0));
  const double g4 = GammaPUpper(sqrt32, NormOrder(4.0));
  const double ginf = GammaPUpper(sqrt32, NormOrder::Infinity());
  CHECK(g2 >= g3);
  CHECK(g3 >= g4);
  CHECK(g4 >= ginf);
  CHECK(ginf > 0.0);

  CHECK_THROWS_AS(GammaPUpper(sqrt32, NormOrder(1.5)),
                  std::invalid_argument);
}

TEST_CASE("factorization files round trip") {
  const auto path = TempPath("matmech_factorization_roundtrip.txt");

  const Factorization tree = BinaryTreeFactorization(6);
  SaveFactorization(tree, path.string());
  const Factorization tree_back = LoadFactorization(path.string());
  CHECK(tree_back.method == tree.method);
  CHECK(tree_back.target == tree.target);
  CHECK(tree_back.left == tree.left);
  CHECK(tree_back.right == tree.right);

  const Factorization sqrt9 = SqrtPrefixFactorization(9);
  SaveFactorization(sqrt9, path.string());
  const Factorization sqrt_back = LoadFactorization(path.string());
  CHECK(sqrt_back.left == sqrt9.left);
  CHECK(sqrt_back.right == sqrt9.right);

  std::filesystem::remove(path);
}

TEST_CASE("factorization parse errors") {
  const auto path = TempPath("matmech_factorization_bad.txt");
  {
    std::ofstream out(path);
    out << "wrong header\n";
  }
  CHECK_THROWS_AS(LoadFactorization(path.string()), ParseError);

  {
    SaveFactorization(SqrtPrefixFactorization(3), path.string());
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    in.close();
    std::ofstream out(path);
    out << text.substr(0, text.size() / 2);
  }
  CHECK_THROWS_AS(LoadFactorization(path.string()), ParseError);

  std::filesystem::remove(path);
}
