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

#ifndef MATMECH_MATRIX_H_
#define MATMECH_MATRIX_H_

#include <cstddef>
#include <string>
#include <vector>

namespace matmech {

// Order of an l_p norm, p in [1, inf]. Infinity is a distinct state of the
// type, never encoded as a large or non-finite double.
class NormOrder {
 public:
  // Finite order. Throws std::invalid_argument unless p is finite and >= 1.
  explicit NormOrder(double p);

  static NormOrder Infinity();

  bool is_infinite() const { return infinite_; }

  // Finite value. Throws std::logic_error when called on the infinite order.
  double value() const;

  // p/2, used for the p-trace in the gamma_(p) expression; infinity maps to
  // infinity.
  NormOrder Half() const;

  // 1/p with 1/inf = 0.
  double Reciprocal() const { return infinite_ ? 0.0 : 1.0 / value_; }

  // "2", "2.5", "inf"; Parse accepts the same forms.
  std::string ToString() const;
  static NormOrder Parse(const std::string& text);

  friend bool operator==(const NormOrder& a, const NormOrder& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  NormOrder(double p, bool infinite) : value_(p), infinite_(infinite) {}

  double value_;
  bool infinite_;
};

// Dense row-major matrix of 64-bit reals. Construction from an entry array
// validates finiteness; in-place writes through operator() are trusted and
// used only by the constructors in this library.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols);  // zero-filled
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }

  const double* row(std::size_t i) const { return entries_.data() + i * cols_; }
  double* row(std::size_t i) { return entries_.data() + i * cols_; }

  const std::vector<double>& entries() const { return entries_; }

  Matrix Transposed() const;

  // Largest absolute entry.
  double MaxAbs() const;

  // Throws std::invalid_argument naming `what` if any entry is NaN/Inf.
  void CheckFinite(const std::string& what) const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

// Singular values in non-increasing order; length = min(rows, cols) of the
// source matrix.
struct SingularSpectrum {
  std::vector<double> values;
  int sweeps = 0;  // one-sided Jacobi sweeps spent
};

// Result of the one-sided Jacobi orthogonalization of the columns of W,
// optionally accumulating the product J of all plane rotations (so that
// W_in * J = W_out and the columns of J are the right singular vectors
// of W_in). Column norms come out unsorted.
struct JacobiSweepResult {
  std::vector<double> column_norms;
  Matrix rotations;  // cols x cols when accumulated, else 0x0
  int sweeps = 0;
};

// One-sided Jacobi on the columns of `w` with relative convergence tolerance
// 1e-12 and a cap of 100 sweeps. Throws std::runtime_error when the cap is
// reached without convergence. Handles more columns than rows (the extra
// column norms converge to zero).
JacobiSweepResult OneSidedJacobi(Matrix w, bool accumulate_rotations);

// Singular values of A by one-sided Jacobi on the thinner orientation.
SingularSpectrum Svd(const Matrix& a);

// Schatten-1 norm: sum of singular values.
double Schatten1(const Matrix& a);

// p-trace of a square matrix: (sum_i U_ii^p)^{1/p}, max_i |U_ii| for p = inf.
// Diagonal entries in [-1e-12, 0) are clamped to zero (floating-point PSD
// slack); anything more negative is a domain error, as is a non-square input.
double PTrace(const Matrix& u, const NormOrder& p);

// Same computation on an explicit diagonal; lets callers avoid materializing
// a large diagonal matrix.
double PTraceOfDiagonal(const std::vector<double>& diagonal,
                        const NormOrder& p);

// Max column l2 norm (operator norm from l1 to l2).
double OpNorm1To2(const Matrix& r);

// Max row l2 norm (operator norm from l2 to l_inf).
double OpNorm2ToInf(const Matrix& l);

// Squared row l2 norms, i.e. the diagonal of L L^T.
std::vector<double> RowSquaredNorms(const Matrix& l);

// E|Z|^p for Z ~ N(0, sigma^2): sigma^p 2^{p/2} Gamma((p+1)/2) / sqrt(pi).
// Requires finite p >= 1 and sigma >= 0.
double GaussianAbsMoment(double p, double sigma);

// C = A * B. Dimension mismatch throws std::invalid_argument.
Matrix Multiply(const Matrix& a, const Matrix& b);

// y = A * x.
std::vector<double> MultiplyVector(const Matrix& a,
                                   const std::vector<double>& x);

}  // namespace matmech

#endif  // MATMECH_MATRIX_H_
