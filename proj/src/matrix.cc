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

#include "matmech/matrix.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace matmech {

namespace {

constexpr double kJacobiRelTol = 1e-12;
constexpr double kJacobiZeroRel = 1e-15;
constexpr int kJacobiMaxSweeps = 100;
constexpr double kDiagonalClamp = -1e-12;

}  // namespace

NormOrder::NormOrder(double p) : value_(p), infinite_(false) {
  if (!std::isfinite(p) || p < 1.0) {
    throw std::invalid_argument("NormOrder: p must be finite and >= 1");
  }
}

NormOrder NormOrder::Infinity() { return NormOrder(0.0, true); }

double NormOrder::value() const {
  if (infinite_) {
    throw std::logic_error("NormOrder: infinite order has no finite value");
  }
  return value_;
}

NormOrder NormOrder::Half() const {
  if (infinite_) return Infinity();
  return NormOrder(value_ / 2.0);
}

std::string NormOrder::ToString() const {
  if (infinite_) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value_);
  return buf;
}

NormOrder NormOrder::Parse(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity") {
    return Infinity();
  }
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw std::invalid_argument("NormOrder: cannot parse \"" + text + "\"");
  }
  return NormOrder(v);
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("Matrix: dimensions must be positive");
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("Matrix: dimensions must be positive");
  }
  if (entries_.size() != rows * cols) {
    throw std::invalid_argument("Matrix: entry count does not match shape");
  }
  CheckFinite("Matrix");
}

Matrix Matrix::Identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::Transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

double Matrix::MaxAbs() const {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, std::fabs(v));
  return m;
}

void Matrix::CheckFinite(const std::string& what) const {
  for (double v : entries_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(what + ": non-finite entry");
    }
  }
}

JacobiSweepResult OneSidedJacobi(Matrix w, bool accumulate_rotations) {
  const std::size_t r = w.rows();
  const std::size_t c = w.cols();

  // Column-major working copy: plane rotations touch two columns at a time.
  std::vector<double> col(r * c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) col[j * r + i] = w(i, j);
  }
  std::vector<double> colsq(c);
  double frob_sq = 0.0;
  for (std::size_t j = 0; j < c; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < r; ++i) s += col[j * r + i] * col[j * r + i];
    colsq[j] = s;
    frob_sq += s;
  }
  // The Frobenius norm is invariant under the rotations, so this floor keeps
  // its meaning across sweeps. A column whose norm falls this far below the
  // matrix scale is rounding debris left over from annihilating a dependent
  // column; rotating against it cannot converge once the squared norm
  // underflows, so pairs touching such a column count as orthogonal.
  const double zero_floor = kJacobiZeroRel * kJacobiZeroRel * frob_sq;

  Matrix rot = accumulate_rotations ? Matrix::Identity(c) : Matrix(1, 1);

  int sweeps = 0;
  bool converged = (c < 2);
  while (!converged && sweeps < kJacobiMaxSweeps) {
    ++sweeps;
    converged = true;
    for (std::size_t p = 0; p + 1 < c; ++p) {
      for (std::size_t q = p + 1; q < c; ++q) {
        if (colsq[p] <= zero_floor || colsq[q] <= zero_floor) continue;
        double* cp = &col[p * r];
        double* cq = &col[q * r];
        double alpha = colsq[p];
        double beta = colsq[q];
        double gamma = 0.0;
        for (std::size_t i = 0; i < r; ++i) gamma += cp[i] * cq[i];
        if (std::fabs(gamma) <= kJacobiRelTol * std::sqrt(alpha * beta)) {
          continue;
        }
        converged = false;
        double zeta = (beta - alpha) / (2.0 * gamma);
        double t = std::copysign(1.0, zeta) /
                   (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double cs = 1.0 / std::sqrt(1.0 + t * t);
        double sn = cs * t;
        for (std::size_t i = 0; i < r; ++i) {
          double vp = cp[i];
          double vq = cq[i];
          cp[i] = cs * vp - sn * vq;
          cq[i] = sn * vp + cs * vq;
        }
        if (accumulate_rotations) {
          for (std::size_t i = 0; i < c; ++i) {
            double vp = rot(i, p);
            double vq = rot(i, q);
            rot(i, p) = cs * vp - sn * vq;
            rot(i, q) = sn * vp + cs * vq;
          }
        }
        double sp = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < r; ++i) {
          sp += cp[i] * cp[i];
          sq += cq[i] * cq[i];
        }
        colsq[p] = sp;
        colsq[q] = sq;
      }
    }
  }
  if (!converged) {
    throw std::runtime_error(
        "OneSidedJacobi: no convergence within 100 sweeps");
  }

  JacobiSweepResult result{std::vector<double>(c), std::move(rot), sweeps};
  for (std::size_t j = 0; j < c; ++j) {
    result.column_norms[j] = std::sqrt(colsq[j]);
  }
  return result;
}

SingularSpectrum Svd(const Matrix& a) {
  // Orthogonalize the thinner side: fewer columns, same nonzero spectrum.
  JacobiSweepResult jac = (a.rows() >= a.cols())
                              ? OneSidedJacobi(a, false)
                              : OneSidedJacobi(a.Transposed(), false);
  SingularSpectrum s;
  s.values = std::move(jac.column_norms);
  s.sweeps = jac.sweeps;
  std::sort(s.values.begin(), s.values.end(), std::greater<double>());
  return s;
}

double Schatten1(const Matrix& a) {
  SingularSpectrum s = Svd(a);
  return std::accumulate(s.values.begin(), s.values.end(), 0.0);
}

double PTraceOfDiagonal(const std::vector<double>& diagonal,
                        const NormOrder& p) {
  std::vector<double> d(diagonal);
  for (double& v : d) {
    if (v < 0.0) {
      if (v < kDiagonalClamp) {
        throw std::invalid_argument(
            "PTrace: diagonal entry below -1e-12; input is not PSD");
      }
      v = 0.0;
    }
  }
  if (p.is_infinite()) {
    double m = 0.0;
    for (double v : d) m = std::max(m, v);
    return m;
  }
  const double pv = p.value();
  if (pv == 1.0) return std::accumulate(d.begin(), d.end(), 0.0);
  // Scale by the max entry to keep powers in range.
  double top = 0.0;
  for (double v : d) top = std::max(top, v);
  if (top == 0.0) return 0.0;
  double s = 0.0;
  for (double v : d) s += std::pow(v / top, pv);
  return top * std::pow(s, 1.0 / pv);
}

double PTrace(const Matrix& u, const NormOrder& p) {
  if (u.rows() != u.cols()) {
    throw std::invalid_argument("PTrace: matrix must be square");
  }
  std::vector<double> diag(u.rows());
  for (std::size_t i = 0; i < u.rows(); ++i) diag[i] = u(i, i);
  return PTraceOfDiagonal(diag, p);
}

double OpNorm1To2(const Matrix& r) {
  double best = 0.0;
  for (std::size_t j = 0; j < r.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.rows(); ++i) s += r(i, j) * r(i, j);
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

double OpNorm2ToInf(const Matrix& l) {
  double best = 0.0;
  for (std::size_t i = 0; i < l.rows(); ++i) {
    double s = 0.0;
    const double* row = l.row(i);
    for (std::size_t j = 0; j < l.cols(); ++j) s += row[j] * row[j];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

std::vector<double> RowSquaredNorms(const Matrix& l) {
  std::vector<double> out(l.rows());
  for (std::size_t i = 0; i < l.rows(); ++i) {
    double s = 0.0;
    const double* row = l.row(i);
    for (std::size_t j = 0; j < l.cols(); ++j) s += row[j] * row[j];
    out[i] = s;
  }
  return out;
}

double GaussianAbsMoment(double p, double sigma) {
  if (!std::isfinite(p) || p < 1.0) {
    throw std::invalid_argument("GaussianAbsMoment: p must be >= 1");
  }
  if (sigma < 0.0) {
    throw std::invalid_argument("GaussianAbsMoment: sigma must be >= 0");
  }
  if (sigma == 0.0) return 0.0;
  return std::pow(sigma, p) * std::pow(2.0, p / 2.0) *
         std::tgamma((p + 1.0) / 2.0) / std::sqrt(M_PI);
}

Matrix Multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("Multiply: inner dimensions do not match");
  }
  Matrix c(a.rows(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double v = ai[k];
      if (v == 0.0) continue;  // factorization matrices are often triangular
      const double* bk = b.row(k);
      for (std::size_t j = 0; j < n; ++j) ci[j] += v * bk[j];
    }
  }
  return c;
}

std::vector<double> MultiplyVector(const Matrix& a,
                                   const std::vector<double>& x) {
  if (a.cols() != x.size()) {
    throw std::invalid_argument(
        "MultiplyVector: vector length does not match");
  }
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* row = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

}  // namespace matmech
