// Copyright 2026 The entcap developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENTCAP_CMATRIX_HPP
#define ENTCAP_CMATRIX_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace entcap {

using cxd = std::complex<double>;

/// Dense complex matrix, row-major. Everything in this library is at most
/// 32x32, so no attempt is made at blocking or sparsity.
class CMatrix {
 public:
  CMatrix() : rows_(0), cols_(0) {}
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cxd(0.0, 0.0)) {}

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static CMatrix zero(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }

  /// Matrix unit |r><c| in dimension n.
  static CMatrix unit(std::size_t n, std::size_t r, std::size_t c) {
    CMatrix m(n, n);
    m(r, c) = 1.0;
    return m;
  }

  static CMatrix from_rows(std::initializer_list<std::initializer_list<cxd>> rows) {
    std::size_t nr = rows.size();
    std::size_t nc = nr ? rows.begin()->size() : 0;
    CMatrix m(nr, nc);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != nc) throw std::invalid_argument("CMatrix: ragged initializer");
      std::size_t j = 0;
      for (const auto& v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cxd& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cxd& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<cxd>& data() const { return data_; }
  std::vector<cxd>& data() { return data_; }

  CMatrix& operator+=(const CMatrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  CMatrix& operator*=(cxd s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(cxd s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(CMatrix a, cxd s) { return a *= s; }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("CMatrix: product shape mismatch");
    CMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        cxd aik = a(i, k);
        if (aik == cxd(0.0, 0.0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  CMatrix adjoint() const {
    CMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  CMatrix transpose() const {
    CMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  CMatrix conjugate() const {
    CMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = std::conj(data_[i]);
    return out;
  }

  cxd trace() const {
    if (rows_ != cols_) throw std::invalid_argument("CMatrix: trace of non-square matrix");
    cxd t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_abs() const {
    double s = 0.0;
    for (const auto& v : data_) s = std::max(s, std::abs(v));
    return s;
  }

  bool is_hermitian(double tol) const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
  }

  /// Replaces the matrix by (M + M^dag)/2.
  void hermitize() {
    if (rows_ != cols_) throw std::invalid_argument("CMatrix: hermitize non-square matrix");
    for (std::size_t i = 0; i < rows_; ++i) {
      (*this)(i, i) = cxd((*this)(i, i).real(), 0.0);
      for (std::size_t j = i + 1; j < cols_; ++j) {
        cxd avg = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
        (*this)(i, j) = avg;
        (*this)(j, i) = std::conj(avg);
      }
    }
  }

 private:
  void check_same_shape(const CMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("CMatrix: shape mismatch");
  }

  std::size_t rows_, cols_;
  std::vector<cxd> data_;
};

/// Kronecker product; block (i,j) of the result is a(i,j)*b.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      cxd aij = a(i, j);
      if (aij == cxd(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

enum class Subsystem { A, B };

/// Partial transpose of a two-qubit (4x4) matrix over the chosen qubit.
/// Basis order is |00>,|01>,|10>,|11> with qubit A as the first tensor factor.
inline CMatrix partial_transpose(const CMatrix& m, Subsystem sub) {
  if (m.rows() != 4 || m.cols() != 4)
    throw std::invalid_argument("partial_transpose: expected a 4x4 matrix");
  CMatrix out(4, 4);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t d = 0; d < 2; ++d) {
          // element (|ab>,|cd|)
          if (sub == Subsystem::B)
            out(2 * a + b, 2 * c + d) = m(2 * a + d, 2 * c + b);
          else
            out(2 * a + b, 2 * c + d) = m(2 * c + b, 2 * a + d);
        }
  return out;
}

/// Partial trace of a two-qubit (4x4) matrix; `sub` names the qubit traced out.
inline CMatrix partial_trace(const CMatrix& m, Subsystem sub) {
  if (m.rows() != 4 || m.cols() != 4)
    throw std::invalid_argument("partial_trace: expected a 4x4 matrix");
  CMatrix out(2, 2);
  if (sub == Subsystem::A) {
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t d = 0; d < 2; ++d)
        out(b, d) = m(0 + b, 0 + d) + m(2 + b, 2 + d);
  } else {
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t c = 0; c < 2; ++c)
        out(a, c) = m(2 * a + 0, 2 * c + 0) + m(2 * a + 1, 2 * c + 1);
  }
  return out;
}

/// Hilbert-Schmidt inner product tr(a^dag b). Real for Hermitian arguments.
inline cxd hs_inner(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("hs_inner: shape mismatch");
  cxd s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    s += std::conj(a.data()[i]) * b.data()[i];
  return s;
}

}  // namespace entcap

#endif  // ENTCAP_CMATRIX_HPP
