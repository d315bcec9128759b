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

#ifndef ENTCAP_EIG_HPP
#define ENTCAP_EIG_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "entcap/cmatrix.hpp"

namespace entcap {

/// Column-major real square matrix view used only by the eigensolver kernel.
struct RMatrix {
  std::size_t n = 0;
  std::vector<double> a;  // row-major n*n

  RMatrix() = default;
  explicit RMatrix(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
  double operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }
};

namespace detail {

// Householder reduction of a real symmetric matrix to tridiagonal form,
// accumulating the orthogonal transform in-place.
inline void tridiagonalize(RMatrix& z, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = z.n;
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::size_t l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (std::size_t k = 0; k <= l; ++k) scale += std::abs(z(i, k));
      if (scale == 0.0) {
        e[i] = z(i, l);
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          z(i, k) /= scale;
          h += z(i, k) * z(i, k);
        }
        double f = z(i, l);
        double g = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
        e[i] = scale * g;
        h -= f * g;
        z(i, l) = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          z(j, i) = z(i, j) / h;
          g = 0.0;
          for (std::size_t k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
          for (std::size_t k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
          e[j] = g / h;
          f += e[j] * z(i, j);
        }
        double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = z(i, j);
          e[j] = g = e[j] - hh * f;
          for (std::size_t k = 0; k <= j; ++k) z(j, k) -= f * e[k] + g * z(i, k);
        }
      }
    } else {
      e[i] = z(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] != 0.0) {
      for (std::size_t j = 0; j < i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k < i; ++k) g += z(i, k) * z(k, j);
        for (std::size_t k = 0; k < i; ++k) z(k, j) -= g * z(k, i);
      }
    }
    d[i] = z(i, i);
    z(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) z(j, i) = z(i, j) = 0.0;
  }
}

inline double hypot2(double a, double b) { return std::hypot(a, b); }

// Implicit-shift QL on a tridiagonal matrix, rotations applied to z's columns.
inline void ql_implicit(std::vector<double>& d, std::vector<double>& e, RMatrix& z) {
  const std::size_t n = d.size();
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-300 + 2.3e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw std::runtime_error("sym_eig: QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = hypot2(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          double b = c * e[i];
          r = hypot2(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < n; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
        if (r == 0.0 && m - l > 1) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

/// Eigendecomposition of a dense real symmetric matrix. Eigenvalues ascending,
/// eigenvectors as columns of the returned matrix.
inline void sym_eig(const RMatrix& m, std::vector<double>& evals, RMatrix& evecs) {
  evecs = m;
  std::vector<double> e;
  detail::tridiagonalize(evecs, evals, e);
  detail::ql_implicit(evals, e, evecs);
  const std::size_t n = m.n;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return evals[a] < evals[b]; });
  std::vector<double> ds(n);
  RMatrix zs(n);
  for (std::size_t j = 0; j < n; ++j) {
    ds[j] = evals[idx[j]];
    for (std::size_t i = 0; i < n; ++i) zs(i, j) = evecs(i, idx[j]);
  }
  evals = std::move(ds);
  evecs = std::move(zs);
}

/// Real-symmetric embedding [[Re, -Im], [Im, Re]] of a complex matrix.
inline RMatrix real_embedding(const CMatrix& h) {
  const std::size_t d = h.rows();
  RMatrix g(2 * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double re = h(i, j).real(), im = h(i, j).imag();
      g(i, j) = re;
      g(d + i, d + j) = re;
      g(i, d + j) = -im;
      g(d + i, j) = im;
    }
  return g;
}

struct HermitianEig {
  std::vector<double> eigenvalues;  // ascending
  CMatrix eigenvectors;             // unitary, columns match eigenvalues
};

/// Eigendecomposition of a complex Hermitian matrix through the 2n x 2n
/// real-symmetric embedding. Each complex eigenpair shows up twice in the
/// embedding; the duplicates are removed by Gram-Schmidt pairing.
inline HermitianEig hermitian_eig(const CMatrix& m, double herm_tol = 1e-10) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eig: non-square input");
  const std::size_t d = m.rows();
  double scale = std::max(1.0, m.max_abs());
  if (!m.is_hermitian(herm_tol * scale))
    throw std::invalid_argument("hermitian_eig: input is not Hermitian");

  RMatrix g = real_embedding(m);
  std::vector<double> ev;
  RMatrix vec;
  sym_eig(g, ev, vec);

  HermitianEig out;
  out.eigenvalues.reserve(d);
  out.eigenvectors = CMatrix(d, d);
  std::vector<std::vector<cxd>> accepted;
  double thresh = 0.3;
  for (std::size_t pass = 0; pass < 3 && accepted.size() < d; ++pass) {
    accepted.clear();
    out.eigenvalues.clear();
    for (std::size_t j = 0; j < 2 * d && accepted.size() < d; ++j) {
      std::vector<cxd> z(d);
      for (std::size_t i = 0; i < d; ++i) z[i] = cxd(vec(i, j), vec(d + i, j));
      // project out everything already accepted
      for (const auto& w : accepted) {
        cxd ip = 0.0;
        for (std::size_t i = 0; i < d; ++i) ip += std::conj(w[i]) * z[i];
        for (std::size_t i = 0; i < d; ++i) z[i] -= ip * w[i];
      }
      double nrm = 0.0;
      for (const auto& v : z) nrm += std::norm(v);
      nrm = std::sqrt(nrm);
      if (nrm > thresh) {
        for (auto& v : z) v /= nrm;
        accepted.push_back(std::move(z));
        out.eigenvalues.push_back(ev[j]);
      }
    }
    thresh *= 0.01;  // retry with looser rejection if roundoff starved us
  }
  if (accepted.size() != d) throw std::runtime_error("hermitian_eig: pairing failed");
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) out.eigenvectors(i, j) = accepted[j][i];
  return out;
}

inline double min_eigenvalue(const CMatrix& m) {
  CMatrix h = m;
  h.hermitize();
  return hermitian_eig(h).eigenvalues.front();
}

inline bool is_psd(const CMatrix& m, double tol) {
  if (!m.is_hermitian(tol)) return false;
  return min_eigenvalue(m) >= -tol;
}

/// Clips negative eigenvalues to zero. If target_trace > 0 the result is
/// rescaled to that trace (no-op when the clipped trace vanishes).
inline CMatrix psd_project(const CMatrix& m, double target_trace) {
  CMatrix h = m;
  h.hermitize();
  HermitianEig eig = hermitian_eig(h);
  const std::size_t d = m.rows();
  CMatrix out(d, d);
  double tr = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    double lam = eig.eigenvalues[k];
    if (lam <= 0.0) continue;
    tr += lam;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        out(i, j) += lam * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
  }
  if (target_trace > 0.0 && tr > 1e-300) out *= cxd(target_trace / tr, 0.0);
  return out;
}

}  // namespace entcap

#endif  // ENTCAP_EIG_HPP
