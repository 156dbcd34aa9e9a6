#include "hylent/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hylent/real.hpp"

namespace hylent {

template <class Real>
bool cholesky(const Matrix<Real>& s, Matrix<Real>& lower) {
  using std::sqrt;
  const std::size_t n = s.rows();
  lower = Matrix<Real>(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Real diag = s(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= lower(j, k) * lower(j, k);
    if (!(diag > 0)) return false;
    lower(j, j) = sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      Real v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= lower(i, k) * lower(j, k);
      lower(i, j) = v / lower(j, j);
    }
  }
  return true;
}

template <class Real>
void symmetric_eigen(const Matrix<Real>& input, Vector<Real>& values, Matrix<Real>& vectors) {
  using std::abs;
  using std::sqrt;
  const std::size_t n = input.rows();
  Matrix<Real> a = input;
  vectors = Matrix<Real>(n, n);
  for (std::size_t i = 0; i < n; ++i) vectors(i, i) = 1;
  const Real eps = epsilon<Real>();
  for (int sweep = 0; sweep < 100; ++sweep) {
    Real off = 0;
    Real diag = 0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += a(i, i) * a(i, i);
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    }
    if (off <= eps * eps * diag * Real(1e-4) || off == 0) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Real apq = a(p, q);
        if (apq == 0) continue;
        const Real theta = (a(q, q) - a(p, p)) / (2 * apq);
        const Real t = (theta >= 0 ? Real(1) : Real(-1)) / (abs(theta) + sqrt(theta * theta + 1));
        const Real c = 1 / sqrt(t * t + 1);
        const Real s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const Real akp = a(k, p);
          const Real akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Real apk = a(p, k);
          const Real aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Real vkp = vectors(k, p);
          const Real vkq = vectors(k, q);
          vectors(k, p) = c * vkp - s * vkq;
          vectors(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  values.assign(n, Real(0));
  Matrix<Real> sorted(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) sorted(i, k) = vectors(i, order[k]);
  }
  vectors = std::move(sorted);
}

template <class Real>
bool lu_solve(Matrix<Real> a, Vector<Real> b, Vector<Real>& x) {
  using std::abs;
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (abs(a(r, col)) > abs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0) return false;
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(pivot, k), a(col, k));
      std::swap(b[pivot], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const Real f = a(r, col) / a(col, col);
      if (f == 0) continue;
      for (std::size_t k = col; k < n; ++k) a(r, k) -= f * a(col, k);
      b[r] -= f * b[col];
    }
  }
  x.assign(n, Real(0));
  for (std::size_t i = n; i-- > 0;) {
    Real v = b[i];
    for (std::size_t k = i + 1; k < n; ++k) v -= a(i, k) * x[k];
    x[i] = v / a(i, i);
  }
  return true;
}

template <class Real>
Vector<Real> multiply(const Matrix<Real>& a, const Vector<Real>& x) {
  Vector<Real> y(a.rows(), Real(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

template <class Real>
Real dot(const Vector<Real>& x, const Vector<Real>& y) {
  Real s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

#define HYLENT_INSTANTIATE_LINALG(Real)                                               \
  template bool cholesky<Real>(const Matrix<Real>&, Matrix<Real>&);                   \
  template void symmetric_eigen<Real>(const Matrix<Real>&, Vector<Real>&, Matrix<Real>&); \
  template bool lu_solve<Real>(Matrix<Real>, Vector<Real>, Vector<Real>&);           \
  template Vector<Real> multiply<Real>(const Matrix<Real>&, const Vector<Real>&);     \
  template Real dot<Real>(const Vector<Real>&, const Vector<Real>&);

HYLENT_INSTANTIATE_LINALG(double)
HYLENT_INSTANTIATE_LINALG(quad)

}  // namespace hylent
