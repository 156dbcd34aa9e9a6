#pragma once

#include <cstddef>
#include <vector>

namespace hylent {

/// Dense row-major square/rectangular matrix over any real field type.
template <class Real>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Real(0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Real& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Real& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

template <class Real>
using Vector = std::vector<Real>;

/// Lower-triangular L with S = L L^T. Returns false if S is not positive
/// definite at working precision.
template <class Real>
bool cholesky(const Matrix<Real>& s, Matrix<Real>& lower);

/// Cyclic Jacobi diagonalization of a symmetric matrix. Eigenvalues are
/// returned ascending; column k of `vectors` belongs to eigenvalue k.
template <class Real>
void symmetric_eigen(const Matrix<Real>& a, Vector<Real>& values, Matrix<Real>& vectors);

/// Solves A x = b by Gaussian elimination with partial pivoting. Returns false
/// for an exactly singular pivot.
template <class Real>
bool lu_solve(Matrix<Real> a, Vector<Real> b, Vector<Real>& x);

template <class Real>
Vector<Real> multiply(const Matrix<Real>& a, const Vector<Real>& x);

template <class Real>
Real dot(const Vector<Real>& x, const Vector<Real>& y);

}  // namespace hylent
