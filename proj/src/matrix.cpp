#include "nildist/matrix.hpp"

#include <cmath>

#include "nildist/errors.hpp"
#include "nildist/kernels.hpp"

namespace nildist {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::size_t ComplexMatrix::dim() const {
  if (!is_square()) throw InternalError("dim() on a non-square matrix");
  return rows_;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      m(j, i) = std::conj((*this)(i, j));
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (const cdouble& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

double ComplexMatrix::max_abs() const {
  double m = 0;
  for (const cdouble& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius() const {
  return std::sqrt(kernels::active().sumsq(data_.size(), data_.data()));
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0,
                                   std::size_t nrows, std::size_t ncols) const {
  if (r0 + nrows > rows_ || c0 + ncols > cols_)
    throw InternalError("block out of range");
  ComplexMatrix m(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
  return m;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0,
                              const ComplexMatrix& m) {
  if (r0 + m.rows() > rows_ || c0 + m.cols() > cols_)
    throw InternalError("set_block out of range");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      (*this)(r0 + i, c0 + j) = m(i, j);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw InputError("matrix addition: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw InputError("matrix subtraction: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cdouble s) {
  for (cdouble& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
  a += b;
  return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
  a -= b;
  return a;
}

ComplexMatrix operator-(ComplexMatrix a) {
  a *= -1.0;
  return a;
}

ComplexMatrix operator*(cdouble s, ComplexMatrix a) {
  a *= s;
  return a;
}

ComplexMatrix operator*(ComplexMatrix a, cdouble s) {
  a *= s;
  return a;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("matrix product: shape mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  kernels::active().cgemm(a.rows(), a.cols(), b.cols(), a.data(), b.data(),
                          c.data());
  return c;
}

ComplexMatrix adj_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) throw InputError("adj_mul: shape mismatch");
  ComplexMatrix c(a.cols(), b.cols());
  kernels::active().cgemm_adj(a.cols(), a.rows(), b.cols(), a.data(), b.data(),
                              c.data());
  return c;
}

ComplexMatrix mul_adj(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.cols()) throw InputError("mul_adj: shape mismatch");
  /* c(i,j) = <b_row_j, a_row_i> */
  ComplexMatrix c(a.rows(), b.rows());
  const auto& ops = kernels::active();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j)
      c(i, j) = ops.cdotc(a.cols(), b.row(j), a.row(i));
  return c;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InputError("max_abs_diff: shape mismatch");
  double m = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

cdouble trace(const ComplexMatrix& a) {
  cdouble t = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
  return t;
}

}  // namespace nildist
