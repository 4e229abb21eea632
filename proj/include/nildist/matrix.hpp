#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace nildist {

using cdouble = std::complex<double>;

/* Dense row-major complex matrix. Rectangular in general; the square-only
 * operations check and throw InternalError on misuse. */
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  std::size_t dim() const;  // rows(), square matrices only

  cdouble& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const cdouble& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  cdouble* row(std::size_t i) { return data_.data() + i * cols_; }
  const cdouble* row(std::size_t i) const { return data_.data() + i * cols_; }
  cdouble* data() { return data_.data(); }
  const cdouble* data() const { return data_.data(); }

  ComplexMatrix adjoint() const;
  bool all_finite() const;
  double max_abs() const;
  double frobenius() const;

  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nrows,
                      std::size_t ncols) const;
  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& m);

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cdouble s);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cdouble> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a);
ComplexMatrix operator*(cdouble s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, cdouble s);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/* a^* b and a b^* without forming the adjoint */
ComplexMatrix adj_mul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix mul_adj(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
cdouble trace(const ComplexMatrix& a);

}  // namespace nildist
