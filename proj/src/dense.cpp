#include "ipm/dense.hpp"

#include <cassert>
#include <cmath>

#include "ipm/errors.hpp"
#include "ipm/kernels.hpp"

namespace ipm {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> DenseMatrix::apply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  apply(x, y);
  return y;
}

void DenseMatrix::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) throw DomainError("matrix-vector size mismatch");
  simd::gemv(rows_, cols_, data_.data(), x.data(), y.data());
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw DomainError("matrix product size mismatch");
  DenseMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    double* orow = out.row(r);
    const double* arow = row(r);
    for (std::size_t k = 0; k < cols_; ++k) {
      if (arow[k] != 0.0) simd::axpy(rhs.cols_, arow[k], rhs.row(k), orow);
    }
  }
  return out;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& rhs) {
  assert(rows_ == rhs.rows_ && cols_ == rhs.cols_);
  simd::axpy(data_.size(), 1.0, rhs.data_.data(), data_.data());
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& rhs) {
  assert(rows_ == rhs.rows_ && cols_ == rhs.cols_);
  simd::axpy(data_.size(), -1.0, rhs.data_.data(), data_.data());
  return *this;
}

DenseMatrix DenseMatrix::operator-(const DenseMatrix& rhs) const {
  DenseMatrix out = *this;
  out -= rhs;
  return out;
}

DenseMatrix& DenseMatrix::scale(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace ipm
