#include "dynint/numerics/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dynint/error.hpp"
#include "dynint/simd/kernels.hpp"

namespace dynint {
namespace {

std::string shape(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_columns(std::span<const Vector> columns) {
  if (columns.empty()) return {};
  const std::size_t rows = columns.front().size();
  DenseMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw DimensionError("columns of unequal length");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

Vector DenseMatrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double DenseMatrix::norm_inf() const {
  double m = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) m = std::max(m, norm_1(row(r)));
  return m;
}

double DenseMatrix::max_abs() const { return simd::active().max_abs(data_.data(), data_.size()); }

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product " + shape(a) + " * " + shape(b));
  const DenseMatrix bt = b.transpose();
  DenseMatrix c(a.rows(), b.cols());
  const auto& k = simd::active();
  for (std::size_t r = 0; r < a.rows(); ++r)
    k.gemv(&c(r, 0), bt.data().data(), a.row(r).data(), b.cols(), a.cols());
  return c;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("matrix sum " + shape(a) + " + " + shape(b));
  DenseMatrix c(a.rows(), a.cols());
  simd::active().add(c.data().data(), a.data().data(), b.data().data(), a.data().size());
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("matrix difference " + shape(a) + " - " + shape(b));
  DenseMatrix c(a.rows(), a.cols());
  simd::active().sub(c.data().data(), a.data().data(), b.data().data(), a.data().size());
  return c;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix c(a.rows(), a.cols());
  simd::active().scale(c.data().data(), s, a.data().data(), a.data().size());
  return c;
}

Vector operator*(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size())
    throw DimensionError("matrix-vector product " + shape(a) + " * " + std::to_string(x.size()));
  Vector y(a.rows());
  simd::active().gemv(y.data(), a.data().data(), x.data(), a.rows(), a.cols());
  return y;
}

double norm_inf(std::span<const double> x) { return simd::active().max_abs(x.data(), x.size()); }

double norm_1(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::fabs(v);
  return s;
}

double norm_2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("dot product of unequal lengths");
  return simd::active().dot(x.data(), y.data(), x.size());
}

}  // namespace dynint
