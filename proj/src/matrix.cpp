#include "vlac/matrix.hpp"

#include <algorithm>

#include "vlac/error.hpp"

namespace vlac {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
  Matrix m(0, cols);
  m.reserve_rows(rows.size());
  for (const auto& r : rows) {
    m.append_row(std::span<const double>(r.begin(), r.size()));
  }
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows, std::size_t cols) {
  Matrix m(0, cols);
  m.reserve_rows(rows.size());
  for (const auto& r : rows) m.append_row(r);
  return m;
}

void Matrix::append_row(std::span<const double> values) {
  if (values.size() != cols_) {
    throw Error(ErrorCode::kDimensionMismatch, "row of length " + std::to_string(values.size()) +
                                                   " appended to matrix with " + std::to_string(cols_) +
                                                   " columns");
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

void Matrix::append_rows(const Matrix& other) {
  if (other.cols_ != cols_) {
    throw Error(ErrorCode::kDimensionMismatch, "cannot stack matrices with " + std::to_string(cols_) +
                                                   " and " + std::to_string(other.cols_) + " columns");
  }
  data_.insert(data_.end(), other.data_.begin(), other.data_.end());
  rows_ += other.rows_;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace vlac
