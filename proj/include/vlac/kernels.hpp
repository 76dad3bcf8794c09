#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "vlac/matrix.hpp"

// Data-parallel kernels shared by the encoders and K-means. Every kernel in
// `vlac::kernels` has a sequential twin in `vlac::kernels::serial`; the
// parallel versions partition work so that each output element is produced by
// exactly one thread in the same floating-point order as the serial code, so
// the two are bit-identical for any thread count.

namespace vlac::kernels {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Index of the nearest row of `centers` by squared Euclidean distance over the
/// first `prefix` components (0 means all). Ties resolve to the lowest index.
std::size_t nearest_center(std::span<const double> point, const Matrix& centers,
                           std::size_t prefix = 0, double* distance = nullptr);

/// Nearest-center labels and squared distances for every row of `points`.
void assign(const Matrix& points, const Matrix& centers, std::size_t prefix,
            std::span<std::size_t> labels, std::span<double> distances);

/// Per-center residual sums: row j is the compensated sum of (p - c_j) over the
/// points whose nearest center (on the first `prefix` components) is j. The
/// residual always spans every component. Returns a centers.rows() x cols matrix.
Matrix aggregate_residuals(const Matrix& points, const Matrix& centers, std::size_t prefix = 0);

namespace serial {

void assign(const Matrix& points, const Matrix& centers, std::size_t prefix,
            std::span<std::size_t> labels, std::span<double> distances);

Matrix aggregate_residuals(const Matrix& points, const Matrix& centers, std::size_t prefix = 0);

}  // namespace serial

}  // namespace vlac::kernels
