#include "vlac/kernels.hpp"

#include <limits>
#include <vector>

#include "vlac/error.hpp"

namespace vlac::kernels {
namespace {

// Below this many point-center distance evaluations the parallel region costs
// more than it saves.
constexpr std::size_t kParallelWorkThreshold = 1 << 14;

std::size_t effective_prefix(std::size_t prefix, std::size_t cols) {
  return prefix == 0 || prefix > cols ? cols : prefix;
}

void check_shapes(const Matrix& points, const Matrix& centers) {
  if (points.cols() != centers.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "points have dimension " + std::to_string(points.cols()) +
                                                   ", centers " + std::to_string(centers.cols()));
  }
  if (centers.rows() == 0) throw Error(ErrorCode::kEmptyInput, "codebook has no centers");
}

void accumulate_center(const Matrix& points, const Matrix& centers, std::span<const std::size_t> labels,
                       std::size_t j, std::span<double> out) {
  const std::size_t cols = points.cols();
  std::vector<CompensatedSum> acc(cols);
  const auto c = centers.row(j);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    if (labels[i] != j) continue;
    const auto p = points.row(i);
    for (std::size_t f = 0; f < cols; ++f) acc[f].add(p[f] - c[f]);
  }
  for (std::size_t f = 0; f < cols; ++f) out[f] = acc[f].value();
}

}  // namespace

std::size_t nearest_center(std::span<const double> point, const Matrix& centers, std::size_t prefix,
                           double* distance) {
  const std::size_t n = effective_prefix(prefix, centers.cols());
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < centers.rows(); ++j) {
    const double d = squared_distance(point.first(n), centers.row(j).first(n));
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  if (distance) *distance = best_d;
  return best;
}

void assign(const Matrix& points, const Matrix& centers, std::size_t prefix, std::span<std::size_t> labels,
            std::span<double> distances) {
  check_shapes(points, centers);
  const auto n = static_cast<std::ptrdiff_t>(points.rows());
  const bool big = points.rows() * centers.rows() * points.cols() >= kParallelWorkThreshold;
#pragma omp parallel for schedule(static) if (big)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    labels[i] = nearest_center(points.row(i), centers, prefix, &distances[i]);
  }
}

Matrix aggregate_residuals(const Matrix& points, const Matrix& centers, std::size_t prefix) {
  check_shapes(points, centers);
  std::vector<std::size_t> labels(points.rows());
  std::vector<double> distances(points.rows());
  assign(points, centers, prefix, labels, distances);

  Matrix out(centers.rows(), centers.cols());
  const auto k = static_cast<std::ptrdiff_t>(centers.rows());
  const bool big = points.rows() * points.cols() * centers.rows() >= kParallelWorkThreshold;
#pragma omp parallel for schedule(static) if (big)
  for (std::ptrdiff_t j = 0; j < k; ++j) {
    accumulate_center(points, centers, labels, j, out.row(j));
  }
  return out;
}

namespace serial {

void assign(const Matrix& points, const Matrix& centers, std::size_t prefix, std::span<std::size_t> labels,
            std::span<double> distances) {
  check_shapes(points, centers);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    labels[i] = nearest_center(points.row(i), centers, prefix, &distances[i]);
  }
}

Matrix aggregate_residuals(const Matrix& points, const Matrix& centers, std::size_t prefix) {
  check_shapes(points, centers);
  std::vector<std::size_t> labels(points.rows());
  std::vector<double> distances(points.rows());
  serial::assign(points, centers, prefix, labels, distances);

  // Single pass in point order; per-center accumulators see the same sequence
  // of additions as the center-parallel version.
  const std::size_t cols = points.cols();
  std::vector<CompensatedSum> acc(centers.rows() * cols);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto p = points.row(i);
    const auto c = centers.row(labels[i]);
    auto* a = &acc[labels[i] * cols];
    for (std::size_t f = 0; f < cols; ++f) a[f].add(p[f] - c[f]);
  }
  Matrix out(centers.rows(), cols);
  for (std::size_t j = 0; j < centers.rows(); ++j) {
    for (std::size_t f = 0; f < cols; ++f) out(j, f) = acc[j * cols + f].value();
  }
  return out;
}

}  // namespace serial
}  // namespace vlac::kernels
