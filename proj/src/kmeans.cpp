#include "vlac/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vlac/error.hpp"
#include "vlac/kernels.hpp"
#include "vlac/random.hpp"

namespace vlac {
namespace {

void validate(const Matrix& points, std::size_t k, const KMeansOptions& options) {
  if (points.rows() == 0) throw Error(ErrorCode::kEmptyInput, "k-means needs at least one point");
  if (points.cols() == 0) throw Error(ErrorCode::kDimensionMismatch, "points have dimension 0");
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (k > points.rows()) {
    throw Error(ErrorCode::kKTooLarge,
                "k=" + std::to_string(k) + " exceeds point count " + std::to_string(points.rows()));
  }
  if (!(options.tol >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "tol must be non-negative");
  for (double v : points.values()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNumericFailure, "non-finite input to k-means");
  }
}

void assign(const Matrix& points, const Matrix& centers, std::span<std::size_t> labels,
            std::span<double> distances, bool parallel) {
  if (parallel) {
    kernels::assign(points, centers, 0, labels, distances);
  } else {
    kernels::serial::assign(points, centers, 0, labels, distances);
  }
}

double total(std::span<const double> distances) {
  double s = 0.0;
  for (double d : distances) s += d;
  return s;
}

// Greedy k-means++: each new center is the best of several D^2-weighted
// candidates, judged by the resulting potential.
Matrix seed_centers(const Matrix& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows();
  const std::size_t trials = 2 + static_cast<std::size_t>(std::log(static_cast<double>(k)));
  Matrix centers(0, points.cols());
  centers.reserve_rows(k);
  std::vector<bool> chosen(n, false);
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  std::vector<double> candidate_dist(n);
  std::vector<double> best_dist(n);

  auto add_center = [&](std::size_t pick) {
    chosen[pick] = true;
    centers.append_row(points.row(pick));
  };

  const std::size_t first = rng.index(n);
  add_center(first);
  for (std::size_t i = 0; i < n; ++i) min_dist[i] = squared_distance(points.row(i), points.row(first));

  for (std::size_t c = 1; c < k; ++c) {
    const double weight = total(min_dist);
    if (!(weight > 0.0)) {
      // Every remaining point coincides with a chosen center.
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) {
          add_center(i);
          break;
        }
      }
      continue;
    }
    std::size_t best = n;
    double best_potential = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
      const double target = rng.uniform() * weight;
      double cumulative = 0.0;
      std::size_t pick = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (min_dist[i] <= 0.0) continue;
        cumulative += min_dist[i];
        pick = i;
        if (cumulative > target) break;
      }
      const auto candidate = points.row(pick);
      for (std::size_t i = 0; i < n; ++i) {
        candidate_dist[i] = std::min(min_dist[i], squared_distance(points.row(i), candidate));
      }
      const double potential = total(candidate_dist);
      if (potential < best_potential) {
        best_potential = potential;
        best = pick;
        best_dist.swap(candidate_dist);
      }
    }
    add_center(best);
    min_dist.swap(best_dist);
  }
  return centers;
}

void update_centers(const Matrix& points, std::span<const std::size_t> labels, std::span<double> distances,
                    Matrix& centers) {
  const std::size_t k = centers.rows();
  const std::size_t dim = points.cols();
  Matrix sums(k, dim);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto p = points.row(i);
    auto s = sums.row(labels[i]);
    for (std::size_t f = 0; f < dim; ++f) s[f] += p[f];
    ++counts[labels[i]];
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] == 0) continue;
    const double inv = 1.0 / static_cast<double>(counts[j]);
    auto c = centers.row(j);
    const auto s = sums.row(j);
    for (std::size_t f = 0; f < dim; ++f) c[f] = s[f] * inv;
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] != 0) continue;
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
      if (distances[i] > far_d) {
        far_d = distances[i];
        far = i;
      }
    }
    const auto p = points.row(far);
    std::copy(p.begin(), p.end(), centers.row(j).begin());
    distances[far] = -1.0;  // never reuse the same point for another empty cluster
  }
}

// Lexicographic order of the center coordinates.
Matrix canonical_order(const Matrix& centers) {
  std::vector<std::size_t> order(centers.rows());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = centers.row(a);
    const auto rb = centers.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  Matrix sorted(0, centers.cols());
  sorted.reserve_rows(centers.rows());
  for (std::size_t j : order) sorted.append_row(centers.row(j));
  return sorted;
}

}  // namespace

Codebook kmeans_fit(const Matrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
  validate(points, k, options);

  Rng rng(seed);
  Codebook book;
  book.seed = seed;
  book.centers = seed_centers(points, k, rng);

  const std::size_t n = points.rows();
  std::vector<std::size_t> labels(n);
  std::vector<double> distances(n);
  assign(points, book.centers, labels, distances, options.parallel);
  double inertia = total(distances);
  book.inertia_history.push_back(inertia);

  for (std::size_t iter = 0; iter < options.max_iter && inertia > 0.0; ++iter) {
    update_centers(points, labels, distances, book.centers);
    assign(points, book.centers, labels, distances, options.parallel);
    const double next = total(distances);
    book.inertia_history.push_back(next);
    const double relative_drop = (inertia - next) / inertia;
    inertia = next;
    if (relative_drop < options.tol) break;
  }
  book.inertia = inertia;
  book.centers = canonical_order(book.centers);
  return book;
}

std::size_t quantize(std::span<const double> point, const Codebook& codebook) {
  if (point.size() != codebook.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "point has dimension " + std::to_string(point.size()) +
                                                   ", codebook " + std::to_string(codebook.dim()));
  }
  if (codebook.k() == 0) throw Error(ErrorCode::kEmptyInput, "codebook has no centers");
  return kernels::nearest_center(point, codebook.centers);
}

}  // namespace vlac
