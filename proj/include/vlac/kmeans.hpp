#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vlac/matrix.hpp"

namespace vlac {

/// An ordered set of cluster centers, one per row.
struct Codebook {
  Matrix centers;
  std::uint64_t seed = 0;
  /// Sum of squared distances from each training point to its center.
  double inertia = 0.0;
  /// Inertia after the seeding pass and after every Lloyd iteration.
  std::vector<double> inertia_history;

  std::size_t k() const noexcept { return centers.rows(); }
  std::size_t dim() const noexcept { return centers.cols(); }
};

struct KMeansOptions {
  std::size_t max_iter = 100;
  /// Stop once the relative inertia decrease drops below this.
  double tol = 1e-4;
  bool parallel = true;
};

/// Lloyd's algorithm from k-means++ seeding. Deterministic for a fixed
/// (points, k, seed, options). Clusters that empty out mid-run are re-seeded
/// with the point currently farthest from its center.
Codebook kmeans_fit(const Matrix& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

/// Index of the nearest center; ties go to the lowest index.
std::size_t quantize(std::span<const double> point, const Codebook& codebook);

}  // namespace vlac
