#pragma once

#include <cstddef>
#include <span>

#include "vlac/matrix.hpp"

namespace vlac {

/// D orthonormal principal directions (one per row) of an L-dimensional input
/// space, plus the training mean subtracted before projection.
struct ProjectionBasis {
  Matrix rows;
  Vector mean;
  /// Non-increasing, clamped at zero.
  Vector eigenvalues;

  std::size_t dim() const noexcept { return rows.rows(); }
  std::size_t input_dim() const noexcept { return mean.size(); }
};

enum class PcaSolver {
  kAuto,             ///< covariance eigendecomposition up to kCovarianceSolverMaxDim, SVD above
  kCovarianceEigen,  ///< self-adjoint eigensolver on the L x L sample covariance
  kThinSvd,          ///< thin SVD of the centered data matrix
};

inline constexpr std::size_t kCovarianceSolverMaxDim = 4096;

/// Top-d principal components of the rows of `data`. Each direction's sign is
/// fixed so that its largest-magnitude component is positive.
ProjectionBasis pca_fit(const Matrix& data, std::size_t d, PcaSolver solver = PcaSolver::kAuto);

/// rows * (v - mean).
Vector pca_project(const ProjectionBasis& basis, std::span<const double> v);

/// mean + rows^T * coefficients.
Vector pca_reconstruct(const ProjectionBasis& basis, std::span<const double> coefficients);

/// Sum over corresponding rows of their inner products.
double basis_alignment_score(const ProjectionBasis& a, const ProjectionBasis& b);

/// Same, with row i of `b` flipped to agree in sign with row i of `a`.
double sign_aligned_alignment_score(const ProjectionBasis& a, const ProjectionBasis& b);

}  // namespace vlac
