#include "vlac/pca.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "vlac/error.hpp"

namespace vlac {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void fix_sign(std::span<double> row) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (std::abs(row[i]) > best) {
      best = std::abs(row[i]);
      arg = i;
    }
  }
  if (row[arg] < 0.0) {
    for (double& v : row) v = -v;
  }
}

void check_dims(const ProjectionBasis& basis, std::size_t n, const char* what) {
  if (n != basis.input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(what) + " has dimension " + std::to_string(n) +
                                                   ", basis expects " + std::to_string(basis.input_dim()));
  }
}

}  // namespace

ProjectionBasis pca_fit(const Matrix& data, std::size_t d, PcaSolver solver) {
  const std::size_t n = data.rows();
  const std::size_t dim = data.cols();
  if (n < 2) throw Error(ErrorCode::kInsufficientRows, "PCA needs at least 2 rows, got " + std::to_string(n));
  if (d == 0 || d > std::min(n, dim)) {
    throw Error(ErrorCode::kDTooLarge, "cannot keep " + std::to_string(d) + " components of " +
                                           std::to_string(n) + " rows in dimension " + std::to_string(dim));
  }
  for (double v : data.values()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNumericFailure, "non-finite input to PCA");
  }

  Eigen::Map<const RowMajor> x(data.values().data(), static_cast<Eigen::Index>(n),
                               static_cast<Eigen::Index>(dim));
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  const double scale = 1.0 / static_cast<double>(n - 1);

  if (solver == PcaSolver::kAuto) {
    solver = dim <= kCovarianceSolverMaxDim ? PcaSolver::kCovarianceEigen : PcaSolver::kThinSvd;
  }

  ProjectionBasis basis;
  basis.rows = Matrix(d, dim);
  basis.mean.assign(mean.data(), mean.data() + dim);
  basis.eigenvalues.resize(d);

  if (solver == PcaSolver::kCovarianceEigen) {
    const Eigen::MatrixXd cov = (centered.transpose() * centered) * scale;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::kNumericFailure, "eigendecomposition failed");
    // Ascending order from Eigen.
    for (std::size_t i = 0; i < d; ++i) {
      const auto col = static_cast<Eigen::Index>(dim - 1 - i);
      basis.eigenvalues[i] = std::max(0.0, eig.eigenvalues()(col));
      for (std::size_t j = 0; j < dim; ++j) basis.rows(i, j) = eig.eigenvectors()(static_cast<Eigen::Index>(j), col);
    }
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw Error(ErrorCode::kNumericFailure, "SVD failed");
    for (std::size_t i = 0; i < d; ++i) {
      const auto col = static_cast<Eigen::Index>(i);
      const double s = svd.singularValues()(col);
      basis.eigenvalues[i] = s * s * scale;
      for (std::size_t j = 0; j < dim; ++j) basis.rows(i, j) = svd.matrixV()(static_cast<Eigen::Index>(j), col);
    }
  }
  for (std::size_t i = 0; i < d; ++i) fix_sign(basis.rows.row(i));
  return basis;
}

Vector pca_project(const ProjectionBasis& basis, std::span<const double> v) {
  check_dims(basis, v.size(), "vector");
  Vector centered(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) centered[j] = v[j] - basis.mean[j];
  Vector out(basis.dim());
  for (std::size_t i = 0; i < basis.dim(); ++i) out[i] = dot(basis.rows.row(i), centered);
  return out;
}

Vector pca_reconstruct(const ProjectionBasis& basis, std::span<const double> coefficients) {
  if (coefficients.size() != basis.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "expected " + std::to_string(basis.dim()) + " coefficients, got " +
                                                   std::to_string(coefficients.size()));
  }
  Vector out = basis.mean;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto r = basis.rows.row(i);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += coefficients[i] * r[j];
  }
  return out;
}

namespace {

Vector row_products(const ProjectionBasis& a, const ProjectionBasis& b) {
  if (a.dim() != b.dim() || a.rows.cols() != b.rows.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "bases are " + std::to_string(a.dim()) + "x" + std::to_string(a.rows.cols()) + " and " +
                    std::to_string(b.dim()) + "x" + std::to_string(b.rows.cols()));
  }
  Vector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = dot(a.rows.row(i), b.rows.row(i));
  return out;
}

}  // namespace

double basis_alignment_score(const ProjectionBasis& a, const ProjectionBasis& b) {
  double s = 0.0;
  for (double p : row_products(a, b)) s += p;
  return s;
}

double sign_aligned_alignment_score(const ProjectionBasis& a, const ProjectionBasis& b) {
  double s = 0.0;
  for (double p : row_products(a, b)) s += std::abs(p);
  return s;
}

}  // namespace vlac
