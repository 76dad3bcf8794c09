#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "vlac/error.hpp"
#include "vlac/pca.hpp"

using vlac::Matrix;
using vlac::PcaSolver;
using vlac::ProjectionBasis;

namespace {

double orthonormality_error(const ProjectionBasis& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(vlac::dot(b.rows.row(i), b.rows.row(j)) - expected));
    }
  }
  return worst;
}

ProjectionBasis basis_of(std::initializer_list<std::initializer_list<double>> rows) {
  ProjectionBasis b;
  b.rows = Matrix::from_rows(rows);
  b.mean.assign(b.rows.cols(), 0.0);
  b.eigenvalues.assign(b.rows.rows(), 1.0);
  return b;
}

}  // namespace

TEST_CASE("pca_fit on collinear data finds the x axis with positive sign") {
  const Matrix data = Matrix::from_rows({{-1.0, 0.0}, {1.0, 0.0}, {3.0, 0.0}});
  for (auto solver : {PcaSolver::kCovarianceEigen, PcaSolver::kThinSvd}) {
    const ProjectionBasis b = vlac::pca_fit(data, 1, solver);
    CHECK(b.rows(0, 0) == doctest::Approx(1.0));
    CHECK(b.rows(0, 1) == doctest::Approx(0.0));
    CHECK(b.mean[0] == doctest::Approx(1.0));
    CHECK(b.eigenvalues[0] == doctest::Approx(4.0));  // sample variance of {-1, 1, 3}
    const auto y = vlac::pca_project(b, std::vector<double>{5.0, 0.0});
    CHECK(y[0] == doctest::Approx(5.0 - 1.0));
  }
}

TEST_CASE("pca_fit with identical rows has zero variance") {
  const Matrix data = Matrix::from_rows({{2.0, -1.0, 3.0}, {2.0, -1.0, 3.0}});
  const ProjectionBasis b = vlac::pca_fit(data, 1);
  CHECK(b.eigenvalues[0] == 0.0);
  CHECK(b.mean == std::vector<double>{2.0, -1.0, 3.0});
  CHECK(orthonormality_error(b) < 1e-6);
}

TEST_CASE("pca_project basics") {
  std::mt19937_64 rng(3);
  const Matrix data = testing::to_matrix(oracle::random_matrix(rng, 30, 4), 4);
  const ProjectionBasis b = vlac::pca_fit(data, 3);
  const auto at_mean = vlac::pca_project(b, b.mean);
  for (double v : at_mean) CHECK(v == 0.0);

  const ProjectionBasis identity = basis_of({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const std::vector<double> v{0.5, -2.0, 7.0};
  CHECK(vlac::pca_project(identity, v) == v);
  CHECK_THROWS_AS(vlac::pca_project(identity, std::vector<double>{1.0}), vlac::Error);
}

TEST_CASE("pca_fit invariants on random data") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t dim = 2 + rng() % 12;
    const std::size_t n = dim + 2 + rng() % 40;
    const auto raw = oracle::random_matrix(rng, n, dim);
    const Matrix data = testing::to_matrix(raw, dim);
    const ProjectionBasis full = vlac::pca_fit(data, dim);
    CHECK(orthonormality_error(full) <= 1e-6);
    for (std::size_t i = 1; i < full.dim(); ++i) CHECK(full.eigenvalues[i] <= full.eigenvalues[i - 1]);
    for (double e : full.eigenvalues) CHECK(e >= -1e-9);
    for (std::size_t i = 0; i < full.dim(); ++i) {
      // sign rule: largest-magnitude component positive
      const auto r = full.rows.row(i);
      std::size_t arg = 0;
      for (std::size_t j = 1; j < r.size(); ++j) {
        if (std::abs(r[j]) > std::abs(r[arg])) arg = j;
      }
      CHECK(r[arg] > 0.0);
    }
    // complete basis round trip
    for (const auto& row : oracle::random_matrix(rng, 5, dim, 3.0)) {
      const auto back = vlac::pca_reconstruct(full, vlac::pca_project(full, row));
      double err = 0, norm = 0;
      for (std::size_t j = 0; j < dim; ++j) {
        err += (back[j] - row[j]) * (back[j] - row[j]);
        norm += row[j] * row[j];
      }
      CHECK(std::sqrt(err / norm) <= 1e-6);
    }
    CHECK(vlac::basis_alignment_score(full, full) == doctest::Approx(static_cast<double>(dim)).epsilon(1e-9));
  }
}

TEST_CASE("covariance and SVD solvers agree") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 3 + rng() % 20;
    const std::size_t n = 5 + rng() % 60;
    const std::size_t d = 1 + rng() % std::min<std::size_t>(dim, n - 2);
    const Matrix data = testing::to_matrix(oracle::random_matrix(rng, n, dim), dim);
    const ProjectionBasis a = vlac::pca_fit(data, d, PcaSolver::kCovarianceEigen);
    const ProjectionBasis b = vlac::pca_fit(data, d, PcaSolver::kThinSvd);
    for (std::size_t i = 0; i < d; ++i) {
      CHECK(a.eigenvalues[i] == doctest::Approx(b.eigenvalues[i]).epsilon(1e-8));
      for (std::size_t j = 0; j < dim; ++j) CHECK(std::abs(a.rows(i, j) - b.rows(i, j)) <= 1e-5);
    }
  }
}

TEST_CASE("pca_fit errors") {
  CHECK_THROWS_WITH_AS(vlac::pca_fit(Matrix::from_rows({{1.0, 2.0}}), 1), doctest::Contains("InsufficientRows"),
                       vlac::Error);
  CHECK_THROWS_WITH_AS(vlac::pca_fit(Matrix::from_rows({{1.0, 2.0}, {3.0, 1.0}}), 3), doctest::Contains("DTooLarge"),
                       vlac::Error);
}

TEST_CASE("basis_alignment_score") {
  const ProjectionBasis a = basis_of({{1.0, 0.0}});
  const ProjectionBasis b = basis_of({{0.6, 0.8}});
  const ProjectionBasis c = basis_of({{0.0, 1.0}});
  CHECK(vlac::basis_alignment_score(a, b) == doctest::Approx(0.6));
  CHECK(vlac::basis_alignment_score(b, a) == doctest::Approx(0.6));
  CHECK(vlac::basis_alignment_score(a, c) == 0.0);
  CHECK(vlac::basis_alignment_score(a, a) == 1.0);

  const ProjectionBasis flipped = basis_of({{-0.6, -0.8}});
  CHECK(vlac::basis_alignment_score(a, flipped) == doctest::Approx(-0.6));
  CHECK(vlac::sign_aligned_alignment_score(a, flipped) == doctest::Approx(0.6));

  CHECK_THROWS_AS(vlac::basis_alignment_score(a, basis_of({{1.0, 0.0, 0.0}})), vlac::Error);
}
