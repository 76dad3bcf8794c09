#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "oracles.hpp"
#include "vlac/aggregation.hpp"
#include "vlac/matrix.hpp"

namespace testing {

inline vlac::Matrix to_matrix(const oracle::Mat& m, std::size_t cols) { return vlac::Matrix::from_rows(m, cols); }

inline oracle::Mat to_nested(const vlac::Matrix& m) {
  oracle::Mat out;
  for (std::size_t i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).begin(), m.row(i).end());
  return out;
}

inline vlac::Codebook codebook(const oracle::Mat& centers, std::size_t cols) {
  vlac::Codebook book;
  book.centers = to_matrix(centers, cols);
  return book;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("vlac_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::vector<vlac::FrameFeatures> random_frames(std::mt19937_64& rng, std::size_t frames, std::size_t per_frame,
                                                      std::size_t dim) {
  std::vector<vlac::FrameFeatures> out;
  for (std::size_t f = 0; f < frames; ++f) {
    out.push_back({static_cast<std::uint32_t>(f), to_matrix(oracle::random_matrix(rng, per_frame, dim), dim)});
  }
  return out;
}

}  // namespace testing
