#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "vlac/aggregation.hpp"

namespace vlac {

// Feature file layout (little-endian):
//   "VLACFEAT" | version u16 | F u32 | frame_count u32
//   then per frame: frame_index u32 | K u32 | K*F f32 (row-major)
// Frame indices are strictly increasing. Values are stored as f32, so doubles
// that are not exactly representable are rounded on write.
inline constexpr std::uint16_t kFeatureFormatVersion = 1;

/// Streams frames from a feature file in order.
class FeatureFileReader {
 public:
  explicit FeatureFileReader(const std::filesystem::path& path);

  std::uint32_t dim() const noexcept { return dim_; }
  std::uint32_t frame_count() const noexcept { return frame_count_; }

  /// Reads the next frame; returns false once all frames are consumed.
  bool next(FrameFeatures& frame);

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::uint32_t dim_ = 0;
  std::uint32_t frame_count_ = 0;
  std::uint32_t read_ = 0;
  std::optional<std::uint32_t> last_index_;
};

void write_features(std::span<const FrameFeatures> frames, std::size_t dim, std::ostream& out);

/// Refuses to replace an existing file unless `overwrite` is set. `dim` may be
/// left at 0 when at least one frame carries the dimension.
void write_features(std::span<const FrameFeatures> frames, const std::filesystem::path& path,
                    bool overwrite = false, std::size_t dim = 0);

std::vector<FrameFeatures> load_features(const std::filesystem::path& path,
                                         std::optional<std::size_t> expected_dim = std::nullopt);

/// Rounds every value to the nearest f32 so in-memory data matches what a
/// feature file stores.
void round_to_f32(std::span<FrameFeatures> frames);

}  // namespace vlac
