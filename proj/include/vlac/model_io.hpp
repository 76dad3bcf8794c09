#pragma once

#include <filesystem>
#include <iosfwd>

#include "vlac/aggregation.hpp"

namespace vlac {

// Model file layout (little-endian):
//   "VLACMODL" | version u16 | method u8 | 13 x u32 params
//   (F J N M D D0 alpha1 alpha2 h gof_size overlap seed normalize)
//   codebook matrix | stage-1 basis | stage-2 matrix | final basis
// where a matrix is rows u32, cols u32, rows*cols f32 (row-major) and a basis
// is its row matrix followed by mean (count u32 + f32s) and eigenvalues
// (count u32 + f32s). Unused HP stages are written as empty matrices/bases.
inline constexpr std::uint16_t kModelFormatVersion = 1;

void write_model(const TrainedModel& model, std::ostream& out);
TrainedModel read_model(std::istream& in, const std::string& source = "<stream>");

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace vlac
