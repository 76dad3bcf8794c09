#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "vlac/search.hpp"

namespace vlac {

// Store file layout (little-endian):
//   "VLACSTOR" | version u16 | video_count u32
//   then per video: id_len u32 | id (utf-8) | G u32 | D u32 | method u8 | G*D f32
inline constexpr std::uint16_t kStoreFormatVersion = 1;

void write_store(std::span<const DescriptorSequence> store, std::ostream& out);
std::vector<DescriptorSequence> read_store(std::istream& in, const std::string& source = "<stream>");

void save_store(std::span<const DescriptorSequence> store, const std::filesystem::path& path);
std::vector<DescriptorSequence> load_store(const std::filesystem::path& path);

}  // namespace vlac
