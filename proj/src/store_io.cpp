#include "vlac/store_io.hpp"

#include <fstream>

#include "binary_io.hpp"

namespace vlac {
namespace {
constexpr std::string_view kMagic = "VLACSTOR";
}

void write_store(std::span<const DescriptorSequence> store, std::ostream& out) {
  binary::Writer w(out);
  w.magic(kMagic);
  w.u16(kStoreFormatVersion);
  w.u32(static_cast<std::uint32_t>(store.size()));
  for (const auto& seq : store) {
    const std::size_t dim = seq.dim();
    w.u32(static_cast<std::uint32_t>(seq.video_id.size()));
    w.bytes(seq.video_id);
    w.u32(static_cast<std::uint32_t>(seq.length()));
    w.u32(static_cast<std::uint32_t>(dim));
    w.u8(static_cast<std::uint8_t>(seq.method));
    for (const auto& d : seq.descriptors) {
      if (d.values.size() != dim) {
        throw Error(ErrorCode::kDimensionMismatch, "ragged descriptor sequence '" + seq.video_id + "'");
      }
      w.f32s(d.values);
    }
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing descriptor store");
}

std::vector<DescriptorSequence> read_store(std::istream& in, const std::string& source) {
  binary::Reader r(in, source);
  r.expect_magic(kMagic);
  const std::uint16_t version = r.u16();
  if (version != kStoreFormatVersion) {
    throw Error(ErrorCode::kMalformedFile, source + ": unsupported store version " + std::to_string(version));
  }
  const std::uint32_t count = r.u32();
  std::vector<DescriptorSequence> store;
  store.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    DescriptorSequence seq;
    seq.video_id = r.bytes(r.u32());
    const std::uint32_t g = r.u32();
    const std::uint32_t d = r.u32();
    const std::uint8_t tag = r.u8();
    if (tag > static_cast<std::uint8_t>(Method::kHp)) {
      throw Error(ErrorCode::kMalformedFile, source + ": unknown method tag " + std::to_string(tag));
    }
    seq.method = static_cast<Method>(tag);
    seq.descriptors.resize(g);
    for (std::uint32_t j = 0; j < g; ++j) {
      auto& desc = seq.descriptors[j];
      desc.method = seq.method;
      desc.gof_index = j;
      desc.values.resize(d);
      r.f32s(desc.values);
    }
    store.push_back(std::move(seq));
  }
  if (!r.at_end()) throw Error(ErrorCode::kMalformedFile, source + ": data after last sequence");
  return store;
}

void save_store(std::span<const DescriptorSequence> store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  write_store(store, out);
}

std::vector<DescriptorSequence> load_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_store(in, path.string());
}

}  // namespace vlac
