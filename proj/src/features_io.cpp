#include "vlac/features_io.hpp"

#include <string>

#include "binary_io.hpp"

namespace vlac {
namespace {

constexpr std::string_view kMagic = "VLACFEAT";

}  // namespace

FeatureFileReader::FeatureFileReader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  binary::Reader r(in_, path_.string());
  r.expect_magic(kMagic);
  const std::uint16_t version = r.u16();
  if (version != kFeatureFormatVersion) {
    throw Error(ErrorCode::kMalformedFile, path_.string() + ": unsupported version " + std::to_string(version));
  }
  dim_ = r.u32();
  frame_count_ = r.u32();
  if (dim_ == 0) throw Error(ErrorCode::kMalformedFile, path_.string() + ": feature dimension 0");
}

bool FeatureFileReader::next(FrameFeatures& frame) {
  binary::Reader r(in_, path_.string());
  if (read_ == frame_count_) {
    if (!r.at_end()) throw Error(ErrorCode::kMalformedFile, path_.string() + ": data after last frame");
    return false;
  }
  frame.frame_index = r.u32();
  if (last_index_ && frame.frame_index <= *last_index_) {
    throw Error(ErrorCode::kMalformedFile, path_.string() + ": frame indices not strictly increasing");
  }
  last_index_ = frame.frame_index;
  const std::uint32_t k = r.u32();
  frame.features = Matrix(k, dim_);
  r.f32s(frame.features.values());
  ++read_;
  return true;
}

void write_features(std::span<const FrameFeatures> frames, std::size_t dim, std::ostream& out) {
  binary::Writer w(out);
  w.magic(kMagic);
  w.u16(kFeatureFormatVersion);
  w.u32(static_cast<std::uint32_t>(dim));
  w.u32(static_cast<std::uint32_t>(frames.size()));
  std::optional<std::uint32_t> last;
  for (const auto& frame : frames) {
    if (frame.features.cols() != dim && !(frame.features.rows() == 0 && frame.features.cols() == 0)) {
      throw Error(ErrorCode::kDimensionMismatch, "frame " + std::to_string(frame.frame_index) + " has dimension " +
                                                     std::to_string(frame.features.cols()));
    }
    if (last && frame.frame_index <= *last) {
      throw Error(ErrorCode::kInvalidArgument, "frame indices must be strictly increasing");
    }
    last = frame.frame_index;
    w.u32(frame.frame_index);
    w.u32(static_cast<std::uint32_t>(frame.features.rows()));
    w.f32s(frame.features.values());
  }
}

void write_features(std::span<const FrameFeatures> frames, const std::filesystem::path& path, bool overwrite,
                    std::size_t dim) {
  if (dim == 0) {
    for (const auto& f : frames) {
      if (f.features.cols() > 0) {
        dim = f.features.cols();
        break;
      }
    }
  }
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "feature dimension unknown for " + path.string());
  if (!overwrite && std::filesystem::exists(path)) {
    throw Error(ErrorCode::kIo, path.string() + " exists; pass overwrite to replace it");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  write_features(frames, dim, out);
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

std::vector<FrameFeatures> load_features(const std::filesystem::path& path, std::optional<std::size_t> expected_dim) {
  FeatureFileReader reader(path);
  if (expected_dim && *expected_dim != reader.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, path.string() + " has dimension " + std::to_string(reader.dim()) +
                                                   ", expected " + std::to_string(*expected_dim));
  }
  std::vector<FrameFeatures> frames;
  frames.reserve(reader.frame_count());
  FrameFeatures frame;
  while (reader.next(frame)) frames.push_back(std::move(frame));
  return frames;
}

void round_to_f32(std::span<FrameFeatures> frames) {
  for (auto& frame : frames) {
    for (double& v : frame.features.values()) v = static_cast<double>(static_cast<float>(v));
  }
}

}  // namespace vlac
