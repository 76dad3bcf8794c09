#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "vlac/kmeans.hpp"
#include "vlac/matrix.hpp"
#include "vlac/pca.hpp"

namespace vlac {

enum class Method : std::uint8_t { kVlad = 0, kVlac = 1, kHp = 2 };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

/// Local descriptors detected in one sampled frame, one descriptor per row.
struct FrameFeatures {
  std::uint32_t frame_index = 0;
  Matrix features;

  bool operator==(const FrameFeatures&) const = default;
};

/// A window of consecutive frames, viewed in place.
struct GroupOfFrames {
  std::size_t gof_index = 0;
  std::span<const FrameFeatures> frames;

  /// All descriptors of the window stacked in frame order.
  Matrix pooled() const;
};

/// Aggregated residuals before compaction: `blocks` consecutive blocks of
/// `block_dim` values (J x F for VLAD, M x F for VLAC, alpha2 x D0 for HP).
struct RawDescriptor {
  Vector values;
  Method method = Method::kVlad;
  std::size_t blocks = 0;
  std::size_t block_dim = 0;
  bool normalized = false;
};

struct CompactDescriptor {
  Vector values;
  Method method = Method::kVlad;
  std::size_t gof_index = 0;
};

/// Every parameter is persisted as a little-endian u32 in the model file.
struct ModelParams {
  std::uint32_t F = 0;
  std::uint32_t J = 128;
  std::uint32_t N = 256;
  std::uint32_t M = 16;
  std::uint32_t D = 128;
  std::uint32_t D0 = 512;
  std::uint32_t alpha1 = 128;
  std::uint32_t alpha2 = 32;
  std::uint32_t h = 64;
  std::uint32_t gof_size = 5;
  std::uint32_t overlap = 1;
  std::uint32_t seed = 0;
  std::uint32_t normalize = 0;

  bool operator==(const ModelParams&) const = default;
};

/// Trained encoder. `codebook` holds the VLAD centers (J), the VLAC centers of
/// local feature centers (M), or the HP first-stage centers (alpha1).
/// `stage1_basis` and `stage2` are used by HP only.
struct TrainedModel {
  Method method = Method::kVlad;
  ModelParams params;
  Codebook codebook;
  ProjectionBasis stage1_basis;
  Codebook stage2;
  ProjectionBasis basis;

  bool trained() const noexcept { return basis.dim() > 0 && codebook.k() > 0; }
  /// Length of the raw descriptor fed to the final projection.
  std::size_t raw_dim() const noexcept;
};

// Windowing

/// 1 + floor((frames - gof_size) / (gof_size - overlap)) when frames >= gof_size,
/// otherwise 0. Trailing frames that cannot fill a window are dropped.
std::size_t gof_count(std::size_t frames, std::size_t gof_size, std::size_t overlap);
std::vector<GroupOfFrames> split_gofs(std::span<const FrameFeatures> frames, std::size_t gof_size,
                                      std::size_t overlap);
Matrix pool_features(std::span<const FrameFeatures> frames);

// Encoders

RawDescriptor vlad_encode(const Matrix& features, const Codebook& codebook);

/// K-means over the window's pooled descriptors with k = min(N, pooled count).
Codebook compute_lfcs(const GroupOfFrames& gof, std::size_t N, std::uint64_t seed);

/// Same aggregation as vlad_encode, applied to the local feature centers.
RawDescriptor vlac_encode(const Codebook& lfcs, const Codebook& clfc);

RawDescriptor hp_encode(const GroupOfFrames& gof, const TrainedModel& model);

/// Dispatches on the model's method. Windows without any descriptors encode to
/// the zero vector for every method.
RawDescriptor encode_raw(const GroupOfFrames& gof, const TrainedModel& model);

void l2_normalize(RawDescriptor& raw);

/// Windows the video with the model's gof_size/overlap, encodes each window
/// and projects it with the model basis. Windows are encoded in parallel.
std::vector<CompactDescriptor> encode_video(std::span<const FrameFeatures> frames, const TrainedModel& model);

namespace serial {
std::vector<CompactDescriptor> encode_video(std::span<const FrameFeatures> frames, const TrainedModel& model);
}

// Training

TrainedModel train_vlad(std::span<const FrameFeatures> training_frames, std::size_t J, std::size_t D,
                        std::uint32_t seed, bool normalize = false);

/// Second-stage clustering of every training window's local feature centers.
Codebook train_vlac_codebook(std::span<const GroupOfFrames> training_gofs, std::size_t N, std::size_t M,
                             std::uint32_t seed);

TrainedModel train_vlac(std::span<const GroupOfFrames> training_gofs, std::size_t N, std::size_t M,
                        std::size_t D, std::uint32_t seed, bool normalize = false);

/// Hyper-pooling: first-stage VLAD codebook and D0-dim basis from the training
/// frames, second-stage alpha2 codebook clustered on the first h projected
/// components, final basis over the encoded training windows.
TrainedModel train_hp(std::span<const FrameFeatures> training_frames, std::span<const GroupOfFrames> training_gofs,
                      const ModelParams& params);

/// Trains `method` on whole videos, windowed with params.gof_size/overlap.
/// params.F is filled in from the data.
TrainedModel train_model(Method method, const std::vector<std::vector<FrameFeatures>>& videos,
                         ModelParams params);

}  // namespace vlac
