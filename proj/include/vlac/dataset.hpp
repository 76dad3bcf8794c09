#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vlac/aggregation.hpp"
#include "vlac/random.hpp"

namespace vlac {

/// One manifest row. Query manifests also carry the ground-truth source video
/// and the frame position the segment was cut from.
struct VideoEntry {
  std::string video_id;
  std::string feature_file;  ///< relative to the data root
  double fps_sampled = 1.0 / 3.0;
  std::string label;
  std::optional<std::string> source_video_id;
  std::optional<std::uint32_t> start_frame;

  bool operator==(const VideoEntry&) const = default;
};

struct DatasetManifest {
  std::vector<VideoEntry> videos;
  std::uint32_t feature_dim = 0;
  std::string notes;

  bool operator==(const DatasetManifest&) const = default;
};

DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Unique ids and every referenced feature file present under `data_root`.
void validate_manifest(const DatasetManifest& manifest, const std::filesystem::path& data_root);

std::vector<FrameFeatures> load_video(const DatasetManifest& manifest, const VideoEntry& entry,
                                      const std::filesystem::path& data_root);

// Feature-space perturbation

struct PerturbationSpec {
  enum class Kind { kAdditiveGaussian, kComponentDropout, kGain };
  Kind kind = Kind::kAdditiveGaussian;
  /// Gaussian std, dropout probability, or gain offset (scale = 1 + magnitude).
  double magnitude = 0.0;
  std::uint64_t seed = 0;
};

PerturbationSpec::Kind parse_perturbation_kind(const std::string& name);

/// Frame and descriptor counts are preserved. Outputs are rounded to f32.
std::vector<FrameFeatures> perturb(std::span<const FrameFeatures> frames, const PerturbationSpec& spec);

// Synthetic data

/// Gaussian mixture shared by every video of a dataset.
struct MixtureVocabulary {
  Matrix means;
  double within_std = 0.0;
};

MixtureVocabulary draw_vocabulary(std::size_t dim, std::size_t clusters, double mean_spread, double within_std,
                                  Rng& rng);

/// `count` draws from the mixture with the given component weights.
Matrix sample_mixture(const MixtureVocabulary& vocabulary, std::span<const double> weights, std::size_t count,
                      Rng& rng);

struct SynthOptions {
  std::size_t num_videos = 10;
  std::size_t frames_per_video = 60;
  std::size_t dim = 16;
  std::size_t clusters = 32;
  std::uint64_t seed = 0;
  std::size_t features_per_frame = 64;
  /// Consecutive frames sharing one scene (a set of recurring descriptors).
  std::size_t scene_length = 8;
  std::size_t descriptors_per_scene = 96;
  double mean_spread = 1.0;
  double within_std = 0.25;
  /// Per-frame jitter of a scene's recurring descriptors.
  double frame_jitter = 0.05;
  /// Exponent applied to exponential draws of scene mixing weights; larger
  /// values concentrate a scene on fewer vocabulary components.
  double weight_sharpness = 2.0;
};

/// In-memory videos, values rounded to f32. Deterministic under options.seed.
std::vector<std::vector<FrameFeatures>> synthesize_videos(const SynthOptions& options);

/// Writes `videos` as `<subdir>/<id_prefix>NNN.vlacfeat` under data_root and
/// returns the manifest describing them.
DatasetManifest write_dataset(const std::vector<std::vector<FrameFeatures>>& videos, std::size_t dim,
                              const std::filesystem::path& data_root, const std::string& subdir,
                              const std::string& id_prefix, const std::string& label, bool overwrite = true);

/// synthesize_videos + write_dataset.
DatasetManifest synthesize_dataset(const SynthOptions& options, const std::filesystem::path& data_root,
                                   const std::string& subdir = "videos");

// Queries

struct QuerySegment {
  std::string query_id;
  std::string source_video_id;
  std::uint32_t start_frame = 0;
  std::vector<FrameFeatures> frames;
};

/// One contiguous segment per video. The start is drawn uniformly and then
/// shifted by `offset_frames` against the database frame grid.
std::vector<QuerySegment> make_query_segments(const std::vector<std::vector<FrameFeatures>>& videos,
                                              std::span<const std::string> video_ids, std::size_t segment_len,
                                              std::size_t offset_frames, std::uint64_t seed);

/// File-based variant: reads every video in `manifest`, writes the segments
/// under `<data_root>/<subdir>` and returns the query manifest.
DatasetManifest make_queries(const DatasetManifest& manifest, const std::filesystem::path& data_root,
                             std::size_t segment_len, std::size_t offset_frames, std::uint64_t seed,
                             const std::string& subdir = "queries");

DatasetManifest write_queries(const std::vector<QuerySegment>& queries, std::size_t dim, double fps_sampled,
                              const std::filesystem::path& data_root, const std::string& subdir);

}  // namespace vlac
