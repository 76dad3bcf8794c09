#include "vlac/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include <json.hpp>

#include "vlac/error.hpp"
#include "vlac/features_io.hpp"

namespace vlac {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string numbered(const std::string& prefix, std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03zu", i);
  return prefix + buf;
}

double f32(double v) { return static_cast<double>(static_cast<float>(v)); }

}  // namespace

DatasetManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest " + path.string());
  json doc;
  try {
    doc = json::parse(in);
    DatasetManifest m;
    m.feature_dim = doc.at("feature_dim").get<std::uint32_t>();
    m.notes = doc.value("notes", "");
    for (const auto& v : doc.at("videos")) {
      VideoEntry e;
      e.video_id = v.at("video_id").get<std::string>();
      e.feature_file = v.at("feature_file").get<std::string>();
      e.fps_sampled = v.at("fps_sampled").get<double>();
      e.label = v.value("label", "");
      if (v.contains("source_video_id")) e.source_video_id = v["source_video_id"].get<std::string>();
      if (v.contains("start_frame")) e.start_frame = v["start_frame"].get<std::uint32_t>();
      m.videos.push_back(std::move(e));
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": " + e.what());
  }
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
  json videos = json::array();
  for (const auto& e : manifest.videos) {
    json v = {{"video_id", e.video_id}, {"feature_file", e.feature_file}, {"fps_sampled", e.fps_sampled},
              {"label", e.label}};
    if (e.source_video_id) v["source_video_id"] = *e.source_video_id;
    if (e.start_frame) v["start_frame"] = *e.start_frame;
    videos.push_back(std::move(v));
  }
  const json doc = {{"videos", videos}, {"feature_dim", manifest.feature_dim}, {"notes", manifest.notes}};
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write manifest " + path.string());
  out << doc.dump(2) << '\n';
}

void validate_manifest(const DatasetManifest& manifest, const fs::path& data_root) {
  std::set<std::string> seen;
  for (const auto& e : manifest.videos) {
    if (!seen.insert(e.video_id).second) {
      throw Error(ErrorCode::kMalformedFile, "duplicate video_id '" + e.video_id + "'");
    }
    if (!fs::exists(data_root / e.feature_file)) {
      throw Error(ErrorCode::kIo, "missing feature file " + (data_root / e.feature_file).string());
    }
  }
}

std::vector<FrameFeatures> load_video(const DatasetManifest& manifest, const VideoEntry& entry,
                                      const fs::path& data_root) {
  return load_features(data_root / entry.feature_file, manifest.feature_dim);
}

PerturbationSpec::Kind parse_perturbation_kind(const std::string& name) {
  if (name == "additive_gaussian" || name == "gaussian") return PerturbationSpec::Kind::kAdditiveGaussian;
  if (name == "component_dropout" || name == "dropout") return PerturbationSpec::Kind::kComponentDropout;
  if (name == "gain") return PerturbationSpec::Kind::kGain;
  throw Error(ErrorCode::kInvalidArgument, "unknown perturbation '" + name + "'");
}

std::vector<FrameFeatures> perturb(std::span<const FrameFeatures> frames, const PerturbationSpec& spec) {
  if (!(spec.magnitude >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "perturbation magnitude must be >= 0");
  if (spec.kind == PerturbationSpec::Kind::kComponentDropout && spec.magnitude > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "dropout probability must be in [0, 1]");
  }
  Rng rng(spec.seed);
  std::vector<FrameFeatures> out(frames.begin(), frames.end());
  const double m = spec.magnitude;
  for (auto& frame : out) {
    for (double& v : frame.features.values()) {
      switch (spec.kind) {
        case PerturbationSpec::Kind::kAdditiveGaussian: v = f32(v + m * rng.normal()); break;
        case PerturbationSpec::Kind::kComponentDropout:
          if (rng.uniform() < m) v = 0.0;
          break;
        case PerturbationSpec::Kind::kGain: v = f32(v * (1.0 + m)); break;
      }
    }
  }
  return out;
}

MixtureVocabulary draw_vocabulary(std::size_t dim, std::size_t clusters, double mean_spread, double within_std,
                                  Rng& rng) {
  MixtureVocabulary vocab;
  vocab.means = Matrix(clusters, dim);
  for (double& v : vocab.means.values()) v = mean_spread * rng.normal();
  vocab.within_std = within_std;
  return vocab;
}

Matrix sample_mixture(const MixtureVocabulary& vocabulary, std::span<const double> weights, std::size_t count,
                      Rng& rng) {
  if (weights.size() != vocabulary.means.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "one weight per mixture component required");
  }
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw Error(ErrorCode::kInvalidArgument, "mixture weights must have positive sum");

  const std::size_t dim = vocabulary.means.cols();
  Matrix out(count, dim);
  for (std::size_t i = 0; i < count; ++i) {
    const double target = rng.uniform() * total;
    double cumulative = 0.0;
    std::size_t c = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
      if (weights[j] <= 0.0) continue;
      c = j;
      cumulative += weights[j];
      if (cumulative > target) break;
    }
    const auto mean = vocabulary.means.row(c);
    auto row = out.row(i);
    for (std::size_t f = 0; f < dim; ++f) row[f] = mean[f] + vocabulary.within_std * rng.normal();
  }
  return out;
}

std::vector<std::vector<FrameFeatures>> synthesize_videos(const SynthOptions& o) {
  if (o.num_videos == 0 || o.frames_per_video == 0 || o.dim == 0 || o.clusters == 0 ||
      o.features_per_frame == 0 || o.scene_length == 0 || o.descriptors_per_scene == 0) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic dataset counts must all be >= 1");
  }
  Rng rng(o.seed);
  const MixtureVocabulary vocab = draw_vocabulary(o.dim, o.clusters, o.mean_spread, o.within_std, rng);

  std::vector<std::vector<FrameFeatures>> videos(o.num_videos);
  for (auto& video : videos) {
    Rng vrng(rng.next());
    Matrix scene;
    std::vector<double> weights(o.clusters);
    video.reserve(o.frames_per_video);
    for (std::size_t f = 0; f < o.frames_per_video; ++f) {
      if (f % o.scene_length == 0) {
        for (double& w : weights) w = std::pow(vrng.exponential(), o.weight_sharpness);
        scene = sample_mixture(vocab, weights, o.descriptors_per_scene, vrng);
      }
      FrameFeatures frame{static_cast<std::uint32_t>(f), Matrix(o.features_per_frame, o.dim)};
      for (std::size_t k = 0; k < o.features_per_frame; ++k) {
        const auto proto = scene.row(vrng.index(scene.rows()));
        auto row = frame.features.row(k);
        for (std::size_t d = 0; d < o.dim; ++d) row[d] = proto[d] + o.frame_jitter * vrng.normal();
      }
      video.push_back(std::move(frame));
    }
    round_to_f32(video);
  }
  return videos;
}

DatasetManifest write_dataset(const std::vector<std::vector<FrameFeatures>>& videos, std::size_t dim,
                              const fs::path& data_root, const std::string& subdir, const std::string& id_prefix,
                              const std::string& label, bool overwrite) {
  fs::create_directories(data_root / subdir);
  DatasetManifest manifest;
  manifest.feature_dim = static_cast<std::uint32_t>(dim);
  for (std::size_t i = 0; i < videos.size(); ++i) {
    VideoEntry e;
    e.video_id = numbered(id_prefix, i);
    e.feature_file = (fs::path(subdir) / (e.video_id + ".vlacfeat")).generic_string();
    e.label = label;
    write_features(videos[i], data_root / e.feature_file, overwrite, dim);
    manifest.videos.push_back(std::move(e));
  }
  return manifest;
}

DatasetManifest synthesize_dataset(const SynthOptions& options, const fs::path& data_root, const std::string& subdir) {
  DatasetManifest m =
      write_dataset(synthesize_videos(options), options.dim, data_root, subdir, "video", "clean");
  m.notes = "synthetic Gaussian-mixture features, seed " + std::to_string(options.seed);
  return m;
}

std::vector<QuerySegment> make_query_segments(const std::vector<std::vector<FrameFeatures>>& videos,
                                              std::span<const std::string> video_ids, std::size_t segment_len,
                                              std::size_t offset_frames, std::uint64_t seed) {
  if (videos.size() != video_ids.size()) throw Error(ErrorCode::kInvalidArgument, "one id per video required");
  if (segment_len == 0) throw Error(ErrorCode::kInvalidArgument, "segment length must be >= 1");
  Rng rng(seed);
  std::vector<QuerySegment> out;
  out.reserve(videos.size());
  for (std::size_t i = 0; i < videos.size(); ++i) {
    const auto& video = videos[i];
    if (video.size() < segment_len + offset_frames) {
      throw Error(ErrorCode::kVideoTooShort, video_ids[i] + " has " + std::to_string(video.size()) +
                                                 " frames, query needs " +
                                                 std::to_string(segment_len + offset_frames));
    }
    const std::size_t start = rng.index(video.size() - segment_len - offset_frames + 1) + offset_frames;
    QuerySegment q;
    q.query_id = "q_" + video_ids[i];
    q.source_video_id = video_ids[i];
    q.start_frame = static_cast<std::uint32_t>(start);
    q.frames.assign(video.begin() + static_cast<std::ptrdiff_t>(start),
                    video.begin() + static_cast<std::ptrdiff_t>(start + segment_len));
    out.push_back(std::move(q));
  }
  return out;
}

DatasetManifest write_queries(const std::vector<QuerySegment>& queries, std::size_t dim, double fps_sampled,
                              const fs::path& data_root, const std::string& subdir) {
  fs::create_directories(data_root / subdir);
  DatasetManifest manifest;
  manifest.feature_dim = static_cast<std::uint32_t>(dim);
  manifest.notes = "query segments";
  for (const auto& q : queries) {
    VideoEntry e;
    e.video_id = q.query_id;
    e.feature_file = (fs::path(subdir) / (q.query_id + ".vlacfeat")).generic_string();
    e.fps_sampled = fps_sampled;
    e.label = "query";
    e.source_video_id = q.source_video_id;
    e.start_frame = q.start_frame;
    write_features(q.frames, data_root / e.feature_file, true, dim);
    manifest.videos.push_back(std::move(e));
  }
  return manifest;
}

DatasetManifest make_queries(const DatasetManifest& manifest, const fs::path& data_root, std::size_t segment_len,
                             std::size_t offset_frames, std::uint64_t seed, const std::string& subdir) {
  validate_manifest(manifest, data_root);
  std::vector<std::vector<FrameFeatures>> videos;
  std::vector<std::string> ids;
  for (const auto& e : manifest.videos) {
    videos.push_back(load_video(manifest, e, data_root));
    ids.push_back(e.video_id);
  }
  const double fps = manifest.videos.empty() ? 1.0 / 3.0 : manifest.videos.front().fps_sampled;
  return write_queries(make_query_segments(videos, ids, segment_len, offset_frames, seed), manifest.feature_dim, fps,
                       data_root, subdir);
}

}  // namespace vlac
