#include "vlac/aggregation.hpp"

#include <cmath>
#include <exception>
#include <string>

#include "vlac/error.hpp"
#include "vlac/kernels.hpp"

namespace vlac {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kVlad: return "vlad";
    case Method::kVlac: return "vlac";
    case Method::kHp: return "hp";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "vlad" || name == "VLAD") return Method::kVlad;
  if (name == "vlac" || name == "VLAC") return Method::kVlac;
  if (name == "hp" || name == "HP") return Method::kHp;
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + std::string(name) + "'");
}

std::size_t TrainedModel::raw_dim() const noexcept {
  switch (method) {
    case Method::kVlad:
    case Method::kVlac: return codebook.k() * codebook.dim();
    case Method::kHp: return stage2.k() * stage2.dim();
  }
  return 0;
}

Matrix GroupOfFrames::pooled() const { return pool_features(frames); }

Matrix pool_features(std::span<const FrameFeatures> frames) {
  if (frames.empty()) return {};
  std::size_t total = 0;
  for (const auto& f : frames) total += f.features.rows();
  Matrix out(0, frames.front().features.cols());
  out.reserve_rows(total);
  for (const auto& f : frames) out.append_rows(f.features);
  return out;
}

std::size_t gof_count(std::size_t frames, std::size_t gof_size, std::size_t overlap) {
  if (gof_size == 0 || overlap >= gof_size) {
    throw Error(ErrorCode::kInvalidArgument, "need gof_size >= 1 and overlap < gof_size");
  }
  if (frames < gof_size) return 0;
  return 1 + (frames - gof_size) / (gof_size - overlap);
}

std::vector<GroupOfFrames> split_gofs(std::span<const FrameFeatures> frames, std::size_t gof_size,
                                      std::size_t overlap) {
  const std::size_t count = gof_count(frames.size(), gof_size, overlap);
  const std::size_t stride = gof_size - overlap;
  std::vector<GroupOfFrames> out;
  out.reserve(count);
  for (std::size_t g = 0; g < count; ++g) {
    out.push_back({g, frames.subspan(g * stride, gof_size)});
  }
  return out;
}

namespace {

RawDescriptor flatten(Matrix blocks, Method method) {
  RawDescriptor raw;
  raw.method = method;
  raw.blocks = blocks.rows();
  raw.block_dim = blocks.cols();
  raw.values.assign(blocks.values().begin(), blocks.values().end());
  return raw;
}

RawDescriptor zero_descriptor(const TrainedModel& model) {
  RawDescriptor raw;
  raw.method = model.method;
  const Codebook& book = model.method == Method::kHp ? model.stage2 : model.codebook;
  raw.blocks = book.k();
  raw.block_dim = book.dim();
  raw.values.assign(raw.blocks * raw.block_dim, 0.0);
  return raw;
}

void require_trained(const TrainedModel& model) {
  if (!model.trained()) throw Error(ErrorCode::kUntrainedModel, "model has not been trained");
}

std::uint64_t lfc_seed(std::uint32_t model_seed, std::size_t gof_index) {
  return static_cast<std::uint64_t>(model_seed) ^ static_cast<std::uint64_t>(gof_index);
}

CompactDescriptor compact(const GroupOfFrames& gof, const TrainedModel& model) {
  RawDescriptor raw = encode_raw(gof, model);
  if (model.params.normalize) l2_normalize(raw);
  return {pca_project(model.basis, raw.values), model.method, gof.gof_index};
}

Matrix project_rows(const ProjectionBasis& basis, const Matrix& rows) {
  Matrix out(0, basis.dim());
  out.reserve_rows(rows.rows());
  for (std::size_t i = 0; i < rows.rows(); ++i) out.append_row(pca_project(basis, rows.row(i)));
  return out;
}

void append_raw(Matrix& rows, RawDescriptor raw, bool normalize) {
  if (normalize) l2_normalize(raw);
  if (rows.cols() != raw.values.size()) rows = Matrix(0, raw.values.size());
  rows.append_row(raw.values);
}

}  // namespace

RawDescriptor vlad_encode(const Matrix& features, const Codebook& codebook) {
  if (features.cols() != codebook.dim() && !(features.rows() == 0 && features.cols() == 0)) {
    throw Error(ErrorCode::kDimensionMismatch, "features have dimension " + std::to_string(features.cols()) +
                                                   ", codebook " + std::to_string(codebook.dim()));
  }
  if (features.rows() == 0) {
    return flatten(Matrix(codebook.k(), codebook.dim()), Method::kVlad);
  }
  return flatten(kernels::aggregate_residuals(features, codebook.centers), Method::kVlad);
}

Codebook compute_lfcs(const GroupOfFrames& gof, std::size_t N, std::uint64_t seed) {
  const Matrix pooled = gof.pooled();
  if (pooled.rows() == 0) {
    throw Error(ErrorCode::kEmptyGof, "window " + std::to_string(gof.gof_index) + " has no descriptors");
  }
  return kmeans_fit(pooled, std::min(N, pooled.rows()), seed);
}

RawDescriptor vlac_encode(const Codebook& lfcs, const Codebook& clfc) {
  RawDescriptor raw = vlad_encode(lfcs.centers, clfc);
  raw.method = Method::kVlac;
  return raw;
}

namespace {

RawDescriptor hp_aggregate(const GroupOfFrames& gof, const TrainedModel& model) {
  if (model.method != Method::kHp) throw Error(ErrorCode::kUntrainedModel, "not a hyper-pooling model");
  if (model.codebook.k() == 0 || model.stage2.k() == 0 || model.stage1_basis.dim() == 0) {
    throw Error(ErrorCode::kUntrainedModel, "hyper-pooling stages missing");
  }
  if (gof.frames.empty()) throw Error(ErrorCode::kEmptyGof, "window has no frames");

  Matrix projected(0, model.stage1_basis.dim());
  projected.reserve_rows(gof.frames.size());
  for (const auto& frame : gof.frames) {
    RawDescriptor v = vlad_encode(frame.features, model.codebook);
    if (model.params.normalize) l2_normalize(v);
    projected.append_row(pca_project(model.stage1_basis, v.values));
  }
  if (projected.cols() != model.stage2.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "second-stage codebook dimension does not match first-stage basis");
  }
  return flatten(kernels::aggregate_residuals(projected, model.stage2.centers, model.params.h), Method::kHp);
}

std::vector<Codebook> lfcs_per_gof(std::span<const GroupOfFrames> gofs, std::size_t N, std::uint32_t seed) {
  std::vector<Codebook> out(gofs.size());
  std::vector<std::exception_ptr> errors(gofs.size());
  const auto n = static_cast<std::ptrdiff_t>(gofs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t g = 0; g < n; ++g) {
    try {
      out[g] = compute_lfcs(gofs[g], N, lfc_seed(seed, gofs[g].gof_index));
    } catch (...) {
      errors[g] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

Codebook cluster_lfcs(const std::vector<Codebook>& lfcs, std::size_t M, std::uint32_t seed) {
  if (lfcs.empty()) throw Error(ErrorCode::kEmptyInput, "no training windows");
  Matrix all(0, lfcs.front().dim());
  for (const auto& book : lfcs) all.append_rows(book.centers);
  return kmeans_fit(all, M, seed);
}

}  // namespace

RawDescriptor hp_encode(const GroupOfFrames& gof, const TrainedModel& model) {
  require_trained(model);
  return hp_aggregate(gof, model);
}

RawDescriptor encode_raw(const GroupOfFrames& gof, const TrainedModel& model) {
  require_trained(model);
  switch (model.method) {
    case Method::kVlad: return vlad_encode(gof.pooled(), model.codebook);
    case Method::kVlac: {
      const Matrix pooled = gof.pooled();
      if (pooled.rows() == 0) return zero_descriptor(model);
      return vlac_encode(compute_lfcs(gof, model.params.N, lfc_seed(model.params.seed, gof.gof_index)),
                         model.codebook);
    }
    case Method::kHp: return hp_encode(gof, model);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method");
}

void l2_normalize(RawDescriptor& raw) {
  double norm = 0.0;
  for (double v : raw.values) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& v : raw.values) v /= norm;
  }
  raw.normalized = true;
}

std::vector<CompactDescriptor> encode_video(std::span<const FrameFeatures> frames, const TrainedModel& model) {
  require_trained(model);
  const auto gofs = split_gofs(frames, model.params.gof_size, model.params.overlap);
  if (gofs.empty()) {
    throw Error(ErrorCode::kEmptyVideo, std::to_string(frames.size()) + " frames cannot fill a window of " +
                                            std::to_string(model.params.gof_size));
  }
  std::vector<CompactDescriptor> out(gofs.size());
  std::vector<std::exception_ptr> errors(gofs.size());
  const auto n = static_cast<std::ptrdiff_t>(gofs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t g = 0; g < n; ++g) {
    try {
      out[g] = compact(gofs[g], model);
    } catch (...) {
      errors[g] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

namespace serial {

std::vector<CompactDescriptor> encode_video(std::span<const FrameFeatures> frames, const TrainedModel& model) {
  require_trained(model);
  const auto gofs = split_gofs(frames, model.params.gof_size, model.params.overlap);
  if (gofs.empty()) {
    throw Error(ErrorCode::kEmptyVideo, std::to_string(frames.size()) + " frames cannot fill a window of " +
                                            std::to_string(model.params.gof_size));
  }
  std::vector<CompactDescriptor> out;
  out.reserve(gofs.size());
  for (const auto& gof : gofs) out.push_back(compact(gof, model));
  return out;
}

}  // namespace serial

TrainedModel train_vlad(std::span<const FrameFeatures> training_frames, std::size_t J, std::size_t D,
                        std::uint32_t seed, bool normalize) {
  const Matrix pooled = pool_features(training_frames);
  if (pooled.rows() == 0) throw Error(ErrorCode::kEmptyInput, "no training descriptors");

  TrainedModel model;
  model.method = Method::kVlad;
  model.params.F = static_cast<std::uint32_t>(pooled.cols());
  model.params.J = static_cast<std::uint32_t>(J);
  model.params.D = static_cast<std::uint32_t>(D);
  model.params.seed = seed;
  model.params.normalize = normalize ? 1 : 0;
  model.codebook = kmeans_fit(pooled, J, seed);

  Matrix rows;
  for (const auto& frame : training_frames) append_raw(rows, vlad_encode(frame.features, model.codebook), normalize);
  model.basis = pca_fit(rows, D);
  return model;
}

Codebook train_vlac_codebook(std::span<const GroupOfFrames> training_gofs, std::size_t N, std::size_t M,
                             std::uint32_t seed) {
  return cluster_lfcs(lfcs_per_gof(training_gofs, N, seed), M, seed);
}

TrainedModel train_vlac(std::span<const GroupOfFrames> training_gofs, std::size_t N, std::size_t M,
                        std::size_t D, std::uint32_t seed, bool normalize) {
  TrainedModel model;
  model.method = Method::kVlac;
  model.params.N = static_cast<std::uint32_t>(N);
  model.params.M = static_cast<std::uint32_t>(M);
  model.params.D = static_cast<std::uint32_t>(D);
  model.params.seed = seed;
  model.params.normalize = normalize ? 1 : 0;
  const std::vector<Codebook> lfcs = lfcs_per_gof(training_gofs, N, seed);
  model.codebook = cluster_lfcs(lfcs, M, seed);
  model.params.F = static_cast<std::uint32_t>(model.codebook.dim());

  Matrix rows;
  for (const auto& book : lfcs) append_raw(rows, vlac_encode(book, model.codebook), normalize);
  model.basis = pca_fit(rows, D);
  return model;
}

TrainedModel train_hp(std::span<const FrameFeatures> training_frames, std::span<const GroupOfFrames> training_gofs,
                      const ModelParams& params) {
  const Matrix pooled = pool_features(training_frames);
  if (pooled.rows() == 0) throw Error(ErrorCode::kEmptyInput, "no training descriptors");
  if (training_gofs.empty()) throw Error(ErrorCode::kEmptyInput, "no training windows");

  TrainedModel model;
  model.method = Method::kHp;
  model.params = params;
  model.params.F = static_cast<std::uint32_t>(pooled.cols());
  const bool normalize = params.normalize != 0;

  model.codebook = kmeans_fit(pooled, params.alpha1, params.seed);

  Matrix frame_vlads;
  for (const auto& frame : training_frames) {
    append_raw(frame_vlads, vlad_encode(frame.features, model.codebook), normalize);
  }
  model.stage1_basis = pca_fit(frame_vlads, params.D0);
  const Matrix projected = project_rows(model.stage1_basis, frame_vlads);

  const std::size_t d0 = projected.cols();
  const std::size_t h = params.h == 0 || params.h > d0 ? d0 : params.h;
  model.params.h = static_cast<std::uint32_t>(h);
  Matrix head(0, h);
  head.reserve_rows(projected.rows());
  for (std::size_t i = 0; i < projected.rows(); ++i) head.append_row(projected.row(i).first(h));
  const Codebook head_book = kmeans_fit(head, params.alpha2, params.seed + 1u);

  // Full-dimension centers: clustered head, member mean for the remaining
  // components (zero for a center that ends up without members).
  Matrix centers(head_book.k(), d0);
  std::vector<std::size_t> counts(head_book.k(), 0);
  for (std::size_t i = 0; i < projected.rows(); ++i) {
    const std::size_t j = kernels::nearest_center(head.row(i), head_book.centers);
    ++counts[j];
    for (std::size_t f = h; f < d0; ++f) centers(j, f) += projected(i, f);
  }
  for (std::size_t j = 0; j < head_book.k(); ++j) {
    for (std::size_t f = 0; f < h; ++f) centers(j, f) = head_book.centers(j, f);
    if (counts[j] == 0) continue;
    for (std::size_t f = h; f < d0; ++f) centers(j, f) /= static_cast<double>(counts[j]);
  }
  model.stage2 = head_book;
  model.stage2.centers = std::move(centers);

  Matrix rows;
  for (const auto& gof : training_gofs) append_raw(rows, hp_aggregate(gof, model), normalize);
  model.basis = pca_fit(rows, params.D);
  return model;
}

TrainedModel train_model(Method method, const std::vector<std::vector<FrameFeatures>>& videos,
                         ModelParams params) {
  std::vector<GroupOfFrames> gofs;
  std::vector<FrameFeatures> pooled_gofs;
  for (const auto& video : videos) {
    for (auto& gof : split_gofs(video, params.gof_size, params.overlap)) {
      if (method == Method::kVlad) {
        pooled_gofs.push_back({static_cast<std::uint32_t>(pooled_gofs.size()), gof.pooled()});
      }
      gofs.push_back(gof);
    }
  }
  if (gofs.empty()) throw Error(ErrorCode::kEmptyInput, "training videos yield no full windows");

  TrainedModel model;
  const bool normalize = params.normalize != 0;
  switch (method) {
    case Method::kVlad:
      model = train_vlad(pooled_gofs, params.J, params.D, params.seed, normalize);
      break;
    case Method::kVlac:
      model = train_vlac(gofs, params.N, params.M, params.D, params.seed, normalize);
      break;
    case Method::kHp: {
      std::vector<FrameFeatures> frames;
      for (const auto& video : videos) frames.insert(frames.end(), video.begin(), video.end());
      model = train_hp(frames, gofs, params);
      params.h = model.params.h;
      break;
    }
  }
  params.F = model.params.F;
  model.params = params;
  return model;
}

}  // namespace vlac
