#include "vlac/search.hpp"

#include <algorithm>
#include <string>

#include "vlac/error.hpp"

namespace vlac {
namespace {

void check_pair(const DescriptorSequence& a, const DescriptorSequence& b) {
  if (a.length() == 0 || b.length() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "cannot align an empty descriptor sequence");
  }
  if (a.dim() != b.dim() || a.method != b.method) {
    throw Error(ErrorCode::kDimensionMismatch, "sequences '" + a.video_id + "' (" + std::string(to_string(a.method)) +
                                                   ", D=" + std::to_string(a.dim()) + ") and '" + b.video_id + "' (" +
                                                   std::string(to_string(b.method)) +
                                                   ", D=" + std::to_string(b.dim()) + ") are not comparable");
  }
}

RetrievalResult rank(std::vector<RetrievalHit> hits, const RetrievalMode& mode) {
  if (mode.kind == RetrievalMode::Kind::kThreshold) {
    std::erase_if(hits, [&](const RetrievalHit& h) { return !(h.score >= mode.threshold); });
  }
  std::stable_sort(hits.begin(), hits.end(), [](const RetrievalHit& a, const RetrievalHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.video_id < b.video_id;
  });
  if (mode.kind == RetrievalMode::Kind::kTopK && hits.size() > mode.k) hits.resize(mode.k);
  return {std::move(hits)};
}

void check_store(std::span<const DescriptorSequence> store) {
  if (store.empty()) throw Error(ErrorCode::kEmptyStore, "descriptor store is empty");
}

}  // namespace

bool DescriptorSequence::operator==(const DescriptorSequence& other) const {
  if (video_id != other.video_id || method != other.method || descriptors.size() != other.descriptors.size()) {
    return false;
  }
  for (std::size_t i = 0; i < descriptors.size(); ++i) {
    if (descriptors[i].values != other.descriptors[i].values) return false;
  }
  return true;
}

DescriptorSequence make_sequence(std::string video_id, Method method, std::vector<CompactDescriptor> descriptors) {
  for (auto& d : descriptors) {
    for (double& v : d.values) v = static_cast<double>(static_cast<float>(v));
  }
  return {std::move(video_id), method, std::move(descriptors)};
}

double similarity(const CompactDescriptor& a, const CompactDescriptor& b) {
  if (a.values.size() != b.values.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "descriptors of dimension " + std::to_string(a.values.size()) +
                                                   " and " + std::to_string(b.values.size()));
  }
  return dot(a.values, b.values);
}

Alignment aligned_similarity(const DescriptorSequence& query, const DescriptorSequence& target,
                             const AlignmentOptions& options) {
  check_pair(query, target);
  const bool swap = query.length() > target.length();
  const auto& shorter = swap ? target : query;
  const auto& longer = swap ? query : target;
  const std::size_t g1 = shorter.length();
  const std::size_t g2 = longer.length();

  Alignment best;
  const std::size_t first_shift = options.strict_shift_range ? 1 : 0;
  for (std::size_t k = first_shift; k <= g2 - g1; ++k) {
    double s = 0.0;
    for (std::size_t g = 0; g < g1; ++g) s += dot(shorter.descriptors[g].values, longer.descriptors[g + k].values);
    if (best.offset < 0 || s > best.score) {
      best.score = s;
      best.offset = static_cast<std::ptrdiff_t>(k);
    }
  }
  if (options.normalize_by_length && best.offset >= 0) best.score /= static_cast<double>(g1);
  return best;
}

RetrievalResult retrieve(const DescriptorSequence& query, std::span<const DescriptorSequence> store,
                         const RetrievalMode& mode, const AlignmentOptions& options) {
  check_store(store);
  for (const auto& entry : store) check_pair(query, entry);
  std::vector<RetrievalHit> hits(store.size());
  const auto n = static_cast<std::ptrdiff_t>(store.size());
#pragma omp parallel for schedule(static) if (n > 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Alignment a = aligned_similarity(query, store[i], options);
    hits[i] = {store[i].video_id, a.score, a.offset};
  }
  return rank(std::move(hits), mode);
}

namespace serial {

RetrievalResult retrieve(const DescriptorSequence& query, std::span<const DescriptorSequence> store,
                         const RetrievalMode& mode, const AlignmentOptions& options) {
  check_store(store);
  std::vector<RetrievalHit> hits;
  hits.reserve(store.size());
  for (const auto& entry : store) {
    const Alignment a = aligned_similarity(query, entry, options);
    hits.push_back({entry.video_id, a.score, a.offset});
  }
  return rank(std::move(hits), mode);
}

}  // namespace serial
}  // namespace vlac
