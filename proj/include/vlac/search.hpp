#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "vlac/aggregation.hpp"

namespace vlac {

/// Compact descriptors of one video's windows, in temporal order.
struct DescriptorSequence {
  std::string video_id;
  Method method = Method::kVlad;
  std::vector<CompactDescriptor> descriptors;

  std::size_t length() const noexcept { return descriptors.size(); }
  std::size_t dim() const noexcept { return descriptors.empty() ? 0 : descriptors.front().values.size(); }

  bool operator==(const DescriptorSequence& other) const;
};

/// Builds a sequence with every value rounded to f32, matching what the store
/// file holds.
DescriptorSequence make_sequence(std::string video_id, Method method, std::vector<CompactDescriptor> descriptors);

double similarity(const CompactDescriptor& a, const CompactDescriptor& b);

struct AlignmentOptions {
  /// Divide the summed inner products by the shorter sequence length.
  bool normalize_by_length = false;
  /// Use only shifts 1..(G2-G1), excluding the zero shift. With equal lengths
  /// no alignment exists and the score is -infinity.
  bool strict_shift_range = false;
};

struct Alignment {
  double score = -std::numeric_limits<double>::infinity();
  /// Position of the shorter sequence inside the longer one; -1 when no
  /// alignment exists.
  std::ptrdiff_t offset = -1;
};

/// Maximum over shifts k of sum_g <short_g, long_{g+k}>. The shorter of the two
/// sequences slides along the longer; ties go to the smallest shift.
Alignment aligned_similarity(const DescriptorSequence& query, const DescriptorSequence& target,
                             const AlignmentOptions& options = {});

struct RetrievalHit {
  std::string video_id;
  double score = 0.0;
  std::ptrdiff_t offset = 0;

  bool operator==(const RetrievalHit&) const = default;
};

/// Hits ordered by score (descending), then video_id (ascending).
struct RetrievalResult {
  std::vector<RetrievalHit> hits;
};

struct RetrievalMode {
  enum class Kind { kAll, kThreshold, kTopK };
  Kind kind = Kind::kAll;
  double threshold = 0.0;
  std::size_t k = 0;

  static RetrievalMode all() { return {}; }
  static RetrievalMode above(double theta) { return {Kind::kThreshold, theta, 0}; }
  static RetrievalMode top(std::size_t k) { return {Kind::kTopK, 0.0, k}; }
};

/// Scores the query against every store entry (in parallel) and ranks them.
RetrievalResult retrieve(const DescriptorSequence& query, std::span<const DescriptorSequence> store,
                         const RetrievalMode& mode = RetrievalMode::all(), const AlignmentOptions& options = {});

namespace serial {
RetrievalResult retrieve(const DescriptorSequence& query, std::span<const DescriptorSequence> store,
                         const RetrievalMode& mode = RetrievalMode::all(), const AlignmentOptions& options = {});
}

}  // namespace vlac
