#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vlac/aggregation.hpp"
#include "vlac/dataset.hpp"
#include "vlac/search.hpp"

namespace vlac {

/// query_id -> relevant video_ids.
struct GroundTruth {
  std::map<std::string, std::set<std::string>> relevant;
};

/// Video-level relevance: each query is relevant to the video it was cut from.
GroundTruth ground_truth_from_queries(const DatasetManifest& queries);

struct ScoredPair {
  std::string query_id;
  std::string video_id;
  double score = 0.0;
};

struct PRPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

/// Points in descending threshold order.
struct PRCurve {
  std::vector<PRPoint> points;
};

/// Sweeps the threshold over every distinct score. Recall counts every
/// relevant id in `truth` for the scored queries, so truncated result lists
/// never reach recall 1. Thresholds that retrieve nothing are omitted.
PRCurve pr_curve(std::span<const ScoredPair> results, const GroundTruth& truth);

/// Mean over relevant ranks r of precision@r. `total_relevant` defaults to the
/// number of relevant flags in `ranked`; pass a larger count when the ranking
/// is truncated.
double average_precision(const std::vector<bool>& ranked, std::optional<std::size_t> total_relevant = std::nullopt);

double mean_average_precision(std::span<const double> average_precisions);

using QueryResults = std::vector<std::pair<std::string, RetrievalResult>>;

std::vector<ScoredPair> flatten(const QueryResults& results);

struct EvaluationSummary {
  PRCurve curve;
  std::vector<double> average_precisions;
  double map = 0.0;
};

EvaluationSummary evaluate(const QueryResults& results, const GroundTruth& truth);

// Eigenbasis stability

enum class StabilityMethod { kVlad, kHp, kVlac, kSiftDirect };

StabilityMethod parse_stability_method(const std::string& name);
std::string to_string(StabilityMethod method);

struct StabilityScore {
  double raw = 0.0;
  /// Each row pair counted with its sign agreement, i.e. sum |<a_i, b_i>|.
  double sign_aligned = 0.0;
  std::size_t dim = 0;
};

/// Final compaction basis of `method` trained on `videos`; the raw-feature
/// PCA for kSiftDirect.
ProjectionBasis stability_basis(const std::vector<std::vector<FrameFeatures>>& videos, StabilityMethod method,
                                const ModelParams& params);

/// Trains the pipeline on the clean videos and on a perturbed copy, and scores
/// how well the two compaction bases agree.
StabilityScore stability_experiment(const std::vector<std::vector<FrameFeatures>>& clean_videos,
                                    const PerturbationSpec& perturbation, StabilityMethod method,
                                    const ModelParams& params);

// Reports

void write_pr_csv_header(std::ostream& out);
void write_pr_csv_rows(std::ostream& out, const std::string& method, std::size_t D, const PRCurve& curve);
void write_map_csv_header(std::ostream& out);
void write_map_csv_row(std::ostream& out, const std::string& method, std::size_t D, double map);

struct LabeledCurve {
  std::string label;
  PRCurve curve;
};
/// Precision (y) against recall (x), one polyline per curve.
void write_pr_svg(std::ostream& out, std::span<const LabeledCurve> curves);

}  // namespace vlac
