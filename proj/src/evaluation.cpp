#include "vlac/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>

#include "vlac/error.hpp"

namespace vlac {

GroundTruth ground_truth_from_queries(const DatasetManifest& queries) {
  GroundTruth truth;
  for (const auto& q : queries.videos) {
    if (!q.source_video_id) {
      throw Error(ErrorCode::kMalformedFile, "query '" + q.video_id + "' has no source_video_id");
    }
    truth.relevant[q.video_id].insert(*q.source_video_id);
  }
  return truth;
}

PRCurve pr_curve(std::span<const ScoredPair> results, const GroundTruth& truth) {
  if (results.empty()) throw Error(ErrorCode::kEmptyResults, "no scored pairs");

  std::vector<std::pair<double, bool>> scored;
  scored.reserve(results.size());
  std::set<std::string> queries;
  for (const auto& r : results) {
    const auto it = truth.relevant.find(r.query_id);
    if (it == truth.relevant.end()) {
      throw Error(ErrorCode::kInvalidArgument, "no ground truth for query '" + r.query_id + "'");
    }
    queries.insert(r.query_id);
    scored.emplace_back(r.score, it->second.contains(r.video_id));
  }
  std::size_t total_relevant = 0;
  for (const auto& q : queries) total_relevant += truth.relevant.at(q).size();
  if (total_relevant == 0) throw Error(ErrorCode::kNoRelevant, "ground truth lists no relevant videos");

  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  PRCurve curve;
  std::size_t tp = 0;
  std::size_t retrieved = 0;
  for (std::size_t i = 0; i < scored.size();) {
    const double threshold = scored[i].first;
    while (i < scored.size() && scored[i].first == threshold) {
      tp += scored[i].second ? 1 : 0;
      ++retrieved;
      ++i;
    }
    curve.points.push_back({threshold, static_cast<double>(tp) / static_cast<double>(retrieved),
                            static_cast<double>(tp) / static_cast<double>(total_relevant)});
  }
  return curve;
}

namespace {

// num/den += a/b in lowest terms; false on overflow.
bool add_fraction(std::uint64_t& num, std::uint64_t& den, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t g = std::gcd(den, b);
  const std::uint64_t scale = b / g;
  std::uint64_t new_den = 0, left = 0, right = 0, total = 0;
  if (__builtin_mul_overflow(den, scale, &new_den) || __builtin_mul_overflow(num, scale, &left) ||
      __builtin_mul_overflow(a, den / g, &right) || __builtin_add_overflow(left, right, &total)) {
    return false;
  }
  const std::uint64_t r = std::gcd(total, new_den);
  num = total / r;
  den = new_den / r;
  return true;
}

}  // namespace

double average_precision(const std::vector<bool>& ranked, std::optional<std::size_t> total_relevant) {
  const auto present = static_cast<std::size_t>(std::count(ranked.begin(), ranked.end(), true));
  const std::size_t denominator = total_relevant.value_or(present);
  if (denominator == 0) throw Error(ErrorCode::kNoRelevant, "average precision needs a relevant item");
  if (denominator < present) {
    throw Error(ErrorCode::kInvalidArgument, "ranking holds more relevant items than total_relevant");
  }
  // Exact rational sum while it fits, so short fixtures come out correctly
  // rounded (e.g. exactly 5/6); long rankings fall back to compensated sums.
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  bool exact = true;
  long double sum = 0.0L;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    if (!ranked[r]) continue;
    ++hits;
    sum += static_cast<long double>(hits) / static_cast<long double>(r + 1);
    if (exact) exact = add_fraction(num, den, hits, r + 1);
  }
  std::uint64_t scaled_den = 0;
  if (exact && !__builtin_mul_overflow(den, static_cast<std::uint64_t>(denominator), &scaled_den) &&
      num < (std::uint64_t{1} << 53) && scaled_den < (std::uint64_t{1} << 53)) {
    return static_cast<double>(num) / static_cast<double>(scaled_den);
  }
  return static_cast<double>(sum / static_cast<long double>(denominator));
}

double mean_average_precision(std::span<const double> average_precisions) {
  if (average_precisions.empty()) throw Error(ErrorCode::kEmptyResults, "no queries to average");
  double sum = 0.0;
  for (double ap : average_precisions) sum += ap;
  return sum / static_cast<double>(average_precisions.size());
}

std::vector<ScoredPair> flatten(const QueryResults& results) {
  std::vector<ScoredPair> out;
  for (const auto& [query_id, result] : results) {
    for (const auto& hit : result.hits) out.push_back({query_id, hit.video_id, hit.score});
  }
  return out;
}

EvaluationSummary evaluate(const QueryResults& results, const GroundTruth& truth) {
  if (results.empty()) throw Error(ErrorCode::kEmptyResults, "no query results");
  EvaluationSummary summary;
  const auto pairs = flatten(results);
  summary.curve = pr_curve(pairs, truth);
  for (const auto& [query_id, result] : results) {
    const auto& relevant = truth.relevant.at(query_id);
    std::vector<bool> flags;
    flags.reserve(result.hits.size());
    for (const auto& hit : result.hits) flags.push_back(relevant.contains(hit.video_id));
    summary.average_precisions.push_back(average_precision(flags, relevant.size()));
  }
  summary.map = mean_average_precision(summary.average_precisions);
  return summary;
}

StabilityMethod parse_stability_method(const std::string& name) {
  if (name == "vlad") return StabilityMethod::kVlad;
  if (name == "hp") return StabilityMethod::kHp;
  if (name == "vlac") return StabilityMethod::kVlac;
  if (name == "sift" || name == "sift-direct") return StabilityMethod::kSiftDirect;
  throw Error(ErrorCode::kInvalidArgument, "unknown stability method '" + name + "'");
}

std::string to_string(StabilityMethod method) {
  switch (method) {
    case StabilityMethod::kVlad: return "vlad";
    case StabilityMethod::kHp: return "hp";
    case StabilityMethod::kVlac: return "vlac";
    case StabilityMethod::kSiftDirect: return "sift-direct";
  }
  return "unknown";
}

ProjectionBasis stability_basis(const std::vector<std::vector<FrameFeatures>>& videos, StabilityMethod method,
                                const ModelParams& params) {
  switch (method) {
    case StabilityMethod::kVlad: return train_model(Method::kVlad, videos, params).basis;
    case StabilityMethod::kHp: return train_model(Method::kHp, videos, params).basis;
    case StabilityMethod::kVlac: return train_model(Method::kVlac, videos, params).basis;
    case StabilityMethod::kSiftDirect: {
      Matrix pooled;
      for (const auto& video : videos) {
        const Matrix m = pool_features(video);
        if (pooled.cols() != m.cols()) pooled = Matrix(0, m.cols());
        pooled.append_rows(m);
      }
      return pca_fit(pooled, params.D);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown stability method");
}

StabilityScore stability_experiment(const std::vector<std::vector<FrameFeatures>>& clean_videos,
                                    const PerturbationSpec& perturbation, StabilityMethod method,
                                    const ModelParams& params) {
  std::vector<std::vector<FrameFeatures>> noisy;
  noisy.reserve(clean_videos.size());
  PerturbationSpec spec = perturbation;
  for (const auto& video : clean_videos) {
    noisy.push_back(perturb(video, spec));
    ++spec.seed;
  }
  const ProjectionBasis a = stability_basis(clean_videos, method, params);
  const ProjectionBasis b = stability_basis(noisy, method, params);
  return {basis_alignment_score(a, b), sign_aligned_alignment_score(a, b), a.dim()};
}

void write_pr_csv_header(std::ostream& out) { out << "method,D,threshold,precision,recall\n"; }

void write_pr_csv_rows(std::ostream& out, const std::string& method, std::size_t D, const PRCurve& curve) {
  const auto old = out.precision(17);
  for (const auto& p : curve.points) {
    out << method << ',' << D << ',' << p.threshold << ',' << p.precision << ',' << p.recall << '\n';
  }
  out.precision(old);
}

void write_map_csv_header(std::ostream& out) { out << "method,D,mAP\n"; }

void write_map_csv_row(std::ostream& out, const std::string& method, std::size_t D, double map) {
  const auto old = out.precision(17);
  out << method << ',' << D << ',' << map << '\n';
  out.precision(old);
}

void write_pr_svg(std::ostream& out, std::span<const LabeledCurve> curves) {
  constexpr double kWidth = 480, kHeight = 360, kMargin = 40;
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  const double w = kWidth - 2 * kMargin;
  const double h = kHeight - 2 * kMargin;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
  out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 8 << "\" text-anchor=\"middle\">recall</text>\n";
  out << "<text x=\"12\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 12 " << kHeight / 2
      << ")\" text-anchor=\"middle\">precision</text>\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = kColors[c % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto& p : curves[c].curve.points) {
      out << kMargin + p.recall * w << ',' << kMargin + (1.0 - p.precision) * h << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << kMargin + 8 << "\" y=\"" << kMargin + 16 + 16 * static_cast<double>(c) << "\" fill=\""
        << color << "\">" << curves[c].label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace vlac
