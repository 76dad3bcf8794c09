#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "vlac/dataset.hpp"
#include "vlac/error.hpp"
#include "vlac/features_io.hpp"

using vlac::FrameFeatures;
using vlac::Matrix;
using vlac::PerturbationSpec;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> pooled_mean(const std::vector<FrameFeatures>& frames) {
  std::vector<double> sum;
  std::size_t n = 0;
  for (const auto& f : frames) {
    for (std::size_t i = 0; i < f.features.rows(); ++i) {
      auto row = f.features.row(i);
      sum.resize(row.size(), 0.0);
      for (std::size_t d = 0; d < row.size(); ++d) sum[d] += row[d];
      ++n;
    }
  }
  for (double& s : sum) s /= static_cast<double>(n);
  return sum;
}

double distance(const std::vector<double>& a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

vlac::SynthOptions tiny() {
  vlac::SynthOptions o;
  o.num_videos = 3;
  o.frames_per_video = 12;
  o.dim = 4;
  o.clusters = 5;
  o.features_per_frame = 6;
  o.seed = 7;
  return o;
}

}  // namespace

TEST_CASE("synthesize_dataset is deterministic") {
  auto a = testing::scratch_dir("synth_a");
  auto b = testing::scratch_dir("synth_b");
  auto ma = vlac::synthesize_dataset(tiny(), a);
  auto mb = vlac::synthesize_dataset(tiny(), b);
  CHECK(ma == mb);
  REQUIRE(ma.videos.size() == 3);
  for (const auto& v : ma.videos) CHECK(slurp(a / v.feature_file) == slurp(b / v.feature_file));

  auto other = tiny();
  other.seed = 8;
  auto x = vlac::synthesize_videos(tiny());
  auto y = vlac::synthesize_videos(other);
  CHECK(distance(pooled_mean(x[0]), pooled_mean(y[0])) > 0.0);
}

TEST_CASE("one zero-variance cluster yields its mean everywhere") {
  auto o = tiny();
  o.clusters = 1;
  o.within_std = 0.0;
  o.frame_jitter = 0.0;
  vlac::Rng rng(o.seed);
  auto vocab = vlac::draw_vocabulary(o.dim, 1, o.mean_spread, 0.0, rng);
  auto videos = vlac::synthesize_videos(o);
  for (const auto& video : videos) {
    for (const auto& f : video) {
      for (std::size_t i = 0; i < f.features.rows(); ++i) {
        for (std::size_t d = 0; d < o.dim; ++d) {
          CHECK(f.features(i, d) == static_cast<double>(static_cast<float>(vocab.means(0, d))));
        }
      }
    }
  }
}

TEST_CASE("disjoint mixing weights separate pooled means") {
  // Two components 10 apart, std 0.5: each pooled mean sits near its own
  // component mean, so the means differ by about 10.
  vlac::MixtureVocabulary vocab{Matrix::from_rows({{0.0, 0.0}, {6.0, 8.0}}), 0.5};
  vlac::Rng rng(3);
  const std::vector<double> w1{1.0, 0.0}, w2{0.0, 1.0};
  auto s1 = vlac::sample_mixture(vocab, w1, 4000, rng);
  auto s2 = vlac::sample_mixture(vocab, w2, 4000, rng);
  auto m1 = pooled_mean({{0, s1}});
  auto m2 = pooled_mean({{0, s2}});
  // 5 standard errors of a 4000-sample mean
  const double tol = 5.0 * 0.5 / std::sqrt(4000.0);
  CHECK(distance(m1, vocab.means.row(0)) < tol * std::sqrt(2.0));
  CHECK(distance(m2, vocab.means.row(1)) < tol * std::sqrt(2.0));
  CHECK(distance(m1, m2) > vocab.within_std);
  CHECK(distance(m1, m2) == doctest::Approx(10.0).epsilon(0.01));
}

TEST_CASE("perturb") {
  std::mt19937_64 gen(2);
  auto frames = testing::random_frames(gen, 4, 7, 5);
  frames[1].features = Matrix(0, 5);
  vlac::round_to_f32(frames);

  SUBCASE("zero magnitude is the identity") {
    for (auto kind : {PerturbationSpec::Kind::kAdditiveGaussian, PerturbationSpec::Kind::kComponentDropout,
                      PerturbationSpec::Kind::kGain}) {
      auto out = vlac::perturb(frames, {kind, 0.0, 4});
      REQUIRE(out.size() == frames.size());
      for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(out[i].frame_index == frames[i].frame_index);
        CHECK(out[i].features == frames[i].features);
      }
    }
  }

  SUBCASE("gain of one doubles every component") {
    auto out = vlac::perturb(frames, {PerturbationSpec::Kind::kGain, 1.0, 0});
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t k = 0; k < out[i].features.values().size(); ++k) {
        CHECK(out[i].features.values()[k] == 2.0 * frames[i].features.values()[k]);
      }
    }
  }

  SUBCASE("dropout zeroes components or keeps them") {
    auto out = vlac::perturb(frames, {PerturbationSpec::Kind::kComponentDropout, 0.5, 1});
    std::size_t zeroed = 0, total = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t k = 0; k < out[i].features.values().size(); ++k) {
        const double v = out[i].features.values()[k];
        CHECK((v == 0.0 || v == frames[i].features.values()[k]));
        zeroed += v == 0.0;
        ++total;
      }
    }
    CHECK(zeroed > 0);
    CHECK(zeroed < total);
    auto all = vlac::perturb(frames, {PerturbationSpec::Kind::kComponentDropout, 1.0, 1});
    for (const auto& f : all)
      for (double v : f.features.values()) CHECK(v == 0.0);
  }

  SUBCASE("gaussian noise has the requested std") {
    std::vector<FrameFeatures> zeros{{0, Matrix(10000, 1)}};
    auto out = vlac::perturb(zeros, {PerturbationSpec::Kind::kAdditiveGaussian, 0.1, 5});
    double sum = 0.0, sq = 0.0;
    for (double v : out[0].features.values()) {
      sum += v;
      sq += v * v;
    }
    const double n = 10000.0;
    const double sd = std::sqrt((sq - sum * sum / n) / (n - 1.0));
    CHECK(sd >= 0.097);
    CHECK(sd <= 0.103);
  }

  SUBCASE("same seed, same output") {
    PerturbationSpec spec{PerturbationSpec::Kind::kAdditiveGaussian, 0.3, 11};
    auto a = vlac::perturb(frames, spec);
    auto b = vlac::perturb(frames, spec);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].features == b[i].features);
  }

  SUBCASE("invalid magnitudes") {
    CHECK_THROWS_AS(vlac::perturb(frames, {PerturbationSpec::Kind::kGain, -0.5, 0}), vlac::Error);
    CHECK_THROWS_AS(vlac::perturb(frames, {PerturbationSpec::Kind::kComponentDropout, 1.5, 0}), vlac::Error);
  }
}

TEST_CASE("manifest round trip and validation") {
  auto dir = testing::scratch_dir("manifest");
  auto m = vlac::synthesize_dataset(tiny(), dir);
  m.videos[0].source_video_id = "video000";
  m.videos[0].start_frame = 3;
  vlac::write_manifest(m, dir / "m.json");
  CHECK(vlac::read_manifest(dir / "m.json") == m);
  CHECK_NOTHROW(vlac::validate_manifest(m, dir));

  auto text = slurp(dir / "m.json");
  for (const char* field : {"video_id", "feature_file", "fps_sampled", "label", "feature_dim", "notes"}) {
    CHECK(text.find(std::string("\"") + field + "\"") != std::string::npos);
  }

  auto dup = m;
  dup.videos[1].video_id = dup.videos[0].video_id;
  CHECK_THROWS_AS(vlac::validate_manifest(dup, dir), vlac::Error);
  auto missing = m;
  missing.videos[2].feature_file = "nowhere.vlacfeat";
  CHECK_THROWS_AS(vlac::validate_manifest(missing, dir), vlac::Error);
}

TEST_CASE("make_queries") {
  auto o = tiny();
  o.num_videos = 10;
  auto videos = vlac::synthesize_videos(o);
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) ids.push_back("v" + std::to_string(i));

  SUBCASE("full-length segment equals the video") {
    auto q = vlac::make_query_segments(videos, ids, o.frames_per_video, 0, 1);
    REQUIRE(q.size() == 10);
    for (std::size_t i = 0; i < q.size(); ++i) {
      CHECK(q[i].start_frame == 0);
      REQUIRE(q[i].frames.size() == videos[i].size());
      for (std::size_t f = 0; f < q[i].frames.size(); ++f) CHECK(q[i].frames[f].features == videos[i][f].features);
    }
  }

  SUBCASE("one query per video linked to its source") {
    auto q = vlac::make_query_segments(videos, ids, 5, 2, 9);
    REQUIRE(q.size() == 10);
    for (std::size_t i = 0; i < q.size(); ++i) {
      CHECK(q[i].source_video_id == ids[i]);
      CHECK(q[i].start_frame >= 2);
      CHECK(q[i].start_frame + 5 <= o.frames_per_video);
      CHECK(q[i].frames.front().frame_index == q[i].start_frame);
    }
  }

  SUBCASE("files are byte-identical across runs") {
    auto a = testing::scratch_dir("queries_a");
    auto b = testing::scratch_dir("queries_b");
    auto ma = vlac::synthesize_dataset(o, a);
    vlac::synthesize_dataset(o, b);
    auto qa = vlac::make_queries(ma, a, 6, 0, 4);
    auto qb = vlac::make_queries(ma, b, 6, 0, 4);
    CHECK(qa == qb);
    for (const auto& v : qa.videos) {
      CHECK(v.source_video_id.has_value());
      CHECK(slurp(a / v.feature_file) == slurp(b / v.feature_file));
    }
  }

  SUBCASE("video too short") {
    try {
      vlac::make_query_segments(videos, ids, o.frames_per_video, 1, 0);
      FAIL("expected VideoTooShort");
    } catch (const vlac::Error& e) {
      CHECK(e.code() == vlac::ErrorCode::kVideoTooShort);
    }
  }
}
