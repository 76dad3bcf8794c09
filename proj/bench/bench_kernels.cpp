// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "vlac/aggregation.hpp"
#include "vlac/dataset.hpp"
#include "vlac/kernels.hpp"
#include "vlac/random.hpp"
#include "vlac/search.hpp"

namespace {

vlac::Matrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  vlac::Rng rng(seed);
  vlac::Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.normal();
  return m;
}

template <bool Serial>
void BM_Assign(benchmark::State& state) {
  const auto points = gaussian(static_cast<std::size_t>(state.range(0)), 16, 1);
  const auto centers = gaussian(static_cast<std::size_t>(state.range(1)), 16, 2);
  std::vector<std::size_t> labels(points.rows());
  std::vector<double> distances(points.rows());
  for (auto _ : state) {
    if constexpr (Serial) {
      vlac::kernels::serial::assign(points, centers, 0, labels, distances);
    } else {
      vlac::kernels::assign(points, centers, 0, labels, distances);
    }
    benchmark::DoNotOptimize(labels.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Serial>
void BM_AggregateResiduals(benchmark::State& state) {
  const auto points = gaussian(static_cast<std::size_t>(state.range(0)), 16, 3);
  const auto centers = gaussian(static_cast<std::size_t>(state.range(1)), 16, 4);
  for (auto _ : state) {
    auto out = Serial ? vlac::kernels::serial::aggregate_residuals(points, centers)
                      : vlac::kernels::aggregate_residuals(points, centers);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct EncodeFixture {
  std::vector<std::vector<vlac::FrameFeatures>> videos;
  vlac::TrainedModel model;

  explicit EncodeFixture(vlac::Method method) {
    vlac::SynthOptions o;
    o.num_videos = 4;
    o.frames_per_video = 60;
    o.seed = 9;
    videos = vlac::synthesize_videos(o);
    vlac::ModelParams p;
    p.J = 32;
    p.N = 64;
    p.M = 16;
    p.D = 16;
    p.D0 = 64;
    p.alpha1 = 16;
    p.alpha2 = 4;
    p.h = 16;
    model = vlac::train_model(method, videos, p);
  }
};

template <bool Serial>
void BM_EncodeVideo(benchmark::State& state) {
  static const EncodeFixture vlad(vlac::Method::kVlad), vlac_fixture(vlac::Method::kVlac), hp(vlac::Method::kHp);
  const EncodeFixture* fixtures[] = {&vlad, &vlac_fixture, &hp};
  const auto& f = *fixtures[state.range(0)];
  state.SetLabel(std::string(vlac::to_string(f.model.method)));
  for (auto _ : state) {
    auto out = Serial ? vlac::serial::encode_video(f.videos[0], f.model) : vlac::encode_video(f.videos[0], f.model);
    benchmark::DoNotOptimize(out);
  }
}

template <bool Serial>
void BM_Retrieve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<vlac::DescriptorSequence> store;
  for (std::size_t i = 0; i < n; ++i) {
    const auto m = gaussian(30, 128, 100 + i);
    std::vector<vlac::CompactDescriptor> descs;
    for (std::size_t g = 0; g < m.rows(); ++g) descs.push_back({{m.row(g).begin(), m.row(g).end()}, vlac::Method::kVlac, g});
    store.push_back(vlac::make_sequence("v" + std::to_string(i), vlac::Method::kVlac, std::move(descs)));
  }
  const auto q = gaussian(10, 128, 7);
  std::vector<vlac::CompactDescriptor> qd;
  for (std::size_t g = 0; g < q.rows(); ++g) qd.push_back({{q.row(g).begin(), q.row(g).end()}, vlac::Method::kVlac, g});
  const auto query = vlac::make_sequence("q", vlac::Method::kVlac, std::move(qd));
  for (auto _ : state) {
    auto r = Serial ? vlac::serial::retrieve(query, store) : vlac::retrieve(query, store);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Assign<true>)->Name("assign/serial")->Args({20000, 64})->Args({100000, 128});
BENCHMARK(BM_Assign<false>)->Name("assign/omp")->Args({20000, 64})->Args({100000, 128});
BENCHMARK(BM_AggregateResiduals<true>)->Name("aggregate_residuals/serial")->Args({20000, 64})->Args({100000, 128});
BENCHMARK(BM_AggregateResiduals<false>)->Name("aggregate_residuals/omp")->Args({20000, 64})->Args({100000, 128});
BENCHMARK(BM_EncodeVideo<true>)->Name("encode_video/serial")->DenseRange(0, 2);
BENCHMARK(BM_EncodeVideo<false>)->Name("encode_video/omp")->DenseRange(0, 2);
BENCHMARK(BM_Retrieve<true>)->Name("retrieve/serial")->Arg(100)->Arg(1000);
BENCHMARK(BM_Retrieve<false>)->Name("retrieve/omp")->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
