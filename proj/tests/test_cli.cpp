#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "vlac/cli.hpp"
#include "vlac/dataset.hpp"
#include "vlac/model_io.hpp"
#include "vlac/store_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string log;
};

Outcome vlac_run(std::vector<std::string> args) {
  args.insert(args.begin(), "vlac");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, log;
  const int code = vlac::cli::run(static_cast<int>(argv.size()), argv.data(), out, log);
  return {code, out.str(), log.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> small_params() {
  return {"--J", "8", "--N", "16", "--M", "8", "--D", "8", "--D0", "32", "--alpha1", "8", "--alpha2", "4", "--hp-head", "8"};
}

std::vector<std::string> with(std::vector<std::string> args, const std::vector<std::string>& more) {
  args.insert(args.end(), more.begin(), more.end());
  return args;
}

// 10 database videos, 10 queries and 4 training videos of 30 frames.
fs::path synth_root(const std::string& name) {
  auto root = testing::scratch_dir(name);
  auto r = vlac_run({"synth", "--data-root", root.string(), "--videos", "10", "--frames", "30", "--dim", "8",
                     "--features-per-frame", "24", "--clusters", "8", "--train-videos", "4", "--query-len", "12",
                     "--seed", "7"});
  REQUIRE(r.code == 0);
  return root;
}

}  // namespace

TEST_CASE("synth") {
  auto root = synth_root("cli_synth");
  auto db = vlac::read_manifest(root / "videos.json");
  auto queries = vlac::read_manifest(root / "queries.json");
  CHECK(db.videos.size() == 10);
  CHECK(queries.videos.size() == 10);
  CHECK(vlac::read_manifest(root / "train.json").videos.size() == 4);
  CHECK(db.feature_dim == 8);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(fs::exists(root / db.videos[i].feature_file));
    CHECK(queries.videos[i].source_video_id == db.videos[i].video_id);
  }

  auto again = testing::scratch_dir("cli_synth_again");
  auto r = vlac_run({"synth", "--data-root", again.string(), "--videos", "10", "--frames", "30", "--dim", "8",
                     "--features-per-frame", "24", "--clusters", "8", "--train-videos", "4", "--query-len", "12",
                     "--seed", "7"});
  REQUIRE(r.code == 0);
  for (const char* file : {"videos.json", "queries.json", "videos/video003.vlacfeat", "queries/q_video005.vlacfeat"}) {
    CHECK(slurp(root / file) == slurp(again / file));
  }

  CHECK(vlac_run({"synth", "--data-root", again.string(), "--videos", "0"}).code != 0);
  CHECK(vlac_run({"frobnicate"}).code != 0);
  CHECK(vlac_run({}).code != 0);
}

TEST_CASE("train") {
  auto root = synth_root("cli_train");
  auto base = with({"train", "--data-root", root.string(), "--manifest", "train.json", "--method", "vlac"}, small_params());

  auto r = vlac_run(with(base, {"--out", "a.model"}));
  REQUIRE(r.code == 0);
  auto model = vlac::load_model(root / "a.model");
  CHECK(model.method == vlac::Method::kVlac);
  CHECK(model.params.M == 8);
  CHECK(model.params.F == 8);
  CHECK(r.log.find("\"event\":\"train\"") != std::string::npos);
  CHECK(r.log.find("\"eigenvalues\"") != std::string::npos);

  REQUIRE(vlac_run(with(base, {"--out", "b.model"})).code == 0);
  CHECK(slurp(root / "a.model") == slurp(root / "b.model"));

  auto too_many = vlac_run({"train", "--data-root", root.string(), "--manifest", "train.json", "--method", "vlad", "--J",
                            "100000"});
  CHECK(too_many.code == vlac::cli::kExitDataError);
  CHECK(too_many.log.find("KTooLarge") != std::string::npos);

  CHECK(vlac_run({"train", "--data-root", root.string(), "--manifest", "missing.json"}).code ==
        vlac::cli::kExitDataError);
  CHECK(vlac_run(with(base, {"--overlap", "5", "--gof-size", "5"})).code == vlac::cli::kExitDataError);
}

TEST_CASE("config file with flag overrides") {
  auto root = synth_root("cli_config");
  {
    std::ofstream cfg(root / "run.json");
    cfg << R"({"method": "vlad", "J": 6, "D": 5, "seed": 3, "gof_size": 3, "overlap": 0})";
  }
  auto r = vlac_run({"train", "--data-root", root.string(), "--config", (root / "run.json").string(), "--manifest",
                     "train.json", "--D", "4"});
  REQUIRE(r.code == 0);
  auto model = vlac::load_model(root / "model.vlacmodel");
  CHECK(model.method == vlac::Method::kVlad);
  CHECK(model.params.J == 6);
  CHECK(model.params.D == 4);
  CHECK(model.params.seed == 3);
  CHECK(model.params.gof_size == 3);

  {
    std::ofstream bad(root / "bad.json");
    bad << R"({"method": "vlad", "gamma": 2})";
  }
  CHECK(vlac_run({"train", "--data-root", root.string(), "--config", (root / "bad.json").string(), "--manifest",
                  "train.json"})
            .code == vlac::cli::kExitDataError);
}

TEST_CASE("encode") {
  auto root = synth_root("cli_encode");
  for (const char* method : {"vlad", "vlac", "hp"}) {
    CAPTURE(method);
    const std::string m(method);
    REQUIRE(vlac_run(with({"train", "--data-root", root.string(), "--manifest", "train.json", "--method", m, "--out",
                           m + ".model"},
                          small_params()))
                .code == 0);
    REQUIRE(vlac_run({"encode", "--data-root", root.string(), "--model", m + ".model", "--manifest", "videos.json",
                      "--out", m + ".store"})
                .code == 0);
  }
  auto vlad = vlac::load_store(root / "vlad.store");
  auto vlac_store = vlac::load_store(root / "vlac.store");
  REQUIRE(vlad.size() == 10);
  REQUIRE(vlac_store.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(vlad[i].length() == vlac_store[i].length());
    CHECK(vlad[i].length() == 7);  // 30 frames, windows of 5 with stride 4
    CHECK(vlad[i].dim() == 8);
  }

  // store file survives a decode/encode cycle unchanged
  std::ostringstream rewritten;
  vlac::write_store(vlad, rewritten);
  CHECK(rewritten.str() == slurp(root / "vlad.store"));

  REQUIRE(vlac_run(with({"train", "--data-root", root.string(), "--manifest", "train.json", "--method", "vlad", "--out",
                         "g1.model", "--gof-size", "1", "--overlap", "0"},
                        small_params()))
              .code == 0);
  REQUIRE(vlac_run({"encode", "--data-root", root.string(), "--model", "g1.model", "--manifest", "videos.json", "--out",
                    "g1.store"})
              .code == 0);
  CHECK(vlac::load_store(root / "g1.store").front().length() == 30);
}

TEST_CASE("search") {
  auto root = synth_root("cli_search");
  REQUIRE(vlac_run(with({"train", "--data-root", root.string(), "--manifest", "train.json", "--method", "vlac"},
                        small_params()))
              .code == 0);
  REQUIRE(vlac_run({"encode", "--data-root", root.string(), "--manifest", "videos.json", "--out", "db.store"}).code == 0);
  REQUIRE(vlac_run({"encode", "--data-root", root.string(), "--manifest", "queries.json", "--out", "q.store"}).code == 0);

  SUBCASE("database against itself, top-1") {
    REQUIRE(vlac_run({"search", "--data-root", root.string(), "--store", "db.store", "--queries", "db.store",
                      "--top-k", "1", "--out", "self.csv"})
                .code == 0);
    std::istringstream csv(slurp(root / "self.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "query_id,rank,video_id,score,offset");
    int rows = 0;
    while (std::getline(csv, line)) {
      const auto first = line.substr(0, line.find(','));
      CHECK(line.find(first + ",1," + first + ",") == 0);
      ++rows;
    }
    CHECK(rows == 10);
  }

  SUBCASE("threshold above every score leaves only the header") {
    REQUIRE(vlac_run({"search", "--data-root", root.string(), "--store", "db.store", "--queries", "q.store",
                      "--threshold", "1e300", "--out", "none.csv"})
                .code == 0);
    CHECK(slurp(root / "none.csv") == "query_id,rank,video_id,score,offset\n");
  }

  SUBCASE("job count does not change results") {
    REQUIRE(vlac_run({"search", "--data-root", root.string(), "--store", "db.store", "--queries", "q.store", "--jobs",
                      "1", "--out", "j1.csv"})
                .code == 0);
    REQUIRE(vlac_run({"search", "--data-root", root.string(), "--store", "db.store", "--queries", "q.store", "--jobs",
                      "8", "--out", "j8.csv"})
                .code == 0);
    CHECK(slurp(root / "j1.csv") == slurp(root / "j8.csv"));
  }
}

TEST_CASE("evaluate") {
  auto root = testing::scratch_dir("cli_evaluate");
  vlac::DatasetManifest truth;
  for (const char* q : {"q1", "q2", "q3"}) {
    vlac::VideoEntry e;
    e.video_id = q;
    e.feature_file = std::string("queries/") + q + ".vlacfeat";
    e.source_video_id = std::string("v") + q[1];
    truth.videos.push_back(e);
  }
  vlac::write_manifest(truth, root / "truth.json");

  SUBCASE("perfect separation") {
    std::ofstream(root / "r.csv") << "query_id,rank,video_id,score,offset\n"
                                     "q1,1,v1,3,0\nq1,2,v2,1,0\n"
                                     "q2,1,v2,2.5,0\nq2,2,v3,2,0\n"
                                     "q3,1,v3,4,0\nq3,2,v1,0.5,0\n";
    auto r = vlac_run({"evaluate", "--data-root", root.string(), "--truth", "truth.json", "--results", "r.csv",
                       "--label", "vlac", "--D", "16", "--svg", "pr.svg"});
    REQUIRE(r.code == 0);
    CHECK(slurp(root / "map.csv") == "method,D,mAP\nvlac,16,1\n");
    CHECK(slurp(root / "pr.csv").rfind("method,D,threshold,precision,recall\n", 0) == 0);
    CHECK(fs::exists(root / "pr.svg"));
  }

  SUBCASE("ranks 1, 2 and 1 give 5/6") {
    std::ofstream(root / "r.csv") << "query_id,rank,video_id,score,offset\n"
                                     "q1,1,v1,3,0\nq1,2,v2,1,0\n"
                                     "q2,1,v1,2.5,0\nq2,2,v2,2,0\n"
                                     "q3,1,v3,4,0\n";
    REQUIRE(vlac_run({"evaluate", "--data-root", root.string(), "--truth", "truth.json", "--results", "r.csv"}).code ==
            0);
    std::istringstream csv(slurp(root / "map.csv"));
    std::string line;
    std::getline(csv, line);
    std::getline(csv, line);
    CHECK(std::stod(line.substr(line.rfind(',') + 1)) == 5.0 / 6.0);
  }

  SUBCASE("empty results") {
    std::ofstream(root / "r.csv") << "query_id,rank,video_id,score,offset\n";
    CHECK(vlac_run({"evaluate", "--data-root", root.string(), "--truth", "truth.json", "--results", "r.csv"}).code ==
          vlac::cli::kExitDataError);
  }
}

TEST_CASE("stability with zero perturbation") {
  auto root = synth_root("cli_stability");
  auto r = vlac_run(with({"stability", "--data-root", root.string(), "--manifest", "train.json", "--magnitude", "0"},
                         small_params()));
  REQUIRE(r.code == 0);
  std::istringstream csv(slurp(root / "stability.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "method,D,kind,magnitude,raw,sign_aligned");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 6);
    CHECK(std::abs(std::stod(cells[4]) - 8.0) <= 1e-6);
    ++rows;
  }
  CHECK(rows == 4);
}
