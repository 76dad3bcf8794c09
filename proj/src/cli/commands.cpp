#include "vlac/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "vlac/dataset.hpp"
#include "vlac/error.hpp"
#include "vlac/evaluation.hpp"
#include "vlac/features_io.hpp"
#include "vlac/model_io.hpp"
#include "vlac/search.hpp"
#include "vlac/store_io.hpp"

namespace vlac::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Logger {
 public:
  explicit Logger(std::ostream& out) : out_(out) {}

  void info(const std::string& event, json fields = json::object()) { write("info", event, std::move(fields)); }
  void error(const std::string& event, json fields = json::object()) { write("error", event, std::move(fields)); }

 private:
  void write(const char* level, const std::string& event, json fields) {
    json line = {{"level", level}, {"event", event}};
    line.update(fields);
    out_ << line.dump() << '\n' << std::flush;
  }

  std::ostream& out_;
};

json params_json(Method method, const ModelParams& p) {
  return {{"method", std::string(to_string(method))},
          {"F", p.F},
          {"J", p.J},
          {"N", p.N},
          {"M", p.M},
          {"D", p.D},
          {"D0", p.D0},
          {"alpha1", p.alpha1},
          {"alpha2", p.alpha2},
          {"h", p.h},
          {"gof_size", p.gof_size},
          {"overlap", p.overlap},
          {"seed", p.seed},
          {"normalize", p.normalize != 0}};
}

std::vector<double> head(const std::vector<double>& v, std::size_t n) {
  return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(n, v.size()))};
}

// Flag overrides for RunConfig, applied after the config file.
struct Overrides {
  std::string config_file;
  std::string method;
  std::map<std::string, std::uint32_t> counts;
  bool normalize = false;
  std::string data_root;
  std::string output_dir;
  int jobs = 0;
};

struct Context {
  RunConfig config;
  Logger& log;
  std::ostream& out;

  fs::path input(const std::string& p) const {
    const fs::path path(p);
    return path.is_absolute() ? path : config.data_root / path;
  }
  fs::path output(const std::string& p) const {
    const fs::path path(p);
    if (path.is_absolute()) return path;
    const fs::path dir = config.output_dir.empty() ? config.data_root : config.output_dir;
    if (!dir.empty()) fs::create_directories(dir);
    return dir / path;
  }
};

std::uint32_t* param_field(ModelParams& p, const std::string& key) {
  if (key == "F") return &p.F;
  if (key == "J") return &p.J;
  if (key == "N") return &p.N;
  if (key == "M") return &p.M;
  if (key == "D") return &p.D;
  if (key == "D0") return &p.D0;
  if (key == "alpha1") return &p.alpha1;
  if (key == "alpha2") return &p.alpha2;
  if (key == "h") return &p.h;
  if (key == "gof_size") return &p.gof_size;
  if (key == "overlap") return &p.overlap;
  if (key == "seed") return &p.seed;
  return nullptr;
}

const char* const kCountKeys[] = {"J", "N", "M", "D", "D0", "alpha1", "alpha2", "h", "gof_size", "overlap", "seed"};

// -h is help, so h is spelled out on the command line
std::string flag_name(const std::string& key) {
  if (key == "h") return "--hp-head";
  if (key == "gof_size") return "--gof-size";
  return "--" + key;
}

void check_config(RunConfig c) {
  auto& p = c.params;
  for (const char* key : {"J", "N", "M", "D", "D0", "alpha1", "alpha2", "h", "gof_size"}) {
    if (*param_field(p, key) == 0) {
      throw Error(ErrorCode::kInvalidArgument, std::string(key) + " must be >= 1");
    }
  }
  if (p.overlap >= p.gof_size) throw Error(ErrorCode::kInvalidArgument, "overlap must be < gof_size");
}

std::vector<std::vector<FrameFeatures>> load_videos(const DatasetManifest& m, const fs::path& root) {
  std::vector<std::vector<FrameFeatures>> videos;
  videos.reserve(m.videos.size());
  for (const auto& entry : m.videos) videos.push_back(load_video(m, entry, root));
  return videos;
}

DatasetManifest open_manifest(const Context& ctx, const std::string& path) {
  DatasetManifest m = read_manifest(ctx.input(path));
  validate_manifest(m, ctx.config.data_root);
  return m;
}

// synth

struct SynthArgs {
  SynthOptions options;
  std::size_t train_videos = 0;
  std::size_t query_len = 20;
  std::size_t query_offset = 1;
  double noise = 0.0;
  std::string noise_kind = "additive_gaussian";
  bool seed_given = false;
};

void cmd_synth(const Context& ctx, SynthArgs args) {
  if (!args.seed_given) args.options.seed = ctx.config.params.seed;
  const std::size_t database = args.options.num_videos;
  args.options.num_videos = database + args.train_videos;
  auto all = synthesize_videos(args.options);
  std::vector<std::vector<FrameFeatures>> train(all.begin() + static_cast<std::ptrdiff_t>(database), all.end());
  all.resize(database);

  const fs::path& root = ctx.config.data_root;
  fs::create_directories(root);
  const std::string seed_note = "seed " + std::to_string(args.options.seed);

  std::vector<std::vector<FrameFeatures>> stored = all;
  std::string label = "clean";
  if (args.noise > 0.0) {
    PerturbationSpec spec{parse_perturbation_kind(args.noise_kind), args.noise, args.options.seed};
    for (auto& video : stored) {
      video = perturb(video, spec);
      ++spec.seed;
    }
    label = args.noise_kind + ":" + std::to_string(args.noise);
  }
  DatasetManifest db = write_dataset(stored, args.options.dim, root, "videos", "video", label);
  db.notes = "synthetic database videos, " + seed_note;
  write_manifest(db, root / "videos.json");

  std::vector<std::string> ids;
  for (const auto& v : db.videos) ids.push_back(v.video_id);
  auto segments = make_query_segments(all, ids, args.query_len, args.query_offset, args.options.seed + 1);
  DatasetManifest queries = write_queries(segments, args.options.dim, db.videos.front().fps_sampled, root, "queries");
  queries.notes = "clean query segments of " + std::to_string(args.query_len) + " frames, offset " +
                  std::to_string(args.query_offset) + ", " + seed_note;
  write_manifest(queries, root / "queries.json");

  ctx.out << (root / "videos.json").string() << '\n' << (root / "queries.json").string() << '\n';
  if (!train.empty()) {
    DatasetManifest t = write_dataset(train, args.options.dim, root, "train", "train", "clean");
    t.notes = "synthetic training videos, " + seed_note;
    write_manifest(t, root / "train.json");
    ctx.out << (root / "train.json").string() << '\n';
  }
  ctx.log.info("synth", {{"videos", database},
                         {"train_videos", args.train_videos},
                         {"queries", segments.size()},
                         {"frames", args.options.frames_per_video},
                         {"dim", args.options.dim},
                         {"seed", args.options.seed},
                         {"noise", args.noise}});
}

// train

void cmd_train(const Context& ctx, const std::string& manifest_path, const std::string& out_path) {
  const DatasetManifest m = open_manifest(ctx, manifest_path);
  const auto videos = load_videos(m, ctx.config.data_root);
  const auto start = std::chrono::steady_clock::now();
  const TrainedModel model = train_model(ctx.config.method, videos, ctx.config.params);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const fs::path out = ctx.output(out_path);
  save_model(model, out);

  json fields = params_json(model.method, model.params);
  fields["videos"] = videos.size();
  fields["inertia"] = model.codebook.inertia;
  fields["iterations"] = model.codebook.inertia_history.size();
  fields["eigenvalues"] = head(model.basis.eigenvalues, 16);
  fields["seconds"] = seconds;
  fields["model"] = out.string();
  if (model.method == Method::kHp) fields["stage2_inertia"] = model.stage2.inertia;
  ctx.log.info("train", fields);
  ctx.out << out.string() << '\n';
}

// encode

void cmd_encode(const Context& ctx, const std::string& model_path, const std::string& manifest_path,
                const std::string& out_path) {
  const TrainedModel model = load_model(ctx.input(model_path));
  const DatasetManifest m = open_manifest(ctx, manifest_path);
  if (m.feature_dim != model.params.F) {
    throw Error(ErrorCode::kDimensionMismatch, "manifest feature_dim " + std::to_string(m.feature_dim) +
                                                   " differs from model F " + std::to_string(model.params.F));
  }
  std::vector<DescriptorSequence> store;
  store.reserve(m.videos.size());
  for (const auto& entry : m.videos) {
    const auto frames = load_video(m, entry, ctx.config.data_root);
    store.push_back(make_sequence(entry.video_id, model.method, encode_video(frames, model)));
  }
  const fs::path out = ctx.output(out_path);
  save_store(store, out);
  ctx.log.info("encode", {{"method", std::string(to_string(model.method))},
                          {"videos", store.size()},
                          {"D", store.empty() ? 0 : store.front().dim()},
                          {"store", out.string()}});
  ctx.out << out.string() << '\n';
}

// search

struct SearchArgs {
  std::string store;
  std::string queries;
  std::string out = "results.csv";
  double threshold = 0.0;
  bool threshold_given = false;
  std::size_t top_k = 0;
  AlignmentOptions alignment;
};

void cmd_search(const Context& ctx, const SearchArgs& args) {
  const auto store = load_store(ctx.input(args.store));
  const auto queries = load_store(ctx.input(args.queries));
  RetrievalMode mode = RetrievalMode::all();
  if (args.threshold_given) mode = RetrievalMode::above(args.threshold);
  if (args.top_k > 0) mode = RetrievalMode::top(args.top_k);

  const fs::path out = ctx.output(args.out);
  std::ofstream csv(out, std::ios::trunc);
  if (!csv) throw Error(ErrorCode::kIo, "cannot open " + out.string() + " for writing");
  csv.precision(17);
  csv << "query_id,rank,video_id,score,offset\n";
  std::size_t rows = 0;
  for (const auto& q : queries) {
    auto result = retrieve(q, store, mode, args.alignment);
    // a threshold combined with top-k keeps the k best above the threshold
    if (args.threshold_given && args.top_k > 0) {
      std::erase_if(result.hits, [&](const RetrievalHit& h) { return !(h.score >= args.threshold); });
    }
    for (std::size_t r = 0; r < result.hits.size(); ++r) {
      const auto& h = result.hits[r];
      csv << q.video_id << ',' << r + 1 << ',' << h.video_id << ',' << h.score << ',' << h.offset << '\n';
      ++rows;
    }
  }
  if (!csv) throw Error(ErrorCode::kIo, "failed writing " + out.string());
  ctx.log.info("search", {{"queries", queries.size()}, {"store", store.size()}, {"rows", rows}, {"results", out.string()}});
  ctx.out << out.string() << '\n';
}

// evaluate

QueryResults read_results(const fs::path& path, const GroundTruth& truth) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "query_id,rank,video_id,score,offset") {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": expected header query_id,rank,video_id,score,offset");
  }
  std::map<std::string, RetrievalResult> by_query;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) {
      throw Error(ErrorCode::kMalformedFile, path.string() + ":" + std::to_string(line_no) + ": expected 5 columns");
    }
    try {
      by_query[cells[0]].hits.push_back({cells[2], std::stod(cells[3]), std::stol(cells[4])});
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kMalformedFile, path.string() + ":" + std::to_string(line_no) + ": bad number");
    }
  }
  QueryResults results;
  for (const auto& [query_id, relevant] : truth.relevant) {
    auto it = by_query.find(query_id);
    results.emplace_back(query_id, it == by_query.end() ? RetrievalResult{} : std::move(it->second));
    if (it != by_query.end()) by_query.erase(it);
  }
  if (!by_query.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "results mention query '" + by_query.begin()->first +
                                                 "' missing from the ground truth");
  }
  return results;
}

struct EvaluateArgs {
  std::string results = "results.csv";
  std::string truth;
  std::string label;
  std::string pr_out = "pr.csv";
  std::string map_out = "map.csv";
  std::string svg;
};

void cmd_evaluate(const Context& ctx, const EvaluateArgs& args) {
  const DatasetManifest queries = read_manifest(ctx.input(args.truth));
  const GroundTruth truth = ground_truth_from_queries(queries);
  const QueryResults results = read_results(ctx.input(args.results), truth);
  const EvaluationSummary summary = evaluate(results, truth);
  const std::string label = args.label.empty() ? std::string(to_string(ctx.config.method)) : args.label;
  const std::size_t D = ctx.config.params.D;

  const fs::path pr = ctx.output(args.pr_out);
  std::ofstream pr_csv(pr, std::ios::trunc);
  write_pr_csv_header(pr_csv);
  write_pr_csv_rows(pr_csv, label, D, summary.curve);
  const fs::path map = ctx.output(args.map_out);
  std::ofstream map_csv(map, std::ios::trunc);
  write_map_csv_header(map_csv);
  write_map_csv_row(map_csv, label, D, summary.map);
  if (!pr_csv || !map_csv) throw Error(ErrorCode::kIo, "failed writing evaluation output");
  if (!args.svg.empty()) {
    std::ofstream svg(ctx.output(args.svg), std::ios::trunc);
    const std::vector<LabeledCurve> curves{{label, summary.curve}};
    write_pr_svg(svg, curves);
  }
  ctx.log.info("evaluate", {{"method", label},
                            {"D", D},
                            {"queries", results.size()},
                            {"mAP", summary.map},
                            {"pr_points", summary.curve.points.size()}});
  ctx.out.precision(17);
  ctx.out << "mAP," << summary.map << '\n';
}

// stability

struct StabilityArgs {
  std::string manifest;
  std::vector<std::string> methods{"vlad", "hp", "vlac", "sift-direct"};
  std::string kind = "additive_gaussian";
  double magnitude = 0.1;
  std::uint64_t perturb_seed = 0;
  bool perturb_seed_given = false;
  std::string out = "stability.csv";
};

void cmd_stability(const Context& ctx, const StabilityArgs& args) {
  const DatasetManifest m = open_manifest(ctx, args.manifest);
  const auto videos = load_videos(m, ctx.config.data_root);
  const PerturbationSpec spec{parse_perturbation_kind(args.kind), args.magnitude,
                              args.perturb_seed_given ? args.perturb_seed : ctx.config.params.seed};
  const fs::path out = ctx.output(args.out);
  std::ofstream csv(out, std::ios::trunc);
  if (!csv) throw Error(ErrorCode::kIo, "cannot open " + out.string() + " for writing");
  csv.precision(17);
  csv << "method,D,kind,magnitude,raw,sign_aligned\n";
  for (const auto& name : args.methods) {
    const StabilityMethod method = parse_stability_method(name);
    const StabilityScore s = stability_experiment(videos, spec, method, ctx.config.params);
    csv << to_string(method) << ',' << s.dim << ',' << args.kind << ',' << args.magnitude << ',' << s.raw << ','
        << s.sign_aligned << '\n';
    ctx.log.info("stability", {{"method", to_string(method)},
                               {"D", s.dim},
                               {"kind", args.kind},
                               {"magnitude", args.magnitude},
                               {"raw", s.raw},
                               {"sign_aligned", s.sign_aligned}});
  }
  ctx.out << out.string() << '\n';
}

void add_common_options(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config_file, "JSON run config")->check(CLI::ExistingFile);
  app.add_option("--data-root", o.data_root, "directory that relative input paths are resolved against");
  app.add_option("--output-dir", o.output_dir, "directory for relative output paths (default: data root)");
  app.add_option("--jobs", o.jobs, "worker threads (default: OpenMP default)")->check(CLI::PositiveNumber);
  app.add_option("--method", o.method, "vlad | vlac | hp");
  for (const char* key : kCountKeys) {
    app.add_option(flag_name(key), o.counts[key]);
  }
  app.add_flag("--normalize", o.normalize, "L2-normalize raw descriptors before projection");
}

RunConfig resolve(const CLI::App& app, const Overrides& o) {
  RunConfig c;
  if (!o.config_file.empty()) apply_config_file(c, o.config_file);
  if (app.count("--method") > 0) c.method = parse_method(o.method);
  for (const char* key : kCountKeys) {
    if (app.count(flag_name(key)) > 0) *param_field(c.params, key) = o.counts.at(key);
  }
  if (o.normalize) c.params.normalize = 1;
  if (!o.data_root.empty()) c.data_root = o.data_root;
  if (!o.output_dir.empty()) c.output_dir = o.output_dir;
  check_config(c);
  return c;
}

}  // namespace

void apply_config_file(RunConfig& config, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kMalformedFile, path.string() + ": config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "method") {
        config.method = parse_method(value.get<std::string>());
      } else if (key == "normalize") {
        config.params.normalize = value.get<bool>() ? 1 : 0;
      } else if (key == "data_root") {
        config.data_root = value.get<std::string>();
      } else if (key == "output_dir") {
        config.output_dir = value.get<std::string>();
      } else if (std::uint32_t* field = param_field(config.params, key); field != nullptr && key != "F") {
        *field = value.get<std::uint32_t>();
      } else {
        throw Error(ErrorCode::kMalformedFile, path.string() + ": unknown key '" + key + "'");
      }
    }
  } catch (const json::type_error& e) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": " + e.what());
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& log_stream) {
  Logger log(log_stream);
  CLI::App app{"Compact video-segment descriptors: VLAD, VLAC and hyper-pooling", "vlac"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides overrides;
  add_common_options(app, overrides);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset with queries");
  synth_cmd->add_option("--videos", synth.options.num_videos, "database videos")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--frames", synth.options.frames_per_video, "frames per video")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--dim", synth.options.dim, "feature dimension F")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--clusters", synth.options.clusters, "mixture components")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--features-per-frame", synth.options.features_per_frame)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--scene-length", synth.options.scene_length)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--within-std", synth.options.within_std)->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--train-videos", synth.train_videos, "extra videos written to train/");
  synth_cmd->add_option("--query-len", synth.query_len, "query segment length in frames")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--query-offset", synth.query_offset, "query shift against the database frame grid");
  synth_cmd->add_option("--noise", synth.noise, "perturbation applied to the database copy")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--noise-kind", synth.noise_kind)
      ->check(CLI::IsMember({"additive_gaussian", "component_dropout", "gain"}));
  std::uint64_t synth_seed = 0;
  auto* synth_seed_opt = synth_cmd->add_option("--synth-seed", synth_seed, "generator seed (default: --seed)");

  std::string train_manifest, train_out = "model.vlacmodel";
  auto* train_cmd = app.add_subcommand("train", "train an encoder on a manifest");
  train_cmd->add_option("--manifest", train_manifest)->required();
  train_cmd->add_option("--out", train_out);

  std::string encode_model = "model.vlacmodel", encode_manifest, encode_out = "store.vlacstore";
  auto* encode_cmd = app.add_subcommand("encode", "encode every video of a manifest into a descriptor store");
  encode_cmd->add_option("--model", encode_model);
  encode_cmd->add_option("--manifest", encode_manifest)->required();
  encode_cmd->add_option("--out", encode_out);

  SearchArgs search;
  auto* search_cmd = app.add_subcommand("search", "rank database videos for every query");
  search_cmd->add_option("--store", search.store, "database store")->required();
  search_cmd->add_option("--queries", search.queries, "query store")->required();
  auto* threshold_opt = search_cmd->add_option("--threshold", search.threshold, "keep scores >= threshold");
  search_cmd->add_option("--top-k", search.top_k, "keep the k best")->check(CLI::PositiveNumber);
  search_cmd->add_flag("--normalize-by-length", search.alignment.normalize_by_length);
  search_cmd->add_flag("--strict-shift-range", search.alignment.strict_shift_range,
                       "shifts 1..G2-G1 only, excluding the zero shift");
  search_cmd->add_option("--out", search.out);

  EvaluateArgs evaluate_args;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "precision-recall and mAP of a results file");
  evaluate_cmd->add_option("--results", evaluate_args.results);
  evaluate_cmd->add_option("--truth", evaluate_args.truth, "query manifest")->required();
  evaluate_cmd->add_option("--label", evaluate_args.label, "method column value (default: --method)");
  evaluate_cmd->add_option("--pr-out", evaluate_args.pr_out);
  evaluate_cmd->add_option("--map-out", evaluate_args.map_out);
  evaluate_cmd->add_option("--svg", evaluate_args.svg, "also plot the PR curve");

  StabilityArgs stability;
  auto* stability_cmd = app.add_subcommand("stability", "compare compaction bases trained on clean and perturbed data");
  stability_cmd->add_option("--manifest", stability.manifest)->required();
  stability_cmd->add_option("--methods", stability.methods, "vlad hp vlac sift-direct")->delimiter(',');
  stability_cmd->add_option("--kind", stability.kind)
      ->check(CLI::IsMember({"additive_gaussian", "component_dropout", "gain"}));
  stability_cmd->add_option("--magnitude", stability.magnitude)->check(CLI::NonNegativeNumber);
  auto* perturb_seed_opt = stability_cmd->add_option("--perturb-seed", stability.perturb_seed);
  stability_cmd->add_option("--out", stability.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, log_stream);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Context ctx{resolve(app, overrides), log, out};
    if (overrides.jobs > 0) omp_set_num_threads(overrides.jobs);
    log.info("start", {{"command", command}, {"jobs", omp_get_max_threads()}, {"data_root", ctx.config.data_root.string()}});

    if (*synth_cmd) {
      if (synth_seed_opt->count() > 0) {
        synth.options.seed = synth_seed;
        synth.seed_given = true;
      }
      cmd_synth(ctx, synth);
    } else if (*train_cmd) {
      cmd_train(ctx, train_manifest, train_out);
    } else if (*encode_cmd) {
      cmd_encode(ctx, encode_model, encode_manifest, encode_out);
    } else if (*search_cmd) {
      search.threshold_given = threshold_opt->count() > 0;
      cmd_search(ctx, search);
    } else if (*evaluate_cmd) {
      cmd_evaluate(ctx, evaluate_args);
    } else if (*stability_cmd) {
      stability.perturb_seed_given = perturb_seed_opt->count() > 0;
      cmd_stability(ctx, stability);
    }
  } catch (const Error& e) {
    const bool numeric = e.code() == ErrorCode::kNumericFailure;
    log.error(command, {{"code", to_string(e.code())}, {"message", e.what()}});
    return numeric ? kExitNumericFailure : kExitDataError;
  } catch (const fs::filesystem_error& e) {
    log.error(command, {{"code", "Io"}, {"message", e.what()}});
    return kExitDataError;
  } catch (const json::exception& e) {
    log.error(command, {{"code", "MalformedFile"}, {"message", e.what()}});
    return kExitDataError;
  }
  log.info("done", {{"command", command}});
  return kExitOk;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace vlac::cli
