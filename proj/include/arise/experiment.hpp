/*
 * Copyright 2026 The ARISE Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ARISE_EXPERIMENT_HPP_
#define ARISE_EXPERIMENT_HPP_

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "arise/contrast.hpp"
#include "arise/errors.hpp"
#include "arise/graph.hpp"
#include "arise/injector.hpp"
#include "arise/metrics.hpp"
#include "arise/random.hpp"
#include "arise/region_proposal.hpp"
#include "arise/scoring.hpp"

namespace arise {

// Which vectors feed the node-pair similarity of the topology score.
enum class SimilaritySource { kEmbeddings, kRaw };

inline const char* to_string(SimilaritySource s) {
  return s == SimilaritySource::kRaw ? "raw" : "embeddings";
}

inline SimilaritySource similarity_source_from_string(std::string_view s) {
  if (s == "embeddings") return SimilaritySource::kEmbeddings;
  if (s == "raw") return SimilaritySource::kRaw;
  throw ConfigError("unknown similarity source '" + std::string(s) + "'");
}

struct StageSeeds {
  std::uint64_t injection = 0;
  std::uint64_t training = 0;
  std::uint64_t inference = 0;
};

inline StageSeeds derive_stage_seeds(std::uint64_t master_seed) {
  return {derive_seed(master_seed, 1), derive_seed(master_seed, 2),
          derive_seed(master_seed, 3)};
}

struct ExperimentConfig {
  std::string edges_path;
  std::string attributes_path;
  std::optional<std::string> id_map_path;
  InjectionConfig injection;
  TrainConfig train;
  FusionConfig fusion;
  SimilaritySource similarity_source = SimilaritySource::kEmbeddings;
  std::vector<std::size_t> k_list = default_k_list();
  std::string output_dir = "arise_out";
  std::uint64_t master_seed = 0;
  // When non-empty, one extra report per alpha (weight fusion).
  std::vector<double> alpha_sweep;

  void validate() const {
    train.validate();
    fusion.validate();
    if (!(injection.edge_drop_ratio >= 0.0 && injection.edge_drop_ratio < 1.0)) {
      throw ConfigError("edge_drop_ratio must lie in [0, 1)");
    }
    for (const double a : alpha_sweep) {
      if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("sweep alpha outside [0, 1]");
    }
  }
};

// Injection and training settings used for the six benchmark datasets.
inline void apply_dataset_preset(ExperimentConfig& config,
                                 std::string_view name) {
  struct Preset {
    const char* name;
    std::size_t cliques;
    std::size_t attr_anomalies;
    double learning_rate;
    std::size_t epochs;
  };
  static constexpr std::array<Preset, 6> kPresets{{
      {"cora", 5, 75, 0.003, 100},
      {"citeseer", 5, 75, 0.003, 100},
      {"dblp", 10, 150, 0.0005, 400},
      {"citation", 15, 225, 0.001, 400},
      {"acm", 15, 225, 0.0005, 400},
      {"pubmed", 20, 300, 0.001, 100},
  }};
  for (const Preset& p : kPresets) {
    if (name == p.name) {
      config.injection.clique_size = 15;
      config.injection.clique_count = p.cliques;
      config.injection.attr_anomaly_count = p.attr_anomalies;
      config.injection.candidate_set_size = 50;
      config.train.hidden_dim = 64;
      config.train.subgraph_size = 4;
      config.train.layers = 1;
      config.train.learning_rate = p.learning_rate;
      config.train.epochs = p.epochs;
      return;
    }
  }
  throw ConfigError("unknown dataset preset '" + std::string(name) + "'");
}

inline nlohmann::json to_json(const FusionConfig& f) {
  nlohmann::json j{{"strategy", to_string(f.strategy)},
                   {"normalization", "min_max"}};
  j["alpha"] = f.alpha ? nlohmann::json(*f.alpha) : nlohmann::json(nullptr);
  return j;
}

inline FusionConfig fusion_from_json(const nlohmann::json& j) {
  FusionConfig f;
  if (j.contains("alpha")) {
    f.alpha = j.at("alpha").is_null() ? std::nullopt
                                      : std::optional<double>(j.at("alpha").get<double>());
  }
  if (j.contains("strategy")) {
    f.strategy = fusion_strategy_from_string(j.at("strategy").get<std::string>());
  }
  if (j.contains("normalization") &&
      j.at("normalization").get<std::string>() != "min_max") {
    throw ConfigError("only min_max normalization is supported");
  }
  return f;
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json dataset{{"edges", c.edges_path},
                         {"attributes", c.attributes_path}};
  dataset["id_map"] =
      c.id_map_path ? nlohmann::json(*c.id_map_path) : nlohmann::json(nullptr);
  return {{"dataset", std::move(dataset)},
          {"injection", c.injection},
          {"train", c.train},
          {"fusion", to_json(c.fusion)},
          {"similarity_source", to_string(c.similarity_source)},
          {"k_list", c.k_list},
          {"output_dir", c.output_dir},
          {"master_seed", c.master_seed},
          {"alpha_sweep", c.alpha_sweep}};
}

// Missing keys keep their defaults; a "preset" key applies the dataset
// preset before the explicit sections.
inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("preset")) {
      apply_dataset_preset(c, j.at("preset").get<std::string>());
    }
    if (j.contains("dataset")) {
      const auto& d = j.at("dataset");
      c.edges_path = d.value("edges", c.edges_path);
      c.attributes_path = d.value("attributes", c.attributes_path);
      if (d.contains("id_map") && !d.at("id_map").is_null()) {
        c.id_map_path = d.at("id_map").get<std::string>();
      }
    }
    if (j.contains("injection")) {
      InjectionConfig inj = c.injection;
      from_json(j.at("injection"), inj);
      c.injection = inj;
    }
    if (j.contains("train")) {
      TrainConfig tc = c.train;
      from_json(j.at("train"), tc);
      c.train = tc;
    }
    if (j.contains("fusion")) c.fusion = fusion_from_json(j.at("fusion"));
    if (j.contains("similarity_source")) {
      c.similarity_source = similarity_source_from_string(
          j.at("similarity_source").get<std::string>());
    }
    c.k_list = j.value("k_list", c.k_list);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.master_seed = j.value("master_seed", c.master_seed);
    c.alpha_sweep = j.value("alpha_sweep", c.alpha_sweep);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad experiment config: ") + e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------
// In-memory pipeline.

struct ScoredGraph {
  RoundSchedule schedule;
  ScoreTable table;
};

// Topology and attribute scoring, normalization and fusion for an
// already-trained model over a given region schedule.
inline ScoredGraph score_graph(const AttributedGraph& graph,
                               const ModelParams& params,
                               const TrainConfig& train_config,
                               std::uint64_t inference_seed,
                               const FusionConfig& fusion,
                               SimilaritySource source,
                               RoundSchedule schedule) {
  if (params.input_dim() != graph.attribute_dim()) {
    throw ShapeError("model input dimension " +
                     std::to_string(params.input_dim()) +
                     " does not match attribute dimension " +
                     std::to_string(graph.attribute_dim()));
  }
  for (const DetectionRound& round : schedule.rounds) {
    for (const Substructure& sub : round.substructures) {
      for (const NodeId v : sub.members) {
        if (v >= graph.node_count()) {
          throw RangeError("region member " + std::to_string(v) +
                           " is not a node of the graph");
        }
      }
    }
  }
  ScoredGraph out;
  out.schedule = std::move(schedule);
  const Matrix vectors = source == SimilaritySource::kRaw
                             ? graph.attributes()
                             : embed_all(params, graph);
  annotate_similarity(out.schedule, vectors);
  const auto topo =
      topology_scores(out.schedule, vectors, graph.node_count());
  const auto attr = attribute_scores(params, graph, train_config,
                                     train_config.rounds_attr, inference_seed);
  out.table = build_score_table(topo, attr, fusion);
  return out;
}

// As above with the schedule proposed from the graph itself.
inline ScoredGraph score_graph(const AttributedGraph& graph,
                               const ModelParams& params,
                               const TrainConfig& train_config,
                               std::uint64_t inference_seed,
                               const FusionConfig& fusion,
                               SimilaritySource source) {
  return score_graph(graph, params, train_config, inference_seed, fusion,
                     source, propose_regions(graph));
}

struct PipelineResult {
  StageSeeds seeds;
  InjectedGraph injected;
  ModelParams params;
  TrainLog log;
  ScoredGraph scored;
  EvalReport report;
};

// inject -> train -> propose regions -> embed -> topology scores ->
// attribute scores -> normalize -> fuse -> evaluate. Stage seeds come from the
// master seed; the seeds inside config.injection / config.train are ignored.
inline PipelineResult run_pipeline(
    const AttributedGraph& clean, const ExperimentConfig& config,
    const std::function<void(const char*)>& on_stage = {}) {
  config.validate();
  auto enter = [&](const char* stage) {
    if (on_stage) on_stage(stage);
  };
  PipelineResult r;
  r.seeds = derive_stage_seeds(config.master_seed);

  enter("inject");
  InjectionConfig inj = config.injection;
  inj.seed = r.seeds.injection;
  r.injected = inject_anomalies(clean, inj);

  enter("train");
  TrainConfig tc = config.train;
  tc.seed = r.seeds.training;
  r.params = train(r.injected.graph, tc, &r.log);

  enter("score");
  r.scored = score_graph(r.injected.graph, r.params, tc, r.seeds.inference,
                         config.fusion, config.similarity_source);

  enter("eval");
  r.report = evaluate(r.scored.table.final, r.injected.truth, config.k_list);
  return r;
}

// Re-fuses the normalized scores for each alpha and evaluates.
inline std::vector<std::pair<double, EvalReport>> sweep_alpha(
    const ScoreTable& table, const GroundTruth& truth,
    std::span<const double> alphas, std::span<const std::size_t> k_list) {
  std::vector<std::pair<double, EvalReport>> out;
  for (const double alpha : alphas) {
    FusionConfig f;
    f.alpha = alpha;
    const auto fused = fuse(table.topo, table.attr, f);
    out.emplace_back(alpha, evaluate(fused, truth, k_list));
  }
  return out;
}

// ---------------------------------------------------------------------------
// File artifacts.

inline void write_scores(std::ostream& out, const ScoreTable& table,
                         const GroundTruth* truth) {
  out << "node_id,score_topo,score_attr,score_final,label,kind\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << i << ',';
    detail::write_double(out, table.topo[i]);
    out << ',';
    detail::write_double(out, table.attr[i]);
    out << ',';
    detail::write_double(out, table.final[i]);
    if (truth != nullptr) {
      out << ',' << truth->label(i) << ',' << to_string(truth->kind(i)) << '\n';
    } else {
      out << ",,\n";
    }
  }
}

struct ScoreFile {
  ScoreTable table;
  std::optional<GroundTruth> truth;
};

inline ScoreFile read_scores(std::istream& in, const std::string& source) {
  ScoreFile file;
  std::vector<AnomalyKind> kinds;
  bool labelled = true;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (line_no == 1 || text.empty()) continue;
    const auto f = detail::split_char(text, ',');
    if (f.size() != 6) throw ParseError(source, line_no, "expected 6 columns");
    const auto id = detail::parse_int(f[0]);
    if (!id || *id != static_cast<std::int64_t>(file.table.final.size())) {
      throw ParseError(source, line_no, "node ids must be consecutive from 0");
    }
    const auto t = detail::parse_double(f[1]);
    const auto a = detail::parse_double(f[2]);
    const auto s = detail::parse_double(f[3]);
    if (!t || !a || !s) throw ParseError(source, line_no, "bad score value");
    file.table.topo.push_back(*t);
    file.table.attr.push_back(*a);
    file.table.final.push_back(*s);
    if (f[5].empty()) {
      labelled = false;
    } else {
      try {
        kinds.push_back(anomaly_kind_from_string(f[5]));
      } catch (const ConfigError&) {
        throw ParseError(source, line_no, "unknown kind");
      }
    }
  }
  if (labelled && !kinds.empty()) file.truth = GroundTruth(std::move(kinds));
  return file;
}

inline void write_roc(std::ostream& out,
                      const std::vector<std::pair<double, double>>& points) {
  out << "fpr,tpr\n";
  for (const auto& [fpr, tpr] : points) {
    detail::write_double(out, fpr);
    out << ',';
    detail::write_double(out, tpr);
    out << '\n';
  }
}

inline void write_loss_curve(std::ostream& out, const TrainLog& log) {
  out << "epoch,mean_batch_loss\n";
  for (std::size_t e = 0; e < log.epoch_loss.size(); ++e) {
    out << e << ',';
    detail::write_double(out, log.epoch_loss[e]);
    out << '\n';
  }
}

inline std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string() + " for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

// Lists output files with content hashes; flags incomplete runs.
class Manifest {
 public:
  explicit Manifest(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add_file(const std::string& relative) { files_.push_back(relative); }
  void set(const std::string& key, nlohmann::json value) {
    extra_[key] = std::move(value);
  }

  void write(bool complete, const std::string& failed_stage = {},
             const std::string& error = {}) const {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : files_) {
      files.push_back({{"path", f}, {"sha256", sha256_file(dir_ / f)}});
    }
    nlohmann::json j = extra_;
    j["status"] = complete ? "complete" : "incomplete";
    if (!complete) {
      j["failed_stage"] = failed_stage;
      j["error"] = error;
    }
    j["files"] = std::move(files);
    std::ofstream out(dir_ / "manifest.json");
    out << j.dump(2) << '\n';
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
  nlohmann::json extra_ = nlohmann::json::object();
};

// Raised by run_experiment: names the stage that failed and keeps the original
// exception for exit-code mapping.
class StageError : public Error {
 public:
  StageError(std::string stage, std::exception_ptr cause, const std::string& what)
      : Error("stage '" + stage + "' failed: " + what),
        stage_(std::move(stage)),
        cause_(std::move(cause)) {}

  const std::string& stage() const { return stage_; }
  const std::exception_ptr& cause() const { return cause_; }

 private:
  std::string stage_;
  std::exception_ptr cause_;
};

inline std::string alpha_label(double alpha) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << alpha;
  return s.str();
}

// Loads the dataset, runs the pipeline and writes every artifact plus
// manifest.json into config.output_dir.
inline EvalReport run_experiment(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  config.validate();
  if (config.edges_path.empty() || config.attributes_path.empty()) {
    throw ConfigError("dataset edges and attributes paths are required");
  }
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  Manifest manifest(dir);
  manifest.set("config", to_json(config));
  const StageSeeds seeds = derive_stage_seeds(config.master_seed);
  manifest.set("seeds", {{"injection", seeds.injection},
                         {"training", seeds.training},
                         {"inference", seeds.inference}});

  auto write_text = [&](const std::string& name, auto&& writer) {
    std::ofstream out(dir / name);
    if (!out) throw Error("cannot write " + (dir / name).string());
    writer(out);
    out.close();
    manifest.add_file(name);
  };

  std::string stage = "load";
  try {
    const AttributedGraph clean = load_graph(
        config.edges_path, config.attributes_path, config.id_map_path);
    manifest.set("load_stats",
                 {{"self_loops_dropped", clean.build_stats().self_loops_dropped},
                  {"duplicates_dropped", clean.build_stats().duplicates_dropped}});

    const PipelineResult r = run_pipeline(
        clean, config, [&](const char* s) { stage = s; });

    stage = "write";
    write_text("injected_edges.txt",
               [&](std::ostream& o) { write_edge_list(o, r.injected.graph); });
    write_text("injected_attributes.csv", [&](std::ostream& o) {
      write_attributes(o, r.injected.graph.attributes());
    });
    write_text("ground_truth.csv",
               [&](std::ostream& o) { write_ground_truth(o, r.injected.truth); });
    write_text("injection.json", [&](std::ostream& o) {
      InjectionConfig inj = config.injection;
      inj.seed = seeds.injection;
      o << nlohmann::json{{"config", inj}, {"cliques", r.injected.cliques}}.dump(2)
        << '\n';
    });
    write_text("model.json", [&](std::ostream& o) {
      TrainConfig tc = config.train;
      tc.seed = seeds.training;
      o << checkpoint_to_json(r.params, tc).dump() << '\n';
    });
    write_text("loss_curve.csv",
               [&](std::ostream& o) { write_loss_curve(o, r.log); });
    write_text("regions.json", [&](std::ostream& o) {
      o << to_json(r.scored.schedule).dump() << '\n';
    });
    write_text("scores.csv", [&](std::ostream& o) {
      write_scores(o, r.scored.table, &r.injected.truth);
    });
    write_text("report.json",
               [&](std::ostream& o) { o << to_json(r.report).dump(2) << '\n'; });
    write_text("roc.csv",
               [&](std::ostream& o) { write_roc(o, r.report.roc_points); });
    if (!config.alpha_sweep.empty()) {
      for (const auto& [alpha, report] :
           sweep_alpha(r.scored.table, r.injected.truth, config.alpha_sweep,
                       config.k_list)) {
        write_text("report_alpha_" + alpha_label(alpha) + ".json",
                   [&](std::ostream& o) {
                     nlohmann::json j = to_json(report);
                     j["alpha"] = alpha;
                     o << j.dump(2) << '\n';
                   });
      }
    }
    manifest.write(true);
    return r.report;
  } catch (const std::exception& e) {
    manifest.write(false, stage, e.what());
    throw StageError(stage, std::current_exception(), e.what());
  }
}

}  // namespace arise

#endif  // ARISE_EXPERIMENT_HPP_
