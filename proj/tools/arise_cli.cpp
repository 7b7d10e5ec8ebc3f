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

// Command-line front end for the ARISE pipeline. Each stage subcommand reads
// and writes the same files that `run` emits, so stages can be chained across
// invocations with identical results.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "arise/arise.hpp"

namespace {

namespace fs = std::filesystem;
using namespace arise;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitDivergence = 4;
constexpr int kExitOther = 1;

struct Options {
  std::string config_path;
  std::string preset;
  std::uint64_t seed = 0;
  std::string edges;
  std::string attributes;
  std::string id_map;
  std::string out = "arise_out";
  double edge_drop_ratio = 0.0;
  std::vector<double> alpha;
  bool sweep = false;
  std::string fusion;
  std::string similarity_source;
  std::size_t epochs = 0;
  std::string model;
  std::string regions;
  std::string truth;
  std::string scores;
};

struct LinqsOptions {
  std::string content;
  std::string cites;
  std::string out = ".";
};

struct SynthOptions {
  std::size_t nodes = 500;
  std::size_t community_size = 50;
  double average_degree = 4.0;
  std::uint64_t seed = 0;
  std::string out = ".";
};

nlohmann::json read_json_file(const std::string& path) {
  auto in = detail::open_input(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

bool given(const CLI::App& cmd, const std::string& name) {
  const CLI::Option* opt = cmd.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

// Config file first, then the preset flag, then individual flags.
ExperimentConfig build_config(const Options& o, const CLI::App& cmd) {
  ExperimentConfig c;
  if (!o.config_path.empty()) {
    c = experiment_config_from_json(read_json_file(o.config_path));
  }
  if (!o.preset.empty()) apply_dataset_preset(c, o.preset);
  if (!o.edges.empty()) c.edges_path = o.edges;
  if (!o.attributes.empty()) c.attributes_path = o.attributes;
  if (!o.id_map.empty()) c.id_map_path = o.id_map;
  if (given(cmd, "--out")) c.output_dir = o.out;
  if (given(cmd, "--seed")) c.master_seed = o.seed;
  if (given(cmd, "--edge-drop-ratio")) {
    c.injection.edge_drop_ratio = o.edge_drop_ratio;
  }
  if (given(cmd, "--epochs")) c.train.epochs = o.epochs;
  if (!o.fusion.empty()) {
    c.fusion.strategy = fusion_strategy_from_string(o.fusion);
  }
  if (!o.similarity_source.empty()) {
    c.similarity_source = similarity_source_from_string(o.similarity_source);
  }
  if (o.sweep || o.alpha.size() > 1) {
    c.alpha_sweep = o.alpha;
  } else if (o.alpha.size() == 1) {
    c.fusion.alpha = o.alpha.front();
  }
  c.validate();
  return c;
}

AttributedGraph load_input_graph(const ExperimentConfig& c) {
  if (c.edges_path.empty() || c.attributes_path.empty()) {
    throw ConfigError("an edge list and an attribute file are required");
  }
  return load_graph(c.edges_path, c.attributes_path, c.id_map_path);
}

template <typename Writer>
void write_output(const fs::path& dir, const std::string& name, Writer&& writer) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw Error("cannot write " + (dir / name).string());
  writer(out);
}

void print_report(const EvalReport& report) {
  std::cout << "auc " << report.auc << "\nauprc " << report.auprc << '\n';
  for (const auto& [k, p] : report.precision_at_k) {
    std::cout << "precision@" << k << ' ' << p << '\n';
  }
}

void cmd_synth(const SynthOptions& o) {
  SyntheticSpec spec;
  spec.node_count = o.nodes;
  spec.community_size = o.community_size;
  spec.average_degree = o.average_degree;
  spec.seed = o.seed;
  const auto graph = make_synthetic_graph(spec);
  fs::create_directories(o.out);
  save_graph(graph, (fs::path(o.out) / "edges.txt").string(),
             (fs::path(o.out) / "attributes.csv").string());
  std::cout << "nodes " << graph.node_count() << "\nedges " << graph.edge_count()
            << '\n';
}

// Writes edges.txt (internal ids), attributes.csv and idmap.csv.
void cmd_linqs(const LinqsOptions& o) {
  const LinqsDataset data = load_linqs(o.content, o.cites);
  const fs::path dir(o.out);
  fs::create_directories(dir);
  save_graph(data.graph, (dir / "edges.txt").string(),
             (dir / "attributes.csv").string());
  IdMap ids;
  for (std::size_t i = 0; i < data.paper_ids.size(); ++i) {
    ids.emplace(data.paper_ids[i], static_cast<NodeId>(i));
  }
  write_output(dir, "idmap.csv", [&](std::ostream& s) { write_id_map(s, ids); });
  const auto& stats = data.graph.build_stats();
  std::cout << "nodes " << data.graph.node_count() << "\nedges "
            << data.graph.edge_count() << "\nattribute_dim "
            << data.graph.attribute_dim() << "\nduplicates_dropped "
            << stats.duplicates_dropped << "\nself_loops_dropped "
            << stats.self_loops_dropped << "\ndangling_citations "
            << data.dangling_citations << '\n';
}

void cmd_inject(const Options& o, const CLI::App& cmd) {
  const ExperimentConfig c = build_config(o, cmd);
  const auto clean = load_input_graph(c);
  InjectionConfig inj = c.injection;
  inj.seed = derive_stage_seeds(c.master_seed).injection;
  const auto injected = inject_anomalies(clean, inj);
  const fs::path dir(c.output_dir);
  write_output(dir, "injected_edges.txt",
               [&](std::ostream& s) { write_edge_list(s, injected.graph); });
  write_output(dir, "injected_attributes.csv", [&](std::ostream& s) {
    write_attributes(s, injected.graph.attributes());
  });
  write_output(dir, "ground_truth.csv",
               [&](std::ostream& s) { write_ground_truth(s, injected.truth); });
  write_output(dir, "injection.json", [&](std::ostream& s) {
    s << nlohmann::json{{"config", inj}, {"cliques", injected.cliques}}.dump(2)
      << '\n';
  });
  std::cout << "anomalies " << injected.truth.anomaly_count() << '\n';
}

void cmd_train(const Options& o, const CLI::App& cmd) {
  const ExperimentConfig c = build_config(o, cmd);
  const auto graph = load_input_graph(c);
  TrainConfig tc = c.train;
  tc.seed = derive_stage_seeds(c.master_seed).training;
  TrainLog log;
  const auto params = train(graph, tc, &log);
  const fs::path dir(c.output_dir);
  write_output(dir, "model.json", [&](std::ostream& s) {
    s << checkpoint_to_json(params, tc).dump() << '\n';
  });
  write_output(dir, "loss_curve.csv",
               [&](std::ostream& s) { write_loss_curve(s, log); });
  if (!log.epoch_loss.empty()) {
    std::cout << "final_loss " << log.epoch_loss.back() << '\n';
  }
}

void cmd_regions(const Options& o, const CLI::App& cmd) {
  const ExperimentConfig c = build_config(o, cmd);
  const auto graph = load_input_graph(c);
  const auto schedule = propose_regions(graph);
  write_output(c.output_dir, "regions.json", [&](std::ostream& s) {
    s << to_json(schedule).dump() << '\n';
  });
  std::cout << "k_start " << schedule.k_start << "\nrounds "
            << schedule.round_count() << '\n';
}

void cmd_score(const Options& o, const CLI::App& cmd) {
  const ExperimentConfig c = build_config(o, cmd);
  const auto graph = load_input_graph(c);
  if (o.model.empty()) throw ConfigError("score needs --model");
  auto [params, tc] = [&] {
    try {
      return checkpoint_from_json(read_json_file(o.model));
    } catch (const nlohmann::json::exception& e) {
      throw ShapeError(o.model + ": malformed checkpoint: " + e.what());
    }
  }();
  RoundSchedule schedule;
  if (o.regions.empty()) {
    schedule = propose_regions(graph);
  } else {
    try {
      schedule = schedule_from_json(read_json_file(o.regions));
    } catch (const nlohmann::json::exception& e) {
      throw ShapeError(o.regions + ": malformed regions file: " + e.what());
    }
  }
  const auto scored =
      score_graph(graph, params, tc, derive_stage_seeds(c.master_seed).inference,
                  c.fusion, c.similarity_source, std::move(schedule));
  std::optional<GroundTruth> truth;
  if (!o.truth.empty()) {
    auto in = detail::open_input(o.truth);
    truth = read_ground_truth(in, o.truth);
    if (truth->size() != graph.node_count()) {
      throw ShapeError("ground truth covers " + std::to_string(truth->size()) +
                       " nodes, graph has " + std::to_string(graph.node_count()));
    }
  }
  write_output(c.output_dir, "scores.csv", [&](std::ostream& s) {
    write_scores(s, scored.table, truth ? &*truth : nullptr);
  });
  std::cout << "scored " << scored.table.size() << '\n';
}

void cmd_eval(const Options& o, const CLI::App& cmd) {
  const ExperimentConfig c = build_config(o, cmd);
  if (o.scores.empty()) throw ConfigError("eval needs --scores");
  auto in = detail::open_input(o.scores);
  ScoreFile file = read_scores(in, o.scores);
  if (!o.truth.empty()) {
    auto truth_in = detail::open_input(o.truth);
    file.truth = read_ground_truth(truth_in, o.truth);
  }
  if (!file.truth) {
    throw ConfigError("no labels: pass --truth or a labelled scores file");
  }
  const EvalReport report = evaluate(file.table.final, *file.truth, c.k_list);
  const fs::path dir(c.output_dir);
  write_output(dir, "report.json",
               [&](std::ostream& s) { s << to_json(report).dump(2) << '\n'; });
  write_output(dir, "roc.csv",
               [&](std::ostream& s) { write_roc(s, report.roc_points); });
  for (const auto& [alpha, r] :
       sweep_alpha(file.table, *file.truth, c.alpha_sweep, c.k_list)) {
    write_output(dir, "report_alpha_" + alpha_label(alpha) + ".json",
                 [&](std::ostream& s) {
                   nlohmann::json j = to_json(r);
                   j["alpha"] = alpha;
                   s << j.dump(2) << '\n';
                 });
  }
  print_report(report);
}

void cmd_run(const Options& o, const CLI::App& cmd) {
  const ExperimentConfig c = build_config(o, cmd);
  print_report(run_experiment(c));
}

int exit_code(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const StageError& e) {
    return e.cause() ? exit_code(e.cause()) : kExitOther;
  } catch (const ConfigError&) {
    return kExitConfig;
  } catch (const CapacityError&) {
    return kExitConfig;
  } catch (const DivergenceError&) {
    return kExitDivergence;
  } catch (const Error&) {
    return kExitData;
  } catch (const nlohmann::json::exception&) {
    return kExitConfig;
  } catch (...) {
    return kExitOther;
  }
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "Experiment config (JSON)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--preset", o.preset,
                  "Dataset preset: cora, citeseer, dblp, citation, acm, pubmed");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--out", o.out, "Output directory");
}

void add_dataset(CLI::App* cmd, Options& o) {
  cmd->add_option("--edges", o.edges, "Edge list file");
  cmd->add_option("--attributes", o.attributes, "Attribute CSV file");
  cmd->add_option("--id-map", o.id_map, "Optional id map CSV");
}

void add_scoring(CLI::App* cmd, Options& o) {
  cmd->add_option("--fusion", o.fusion, "Fusion strategy")
      ->check(CLI::IsMember({"weight", "max", "sum"}));
  cmd->add_option("--similarity-source", o.similarity_source,
                  "Vectors used for topology similarity")
      ->check(CLI::IsMember({"embeddings", "raw"}));
}

void add_edge_drop(CLI::App* cmd, Options& o) {
  cmd->add_option("--edge-drop-ratio", o.edge_drop_ratio,
                  "Fraction of clique edges removed after injection");
}

void add_epochs(CLI::App* cmd, Options& o) {
  cmd->add_option("--epochs", o.epochs, "Training epochs");
}

void add_alpha(CLI::App* cmd, Options& o) {
  cmd->add_option("--alpha", o.alpha,
                  "Fusion weight; several comma-separated values emit one "
                  "report per value")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_flag("--sweep", o.sweep, "Treat --alpha values as a sweep");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attributed-network anomaly detection pipeline"};
  app.require_subcommand(1);

  Options o;
  SynthOptions so;

  auto* synth = app.add_subcommand("synth", "Generate a planted-partition test graph");
  synth->add_option("--nodes", so.nodes, "Node count");
  synth->add_option("--community-size", so.community_size, "Nodes per community");
  synth->add_option("--average-degree", so.average_degree, "Target average degree");
  synth->add_option("--seed", so.seed, "Generator seed");
  synth->add_option("--out", so.out, "Output directory");

  LinqsOptions lo;
  auto* linqs = app.add_subcommand("linqs", "Convert a LINQS .content/.cites pair");
  linqs->add_option("--content", lo.content, "Paper feature file")->required();
  linqs->add_option("--cites", lo.cites, "Citation file")->required();
  linqs->add_option("--out", lo.out, "Output directory");

  auto* inject = app.add_subcommand("inject", "Inject topology and attribute anomalies");
  add_common(inject, o);
  add_dataset(inject, o);
  add_edge_drop(inject, o);

  auto* train_cmd = app.add_subcommand("train", "Train the contrastive encoder");
  add_common(train_cmd, o);
  add_dataset(train_cmd, o);
  add_epochs(train_cmd, o);

  auto* regions = app.add_subcommand("regions", "Propose k-core regions");
  add_common(regions, o);
  add_dataset(regions, o);

  auto* score = app.add_subcommand("score", "Score nodes with a trained model");
  add_common(score, o);
  add_dataset(score, o);
  add_scoring(score, o);
  add_alpha(score, o);
  score->add_option("--model", o.model, "model.json from train")->required();
  score->add_option("--regions", o.regions, "regions.json from regions");
  score->add_option("--truth", o.truth, "ground_truth.csv to label the scores");

  auto* eval = app.add_subcommand("eval", "Evaluate a scores file");
  add_common(eval, o);
  add_alpha(eval, o);
  eval->add_option("--scores", o.scores, "scores.csv")->required();
  eval->add_option("--truth", o.truth, "ground_truth.csv");

  auto* run = app.add_subcommand("run", "Run the full pipeline");
  add_common(run, o);
  add_dataset(run, o);
  add_scoring(run, o);
  add_alpha(run, o);
  add_edge_drop(run, o);
  add_epochs(run, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*synth) {
      cmd_synth(so);
    } else if (*linqs) {
      cmd_linqs(lo);
    } else if (*inject) {
      cmd_inject(o, *inject);
    } else if (*train_cmd) {
      cmd_train(o, *train_cmd);
    } else if (*regions) {
      cmd_regions(o, *regions);
    } else if (*score) {
      cmd_score(o, *score);
    } else if (*eval) {
      cmd_eval(o, *eval);
    } else if (*run) {
      cmd_run(o, *run);
    }
  } catch (const std::exception& e) {
    std::cerr << "arise: error: " << e.what() << '\n';
    return exit_code(std::current_exception());
  }
  return kExitOk;
}
