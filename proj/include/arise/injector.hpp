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

#ifndef ARISE_INJECTOR_HPP_
#define ARISE_INJECTOR_HPP_

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "arise/errors.hpp"
#include "arise/graph.hpp"
#include "arise/random.hpp"

namespace arise {

enum class AnomalyKind : std::uint8_t { kNone = 0, kTopology = 1, kAttribute = 2 };

inline const char* to_string(AnomalyKind kind) {
  switch (kind) {
    case AnomalyKind::kTopology:
      return "topology";
    case AnomalyKind::kAttribute:
      return "attribute";
    case AnomalyKind::kNone:
      break;
  }
  return "none";
}

inline AnomalyKind anomaly_kind_from_string(std::string_view s) {
  if (s == "none") return AnomalyKind::kNone;
  if (s == "topology") return AnomalyKind::kTopology;
  if (s == "attribute") return AnomalyKind::kAttribute;
  throw ConfigError("unknown anomaly kind '" + std::string(s) + "'");
}

// Per-node anomaly tags. The binary label is derived from the kind.
class GroundTruth {
 public:
  GroundTruth() = default;
  explicit GroundTruth(std::size_t node_count)
      : kinds_(node_count, AnomalyKind::kNone) {}
  explicit GroundTruth(std::vector<AnomalyKind> kinds)
      : kinds_(std::move(kinds)) {}

  std::size_t size() const { return kinds_.size(); }
  AnomalyKind kind(std::size_t i) const { return kinds_[i]; }
  int label(std::size_t i) const {
    return kinds_[i] == AnomalyKind::kNone ? 0 : 1;
  }
  void mark(std::size_t i, AnomalyKind kind) { kinds_[i] = kind; }

  const std::vector<AnomalyKind>& kinds() const { return kinds_; }

  std::vector<int> labels() const {
    std::vector<int> out(kinds_.size());
    for (std::size_t i = 0; i < kinds_.size(); ++i) out[i] = label(i);
    return out;
  }

  std::size_t count(AnomalyKind kind) const {
    return static_cast<std::size_t>(
        std::count(kinds_.begin(), kinds_.end(), kind));
  }
  std::size_t anomaly_count() const {
    return kinds_.size() - count(AnomalyKind::kNone);
  }

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;

 private:
  std::vector<AnomalyKind> kinds_;
};

// Cliques of `clique_size` nodes are planted `clique_count` times; the
// attribute injector then perturbs `attr_anomaly_count` further nodes.
struct InjectionConfig {
  std::size_t clique_size = 15;
  std::size_t clique_count = 5;
  double edge_drop_ratio = 0.0;
  std::size_t attr_anomaly_count = 75;
  std::size_t candidate_set_size = 50;
  std::uint64_t seed = 0;

  std::size_t topology_anomaly_count() const {
    return clique_size * clique_count;
  }

  void validate(std::size_t node_count) const {
    if (!(edge_drop_ratio >= 0.0 && edge_drop_ratio < 1.0)) {
      throw ConfigError("edge_drop_ratio must lie in [0, 1)");
    }
    if (topology_anomaly_count() + attr_anomaly_count > node_count) {
      throw CapacityError(
          "injection needs " +
          std::to_string(topology_anomaly_count() + attr_anomaly_count) +
          " distinct nodes but the graph has " + std::to_string(node_count));
    }
    if (attr_anomaly_count > 0 && candidate_set_size + 1 > node_count) {
      throw CapacityError("candidate_set_size must be at most n - 1");
    }
    if (attr_anomaly_count > 0 && candidate_set_size == 0) {
      throw ConfigError("candidate_set_size must be positive");
    }
  }
};

inline void to_json(nlohmann::json& j, const InjectionConfig& c) {
  j = nlohmann::json{{"clique_size", c.clique_size},
                     {"clique_count", c.clique_count},
                     {"edge_drop_ratio", c.edge_drop_ratio},
                     {"attr_anomaly_count", c.attr_anomaly_count},
                     {"candidate_set_size", c.candidate_set_size},
                     {"seed", c.seed}};
}

inline void from_json(const nlohmann::json& j, InjectionConfig& c) {
  c.clique_size = j.value("clique_size", c.clique_size);
  c.clique_count = j.value("clique_count", c.clique_count);
  c.edge_drop_ratio = j.value("edge_drop_ratio", c.edge_drop_ratio);
  c.attr_anomaly_count = j.value("attr_anomaly_count", c.attr_anomaly_count);
  c.candidate_set_size = j.value("candidate_set_size", c.candidate_set_size);
  c.seed = j.value("seed", c.seed);
}

struct InjectedGraph {
  AttributedGraph graph;
  GroundTruth truth;
  // Node sets of the planted cliques, in injection order.
  std::vector<std::vector<NodeId>> cliques;
};

// Plants clique_count disjoint cliques of clique_size uniformly chosen nodes.
// With edge_drop_ratio r > 0, floor(r * C(m, 2)) of the newly added edges of
// each clique are removed again; edges that already existed are never touched.
inline InjectedGraph inject_topology_anomalies(const AttributedGraph& graph,
                                               const InjectionConfig& config,
                                               Rng& rng,
                                               GroundTruth truth = {}) {
  const std::size_t n = graph.node_count();
  if (truth.size() == 0) truth = GroundTruth(n);
  if (truth.size() != n) throw ShapeError("ground truth size != node count");
  if (!(config.edge_drop_ratio >= 0.0 && config.edge_drop_ratio < 1.0)) {
    throw ConfigError("edge_drop_ratio must lie in [0, 1)");
  }

  std::vector<NodeId> free_nodes;
  for (std::size_t i = 0; i < n; ++i) {
    if (truth.kind(i) == AnomalyKind::kNone) {
      free_nodes.push_back(static_cast<NodeId>(i));
    }
  }
  const std::size_t needed = config.topology_anomaly_count();
  if (needed > free_nodes.size()) {
    throw CapacityError("topology injection needs " + std::to_string(needed) +
                        " unlabeled nodes, only " +
                        std::to_string(free_nodes.size()) + " available");
  }

  const std::size_t m = config.clique_size;
  const std::size_t pairs = m * (m - (m > 0 ? 1 : 0)) / 2;
  const auto drop = static_cast<std::size_t>(
      std::floor(config.edge_drop_ratio * static_cast<double>(pairs)));

  std::vector<Edge> edges = graph.edges();
  InjectedGraph out;
  const auto picks = rng.sample_without_replacement(free_nodes.size(), needed);
  for (std::size_t round = 0; round < config.clique_count; ++round) {
    std::vector<NodeId> members;
    members.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      members.push_back(free_nodes[picks[round * m + k]]);
    }
    std::vector<Edge> added;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        if (!graph.has_edge(members[a], members[b])) {
          added.push_back(make_edge(members[a], members[b]));
        }
      }
    }
    if (drop > 0) {
      rng.shuffle(std::span<Edge>(added));
      added.resize(added.size() > drop ? added.size() - drop : 0);
    }
    edges.insert(edges.end(), added.begin(), added.end());
    for (const NodeId v : members) truth.mark(v, AnomalyKind::kTopology);
    std::sort(members.begin(), members.end());
    out.cliques.push_back(std::move(members));
  }
  out.graph = AttributedGraph(n, edges, graph.attributes());
  out.truth = std::move(truth);
  return out;
}

// For each of attr_anomaly_count rounds: pick an unlabeled node, draw
// candidate_set_size other nodes and copy the pre-injection attribute row of
// the candidate farthest away in Euclidean distance (ties: lowest id).
inline InjectedGraph inject_attribute_anomalies(const AttributedGraph& graph,
                                                const InjectionConfig& config,
                                                Rng& rng,
                                                GroundTruth truth = {}) {
  const std::size_t n = graph.node_count();
  if (truth.size() == 0) truth = GroundTruth(n);
  if (truth.size() != n) throw ShapeError("ground truth size != node count");

  std::vector<NodeId> free_nodes;
  for (std::size_t i = 0; i < n; ++i) {
    if (truth.kind(i) == AnomalyKind::kNone) {
      free_nodes.push_back(static_cast<NodeId>(i));
    }
  }
  if (config.attr_anomaly_count > free_nodes.size()) {
    throw CapacityError("attribute injection needs " +
                        std::to_string(config.attr_anomaly_count) +
                        " unlabeled nodes, only " +
                        std::to_string(free_nodes.size()) + " available");
  }
  if (config.attr_anomaly_count > 0 &&
      (config.candidate_set_size == 0 || config.candidate_set_size + 1 > n)) {
    throw CapacityError("candidate_set_size must lie in [1, n - 1]");
  }

  const Matrix& original = graph.attributes();
  Matrix attributes = original;
  for (std::size_t round = 0; round < config.attr_anomaly_count; ++round) {
    const auto slot = static_cast<std::size_t>(rng.below(free_nodes.size()));
    const NodeId target = free_nodes[slot];
    free_nodes[slot] = free_nodes.back();
    free_nodes.pop_back();

    auto candidates =
        rng.sample_without_replacement(n - 1, config.candidate_set_size);
    for (auto& c : candidates) {
      if (c >= target) ++c;
    }
    std::sort(candidates.begin(), candidates.end());
    std::size_t best = candidates.front();
    double best_dist = -1.0;
    for (const std::size_t c : candidates) {
      const double dist = (original.row(target) - original.row(static_cast<Eigen::Index>(c))).norm();
      if (dist > best_dist) {
        best_dist = dist;
        best = c;
      }
    }
    attributes.row(target) = original.row(static_cast<Eigen::Index>(best));
    truth.mark(target, AnomalyKind::kAttribute);
  }

  InjectedGraph out;
  out.graph = AttributedGraph(n, graph.edges(), std::move(attributes));
  out.truth = std::move(truth);
  return out;
}

// Topology first, then attribute anomalies on the remaining nodes, both from
// one rng seeded with config.seed.
inline InjectedGraph inject_anomalies(const AttributedGraph& graph,
                                      const InjectionConfig& config) {
  config.validate(graph.node_count());
  Rng rng(config.seed);
  InjectedGraph topo = inject_topology_anomalies(graph, config, rng);
  InjectedGraph both =
      inject_attribute_anomalies(topo.graph, config, rng, std::move(topo.truth));
  both.cliques = std::move(topo.cliques);
  return both;
}

inline void write_ground_truth(std::ostream& out, const GroundTruth& truth) {
  out << "node_id,label,kind\n";
  for (std::size_t i = 0; i < truth.size(); ++i) {
    out << i << ',' << truth.label(i) << ',' << to_string(truth.kind(i))
        << '\n';
  }
}

inline GroundTruth read_ground_truth(std::istream& in,
                                     const std::string& source) {
  std::vector<AnomalyKind> kinds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty() || line_no == 1) continue;
    const auto fields = detail::split_char(text, ',');
    if (fields.size() != 3) {
      throw ParseError(source, line_no, "expected node_id,label,kind");
    }
    const auto id = detail::parse_int(fields[0]);
    if (!id || *id != static_cast<std::int64_t>(kinds.size())) {
      throw ParseError(source, line_no, "node ids must be consecutive from 0");
    }
    AnomalyKind kind;
    try {
      kind = anomaly_kind_from_string(fields[2]);
    } catch (const ConfigError&) {
      throw ParseError(source, line_no, "unknown kind");
    }
    const auto label = detail::parse_int(fields[1]);
    if (!label || *label != (kind == AnomalyKind::kNone ? 0 : 1)) {
      throw ParseError(source, line_no, "label disagrees with kind");
    }
    kinds.push_back(kind);
  }
  return GroundTruth(std::move(kinds));
}

}  // namespace arise

#endif  // ARISE_INJECTOR_HPP_
