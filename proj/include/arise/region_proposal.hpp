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

#ifndef ARISE_REGION_PROPOSAL_HPP_
#define ARISE_REGION_PROPOSAL_HPP_

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "arise/graph.hpp"

namespace arise {

// A connected group of nodes inside a k-core.
struct Substructure {
  std::vector<NodeId> members;  // ascending
  std::size_t k = 0;
  std::optional<double> avg_similarity;
};

struct DetectionRound {
  std::size_t k = 0;
  std::vector<Substructure> substructures;
};

struct RoundSchedule {
  std::size_t k_start = 0;
  std::vector<DetectionRound> rounds;

  std::size_t round_count() const { return rounds.size(); }
};

// Core number of every node (Batagelj-Zaversnik bucket peeling, O(n + m)).
inline std::vector<std::size_t> core_numbers(const AttributedGraph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<std::size_t> degree(n);
  std::size_t max_degree = 0;
  for (NodeId v = 0; v < n; ++v) {
    degree[v] = graph.degree(v);
    max_degree = std::max(max_degree, degree[v]);
  }
  // bin[d] = start of the degree-d block in `order`.
  std::vector<std::size_t> bin(max_degree + 2, 0);
  for (NodeId v = 0; v < n; ++v) ++bin[degree[v] + 1];
  for (std::size_t d = 1; d < bin.size(); ++d) bin[d] += bin[d - 1];
  std::vector<NodeId> order(n);
  std::vector<std::size_t> position(n);
  {
    std::vector<std::size_t> next(bin.begin(), bin.end() - 1);
    for (NodeId v = 0; v < n; ++v) {
      position[v] = next[degree[v]]++;
      order[position[v]] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId v = order[i];
    for (const NodeId u : graph.neighbors(v)) {
      if (degree[u] > degree[v]) {
        const std::size_t du = degree[u];
        const std::size_t pu = position[u];
        const std::size_t pw = bin[du];
        const NodeId w = order[pw];
        if (u != w) {
          std::swap(order[pu], order[pw]);
          position[u] = pw;
          position[w] = pu;
        }
        ++bin[du];
        --degree[u];
      }
    }
  }
  return degree;
}

inline std::vector<NodeId> nodes_with_core_at_least(
    const std::vector<std::size_t>& cores, std::size_t k) {
  std::vector<NodeId> out;
  for (std::size_t v = 0; v < cores.size(); ++v) {
    if (cores[v] >= k) out.push_back(static_cast<NodeId>(v));
  }
  return out;
}

// Maximal node set in which every node keeps at least k neighbors, ascending.
inline std::vector<NodeId> k_core(const AttributedGraph& graph, std::size_t k) {
  return nodes_with_core_at_least(core_numbers(graph), k);
}

// Connected components of the subgraph induced by core_nodes, ordered by
// smallest member.
inline std::vector<Substructure> connected_substructures(
    const AttributedGraph& graph, std::span<const NodeId> core_nodes,
    std::size_t k = 0) {
  std::vector<char> in_core(graph.node_count(), 0);
  for (const NodeId v : core_nodes) in_core[v] = 1;
  std::vector<char> seen(graph.node_count(), 0);
  std::vector<NodeId> sorted(core_nodes.begin(), core_nodes.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<Substructure> out;
  std::vector<NodeId> queue;
  for (const NodeId root : sorted) {
    if (seen[root]) continue;
    Substructure sub;
    sub.k = k;
    queue.assign(1, root);
    seen[root] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId v = queue[head];
      sub.members.push_back(v);
      for (const NodeId u : graph.neighbors(v)) {
        if (in_core[u] && !seen[u]) {
          seen[u] = 1;
          queue.push_back(u);
        }
      }
    }
    std::sort(sub.members.begin(), sub.members.end());
    out.push_back(std::move(sub));
  }
  return out;
}

// Rounds k = ceil(delta), ceil(delta) + 1, ... until the k-core is empty (the
// empty round is not kept). Singleton components are dropped since they have
// no node pair to score.
inline RoundSchedule propose_regions(const AttributedGraph& graph) {
  RoundSchedule schedule;
  schedule.k_start =
      static_cast<std::size_t>(std::ceil(average_degree(graph)));
  const std::vector<std::size_t> cores = core_numbers(graph);
  for (std::size_t k = schedule.k_start;; ++k) {
    const std::vector<NodeId> core = nodes_with_core_at_least(cores, k);
    if (core.empty()) break;
    DetectionRound round;
    round.k = k;
    for (auto& sub : connected_substructures(graph, core, k)) {
      if (sub.members.size() >= 2) round.substructures.push_back(std::move(sub));
    }
    schedule.rounds.push_back(std::move(round));
  }
  return schedule;
}

inline nlohmann::json to_json(const RoundSchedule& schedule) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const DetectionRound& round : schedule.rounds) {
    nlohmann::json subs = nlohmann::json::array();
    for (const Substructure& sub : round.substructures) {
      subs.push_back(sub.members);
    }
    rounds.push_back({{"k", round.k}, {"substructures", std::move(subs)}});
  }
  return {{"k_start", schedule.k_start},
          {"round_count", schedule.round_count()},
          {"rounds", std::move(rounds)}};
}

inline RoundSchedule schedule_from_json(const nlohmann::json& j) {
  RoundSchedule schedule;
  schedule.k_start = j.at("k_start").get<std::size_t>();
  for (const auto& r : j.at("rounds")) {
    DetectionRound round;
    round.k = r.at("k").get<std::size_t>();
    for (const auto& s : r.at("substructures")) {
      Substructure sub;
      sub.k = round.k;
      sub.members = s.get<std::vector<NodeId>>();
      round.substructures.push_back(std::move(sub));
    }
    schedule.rounds.push_back(std::move(round));
  }
  return schedule;
}

}  // namespace arise

#endif  // ARISE_REGION_PROPOSAL_HPP_
