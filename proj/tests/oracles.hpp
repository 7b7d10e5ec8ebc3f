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

// Test-only reference implementations. Deliberately naive: each one follows
// the textbook definition rather than the library's algorithm.

#ifndef ARISE_TESTS_ORACLES_HPP_
#define ARISE_TESTS_ORACLES_HPP_

#include <algorithm>
#include <set>
#include <vector>

#include "arise/graph.hpp"

namespace arise::oracle {

// Repeatedly deletes any node with fewer than k remaining neighbors until
// nothing changes. Uses a dense adjacency matrix.
inline std::vector<NodeId> k_core_by_peeling(const AttributedGraph& g,
                                             std::size_t k) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const Edge& e : g.edges()) adj[e.u][e.v] = adj[e.v][e.u] = 1;
  std::vector<char> alive(n, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      std::size_t deg = 0;
      for (std::size_t u = 0; u < n; ++u) deg += alive[u] && adj[v][u];
      if (deg < k) {
        alive[v] = 0;
        changed = true;
      }
    }
  }
  std::vector<NodeId> out;
  for (std::size_t v = 0; v < n; ++v) {
    if (alive[v]) out.push_back(static_cast<NodeId>(v));
  }
  return out;
}

// Components by repeated depth-first search restricted to `nodes`.
inline std::set<std::set<NodeId>> components(const AttributedGraph& g,
                                             const std::vector<NodeId>& nodes) {
  std::set<NodeId> pool(nodes.begin(), nodes.end());
  std::set<std::set<NodeId>> out;
  while (!pool.empty()) {
    std::set<NodeId> comp;
    std::vector<NodeId> stack{*pool.begin()};
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      if (!pool.count(v)) continue;
      pool.erase(v);
      comp.insert(v);
      for (const NodeId u : g.neighbors(v)) {
        if (pool.count(u)) stack.push_back(u);
      }
    }
    out.insert(comp);
  }
  return out;
}

inline std::set<NodeId> reachable(const AttributedGraph& g, NodeId start) {
  std::vector<NodeId> all(g.node_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<NodeId>(i);
  for (const auto& c : components(g, all)) {
    if (c.count(start)) return c;
  }
  return {};
}

// Counts wins over all (positive, negative) pairs; ties count one half.
inline double pairwise_auc(const std::vector<double>& s,
                           const std::vector<int>& y) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j]) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 1.0;
      if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

// Rank of node i = 1 + #{j : s_j > s_i, or s_j == s_i and j < i}.
inline std::vector<std::size_t> ranks(const std::vector<double>& s) {
  std::vector<std::size_t> r(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::size_t ahead = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] > s[i] || (s[j] == s[i] && j < i)) ++ahead;
    }
    r[i] = ahead + 1;
  }
  return r;
}

inline double enumerated_ap(const std::vector<double>& s,
                            const std::vector<int>& y) {
  const auto r = ranks(s);
  double total = 0.0;
  double positives = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    positives += 1.0;
    // precision at rank r[i] = positives ranked at or above r[i] / r[i]
    double above = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] && r[j] <= r[i]) above += 1.0;
    }
    total += above / static_cast<double>(r[i]);
  }
  return total / positives;
}

inline double enumerated_precision_at_k(const std::vector<double>& s,
                                        const std::vector<int>& y,
                                        std::size_t k) {
  const auto r = ranks(s);
  double hits = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] && r[i] <= k) hits += 1.0;
  }
  return hits / static_cast<double>(k);
}

}  // namespace arise::oracle

#endif  // ARISE_TESTS_ORACLES_HPP_
