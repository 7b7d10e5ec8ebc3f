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

#ifndef ARISE_SYNTHETIC_HPP_
#define ARISE_SYNTHETIC_HPP_

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "arise/errors.hpp"
#include "arise/graph.hpp"
#include "arise/random.hpp"

namespace arise {

// Planted-partition graph with bag-of-words style binary attributes. Nodes in
// the same community share a block of "topic" dimensions, so attributes are
// homophilous along edges.
struct SyntheticSpec {
  std::size_t node_count = 500;
  std::size_t community_size = 50;
  double average_degree = 4.0;
  double intra_fraction = 0.9;   // share of edges inside a community
  std::size_t topic_dims = 8;    // attribute dims per community
  double topic_on = 0.5;         // P(bit) on own topic dims
  double noise_on = 0.02;        // P(bit) elsewhere
  std::uint64_t seed = 0;
};

inline AttributedGraph make_synthetic_graph(const SyntheticSpec& spec) {
  const std::size_t n = spec.node_count;
  if (n < 2 || spec.community_size == 0) {
    throw ConfigError("synthetic graph needs n >= 2 and community_size >= 1");
  }
  Rng rng(spec.seed);
  const std::size_t communities =
      (n + spec.community_size - 1) / spec.community_size;
  auto community_of = [&](std::size_t v) { return v / spec.community_size; };

  const auto target_edges = static_cast<std::size_t>(
      std::llround(spec.average_degree * static_cast<double>(n) / 2.0));
  const std::size_t max_edges = n * (n - 1) / 2;
  if (target_edges > max_edges) throw ConfigError("average degree too high");

  std::set<Edge> edges;
  while (edges.size() < target_edges) {
    const auto u = static_cast<NodeId>(rng.below(n));
    NodeId v;
    if (rng.uniform() < spec.intra_fraction) {
      const std::size_t c = community_of(u);
      const std::size_t lo = c * spec.community_size;
      const std::size_t hi = std::min(n, lo + spec.community_size);
      if (hi - lo < 2) continue;
      v = static_cast<NodeId>(lo + rng.below(hi - lo));
    } else {
      v = static_cast<NodeId>(rng.below(n));
    }
    if (u == v) continue;
    edges.insert(make_edge(u, v));
  }

  const std::size_t dim = communities * spec.topic_dims;
  Matrix attributes = Matrix::Zero(static_cast<Eigen::Index>(n),
                                   static_cast<Eigen::Index>(dim));
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t own = community_of(v);
    for (std::size_t j = 0; j < dim; ++j) {
      const double p = j / spec.topic_dims == own ? spec.topic_on : spec.noise_on;
      if (rng.uniform() < p) {
        attributes(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(j)) = 1.0;
      }
    }
  }
  const std::vector<Edge> edge_list(edges.begin(), edges.end());
  return AttributedGraph(n, edge_list, std::move(attributes));
}

}  // namespace arise

#endif  // ARISE_SYNTHETIC_HPP_
