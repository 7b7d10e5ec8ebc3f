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

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "arise/injector.hpp"
#include "arise/synthetic.hpp"

namespace arise {
namespace {

AttributedGraph cora_sized_graph() {
  SyntheticSpec spec;
  spec.node_count = 2708;
  spec.community_size = 400;
  spec.seed = 1;
  return make_synthetic_graph(spec);
}

std::size_t induced_edges(const AttributedGraph& g,
                          const std::vector<NodeId>& nodes) {
  std::size_t count = 0;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      count += g.has_edge(nodes[a], nodes[b]) ? 1 : 0;
    }
  }
  return count;
}

TEST(InjectTopology, CoraSettingsLabelSeventyFive) {
  const auto g = cora_sized_graph();
  InjectionConfig config;
  Rng rng(3);
  const auto out = inject_topology_anomalies(g, config, rng);
  EXPECT_EQ(out.truth.count(AnomalyKind::kTopology), 75u);
  ASSERT_EQ(out.cliques.size(), 5u);
  std::set<NodeId> all;
  for (const auto& c : out.cliques) {
    EXPECT_EQ(c.size(), 15u);
    EXPECT_EQ(induced_edges(out.graph, c), 105u);
    all.insert(c.begin(), c.end());
  }
  EXPECT_EQ(all.size(), 75u);  // disjoint rounds
  EXPECT_EQ(out.graph.attributes(), g.attributes());
}

TEST(InjectTopology, CliqueMembersGainAtMostFourteenNeighbors) {
  const auto g = cora_sized_graph();
  InjectionConfig config;
  Rng rng(4);
  const auto out = inject_topology_anomalies(g, config, rng);
  for (const auto& c : out.cliques) {
    for (const NodeId v : c) {
      const auto gained = out.graph.degree(v) - g.degree(v);
      EXPECT_LE(gained, 14u);
    }
  }
}

TEST(InjectTopology, EdgeDropRemovesTenPerClique) {
  // Edgeless base graph: every clique edge is new.
  const AttributedGraph g(200, {}, Matrix::Zero(200, 2));
  InjectionConfig config;
  config.edge_drop_ratio = 0.1;
  Rng rng(9);
  const auto out = inject_topology_anomalies(g, config, rng);
  for (const auto& c : out.cliques) EXPECT_EQ(induced_edges(out.graph, c), 95u);
  EXPECT_EQ(out.graph.edge_count(), 5u * 95u);
}

TEST(InjectTopology, DropNeverRemovesPreexistingEdges) {
  const auto g = cora_sized_graph();
  InjectionConfig config;
  config.edge_drop_ratio = 0.5;
  Rng rng(12);
  const auto out = inject_topology_anomalies(g, config, rng);
  for (const Edge& e : g.edges()) EXPECT_TRUE(out.graph.has_edge(e.u, e.v));
}

TEST(InjectTopology, InsufficientNodesIsCapacityError) {
  const AttributedGraph g(20, {}, Matrix::Zero(20, 1));
  InjectionConfig config;
  Rng rng(1);
  EXPECT_THROW(inject_topology_anomalies(g, config, rng), CapacityError);
}

TEST(InjectAttribute, CopiesUniqueFarthestCandidate) {
  // Node rows are all equal except node 4; every candidate set of size 4 out
  // of the other 4 nodes contains it.
  Matrix x = Matrix::Zero(5, 2);
  x.row(4) << 3.0, 4.0;
  const AttributedGraph g(5, {}, x);
  InjectionConfig config;
  config.clique_count = 0;
  config.attr_anomaly_count = 1;
  config.candidate_set_size = 4;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto out = inject_attribute_anomalies(g, config, rng);
    for (NodeId v = 0; v < 4; ++v) {
      if (out.truth.kind(v) == AnomalyKind::kAttribute) {
        EXPECT_EQ(out.graph.attributes().row(v), x.row(4));
      }
    }
  }
}

TEST(InjectAttribute, TiesGoToLowestCandidateId) {
  Matrix x = Matrix::Zero(4, 1);
  x(1, 0) = 1.0;
  x(2, 0) = -1.0;  // same distance from node 0 as node 1
  x(3, 0) = 0.5;
  const AttributedGraph g(4, {}, x);
  InjectionConfig config;
  config.clique_count = 0;
  config.attr_anomaly_count = 1;
  config.candidate_set_size = 3;
  GroundTruth truth(4);
  for (NodeId v = 1; v < 4; ++v) truth.mark(v, AnomalyKind::kTopology);
  Rng rng(0);
  const auto out = inject_attribute_anomalies(g, config, rng, truth);
  EXPECT_EQ(out.truth.kind(0), AnomalyKind::kAttribute);
  EXPECT_DOUBLE_EQ(out.graph.attributes()(0, 0), 1.0);
}

TEST(InjectAnomalies, CoraCountsAndRowOrigins) {
  const auto g = cora_sized_graph();
  InjectionConfig config;
  config.seed = 77;
  const auto out = inject_anomalies(g, config);
  EXPECT_EQ(out.truth.count(AnomalyKind::kTopology), 75u);
  EXPECT_EQ(out.truth.count(AnomalyKind::kAttribute), 75u);
  EXPECT_EQ(out.truth.anomaly_count(), 150u);

  // Attribute injection leaves topology as after clique planting; check
  // every changed row equals some pre-injection row.
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (out.truth.kind(v) != AnomalyKind::kAttribute) {
      EXPECT_EQ(out.graph.attributes().row(v), g.attributes().row(v));
      continue;
    }
    bool found = false;
    for (NodeId u = 0; u < g.node_count() && !found; ++u) {
      found = u != v && out.graph.attributes().row(v) == g.attributes().row(u);
    }
    EXPECT_TRUE(found) << "node " << v;
  }
}

TEST(InjectAnomalies, AttributeStageKeepsEdges) {
  const auto g = cora_sized_graph();
  InjectionConfig config;
  Rng rng(5);
  const auto topo = inject_topology_anomalies(g, config, rng);
  const auto both = inject_attribute_anomalies(topo.graph, config, rng, topo.truth);
  EXPECT_EQ(both.graph.edges(), topo.graph.edges());
}

TEST(InjectAnomalies, SameSeedIsBitIdentical) {
  const auto g = cora_sized_graph();
  InjectionConfig config;
  config.seed = 2024;
  config.edge_drop_ratio = 0.1;
  const auto a = inject_anomalies(g, config);
  const auto b = inject_anomalies(g, config);
  EXPECT_EQ(a.graph.edges(), b.graph.edges());
  EXPECT_EQ(a.graph.attributes(), b.graph.attributes());
  EXPECT_EQ(a.truth, b.truth);
}

TEST(InjectAnomalies, ImbalancedCountsAreExact) {
  const auto g = cora_sized_graph();
  for (const auto& [cliques, attrs] :
       std::vector<std::pair<std::size_t, std::size_t>>{{2, 120}, {8, 30}, {0, 150}, {10, 0}}) {
    InjectionConfig config;
    config.clique_count = cliques;
    config.attr_anomaly_count = attrs;
    config.seed = cliques * 100 + attrs;
    const auto out = inject_anomalies(g, config);
    EXPECT_EQ(out.truth.count(AnomalyKind::kTopology), cliques * 15);
    EXPECT_EQ(out.truth.count(AnomalyKind::kAttribute), attrs);
  }
}

TEST(InjectAnomalies, ValidatesCapacity) {
  const AttributedGraph g(100, {}, Matrix::Zero(100, 1));
  InjectionConfig config;  // 75 + 75 > 100
  EXPECT_THROW(inject_anomalies(g, config), CapacityError);
  config.clique_count = 1;
  config.attr_anomaly_count = 10;
  config.edge_drop_ratio = 1.0;
  EXPECT_THROW(inject_anomalies(g, config), ConfigError);
}

TEST(GroundTruthCsv, RoundTrip) {
  GroundTruth truth(4);
  truth.mark(1, AnomalyKind::kTopology);
  truth.mark(3, AnomalyKind::kAttribute);
  std::ostringstream out;
  write_ground_truth(out, truth);
  EXPECT_EQ(out.str(),
            "node_id,label,kind\n0,0,none\n1,1,topology\n2,0,none\n3,1,attribute\n");
  std::istringstream in(out.str());
  EXPECT_EQ(read_ground_truth(in, "gt"), truth);
}

}  // namespace
}  // namespace arise
