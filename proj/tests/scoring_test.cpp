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

#include <cmath>

#include "arise/injector.hpp"
#include "arise/region_proposal.hpp"
#include "arise/scoring.hpp"
#include "arise/synthetic.hpp"

namespace arise {
namespace {

Substructure make_sub(std::vector<NodeId> members, std::size_t k = 1) {
  Substructure sub;
  sub.members = std::move(members);
  sub.k = k;
  return sub;
}

// Sparse planted-partition graph with two injected 15-cliques, so region
// proposal yields several rounds.
AttributedGraph graph_with_cliques(std::size_t n, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.node_count = n;
  spec.community_size = 20;
  spec.seed = seed;
  InjectionConfig config;
  config.clique_count = 2;
  Rng rng(seed);
  return inject_topology_anomalies(make_synthetic_graph(spec), config, rng).graph;
}

TEST(PairSimilarity, ClosedForms) {
  const Eigen::Vector2d a(1.0, 0.0);
  const Eigen::Vector2d b(1.0, 1.0);
  EXPECT_NEAR(pair_similarity(a, b), 0.7071067811865475, 1e-15);
  EXPECT_DOUBLE_EQ(pair_similarity(a, a), 1.0);
  EXPECT_DOUBLE_EQ(pair_similarity(a, Eigen::Vector2d(0.0, 3.0)), 0.0);
  EXPECT_DOUBLE_EQ(pair_similarity(a, Eigen::Vector2d::Zero()), 0.0);
  EXPECT_THROW(pair_similarity(Vector(a), Vector(Vector::Ones(3))), ShapeError);
}

TEST(SubstructureSimilarity, MeanOverPairs) {
  // Members 0 and 1 parallel, 2 orthogonal: pair sims {1, 0, 0}.
  Matrix z(4, 2);
  z << 1.0, 0.0, 2.0, 0.0, 0.0, 5.0, 9.0, 9.0;
  EXPECT_NEAR(substructure_similarity(z, make_sub({0, 1, 2})), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(substructure_similarity(z, make_sub({3})), ContractError);
}

TEST(TopologyScores, ClosedFormsAndRoundAveraging) {
  // Similarities are set directly; the embedding matrix is not consulted.
  RoundSchedule schedule;
  schedule.k_start = 1;
  DetectionRound first{1, {make_sub({0, 1, 2})}};
  first.substructures[0].avg_similarity = 0.5;
  DetectionRound second{2, {make_sub({0, 1})}};
  second.substructures[0].avg_similarity = 1.0;
  schedule.rounds = {first, second};
  const Matrix unused = Matrix::Zero(4, 1);

  const auto per_round = topology_round_scores(schedule, unused, 4);
  ASSERT_EQ(per_round.size(), 2u);
  EXPECT_DOUBLE_EQ(per_round[0][0], 6.0);
  EXPECT_DOUBLE_EQ(per_round[1][0], 2.0);
  EXPECT_DOUBLE_EQ(per_round[1][2], 0.0);

  const auto scores = topology_scores(schedule, unused, 4);
  EXPECT_DOUBLE_EQ(scores[0], 4.0);
  EXPECT_DOUBLE_EQ(scores[2], 3.0);  // detected in one of two rounds: 6 / 2
  EXPECT_DOUBLE_EQ(scores[3], 0.0);
}

TEST(TopologyScores, SimilarityFloorBoundsTheEstimate) {
  RoundSchedule schedule;
  DetectionRound round{1, {make_sub({0, 1})}};
  round.substructures[0].avg_similarity = -0.2;
  schedule.rounds = {round};
  const auto scores = topology_scores(schedule, Matrix::Zero(2, 1), 2);
  EXPECT_DOUBLE_EQ(scores[0], 2.0 / kSimilarityFloor);
  EXPECT_TRUE(std::isfinite(scores[1]));
}

TEST(TopologyScores, EmptyScheduleScoresZero) {
  RoundSchedule schedule;
  EXPECT_EQ(topology_scores(schedule, Matrix::Zero(3, 1), 3),
            (std::vector<double>{0.0, 0.0, 0.0}));
}

TEST(TopologyScores, InvariantToEmbeddingScale) {
  const auto g = graph_with_cliques(120, 4);
  const auto schedule = propose_regions(g);
  ASSERT_GT(schedule.round_count(), 0u);
  Rng rng(3);
  Matrix z(120, 6);
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = rng.uniform();
  const auto base = topology_scores(schedule, z, 120);
  const auto scaled = topology_scores(schedule, Matrix(z * 7.5), 120);
  for (std::size_t i = 0; i < base.size(); ++i) {
    EXPECT_NEAR(scaled[i], base[i], 1e-9 * std::max(1.0, base[i]));
  }
}

TEST(TopologyScores, AnnotationMatchesOnTheFly) {
  const auto g = graph_with_cliques(80, 8);
  auto schedule = propose_regions(g);
  ASSERT_GT(schedule.round_count(), 0u);
  const Matrix& z = g.attributes();
  const auto lazy = topology_scores(schedule, z, 80);
  annotate_similarity(schedule, z);
  for (const auto& round : schedule.rounds) {
    for (const auto& sub : round.substructures) ASSERT_TRUE(sub.avg_similarity);
  }
  EXPECT_EQ(topology_scores(schedule, z, 80), lazy);
}

class AttributeScoreTest : public ::testing::Test {
 protected:
  void SetUp() override {
    SyntheticSpec spec;
    spec.node_count = 40;
    spec.community_size = 10;
    spec.seed = 2;
    graph_ = std::make_unique<AttributedGraph>(make_synthetic_graph(spec));
    Rng rng(5);
    params_ = init_params(graph_->attribute_dim(), 8, rng);
  }
  std::unique_ptr<AttributedGraph> graph_;
  ModelParams params_;
  TrainConfig config_;
};

TEST_F(AttributeScoreTest, MeanOfSingleRounds) {
  const Matrix projected = project_all(params_, *graph_);
  const std::uint64_t seed = 77;
  const auto mean = attribute_scores(params_, *graph_, config_, 4, seed);
  std::vector<double> manual(graph_->node_count(), 0.0);
  for (std::size_t r = 0; r < 4; ++r) {
    const auto round = attribute_round(params_, *graph_, projected, config_,
                                       attribute_round_seed(seed, r));
    for (std::size_t i = 0; i < manual.size(); ++i) manual[i] += round[i];
  }
  for (std::size_t i = 0; i < manual.size(); ++i) {
    EXPECT_DOUBLE_EQ(mean[i], manual[i] / 4.0);
  }
}

TEST_F(AttributeScoreTest, BoundedAndDeterministic) {
  const auto a = attribute_scores(params_, *graph_, config_, 8, 1);
  const auto b = attribute_scores(params_, *graph_, config_, 8, 1);
  EXPECT_EQ(a, b);
  for (const double v : a) EXPECT_LT(std::abs(v), 1.0);
  EXPECT_THROW(attribute_scores(params_, *graph_, config_, 0, 1), ConfigError);
}

TEST(Normalize, MinMaxAndConstant) {
  const std::vector<double> raw{2.0, 4.0, 6.0};
  EXPECT_EQ(normalize(raw), (std::vector<double>{0.0, 0.5, 1.0}));
  const std::vector<double> flat{3.0, 3.0};
  EXPECT_EQ(normalize(flat), (std::vector<double>{0.0, 0.0}));
  EXPECT_TRUE(normalize(std::vector<double>{}).empty());
}

TEST(Fuse, StrategiesOnExamples) {
  const std::vector<double> topo{1.0, 0.0, 0.5};
  const std::vector<double> attr{0.0, 1.0, 0.5};
  FusionConfig weight;
  weight.alpha = 0.8;
  const auto w = fuse(topo, attr, weight);
  EXPECT_NEAR(w[0], 0.2, 1e-15);
  EXPECT_NEAR(w[1], 0.8, 1e-15);
  EXPECT_NEAR(w[2], 0.5, 1e-15);

  FusionConfig max{std::nullopt, FusionStrategy::kMax, Normalization::kMinMax};
  EXPECT_EQ(fuse(topo, attr, max), (std::vector<double>{1.0, 1.0, 0.5}));
  FusionConfig sum{std::nullopt, FusionStrategy::kSum, Normalization::kMinMax};
  EXPECT_EQ(fuse(topo, attr, sum), (std::vector<double>{1.0, 1.0, 1.0}));
}

TEST(Fuse, AlphaEndpointsSelectOneScore) {
  const std::vector<double> topo{0.1, 0.7};
  const std::vector<double> attr{0.9, 0.3};
  FusionConfig config;
  config.alpha = 0.0;
  EXPECT_EQ(fuse(topo, attr, config), topo);
  config.alpha = 1.0;
  EXPECT_EQ(fuse(topo, attr, config), attr);
}

TEST(Fuse, ConfigErrors) {
  const std::vector<double> v{0.0};
  FusionConfig missing{std::nullopt, FusionStrategy::kWeight, Normalization::kMinMax};
  EXPECT_THROW(fuse(v, v, missing), ConfigError);
  FusionConfig out_of_range;
  out_of_range.alpha = 1.5;
  EXPECT_THROW(fuse(v, v, out_of_range), ConfigError);
  const std::vector<double> two{0.0, 1.0};
  EXPECT_THROW(fuse(v, two, FusionConfig{}), ShapeError);
}

TEST(Fuse, MonotoneInEachScore) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const double t = rng.uniform();
    const double a = rng.uniform();
    const double bump = rng.uniform();
    for (const auto strategy :
         {FusionStrategy::kWeight, FusionStrategy::kMax, FusionStrategy::kSum}) {
      FusionConfig config;
      config.strategy = strategy;
      config.alpha = rng.uniform();
      const std::vector<double> t0{t}, a0{a}, t1{t + bump}, a1{a + bump};
      const double base = fuse(t0, a0, config)[0];
      EXPECT_GE(fuse(t1, a0, config)[0], base);
      EXPECT_GE(fuse(t0, a1, config)[0], base);
    }
  }
}

TEST(ScoreTable, KeepsRawAndNormalizedColumns) {
  const std::vector<double> topo{0.0, 10.0, 5.0};
  const std::vector<double> attr{-0.5, 0.5, 0.0};
  const auto table = build_score_table(topo, attr, FusionConfig{});
  EXPECT_EQ(table.raw_topo, topo);
  EXPECT_EQ(table.raw_attr, attr);
  EXPECT_EQ(table.topo, (std::vector<double>{0.0, 1.0, 0.5}));
  EXPECT_EQ(table.attr, (std::vector<double>{0.0, 1.0, 0.5}));
  EXPECT_EQ(table.size(), 3u);
  for (const double f : table.final) {
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
  }
}

TEST(FusionStrategyNames, RoundTrip) {
  for (const auto s :
       {FusionStrategy::kWeight, FusionStrategy::kMax, FusionStrategy::kSum}) {
    EXPECT_EQ(fusion_strategy_from_string(to_string(s)), s);
  }
  EXPECT_THROW(fusion_strategy_from_string("product"), ConfigError);
}

}  // namespace
}  // namespace arise
