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

#ifndef ARISE_SCORING_HPP_
#define ARISE_SCORING_HPP_

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arise/contrast.hpp"
#include "arise/errors.hpp"
#include "arise/graph.hpp"
#include "arise/random.hpp"
#include "arise/region_proposal.hpp"

namespace arise {

enum class FusionStrategy { kWeight, kMax, kSum };

inline const char* to_string(FusionStrategy s) {
  switch (s) {
    case FusionStrategy::kMax:
      return "max";
    case FusionStrategy::kSum:
      return "sum";
    case FusionStrategy::kWeight:
      break;
  }
  return "weight";
}

inline FusionStrategy fusion_strategy_from_string(std::string_view s) {
  if (s == "weight") return FusionStrategy::kWeight;
  if (s == "max") return FusionStrategy::kMax;
  if (s == "sum") return FusionStrategy::kSum;
  throw ConfigError("unknown fusion strategy '" + std::string(s) + "'");
}

enum class Normalization { kMinMax };

struct FusionConfig {
  std::optional<double> alpha = 0.8;
  FusionStrategy strategy = FusionStrategy::kWeight;
  Normalization normalization = Normalization::kMinMax;

  void validate() const {
    if (strategy == FusionStrategy::kWeight && !alpha) {
      throw ConfigError("weight fusion requires alpha");
    }
    if (alpha && !(*alpha >= 0.0 && *alpha <= 1.0)) {
      throw ConfigError("alpha must lie in [0, 1]");
    }
  }
};

// topo and attr hold the normalized scores; the raw_ vectors keep the values
// before normalization for auditing.
struct ScoreTable {
  std::vector<double> topo;
  std::vector<double> attr;
  std::vector<double> final;
  std::vector<double> raw_topo;
  std::vector<double> raw_attr;

  std::size_t size() const { return final.size(); }
};

// Lower bound applied to an average similarity before taking its reciprocal.
inline constexpr double kSimilarityFloor = 1e-3;

// Cosine similarity; 0 when either vector has zero norm.
template <typename A, typename B>
double pair_similarity(const Eigen::MatrixBase<A>& a,
                       const Eigen::MatrixBase<B>& b) {
  if (a.size() != b.size()) throw ShapeError("pair_similarity: length mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

// Mean cosine similarity over all unordered member pairs.
inline double substructure_similarity(const Matrix& embeddings,
                                      const Substructure& sub) {
  const std::size_t size = sub.members.size();
  if (size < 2) {
    throw ContractError("substructure_similarity needs at least two members");
  }
  // Normalize once; zero rows stay zero and contribute similarity 0.
  Matrix unit(static_cast<Eigen::Index>(size), embeddings.cols());
  for (std::size_t i = 0; i < size; ++i) {
    const auto row = embeddings.row(sub.members[i]);
    const double norm = row.norm();
    if (norm == 0.0) {
      unit.row(static_cast<Eigen::Index>(i)).setZero();
    } else {
      unit.row(static_cast<Eigen::Index>(i)) = row / norm;
    }
  }
  const Eigen::MatrixXd gram = unit * unit.transpose();
  double total = 0.0;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < gram.cols(); ++j) total += gram(i, j);
  }
  const double pairs = static_cast<double>(size * (size - 1) / 2);
  return total / pairs;
}

// Fills avg_similarity of every substructure in the schedule.
inline void annotate_similarity(RoundSchedule& schedule,
                                const Matrix& embeddings) {
  for (DetectionRound& round : schedule.rounds) {
    for (Substructure& sub : round.substructures) {
      sub.avg_similarity = substructure_similarity(embeddings, sub);
    }
  }
}

// Per-round, per-node |C_j| / max(d_j, floor); nodes outside every
// substructure of a round get 0 for it. One row per round.
inline std::vector<std::vector<double>> topology_round_scores(
    const RoundSchedule& schedule, const Matrix& embeddings,
    std::size_t node_count) {
  std::vector<std::vector<double>> rounds;
  rounds.reserve(schedule.round_count());
  for (const DetectionRound& round : schedule.rounds) {
    std::vector<double> scores(node_count, 0.0);
    for (const Substructure& sub : round.substructures) {
      const double similarity = sub.avg_similarity
                                    ? *sub.avg_similarity
                                    : substructure_similarity(embeddings, sub);
      const double estimate = 1.0 / std::max(similarity, kSimilarityFloor);
      const double score = static_cast<double>(sub.members.size()) * estimate;
      for (const NodeId v : sub.members) scores[v] = score;
    }
    rounds.push_back(std::move(scores));
  }
  return rounds;
}

// score_t(v) = (1 / R^t) * sum over rounds of the round score.
inline std::vector<double> topology_scores(const RoundSchedule& schedule,
                                           const Matrix& embeddings,
                                           std::size_t node_count) {
  std::vector<double> total(node_count, 0.0);
  if (schedule.round_count() == 0) return total;
  for (const auto& round : topology_round_scores(schedule, embeddings,
                                                 node_count)) {
    for (std::size_t i = 0; i < node_count; ++i) total[i] += round[i];
  }
  const auto rounds = static_cast<double>(schedule.round_count());
  for (double& t : total) t /= rounds;
  return total;
}

// One detection round: a fresh positive/negative pair for every node from an
// rng seeded with round_seed; a_i = s_neg - s_pos.
inline std::vector<double> attribute_round(const ModelParams& params,
                                           const AttributedGraph& graph,
                                           const Matrix& projected,
                                           const TrainConfig& config,
                                           std::uint64_t round_seed) {
  Rng rng(round_seed);
  std::vector<double> out(graph.node_count());
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const ContrastPair pair =
        sample_pair(graph, static_cast<NodeId>(i), config, rng);
    const PairScore s = score_pair(params, graph, projected, pair);
    out[i] = s.s_neg - s.s_pos;
  }
  return out;
}

inline std::uint64_t attribute_round_seed(std::uint64_t seed,
                                          std::size_t round) {
  return derive_seed(seed, round);
}

// Mean of `rounds` detection rounds, round r using attribute_round_seed(seed,
// r). Rounds are summed in index order.
inline std::vector<double> attribute_scores(const ModelParams& params,
                                            const AttributedGraph& graph,
                                            const TrainConfig& config,
                                            std::size_t rounds,
                                            std::uint64_t seed) {
  if (rounds == 0) throw ConfigError("attribute scoring needs >= 1 round");
  const Matrix projected = project_all(params, graph);
  std::vector<double> total(graph.node_count(), 0.0);
  for (std::size_t r = 0; r < rounds; ++r) {
    const auto round = attribute_round(params, graph, projected, config,
                                       attribute_round_seed(seed, r));
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += round[i];
  }
  for (double& a : total) a /= static_cast<double>(rounds);
  return total;
}

// Min-max scaling to [0, 1]; a constant vector maps to zeros.
inline std::vector<double> normalize(std::span<const double> scores) {
  std::vector<double> out(scores.size(), 0.0);
  if (scores.empty()) return out;
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = (scores[i] - *lo) / range;
  }
  return out;
}

inline std::vector<double> fuse(std::span<const double> topo,
                                std::span<const double> attr,
                                const FusionConfig& config) {
  if (topo.size() != attr.size()) throw ShapeError("fuse: length mismatch");
  config.validate();
  std::vector<double> out(topo.size());
  for (std::size_t i = 0; i < topo.size(); ++i) {
    switch (config.strategy) {
      case FusionStrategy::kWeight:
        out[i] = (1.0 - *config.alpha) * topo[i] + *config.alpha * attr[i];
        break;
      case FusionStrategy::kMax:
        out[i] = std::max(topo[i], attr[i]);
        break;
      case FusionStrategy::kSum:
        out[i] = topo[i] + attr[i];
        break;
    }
  }
  return out;
}

// Normalizes raw topology and attribute scores and fuses them.
inline ScoreTable build_score_table(std::span<const double> raw_topo,
                                    std::span<const double> raw_attr,
                                    const FusionConfig& config) {
  ScoreTable table;
  table.raw_topo.assign(raw_topo.begin(), raw_topo.end());
  table.raw_attr.assign(raw_attr.begin(), raw_attr.end());
  table.topo = normalize(raw_topo);
  table.attr = normalize(raw_attr);
  table.final = fuse(table.topo, table.attr, config);
  return table;
}

}  // namespace arise

#endif  // ARISE_SCORING_HPP_
