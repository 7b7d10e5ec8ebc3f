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

#ifndef ARISE_METRICS_HPP_
#define ARISE_METRICS_HPP_

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "arise/errors.hpp"
#include "arise/injector.hpp"

namespace arise {

inline const std::vector<std::size_t>& default_k_list() {
  static const std::vector<std::size_t> k{50, 100, 150, 200, 250, 300};
  return k;
}

namespace detail {

inline void check_aligned(std::span<const double> scores,
                          std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw ShapeError("scores and labels differ in length");
  }
}

// Indices by descending score; equal scores keep ascending index order.
inline std::vector<std::size_t> rank_descending(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  return order;
}

}  // namespace detail

// Mann-Whitney form: P(pos > neg) + 0.5 P(pos == neg), via midranks.
inline double roc_auc(std::span<const double> scores,
                      std::span<const int> labels) {
  detail::check_aligned(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positives = 0.0;
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] != 0) {
        positives += 1.0;
        rank_sum += midrank;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(scores.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    throw MetricError("roc_auc needs both positive and negative labels");
  }
  return (rank_sum - positives * (positives + 1.0) / 2.0) /
         (positives * negatives);
}

// Mean of precision@rank over the ranks of the positives.
inline double average_precision(std::span<const double> scores,
                                std::span<const int> labels) {
  detail::check_aligned(scores, labels);
  const auto order = detail::rank_descending(scores);
  double hits = 0.0;
  double total = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (labels[order[r]] != 0) {
      hits += 1.0;
      total += hits / static_cast<double>(r + 1);
    }
  }
  if (hits == 0.0) throw MetricError("average_precision needs a positive label");
  return total / hits;
}

inline double precision_at_k(std::span<const double> scores,
                             std::span<const int> labels, std::size_t k) {
  detail::check_aligned(scores, labels);
  if (k < 1 || k > scores.size()) {
    throw RangeError("precision_at_k: k = " + std::to_string(k) +
                     " outside [1, " + std::to_string(scores.size()) + "]");
  }
  const auto order = detail::rank_descending(scores);
  std::size_t hits = 0;
  for (std::size_t r = 0; r < k; ++r) hits += labels[order[r]] != 0 ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(k);
}

// ROC vertices from (0,0) to (1,1), one per distinct score threshold.
inline std::vector<std::pair<double, double>> roc_points(
    std::span<const double> scores, std::span<const int> labels) {
  detail::check_aligned(scores, labels);
  const auto order = detail::rank_descending(scores);
  double positives = 0.0;
  for (const int l : labels) positives += l != 0 ? 1.0 : 0.0;
  const double negatives = static_cast<double>(labels.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    throw MetricError("roc_points needs both positive and negative labels");
  }
  std::vector<std::pair<double, double>> points{{0.0, 0.0}};
  double tp = 0.0;
  double fp = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] != 0 ? tp : fp) += 1.0;
      ++j;
    }
    points.emplace_back(fp / negatives, tp / positives);
    i = j;
  }
  return points;
}

struct KindMetrics {
  std::size_t positives = 0;
  double auc = 0.0;
  double auprc = 0.0;
  std::map<std::size_t, double> precision_at_k;
};

struct EvalReport {
  double auc = 0.0;
  double auprc = 0.0;
  std::map<std::size_t, double> precision_at_k;
  std::vector<std::pair<double, double>> roc_points;
  // Keyed by "topology" / "attribute"; present only when that kind occurs.
  std::map<std::string, KindMetrics> per_kind;
};

// Full-population metrics plus per-kind variants. Per-kind AUC and AUPRC are
// computed on that kind's anomalies against the non-anomalous nodes;
// per-kind Precision@K ranks the whole population. k values above the
// relevant anomaly count are skipped.
inline EvalReport evaluate(std::span<const double> scores,
                           const GroundTruth& truth,
                           std::span<const std::size_t> k_list) {
  if (scores.size() != truth.size()) {
    throw ShapeError("evaluate: score and ground-truth lengths differ");
  }
  const std::vector<int> labels = truth.labels();
  EvalReport report;
  report.auc = roc_auc(scores, labels);
  report.auprc = average_precision(scores, labels);
  report.roc_points = roc_points(scores, labels);
  const std::size_t anomalies = truth.anomaly_count();
  for (const std::size_t k : k_list) {
    if (k >= 1 && k <= anomalies && k <= scores.size()) {
      report.precision_at_k[k] = precision_at_k(scores, labels, k);
    }
  }

  for (const AnomalyKind kind : {AnomalyKind::kTopology, AnomalyKind::kAttribute}) {
    const std::size_t count = truth.count(kind);
    if (count == 0) continue;
    KindMetrics m;
    m.positives = count;
    std::vector<double> sub_scores;
    std::vector<int> sub_labels;
    std::vector<int> full_labels(scores.size(), 0);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (truth.kind(i) == kind) full_labels[i] = 1;
      if (truth.kind(i) == kind || truth.kind(i) == AnomalyKind::kNone) {
        sub_scores.push_back(scores[i]);
        sub_labels.push_back(truth.kind(i) == kind ? 1 : 0);
      }
    }
    if (sub_scores.size() > count) {
      m.auc = roc_auc(sub_scores, sub_labels);
    }
    m.auprc = average_precision(sub_scores, sub_labels);
    for (const std::size_t k : k_list) {
      if (k >= 1 && k <= count && k <= scores.size()) {
        m.precision_at_k[k] = precision_at_k(scores, full_labels, k);
      }
    }
    report.per_kind.emplace(to_string(kind), std::move(m));
  }
  return report;
}

inline nlohmann::json to_json(const EvalReport& report) {
  auto pk = [](const std::map<std::size_t, double>& m) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : m) j[std::to_string(k)] = v;
    return j;
  };
  nlohmann::json kinds = nlohmann::json::object();
  for (const auto& [name, m] : report.per_kind) {
    kinds[name] = {{"positives", m.positives},
                   {"auc", m.auc},
                   {"auprc", m.auprc},
                   {"precision_at_k", pk(m.precision_at_k)}};
  }
  return {{"auc", report.auc},
          {"auprc", report.auprc},
          {"precision_at_k", pk(report.precision_at_k)},
          {"per_kind", std::move(kinds)}};
}

}  // namespace arise

#endif  // ARISE_METRICS_HPP_
