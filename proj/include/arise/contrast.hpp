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

#ifndef ARISE_CONTRAST_HPP_
#define ARISE_CONTRAST_HPP_

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arise/errors.hpp"
#include "arise/graph.hpp"
#include "arise/random.hpp"

namespace arise {

struct TrainConfig {
  std::size_t hidden_dim = 64;
  std::size_t subgraph_size = 4;
  std::size_t layers = 1;
  double learning_rate = 0.003;
  std::size_t epochs = 100;
  std::size_t batch_size = 300;
  std::size_t rounds_attr = 256;
  std::uint64_t seed = 0;
  double rwr_restart_prob = 0.15;

  void validate() const {
    if (subgraph_size < 2) throw ConfigError("subgraph_size must be >= 2");
    if (hidden_dim < 1) throw ConfigError("hidden_dim must be >= 1");
    if (layers != 1) throw ConfigError("only a single GCN layer is supported");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (rounds_attr < 1) throw ConfigError("rounds_attr must be >= 1");
    if (!(rwr_restart_prob > 0.0 && rwr_restart_prob < 1.0)) {
      throw ConfigError("rwr_restart_prob must lie in (0, 1)");
    }
  }
};

inline void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"hidden_dim", c.hidden_dim},
                     {"subgraph_size", c.subgraph_size},
                     {"layers", c.layers},
                     {"learning_rate", c.learning_rate},
                     {"epochs", c.epochs},
                     {"batch_size", c.batch_size},
                     {"rounds_attr", c.rounds_attr},
                     {"seed", c.seed},
                     {"rwr_restart_prob", c.rwr_restart_prob}};
}

inline void from_json(const nlohmann::json& j, TrainConfig& c) {
  c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
  c.subgraph_size = j.value("subgraph_size", c.subgraph_size);
  c.layers = j.value("layers", c.layers);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.rounds_attr = j.value("rounds_attr", c.rounds_attr);
  c.seed = j.value("seed", c.seed);
  c.rwr_restart_prob = j.value("rwr_restart_prob", c.rwr_restart_prob);
}

// W (d x d') is shared by the subgraph GCN layer and the node projection;
// the bilinear discriminator uses W~ (d' x d').
struct ModelParams {
  Matrix gcn_weight;
  Matrix bilinear_weight;

  std::size_t input_dim() const {
    return static_cast<std::size_t>(gcn_weight.rows());
  }
  std::size_t hidden_dim() const {
    return static_cast<std::size_t>(gcn_weight.cols());
  }
  bool all_finite() const {
    return gcn_weight.allFinite() && bilinear_weight.allFinite();
  }
};

// Glorot-uniform initialization of both matrices.
inline ModelParams init_params(std::size_t input_dim, std::size_t hidden_dim,
                               Rng& rng) {
  auto glorot = [&rng](std::size_t rows, std::size_t cols) {
    const double bound =
        std::sqrt(6.0 / static_cast<double>(rows + cols));
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = (2.0 * rng.uniform() - 1.0) * bound;
    }
    return m;
  };
  ModelParams params;
  params.gcn_weight = glorot(input_dim, hidden_dim);
  params.bilinear_weight = glorot(hidden_dim, hidden_dim);
  return params;
}

// Target node with its positive subgraph (anchored at the target) and a
// negative subgraph anchored at another node. Anchors sit at position 0.
struct ContrastPair {
  NodeId target = 0;
  std::vector<NodeId> positive_nodes;
  std::vector<NodeId> negative_nodes;
};

struct PairScore {
  double s_pos = 0.5;
  double s_neg = 0.5;
};

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline Vector relu(const Vector& v) { return v.cwiseMax(0.0); }

// Random walk with restart from `anchor`. Collects distinct nodes in
// first-visit order until `size` are found or the step budget
// 10 * size * (delta + 1) runs out. The anchor is always first.
inline std::vector<NodeId> rwr_sample(const AttributedGraph& graph,
                                      NodeId anchor, std::size_t size,
                                      double restart_prob, Rng& rng) {
  std::vector<NodeId> visited{anchor};
  if (size <= 1 || graph.degree(anchor) == 0) return visited;
  const auto budget = static_cast<std::size_t>(
      std::ceil(10.0 * static_cast<double>(size) *
                (average_degree(graph) + 1.0)));
  NodeId current = anchor;
  for (std::size_t step = 0; step < budget && visited.size() < size; ++step) {
    if (current != anchor && rng.uniform() < restart_prob) {
      current = anchor;
      continue;
    }
    const auto nb = graph.neighbors(current);
    current = nb[static_cast<std::size_t>(rng.below(nb.size()))];
    if (std::find(visited.begin(), visited.end(), current) == visited.end()) {
      visited.push_back(current);
    }
  }
  return visited;
}

inline ContrastPair sample_pair(const AttributedGraph& graph, NodeId target,
                                const TrainConfig& config, Rng& rng) {
  const std::size_t n = graph.node_count();
  if (n < 2) throw ContractError("contrast pairs need at least two nodes");
  ContrastPair pair;
  pair.target = target;
  pair.positive_nodes = rwr_sample(graph, target, config.subgraph_size,
                                   config.rwr_restart_prob, rng);
  auto other = static_cast<NodeId>(rng.below(n - 1));
  if (other >= target) ++other;
  pair.negative_nodes = rwr_sample(graph, other, config.subgraph_size,
                                   config.rwr_restart_prob, rng);
  return pair;
}

struct SubgraphEncoding {
  Eigen::MatrixXd embeddings;  // E, one row per subgraph node
  Vector readout;              // e, column mean of E
  Eigen::MatrixXd propagation; // normalized adjacency used by the layer
  Eigen::MatrixXd pre_activation;
};

namespace detail {

// Runs the GCN layer given projected rows x_v W for each subgraph node.
// row_of(v) must return a d'-vector; the anchor row is replaced by zeros when
// masked.
template <typename RowFn>
SubgraphEncoding encode_projected(const AttributedGraph& graph,
                                  std::span<const NodeId> nodes,
                                  bool mask_anchor, std::size_t hidden_dim,
                                  RowFn&& row_of) {
  if (nodes.empty()) throw ContractError("encode_subgraph: empty node list");
  const auto s = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd projected(s, static_cast<Eigen::Index>(hidden_dim));
  for (Eigen::Index i = 0; i < s; ++i) {
    if (i == 0 && mask_anchor) {
      projected.row(i).setZero();
    } else {
      projected.row(i) = row_of(nodes[static_cast<std::size_t>(i)]);
    }
  }
  SubgraphEncoding enc;
  enc.propagation = normalized_adjacency(graph, nodes);
  enc.pre_activation = enc.propagation * projected;
  enc.embeddings = enc.pre_activation.cwiseMax(0.0);
  enc.readout = enc.embeddings.colwise().mean().transpose();
  return enc;
}

}  // namespace detail

// H1 = ReLU(norm_adj * H0 * W) over the induced subgraph, with the anchor's
// attribute row zeroed when mask_anchor; readout is the mean row.
inline SubgraphEncoding encode_subgraph(const ModelParams& params,
                                        const AttributedGraph& graph,
                                        std::span<const NodeId> nodes,
                                        bool mask_anchor) {
  return detail::encode_projected(
      graph, nodes, mask_anchor, params.hidden_dim(), [&](NodeId v) {
        return (graph.attribute_row(v) * params.gcn_weight).transpose().eval();
      });
}

// z = ReLU(x W) with the GCN weight.
template <typename Row>
Vector encode_node(const ModelParams& params, const Row& attribute_row) {
  if (static_cast<std::size_t>(attribute_row.size()) != params.input_dim()) {
    throw ShapeError("encode_node: attribute row has wrong length");
  }
  return relu((attribute_row * params.gcn_weight).transpose());
}

inline double bilinear_logit(const ModelParams& params, const Vector& z,
                             const Vector& e) {
  return z.dot(params.bilinear_weight * e);
}

// sigmoid(z W~ e^T).
inline double discriminate(const ModelParams& params, const Vector& z,
                           const Vector& e) {
  return sigmoid(bilinear_logit(params, z, e));
}

// Sum of binary cross-entropy over both members of every pair; positives
// carry label 1, negatives label 0.
inline double bce_loss(std::span<const PairScore> scores) {
  double loss = 0.0;
  for (const PairScore& s : scores) {
    loss -= std::log(s.s_pos) + std::log1p(-s.s_neg);
  }
  return loss;
}

// x W for every node, before the activation.
inline Matrix project_all(const ModelParams& params,
                          const AttributedGraph& graph) {
  return graph.attributes() * params.gcn_weight;
}

// Row i = encode_node(x_i).
inline Matrix embed_all(const ModelParams& params,
                        const AttributedGraph& graph) {
  return project_all(params, graph).cwiseMax(0.0);
}

// Scores one contrast pair from project_all() output.
inline PairScore score_pair(const ModelParams& params,
                            const AttributedGraph& graph,
                            const Matrix& projected, const ContrastPair& pair) {
  auto row_of = [&](NodeId v) { return projected.row(v).transpose(); };
  const Vector z = relu(projected.row(pair.target).transpose());
  const auto pos = detail::encode_projected(
      graph, pair.positive_nodes, true, params.hidden_dim(), row_of);
  const auto neg = detail::encode_projected(
      graph, pair.negative_nodes, true, params.hidden_dim(), row_of);
  return {discriminate(params, z, pos.readout),
          discriminate(params, z, neg.readout)};
}

struct Gradients {
  Matrix gcn_weight;
  Matrix bilinear_weight;
  double loss = 0.0;
};

// Exact gradients of the summed BCE over `pairs`. Back-propagates through the
// bilinear score, the mean readout, the GCN layer and the node projection.
// ReLU has derivative 0 at a pre-activation of exactly 0.
inline Gradients gradients(const ModelParams& params,
                           const AttributedGraph& graph,
                           std::span<const ContrastPair> pairs) {
  if (pairs.empty()) throw ContractError("gradients: empty batch");
  const auto hidden = static_cast<Eigen::Index>(params.hidden_dim());

  // Compact the rows the batch touches so x W is computed once per node.
  std::vector<std::int64_t> slot(graph.node_count(), -1);
  std::vector<NodeId> rows;
  auto touch = [&](NodeId v) {
    if (slot[v] < 0) {
      slot[v] = static_cast<std::int64_t>(rows.size());
      rows.push_back(v);
    }
  };
  for (const ContrastPair& p : pairs) {
    touch(p.target);
    for (const NodeId v : p.positive_nodes) touch(v);
    for (const NodeId v : p.negative_nodes) touch(v);
  }
  Matrix features(static_cast<Eigen::Index>(rows.size()),
                  params.gcn_weight.rows());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    features.row(static_cast<Eigen::Index>(r)) = graph.attribute_row(rows[r]);
  }
  const Matrix projected = features * params.gcn_weight;
  Matrix projected_grad = Matrix::Zero(projected.rows(), hidden);

  Gradients out;
  out.bilinear_weight = Matrix::Zero(hidden, hidden);
  auto row_of = [&](NodeId v) { return projected.row(slot[v]).transpose(); };

  for (const ContrastPair& p : pairs) {
    const Vector q = projected.row(slot[p.target]).transpose();
    const Vector z = relu(q);
    Vector z_grad = Vector::Zero(hidden);

    auto branch = [&](std::span<const NodeId> nodes, double label) {
      const SubgraphEncoding enc = detail::encode_projected(
          graph, nodes, true, params.hidden_dim(), row_of);
      const Vector we = params.bilinear_weight * enc.readout;
      const double logit = z.dot(we);
      out.loss += label > 0.5 ? softplus(-logit) : softplus(logit);
      const double g = sigmoid(logit) - label;

      out.bilinear_weight.noalias() += g * z * enc.readout.transpose();
      z_grad.noalias() += g * we;
      const Vector e_grad = g * params.bilinear_weight.transpose() * z;

      const auto s = static_cast<double>(nodes.size());
      Eigen::MatrixXd pre_grad(enc.pre_activation.rows(), hidden);
      for (Eigen::Index i = 0; i < pre_grad.rows(); ++i) {
        for (Eigen::Index j = 0; j < hidden; ++j) {
          pre_grad(i, j) =
              enc.pre_activation(i, j) > 0.0 ? e_grad(j) / s : 0.0;
        }
      }
      // propagation is symmetric, so its transpose is itself.
      const Eigen::MatrixXd input_grad = enc.propagation * pre_grad;
      // Row 0 is the masked anchor: its input is constant zero.
      for (std::size_t i = 1; i < nodes.size(); ++i) {
        projected_grad.row(slot[nodes[i]]) +=
            input_grad.row(static_cast<Eigen::Index>(i));
      }
    };
    branch(p.positive_nodes, 1.0);
    branch(p.negative_nodes, 0.0);

    for (Eigen::Index j = 0; j < hidden; ++j) {
      if (!(q(j) > 0.0)) z_grad(j) = 0.0;
    }
    projected_grad.row(slot[p.target]) += z_grad.transpose();
  }
  out.gcn_weight = features.transpose() * projected_grad;
  return out;
}

// Adaptive-moment gradient descent (beta1 = 0.9, beta2 = 0.999, eps = 1e-8).
class AdamOptimizer {
 public:
  AdamOptimizer(const ModelParams& params, double learning_rate)
      : learning_rate_(learning_rate),
        m_gcn_(Matrix::Zero(params.gcn_weight.rows(), params.gcn_weight.cols())),
        v_gcn_(m_gcn_),
        m_bil_(Matrix::Zero(params.bilinear_weight.rows(),
                            params.bilinear_weight.cols())),
        v_bil_(m_bil_) {}

  void step(ModelParams& params, const Gradients& grads) {
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    update(params.gcn_weight, grads.gcn_weight, m_gcn_, v_gcn_, c1, c2);
    update(params.bilinear_weight, grads.bilinear_weight, m_bil_, v_bil_, c1,
           c2);
  }

  std::size_t steps() const { return t_; }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  void update(Matrix& param, const Matrix& grad, Matrix& m, Matrix& v,
              double c1, double c2) const {
    m = kBeta1 * m + (1.0 - kBeta1) * grad;
    v = kBeta2 * v + (1.0 - kBeta2) * grad.cwiseProduct(grad);
    param.array() -= learning_rate_ * (m.array() / c1) /
                     ((v.array() / c2).sqrt() + kEpsilon);
  }

  double learning_rate_;
  std::size_t t_ = 0;
  Matrix m_gcn_, v_gcn_, m_bil_, v_bil_;
};

// Per epoch: the mean over batches of (batch loss / targets in batch).
struct TrainLog {
  std::vector<double> epoch_loss;
};

inline ModelParams train(const AttributedGraph& graph,
                         const TrainConfig& config, TrainLog* log = nullptr) {
  config.validate();
  const std::size_t n = graph.node_count();
  Rng rng(config.seed);
  ModelParams params = init_params(graph.attribute_dim(), config.hidden_dim, rng);
  if (config.epochs == 0) return params;
  if (n < 2) throw ContractError("training needs at least two nodes");

  AdamOptimizer adam(params, config.learning_rate);
  std::vector<NodeId> order(n);
  std::vector<ContrastPair> batch;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<NodeId>(i);
    rng.shuffle(std::span<NodeId>(order));
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < stop; ++i) {
        batch.push_back(sample_pair(graph, order[i], config, rng));
      }
      const Gradients grads = gradients(params, graph, batch);
      if (!std::isfinite(grads.loss) || !grads.gcn_weight.allFinite() ||
          !grads.bilinear_weight.allFinite()) {
        throw DivergenceError("non-finite loss at epoch " +
                              std::to_string(epoch) + ", batch " +
                              std::to_string(batches));
      }
      adam.step(params, grads);
      loss_sum += grads.loss / static_cast<double>(stop - start);
      ++batches;
    }
    if (log != nullptr) {
      log->epoch_loss.push_back(loss_sum / static_cast<double>(batches));
    }
  }
  return params;
}

// ---------------------------------------------------------------------------
// Checkpoints: {d, hidden_dim, gcn_weight, bilinear_weight (row-major),
// config, seed}.

inline nlohmann::json checkpoint_to_json(const ModelParams& params,
                                         const TrainConfig& config) {
  auto flat = [](const Matrix& m) {
    return std::vector<double>(m.data(), m.data() + m.size());
  };
  return {{"d", params.input_dim()},
          {"hidden_dim", params.hidden_dim()},
          {"gcn_weight", flat(params.gcn_weight)},
          {"bilinear_weight", flat(params.bilinear_weight)},
          {"config", config},
          {"seed", config.seed}};
}

inline std::pair<ModelParams, TrainConfig> checkpoint_from_json(
    const nlohmann::json& j) {
  const auto d = j.at("d").get<Eigen::Index>();
  const auto h = j.at("hidden_dim").get<Eigen::Index>();
  auto unflat = [](const nlohmann::json& values, Eigen::Index rows,
                   Eigen::Index cols, const char* name) {
    const auto v = values.get<std::vector<double>>();
    if (static_cast<Eigen::Index>(v.size()) != rows * cols) {
      throw ShapeError(std::string("checkpoint field ") + name +
                       " has the wrong number of entries");
    }
    Matrix m(rows, cols);
    std::copy(v.begin(), v.end(), m.data());
    return m;
  };
  ModelParams params;
  params.gcn_weight = unflat(j.at("gcn_weight"), d, h, "gcn_weight");
  params.bilinear_weight =
      unflat(j.at("bilinear_weight"), h, h, "bilinear_weight");
  TrainConfig config = j.value("config", TrainConfig{});
  return {std::move(params), config};
}

}  // namespace arise

#endif  // ARISE_CONTRAST_HPP_
