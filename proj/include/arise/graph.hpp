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

#ifndef ARISE_GRAPH_HPP_
#define ARISE_GRAPH_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "arise/errors.hpp"

namespace arise {

using NodeId = std::uint32_t;

// Dense row-major matrix; attribute rows and embedding rows are contiguous.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Undirected edge stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(NodeId a, NodeId b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

struct GraphBuildStats {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

// Simple undirected attributed graph with dense node ids [0, n). Immutable
// once built; neighbor lists are sorted (CSR layout).
class AttributedGraph {
 public:
  AttributedGraph() = default;

  // Self-loops are dropped and duplicate/reversed pairs merged; both are
  // counted in build_stats(). Ids >= n raise RangeError.
  AttributedGraph(std::size_t node_count, std::span<const Edge> edges,
                  Matrix attributes)
      : node_count_(node_count), attributes_(std::move(attributes)) {
    if (static_cast<std::size_t>(attributes_.rows()) != node_count_) {
      throw ShapeError("attribute matrix has " +
                       std::to_string(attributes_.rows()) + " rows, expected " +
                       std::to_string(node_count_));
    }
    edges_.reserve(edges.size());
    for (const Edge& e : edges) {
      if (e.u >= node_count_ || e.v >= node_count_) {
        throw RangeError("edge (" + std::to_string(e.u) + ", " +
                         std::to_string(e.v) + ") references a node >= " +
                         std::to_string(node_count_));
      }
      if (e.u == e.v) {
        ++stats_.self_loops_dropped;
        continue;
      }
      edges_.push_back(make_edge(e.u, e.v));
    }
    std::sort(edges_.begin(), edges_.end());
    const auto last = std::unique(edges_.begin(), edges_.end());
    stats_.duplicates_dropped =
        static_cast<std::size_t>(std::distance(last, edges_.end()));
    edges_.erase(last, edges_.end());

    offsets_.assign(node_count_ + 1, 0);
    for (const Edge& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < node_count_; ++i) offsets_[i + 1] += offsets_[i];
    neighbors_.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges_) {
      neighbors_[cursor[e.u]++] = e.v;
      neighbors_[cursor[e.v]++] = e.u;
    }
    // Edges are sorted by (u, v), so each list is already ascending except for
    // the interleaving of the two insertion passes.
    for (std::size_t i = 0; i < node_count_; ++i) {
      std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
    }
  }

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t attribute_dim() const {
    return static_cast<std::size_t>(attributes_.cols());
  }

  const std::vector<Edge>& edges() const { return edges_; }
  const Matrix& attributes() const { return attributes_; }
  auto attribute_row(NodeId i) const { return attributes_.row(i); }

  std::span<const NodeId> neighbors(NodeId i) const {
    return {neighbors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }

  bool has_edge(NodeId a, NodeId b) const {
    if (a == b) return false;
    const auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  const GraphBuildStats& build_stats() const { return stats_; }

 private:
  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  Matrix attributes_;
  GraphBuildStats stats_;
};

// delta = 2m / n. Zero for an empty node set.
inline double average_degree(const AttributedGraph& graph) {
  if (graph.node_count() == 0) return 0.0;
  return 2.0 * static_cast<double>(graph.edge_count()) /
         static_cast<double>(graph.node_count());
}

// D^-1/2 (A_S + I) D^-1/2 over the subgraph induced by `nodes`, in the order
// given. D is the row-sum diagonal of A_S + I.
inline Eigen::MatrixXd normalized_adjacency(const AttributedGraph& graph,
                                            std::span<const NodeId> nodes) {
  if (nodes.empty()) {
    throw ContractError("normalized_adjacency: empty node subset");
  }
  const auto s = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    if (nodes[i] >= graph.node_count()) {
      throw RangeError("normalized_adjacency: node " +
                       std::to_string(nodes[i]) + " out of range");
    }
    for (Eigen::Index j = i + 1; j < s; ++j) {
      if (graph.has_edge(nodes[i], nodes[j])) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  const Eigen::VectorXd inv_sqrt =
      a.rowwise().sum().array().rsqrt().matrix();
  return inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal();
}

// ---------------------------------------------------------------------------
// Text formats: edge list ("u v" per line, '#' comments), attribute CSV (one
// row per node, no header) and id map CSV ("external_id,internal_id").

using IdMap = std::unordered_map<std::string, NodeId>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

inline std::vector<std::string_view> split_char(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::optional<double> parse_double(std::string_view s) {
  double value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// Shortest representation that parses back to the same double.
inline void write_double(std::ostream& out, double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.write(buf, ptr - buf);
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return in;
}

}  // namespace detail

inline IdMap read_id_map(std::istream& in, const std::string& source) {
  IdMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = detail::split_char(text, ',');
    if (fields.size() != 2 || fields[0].empty()) {
      throw ParseError(source, line_no, "expected external_id,internal_id");
    }
    const auto internal = detail::parse_int(fields[1]);
    if (!internal) throw ParseError(source, line_no, "bad internal id");
    if (*internal < 0) {
      throw RangeError(source + ":" + std::to_string(line_no) +
                       ": negative internal id");
    }
    if (!map.emplace(std::string(fields[0]), static_cast<NodeId>(*internal))
             .second) {
      throw ParseError(source, line_no, "duplicate external id");
    }
  }
  return map;
}

inline void write_id_map(std::ostream& out, const IdMap& map) {
  std::vector<std::pair<NodeId, std::string>> rows;
  rows.reserve(map.size());
  for (const auto& [ext, id] : map) rows.emplace_back(id, ext);
  std::sort(rows.begin(), rows.end());
  for (const auto& [id, ext] : rows) out << ext << ',' << id << '\n';
}

// Reads "u v" pairs. With an id map the tokens are external ids; otherwise
// they must be integers in [0, node_count).
inline std::vector<Edge> read_edge_list(std::istream& in,
                                        const std::string& source,
                                        std::size_t node_count,
                                        const IdMap* id_map = nullptr) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  auto resolve = [&](std::string_view token) -> NodeId {
    if (id_map != nullptr) {
      const auto it = id_map->find(std::string(token));
      if (it == id_map->end()) {
        throw RangeError(source + ":" + std::to_string(line_no) +
                         ": unknown external id '" + std::string(token) + "'");
      }
      if (it->second >= node_count) {
        throw RangeError(source + ":" + std::to_string(line_no) +
                         ": mapped id out of range");
      }
      return it->second;
    }
    const auto id = detail::parse_int(token);
    if (!id) {
      throw ParseError(source, line_no,
                       "expected integer node id, got '" + std::string(token) +
                           "'");
    }
    if (*id < 0 || static_cast<std::uint64_t>(*id) >= node_count) {
      throw RangeError(source + ":" + std::to_string(line_no) + ": node id " +
                       std::to_string(*id) + " outside [0, " +
                       std::to_string(node_count) + ")");
    }
    return static_cast<NodeId>(*id);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto tokens = detail::split_ws(text);
    if (tokens.size() != 2) {
      throw ParseError(source, line_no, "expected two node ids");
    }
    edges.push_back(Edge{resolve(tokens[0]), resolve(tokens[1])});
  }
  return edges;
}

inline Matrix read_attributes(std::istream& in, const std::string& source) {
  std::vector<double> values;
  std::size_t dim = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    const auto fields = detail::split_char(text, ',');
    if (rows == 0) {
      dim = fields.size();
    } else if (fields.size() != dim) {
      throw ShapeError(source + ":" + std::to_string(line_no) + ": row has " +
                       std::to_string(fields.size()) + " columns, expected " +
                       std::to_string(dim));
    }
    for (const auto field : fields) {
      const auto value = detail::parse_double(field);
      if (!value || !std::isfinite(*value)) {
        throw ParseError(source, line_no,
                         "bad real value '" + std::string(field) + "'");
      }
      values.push_back(*value);
    }
    ++rows;
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

inline void write_edge_list(std::ostream& out, const AttributedGraph& graph) {
  for (const Edge& e : graph.edges()) out << e.u << ' ' << e.v << '\n';
}

inline void write_attributes(std::ostream& out, const Matrix& attributes) {
  for (Eigen::Index i = 0; i < attributes.rows(); ++i) {
    for (Eigen::Index j = 0; j < attributes.cols(); ++j) {
      if (j > 0) out << ',';
      detail::write_double(out, attributes(i, j));
    }
    out << '\n';
  }
}

// Builds a graph from in-memory sources. The attribute rows define n; with an
// id map its size must agree with the row count.
inline AttributedGraph read_graph(std::istream& edge_in,
                                  const std::string& edge_source,
                                  std::istream& attr_in,
                                  const std::string& attr_source,
                                  const IdMap* id_map = nullptr) {
  Matrix attributes = read_attributes(attr_in, attr_source);
  const auto n = static_cast<std::size_t>(attributes.rows());
  if (id_map != nullptr && id_map->size() != n) {
    throw ShapeError("id map has " + std::to_string(id_map->size()) +
                     " entries but attribute source has " + std::to_string(n) +
                     " rows");
  }
  const std::vector<Edge> edges =
      read_edge_list(edge_in, edge_source, n, id_map);
  return AttributedGraph(n, edges, std::move(attributes));
}

inline AttributedGraph load_graph(
    const std::string& edge_path, const std::string& attribute_path,
    const std::optional<std::string>& id_map_path = std::nullopt) {
  std::optional<IdMap> id_map;
  if (id_map_path) {
    auto in = detail::open_input(*id_map_path);
    id_map = read_id_map(in, *id_map_path);
  }
  auto edge_in = detail::open_input(edge_path);
  auto attr_in = detail::open_input(attribute_path);
  return read_graph(edge_in, edge_path, attr_in, attribute_path,
                    id_map ? &*id_map : nullptr);
}

inline void save_graph(const AttributedGraph& graph,
                       const std::string& edge_path,
                       const std::string& attribute_path) {
  std::ofstream edge_out(edge_path);
  std::ofstream attr_out(attribute_path);
  if (!edge_out || !attr_out) {
    throw Error("cannot write graph to " + edge_path + " / " + attribute_path);
  }
  write_edge_list(edge_out, graph);
  write_attributes(attr_out, graph.attributes());
}

}  // namespace arise

#endif  // ARISE_GRAPH_HPP_
