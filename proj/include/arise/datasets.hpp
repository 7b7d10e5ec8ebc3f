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

#ifndef ARISE_DATASETS_HPP_
#define ARISE_DATASETS_HPP_

// Readers for public citation-network distributions.

#include <algorithm>
#include <cmath>
#include <istream>
#include <string>
#include <vector>

#include "arise/errors.hpp"
#include "arise/graph.hpp"

namespace arise {

struct LinqsDataset {
  AttributedGraph graph;
  // External paper id and class label, indexed by internal node id.
  std::vector<std::string> paper_ids;
  std::vector<std::string> classes;
  // Citation lines naming a paper absent from the content file.
  std::size_t dangling_citations = 0;
};

// LINQS layout: "<paper_id> <f_1> ... <f_d> <class>" per content line
// (whitespace separated) and "<cited> <citing>" per citation line. Node ids
// follow content-file order.
inline LinqsDataset read_linqs(std::istream& content, const std::string& content_source,
                               std::istream& cites, const std::string& cites_source) {
  IdMap ids;
  std::vector<std::string> paper_ids;
  std::vector<std::string> classes;
  std::vector<double> values;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(content, line)) {
    ++line_no;
    const auto fields = detail::split_ws(detail::trim(line));
    if (fields.empty()) continue;
    if (fields.size() < 3) {
      throw ParseError(content_source, line_no, "expected id, features and class");
    }
    const std::size_t row_dim = fields.size() - 2;
    if (paper_ids.empty()) {
      dim = row_dim;
    } else if (row_dim != dim) {
      throw ShapeError(content_source + ":" + std::to_string(line_no) + ": row has " +
                       std::to_string(row_dim) + " features, expected " +
                       std::to_string(dim));
    }
    const std::string id(fields.front());
    if (!ids.emplace(id, static_cast<NodeId>(paper_ids.size())).second) {
      throw ParseError(content_source, line_no, "duplicate paper id '" + id + "'");
    }
    for (std::size_t i = 1; i + 1 < fields.size(); ++i) {
      const auto v = detail::parse_double(fields[i]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(content_source, line_no,
                         "bad feature value '" + std::string(fields[i]) + "'");
      }
      values.push_back(*v);
    }
    paper_ids.push_back(id);
    classes.emplace_back(fields.back());
  }
  const std::size_t n = paper_ids.size();
  if (n == 0) throw ParseError(content_source, line_no, "no papers");

  std::vector<Edge> edges;
  std::size_t dangling = 0;
  line_no = 0;
  while (std::getline(cites, line)) {
    ++line_no;
    const auto fields = detail::split_ws(detail::trim(line));
    if (fields.empty()) continue;
    if (fields.size() != 2) {
      throw ParseError(cites_source, line_no, "expected two paper ids");
    }
    const auto a = ids.find(std::string(fields[0]));
    const auto b = ids.find(std::string(fields[1]));
    if (a == ids.end() || b == ids.end()) {
      ++dangling;
      continue;
    }
    edges.push_back({a->second, b->second});
  }

  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  std::copy(values.begin(), values.end(), x.data());
  return {AttributedGraph(n, edges, std::move(x)), std::move(paper_ids),
          std::move(classes), dangling};
}

inline LinqsDataset load_linqs(const std::string& content_path,
                               const std::string& cites_path) {
  auto content = detail::open_input(content_path);
  auto cites = detail::open_input(cites_path);
  return read_linqs(content, content_path, cites, cites_path);
}

}  // namespace arise

#endif  // ARISE_DATASETS_HPP_
