// Copyright 2026 The deltatest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "deltatest/edge_list.hpp"
#include "deltatest/graph.hpp"

namespace deltatest::testing {

inline LoadResult load_from_lines(const std::vector<std::string>& lines,
                                  IngestOptions options = {}) {
  std::string text;
  for (const auto& line : lines) {
    text += line;
    text += '\n';
  }
  std::istringstream in(text);
  return load_edge_list(in, options);
}

/// The seven-vertex, nine-edge worked-example graph. Labels 1..7.
/// Node 1's neighborhood is {2,3,4} with two induced edges (kappa 1/3);
/// node 7's neighborhood is {5,6} with one induced edge (kappa 1/2);
/// K = 9/42. Directions are chosen so that both hold under out-only and
/// in-union-out neighborhoods.
inline LoadResult figure_graph() {
  return load_from_lines({"1 2", "1 3", "1 4", "2 3", "3 2", "5 6", "7 5",
                          "7 6", "4 5"});
}

/// Independent reference implementation used as the test oracle: adjacency
/// matrix built straight from labeled edge pairs, O(n^2)/O(n^3)
/// enumeration, exact integer edge counts. Deliberately shares no code
/// with DirectedGraph.
class BruteForceGraph {
 public:
  explicit BruteForceGraph(const std::vector<std::pair<Label, Label>>& edges) {
    for (const auto& [u, v] : edges) {
      insert_label(u);
      insert_label(v);
    }
    adj_.assign(labels_.size(), std::vector<bool>(labels_.size(), false));
    for (const auto& [u, v] : edges) {
      if (u == v) continue;
      adj_[index(u)][index(v)] = true;
    }
  }

  std::size_t size() const { return labels_.size(); }

  std::uint64_t edge_count() const {
    std::uint64_t count = 0;
    for (const auto& row : adj_)
      for (bool bit : row) count += bit ? 1 : 0;
    return count;
  }

  /// Neighborhood of the vertex with label `l`, as labels.
  std::set<Label> neighborhood(Label l, NeighborhoodMode mode) const {
    const std::size_t v = index(l);
    std::set<Label> result;
    for (std::size_t u = 0; u < size(); ++u) {
      if (u == v) continue;
      const bool out = adj_[v][u];
      const bool in = adj_[u][v];
      const bool member = mode == NeighborhoodMode::Out  ? out
                          : mode == NeighborhoodMode::In ? in
                                                         : (out || in);
      if (member) result.insert(labels_[u]);
    }
    return result;
  }

  std::uint64_t induced_edges(const std::set<Label>& vs) const {
    std::uint64_t count = 0;
    for (Label a : vs)
      for (Label b : vs)
        if (a != b && adj_[index(a)][index(b)]) ++count;
    return count;
  }

 private:
  void insert_label(Label l) {
    for (Label known : labels_)
      if (known == l) return;
    labels_.push_back(l);
  }

  std::size_t index(Label l) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == l) return i;
    throw std::out_of_range("unknown label");
  }

  std::vector<Label> labels_;
  std::vector<std::vector<bool>> adj_;
};

}  // namespace deltatest::testing
