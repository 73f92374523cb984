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

#include "deltatest/graph.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "deltatest/rng.hpp"
#include "test_util.hpp"

namespace deltatest {
namespace {

using testing::BruteForceGraph;
using testing::figure_graph;
using testing::load_from_lines;

std::vector<VertexId> ids_of(const DirectedGraph& g, std::vector<Label> labels) {
  std::vector<VertexId> ids;
  for (Label l : labels) ids.push_back(*g.id_of(l));
  return ids;
}

std::set<Label> labels_of(const DirectedGraph& g, std::span<const VertexId> ids) {
  std::set<Label> out;
  for (VertexId v : ids) out.insert(g.label(v));
  return out;
}

TEST(DirectedGraph, AdjacencyConsistency) {
  const auto g = figure_graph().graph;
  ASSERT_EQ(g.vertex_count(), 7u);
  ASSERT_EQ(g.edge_count(), 9u);
  std::uint64_t out_sum = 0, in_sum = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    out_sum += g.out_degree(v);
    in_sum += g.in_degree(v);
    for (VertexId w : g.out_neighbors(v)) {
      EXPECT_NE(w, v);
      const auto in = g.in_neighbors(w);
      EXPECT_TRUE(std::binary_search(in.begin(), in.end(), v));
    }
  }
  EXPECT_EQ(out_sum, g.edge_count());
  EXPECT_EQ(in_sum, g.edge_count());
}

TEST(DirectedGraph, RejectsOutOfRangeIds) {
  EXPECT_THROW(DirectedGraph::from_edges(2, {{0, 5}}), std::invalid_argument);
  const auto g = figure_graph().graph;
  EXPECT_THROW(g.out_neighbors(7), std::out_of_range);
  EXPECT_THROW(neighborhood(g, 100), std::out_of_range);
}

TEST(GlobalDensity, FigureGraphIsNineOverFortyTwo) {
  const auto g = figure_graph().graph;
  EXPECT_EQ(global_density(g), 9.0 / 42.0);
}

TEST(GlobalDensity, CompleteDigraphIsOne) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  const std::size_t n = 6;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = 0; v < n; ++v)
      if (u != v) edges.emplace_back(u, v);
  const auto g = DirectedGraph::from_edges(n, std::move(edges));
  EXPECT_EQ(global_density(g), 1.0);
}

TEST(GlobalDensity, EdgelessGraphIsZero) {
  const auto g = DirectedGraph::from_edges(5, {});
  EXPECT_EQ(global_density(g), 0.0);
}

TEST(GlobalDensity, UndefinedBelowTwoVertices) {
  EXPECT_THROW(global_density(DirectedGraph::from_edges(0, {})),
               std::domain_error);
  EXPECT_THROW(global_density(DirectedGraph::from_edges(1, {})),
               std::domain_error);
}

TEST(Neighborhood, FigureGraphNodeOne) {
  const auto g = figure_graph().graph;
  const auto nbrs = neighborhood(g, *g.id_of(1));
  EXPECT_EQ(labels_of(g, nbrs), (std::set<Label>{2, 3, 4}));
}

TEST(Neighborhood, IsolatedVertexIsEmpty) {
  const auto g = DirectedGraph::from_edges(3, {{0, 1}, {1, 0}});
  EXPECT_TRUE(neighborhood(g, 2).empty());
}

TEST(Neighborhood, ReciprocalPartnerCountedOnce) {
  const auto g = DirectedGraph::from_edges(2, {{0, 1}, {1, 0}});
  const auto nbrs = neighborhood(g, 0);
  ASSERT_EQ(nbrs.size(), 1u);
  EXPECT_EQ(nbrs[0], 1u);
}

TEST(Neighborhood, ModesSplitDirection) {
  // 0 -> 1, 2 -> 0
  const auto g = DirectedGraph::from_edges(3, {{0, 1}, {2, 0}});
  EXPECT_EQ(neighborhood(g, 0, NeighborhoodMode::Out),
            (std::vector<VertexId>{1}));
  EXPECT_EQ(neighborhood(g, 0, NeighborhoodMode::In),
            (std::vector<VertexId>{2}));
  EXPECT_EQ(neighborhood(g, 0, NeighborhoodMode::All),
            (std::vector<VertexId>{1, 2}));
}

TEST(Neighborhood, NeverContainsFocalAndIsBounded) {
  const auto g = figure_graph().graph;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    for (const auto mode :
         {NeighborhoodMode::All, NeighborhoodMode::Out, NeighborhoodMode::In}) {
      const auto nbrs = neighborhood(g, v, mode);
      EXPECT_LE(nbrs.size(), g.vertex_count() - 1);
      for (VertexId w : nbrs) EXPECT_NE(w, v);
    }
  }
}

TEST(InducedEdgeCount, FigureGraphExamples) {
  const auto g = figure_graph().graph;
  EXPECT_EQ(induced_edge_count(g, ids_of(g, {2, 3, 4})), 2u);
  EXPECT_EQ(induced_edge_count(g, ids_of(g, {5, 6})), 1u);
}

TEST(InducedEdgeCount, TrivialSets) {
  const auto g = figure_graph().graph;
  EXPECT_EQ(induced_edge_count(g, {}), 0u);
  EXPECT_EQ(induced_edge_count(g, ids_of(g, {3})), 0u);
  std::vector<VertexId> all(g.vertex_count());
  std::iota(all.begin(), all.end(), 0u);
  EXPECT_EQ(induced_edge_count(g, all), g.edge_count());
}

TEST(InducedEdgeCount, ReciprocalPairCountsTwice) {
  const auto g = DirectedGraph::from_edges(3, {{0, 1}, {1, 0}, {1, 2}});
  EXPECT_EQ(induced_edge_count(g, std::vector<VertexId>{0, 1}), 2u);
}

TEST(InducedEdgeCount, RejectsInvalidIds) {
  const auto g = figure_graph().graph;
  EXPECT_THROW(induced_edge_count(g, std::vector<VertexId>{0, 99}),
               std::out_of_range);
}

TEST(InducedEdgeCount, PathsAgreeWithBruteForceOnRandomGraphs) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + rng.below(120);
    std::vector<std::pair<Label, Label>> labeled;
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId u = 0; u < n; ++u)
      for (VertexId v = 0; v < n; ++v)
        if (u != v && rng.bernoulli(0.08)) {
          edges.emplace_back(u, v);
          labeled.emplace_back(u, v);
        }
    const auto g = DirectedGraph::from_edges(n, edges);
    // BruteForceGraph indexes only labels it has seen; feed every vertex.
    for (VertexId v = 0; v < n; ++v) labeled.emplace_back(v, v);
    const BruteForceGraph oracle(labeled);

    std::vector<VertexId> vs;
    for (VertexId v = 0; v < n; ++v)
      if (rng.bernoulli(0.5)) vs.push_back(v);
    std::set<Label> vs_labels(vs.begin(), vs.end());

    const auto expected = oracle.induced_edges(vs_labels);
    EXPECT_EQ(induced_edge_count(g, vs), expected);
    std::vector<VertexId> sorted = vs;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(detail::induced_edge_count_scan(g, sorted), expected);
    ASSERT_TRUE(g.has_dense_bits());
    EXPECT_EQ(detail::induced_edge_count_bits(g, sorted), expected);
  }
}

TEST(InducedEdgeCount, MonotoneUnderSuperset) {
  Rng rng(11);
  const auto g = figure_graph().graph;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<VertexId> small, big;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      const bool in_small = rng.bernoulli(0.4);
      const bool in_big = in_small || rng.bernoulli(0.4);
      if (in_small) small.push_back(v);
      if (in_big) big.push_back(v);
    }
    EXPECT_LE(induced_edge_count(g, small), induced_edge_count(g, big));
  }
}

TEST(InducedEdgeCount, ScanPathUsedAboveDenseBitsThreshold) {
  // Sparse random graph above the bit-matrix size cutoff.
  const std::size_t n = DirectedGraph::kDenseBitsMaxVertices + 100;
  Rng rng(13);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int i = 0; i < 40000; ++i) {
    const auto u = static_cast<VertexId>(rng.below(n));
    const auto v = static_cast<VertexId>(rng.below(n));
    if (u != v) edges.emplace_back(u, v);
  }
  const auto g = DirectedGraph::from_edges(n, edges);
  EXPECT_FALSE(g.has_dense_bits());
  std::vector<VertexId> vs;
  for (int i = 0; i < 300; ++i) vs.push_back(static_cast<VertexId>(rng.below(n)));
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  std::uint64_t expected = 0;
  for (VertexId u : vs)
    for (VertexId v : vs)
      if (u != v && g.has_edge(u, v)) ++expected;
  EXPECT_EQ(induced_edge_count(g, vs), expected);
}

TEST(DirectedGraph, DensityAlwaysInUnitInterval) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId u = 0; u < n; ++u)
      for (VertexId v = 0; v < n; ++v)
        if (u != v && rng.bernoulli(0.3)) edges.emplace_back(u, v);
    const auto g = DirectedGraph::from_edges(n, std::move(edges));
    const double k = global_density(g);
    EXPECT_GE(k, 0.0);
    EXPECT_LE(k, 1.0);
  }
}

}  // namespace
}  // namespace deltatest
