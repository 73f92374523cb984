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

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace deltatest {

using VertexId = std::uint32_t;
using Label = std::int64_t;

/// Which neighbors form a vertex's neighborhood.
enum class NeighborhoodMode { All, Out, In };

/// Edges removed while turning raw input into a simple digraph.
struct SimplifyStats {
  std::uint64_t self_loops_dropped = 0;
  std::uint64_t duplicate_edges_dropped = 0;
};

/// Immutable simple digraph: no self-loops, no parallel edges. Stores both
/// out- and in-adjacency in CSR form with sorted rows, plus the mapping
/// from contiguous internal ids to the original external labels.
///
/// For small graphs an adjacency bit matrix is kept alongside the CSR rows;
/// it makes induced-subgraph edge counting on large vertex sets a word-wise
/// AND/popcount sweep. Construction is single-threaded; afterwards the
/// graph is strictly read-only and may be shared across threads.
class DirectedGraph {
 public:
  /// Bit matrix is built while n*n/8 stays <= 32 MiB.
  static constexpr std::size_t kDenseBitsMaxVertices = 16384;

  DirectedGraph() = default;

  /// Builds the graph from directed edges over internal ids [0, n).
  /// Self-loops are dropped and duplicates collapsed; counts go to `stats`.
  /// `labels` maps internal id -> external label; empty means identity.
  static DirectedGraph from_edges(std::size_t vertex_count,
                                  std::vector<std::pair<VertexId, VertexId>> edges,
                                  SimplifyStats* stats = nullptr,
                                  std::vector<Label> labels = {}) {
    DirectedGraph g;
    g.n_ = vertex_count;
    if (labels.empty()) {
      labels.reserve(vertex_count);
      for (std::size_t v = 0; v < vertex_count; ++v)
        labels.push_back(static_cast<Label>(v));
    } else if (labels.size() != vertex_count) {
      throw std::invalid_argument("from_edges: label vector size mismatch");
    }
    g.labels_ = std::move(labels);
    for (std::size_t v = 0; v < g.n_; ++v)
      g.label_to_id_.emplace(g.labels_[v], static_cast<VertexId>(v));
    if (g.label_to_id_.size() != g.n_)
      throw std::invalid_argument("from_edges: labels are not distinct");

    SimplifyStats local;
    std::vector<std::uint64_t> keys;
    keys.reserve(edges.size());
    for (const auto& [u, v] : edges) {
      if (u >= g.n_ || v >= g.n_)
        throw std::invalid_argument("from_edges: vertex id out of range");
      if (u == v) {
        ++local.self_loops_dropped;
        continue;
      }
      keys.push_back((static_cast<std::uint64_t>(u) << 32) | v);
    }
    edges.clear();
    edges.shrink_to_fit();

    std::sort(keys.begin(), keys.end());
    const auto last = std::unique(keys.begin(), keys.end());
    local.duplicate_edges_dropped =
        static_cast<std::uint64_t>(keys.end() - last);
    keys.erase(last, keys.end());
    g.m_ = keys.size();

    // Out CSR: keys are sorted by (source, target), so rows come out sorted.
    g.out_offsets_.assign(g.n_ + 1, 0);
    g.in_offsets_.assign(g.n_ + 1, 0);
    for (std::uint64_t key : keys) {
      ++g.out_offsets_[(key >> 32) + 1];
      ++g.in_offsets_[(key & 0xFFFFFFFFULL) + 1];
    }
    for (std::size_t v = 0; v < g.n_; ++v) {
      g.out_offsets_[v + 1] += g.out_offsets_[v];
      g.in_offsets_[v + 1] += g.in_offsets_[v];
    }
    g.out_targets_.resize(g.m_);
    g.in_sources_.resize(g.m_);
    std::vector<std::uint64_t> in_fill(g.in_offsets_.begin(),
                                       g.in_offsets_.end() - 1);
    std::size_t pos = 0;
    for (std::uint64_t key : keys) {
      const auto u = static_cast<VertexId>(key >> 32);
      const auto v = static_cast<VertexId>(key & 0xFFFFFFFFULL);
      g.out_targets_[pos++] = v;
      g.in_sources_[in_fill[v]++] = u;  // sources arrive in ascending order
    }

    if (g.n_ > 0 && g.n_ <= kDenseBitsMaxVertices) {
      g.bit_words_ = (g.n_ + 63) / 64;
      g.out_bits_.assign(g.n_ * g.bit_words_, 0);
      for (std::uint64_t key : keys) {
        const auto u = key >> 32;
        const auto v = key & 0xFFFFFFFFULL;
        g.out_bits_[u * g.bit_words_ + (v >> 6)] |= 1ULL << (v & 63);
      }
    }

    if (stats) *stats = local;
    return g;
  }

  std::size_t vertex_count() const { return n_; }
  std::uint64_t edge_count() const { return m_; }

  std::span<const VertexId> out_neighbors(VertexId v) const {
    check_vertex(v);
    return {out_targets_.data() + out_offsets_[v],
            out_targets_.data() + out_offsets_[v + 1]};
  }

  std::span<const VertexId> in_neighbors(VertexId v) const {
    check_vertex(v);
    return {in_sources_.data() + in_offsets_[v],
            in_sources_.data() + in_offsets_[v + 1]};
  }

  std::size_t out_degree(VertexId v) const { return out_neighbors(v).size(); }
  std::size_t in_degree(VertexId v) const { return in_neighbors(v).size(); }

  bool has_edge(VertexId u, VertexId v) const {
    check_vertex(u);
    check_vertex(v);
    if (!out_bits_.empty())
      return (out_bits_[u * bit_words_ + (v >> 6)] >> (v & 63)) & 1ULL;
    const auto row = out_neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
  }

  Label label(VertexId v) const {
    check_vertex(v);
    return labels_[v];
  }

  std::optional<VertexId> id_of(Label label) const {
    const auto it = label_to_id_.find(label);
    if (it == label_to_id_.end()) return std::nullopt;
    return it->second;
  }

  bool has_dense_bits() const { return !out_bits_.empty(); }
  std::size_t bit_words() const { return bit_words_; }
  std::span<const std::uint64_t> out_bit_row(VertexId v) const {
    check_vertex(v);
    return {out_bits_.data() + v * bit_words_, bit_words_};
  }

 private:
  void check_vertex(VertexId v) const {
    if (v >= n_)
      throw std::out_of_range("vertex id " + std::to_string(v) +
                              " out of range (|V| = " + std::to_string(n_) + ")");
  }

  std::size_t n_ = 0;
  std::uint64_t m_ = 0;
  std::vector<std::uint64_t> out_offsets_, in_offsets_;
  std::vector<VertexId> out_targets_, in_sources_;
  std::vector<Label> labels_;
  std::unordered_map<Label, VertexId> label_to_id_;
  std::size_t bit_words_ = 0;
  std::vector<std::uint64_t> out_bits_;
};

/// Global density K = |E| / (|V| * (|V|-1)).
inline double global_density(const DirectedGraph& g) {
  if (g.vertex_count() < 2)
    throw std::domain_error(
        "global density undefined for graphs with fewer than 2 vertices");
  const double pairs = static_cast<double>(g.vertex_count()) *
                       static_cast<double>(g.vertex_count() - 1);
  return static_cast<double>(g.edge_count()) / pairs;
}

/// Neighbor set of `v` (sorted, never contains `v`). Mode All is the union
/// of in- and out-neighbors; Out and In restrict to one direction.
inline std::vector<VertexId> neighborhood(
    const DirectedGraph& g, VertexId v,
    NeighborhoodMode mode = NeighborhoodMode::All) {
  const auto out = g.out_neighbors(v);
  const auto in = g.in_neighbors(v);
  std::vector<VertexId> result;
  switch (mode) {
    case NeighborhoodMode::Out:
      return {out.begin(), out.end()};
    case NeighborhoodMode::In:
      return {in.begin(), in.end()};
    case NeighborhoodMode::All:
      result.reserve(out.size() + in.size());
      std::set_union(out.begin(), out.end(), in.begin(), in.end(),
                     std::back_inserter(result));
      return result;
  }
  throw std::invalid_argument("unknown neighborhood mode");
}

namespace detail {

// Row-by-row count: for each member, the smaller of (adjacency row, member
// set) drives the iteration.
inline std::uint64_t induced_edge_count_scan(const DirectedGraph& g,
                                             std::span<const VertexId> sorted_vs) {
  std::vector<std::uint8_t> member(g.vertex_count(), 0);
  for (VertexId v : sorted_vs) member[v] = 1;
  std::uint64_t count = 0;
  for (VertexId u : sorted_vs) {
    const auto row = g.out_neighbors(u);
    if (row.size() <= sorted_vs.size()) {
      for (VertexId w : row) count += member[w];
    } else {
      for (VertexId w : sorted_vs)
        count += std::binary_search(row.begin(), row.end(), w) ? 1 : 0;
    }
  }
  return count;
}

// Word-wise count over the dense bit matrix. Self-pairs cannot contribute:
// the diagonal is empty by construction.
inline std::uint64_t induced_edge_count_bits(const DirectedGraph& g,
                                             std::span<const VertexId> sorted_vs) {
  const std::size_t words = g.bit_words();
  std::vector<std::uint64_t> mask(words, 0);
  for (VertexId v : sorted_vs) mask[v >> 6] |= 1ULL << (v & 63);
  std::uint64_t count = 0;
  for (VertexId u : sorted_vs) {
    const auto row = g.out_bit_row(u);
    for (std::size_t w = 0; w < words; ++w)
      count += static_cast<std::uint64_t>(std::popcount(row[w] & mask[w]));
  }
  return count;
}

}  // namespace detail

/// Number of directed edges (u, w) with both endpoints in `vs`, u != w.
/// Reciprocal pairs count as 2. `vs` may be in any order; duplicates are
/// collapsed.
inline std::uint64_t induced_edge_count(const DirectedGraph& g,
                                        std::span<const VertexId> vs) {
  std::vector<VertexId> sorted(vs.begin(), vs.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (!sorted.empty() && sorted.back() >= g.vertex_count())
    throw std::out_of_range("induced_edge_count: vertex id out of range");
  if (sorted.size() < 2) return 0;
  // The bit path wins once the per-row mask sweep is cheaper than scanning
  // adjacency rows element by element.
  if (g.has_dense_bits() && sorted.size() >= 64)
    return detail::induced_edge_count_bits(g, sorted);
  return detail::induced_edge_count_scan(g, sorted);
}

}  // namespace deltatest
