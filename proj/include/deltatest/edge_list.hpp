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

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <system_error>
#include <unordered_map>
#include <vector>

#include "deltatest/errors.hpp"
#include "deltatest/graph.hpp"

namespace deltatest {

/// Edge-list ingestion options.
///
/// FirstSeen assigns internal ids in order of first appearance (SNAP files
/// with sparse labels). Contiguous requires labels to already be internal
/// ids (non-negative, used verbatim, |V| = max label + 1); files written by
/// emit_edge_list reload under Contiguous with identical internal ids.
struct IngestOptions {
  enum class LabelMode { FirstSeen, Contiguous };
  LabelMode label_mode = LabelMode::FirstSeen;
};

struct LoadResult {
  DirectedGraph graph;
  std::uint64_t self_loops_dropped = 0;
  std::uint64_t duplicate_edges_dropped = 0;
  std::uint64_t edge_lines = 0;
};

namespace detail {

inline const char* skip_ws(const char* p, const char* end) {
  while (p < end && (*p == ' ' || *p == '\t')) ++p;
  return p;
}

inline const char* parse_label(const char* p, const char* end, Label& out,
                               std::size_t line_number) {
  Label value = 0;
  const auto [ptr, ec] = std::from_chars(p, end, value);
  if (ec != std::errc{} || ptr == p)
    throw ParseError(line_number, "expected integer vertex label");
  out = value;
  return ptr;
}

}  // namespace detail

/// Parses the edge-list format: one "u v" directed edge per line,
/// whitespace-separated 64-bit integer labels, '#'-prefixed comment lines,
/// blank lines ignored. Self-loops are dropped and duplicate edges
/// collapsed, with counts reported in the result. Both endpoints of a
/// self-loop still register as vertices.
inline LoadResult load_edge_list(std::istream& in, IngestOptions options = {}) {
  using LabelMode = IngestOptions::LabelMode;

  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<Label> labels;
  std::unordered_map<Label, VertexId> ids;
  Label max_label = -1;
  std::uint64_t self_loops = 0;
  std::uint64_t edge_lines = 0;
  std::size_t line_number = 0;

  const auto intern = [&](Label label) -> VertexId {
    if (options.label_mode == LabelMode::Contiguous) {
      if (label < 0)
        throw ParseError(line_number,
                         "negative label not allowed in contiguous mode");
      if (label > static_cast<Label>(0xFFFFFFFFu) - 1)
        throw ParseError(line_number, "label too large for contiguous mode");
      if (label > max_label) max_label = label;
      return static_cast<VertexId>(label);
    }
    const auto [it, inserted] =
        ids.emplace(label, static_cast<VertexId>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  const auto process_line = [&](const char* line, std::size_t len) {
    ++line_number;
    const char* p = line;
    const char* end = line + len;
    if (end > p && end[-1] == '\r') --end;
    p = detail::skip_ws(p, end);
    if (p == end || *p == '#') return;
    Label lu, lv;
    p = detail::parse_label(p, end, lu, line_number);
    p = detail::skip_ws(p, end);
    p = detail::parse_label(p, end, lv, line_number);
    p = detail::skip_ws(p, end);
    if (p != end) throw ParseError(line_number, "trailing characters after edge");
    ++edge_lines;
    const VertexId u = intern(lu);
    const VertexId v = intern(lv);
    if (u == v)
      ++self_loops;
    else
      edges.emplace_back(u, v);
  };

  std::string carry;
  std::vector<char> buffer(1 << 20);
  bool done = false;
  while (!done) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    const std::size_t got = static_cast<std::size_t>(in.gcount());
    done = got < buffer.size();
    const char* chunk = buffer.data();
    std::size_t start = 0;
    for (std::size_t i = 0; i < got; ++i) {
      if (chunk[i] != '\n') continue;
      if (carry.empty()) {
        process_line(chunk + start, i - start);
      } else {
        carry.append(chunk + start, i - start);
        process_line(carry.data(), carry.size());
        carry.clear();
      }
      start = i + 1;
    }
    if (start < got) carry.append(chunk + start, got - start);
  }
  if (!carry.empty()) process_line(carry.data(), carry.size());

  std::size_t n;
  if (options.label_mode == LabelMode::Contiguous) {
    n = static_cast<std::size_t>(max_label + 1);
    labels.clear();  // identity labels
  } else {
    n = labels.size();
  }

  SimplifyStats stats;
  LoadResult result;
  result.graph =
      DirectedGraph::from_edges(n, std::move(edges), &stats, std::move(labels));
  result.self_loops_dropped = self_loops;
  result.duplicate_edges_dropped = stats.duplicate_edges_dropped;
  result.edge_lines = edge_lines;
  return result;
}

inline LoadResult load_edge_list_file(const std::string& path,
                                      IngestOptions options = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open edge list file: " + path);
  return load_edge_list(in, options);
}

/// Writes the graph in the edge-list format using original labels, one
/// directed edge per line, sources ascending. Note the format cannot
/// express isolated vertices.
inline void emit_edge_list(const DirectedGraph& g, std::ostream& out) {
  char buf[48];
  std::string block;
  block.reserve(1 << 20);
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    const Label lu = g.label(static_cast<VertexId>(u));
    for (VertexId v : g.out_neighbors(static_cast<VertexId>(u))) {
      auto r1 = std::to_chars(buf, buf + sizeof buf, lu);
      *r1.ptr = ' ';
      auto r2 = std::to_chars(r1.ptr + 1, buf + sizeof buf, g.label(v));
      *r2.ptr = '\n';
      block.append(buf, static_cast<std::size_t>(r2.ptr + 1 - buf));
      if (block.size() > (1 << 20) - 64) {
        out.write(block.data(), static_cast<std::streamsize>(block.size()));
        block.clear();
      }
    }
  }
  out.write(block.data(), static_cast<std::streamsize>(block.size()));
  if (!out) throw std::runtime_error("edge list write failed");
}

inline void emit_edge_list_file(const DirectedGraph& g,
                                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  emit_edge_list(g, out);
  out.flush();
  if (!out) throw std::runtime_error("edge list write failed: " + path);
}

}  // namespace deltatest
