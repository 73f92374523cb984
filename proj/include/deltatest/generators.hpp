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
#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include "deltatest/graph.hpp"
#include "deltatest/rng.hpp"

namespace deltatest {

struct ErParams {
  std::uint64_t n = 0;
  double p = 0.0;  // directed edge probability per ordered pair
};

struct CmParams {
  std::uint64_t n = 0;
  double exponent = 3.5;  // power-law exponent, > 2
  std::uint64_t min_degree = 1;
};

struct CavemanParams {
  std::uint64_t num_cliques = 0;
  std::uint64_t clique_size = 0;
};

struct SbmParams {
  std::uint64_t target_n = 0;
  std::uint64_t block_min = 0;
  std::uint64_t block_max = 0;
  double p_intra = 0.0;
  double p_inter = 0.0;
};

/// Tagged parameter record for one synthetic graph family plus a seed.
struct GeneratorSpec {
  std::variant<ErParams, CmParams, CavemanParams, SbmParams> params;
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_probability(double p, const char* name) {
  if (!(p >= 0.0) || !(p <= 1.0))
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

inline void append_bernoulli_row(std::vector<std::pair<VertexId, VertexId>>& edges,
                                 VertexId u, std::uint64_t begin, std::uint64_t end,
                                 double p, Rng& rng) {
  for (std::uint64_t v = begin; v < end; ++v) {
    if (v == u) continue;
    if (rng.bernoulli(p)) edges.emplace_back(u, static_cast<VertexId>(v));
  }
}

}  // namespace detail

/// Erdos-Renyi-Gilbert digraph: each ordered pair (u, v), u != v, carries
/// an edge independently with probability p.
inline DirectedGraph generate_er(std::uint64_t n, double p, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("ER: n must be at least 2");
  detail::check_probability(p, "ER: p");
  Rng rng(seed);
  std::vector<std::pair<VertexId, VertexId>> edges;
  if (p > 0.0) {
    const double expected = p * static_cast<double>(n) * static_cast<double>(n - 1);
    edges.reserve(static_cast<std::size_t>(expected * 1.01) + 1024);
    for (std::uint64_t u = 0; u < n; ++u)
      detail::append_bernoulli_row(edges, static_cast<VertexId>(u), 0, n, p, rng);
  }
  return DirectedGraph::from_edges(n, std::move(edges));
}

/// Discrete power-law degrees: P(k) proportional to k^-exponent over
/// k in [min_degree, max_degree]. Inverse-CDF sampling on a precomputed
/// table.
inline std::vector<std::uint64_t> draw_power_law_degrees(
    std::size_t count, double exponent, std::uint64_t min_degree,
    std::uint64_t max_degree, Rng& rng) {
  if (min_degree < 1 || min_degree > max_degree)
    throw std::invalid_argument("power-law degrees: need 1 <= min_degree <= max_degree");
  std::vector<double> cdf;
  cdf.reserve(max_degree - min_degree + 1);
  double total = 0.0;
  for (std::uint64_t k = min_degree; k <= max_degree; ++k) {
    total += std::pow(static_cast<double>(k), -exponent);
    cdf.push_back(total);
  }
  std::vector<std::uint64_t> degrees(count);
  for (auto& d : degrees) {
    const double u = rng.uniform_unit() * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    d = min_degree + static_cast<std::uint64_t>(it - cdf.begin());
    if (d > max_degree) d = max_degree;  // u == total edge case
  }
  return degrees;
}

/// Balances the in- and out-degree sums by incrementing uniformly random
/// vertices on the deficient side, one unit at a time, respecting `cap`.
/// Returns the number of increments (equals the initial |sum difference|).
inline std::uint64_t repair_degree_sums(std::vector<std::uint64_t>& in_degrees,
                                        std::vector<std::uint64_t>& out_degrees,
                                        std::uint64_t cap, Rng& rng) {
  if (in_degrees.size() != out_degrees.size())
    throw std::invalid_argument("repair_degree_sums: size mismatch");
  std::uint64_t sum_in = 0, sum_out = 0;
  for (auto d : in_degrees) sum_in += d;
  for (auto d : out_degrees) sum_out += d;
  std::uint64_t edits = 0;
  std::uint64_t stalled = 0;
  while (sum_in != sum_out) {
    const bool in_deficient = sum_in < sum_out;
    auto& deficient = in_deficient ? in_degrees : out_degrees;
    const auto idx = static_cast<std::size_t>(rng.below(deficient.size()));
    if (deficient[idx] >= cap) {
      if (++stalled > 64 * deficient.size())
        throw std::invalid_argument("repair_degree_sums: deficient side saturated at cap");
      continue;
    }
    ++deficient[idx];
    ++edits;
    if (in_deficient)
      ++sum_in;
    else
      ++sum_out;
  }
  return edits;
}

/// Directed configuration model: i.i.d. power-law in- and out-degree
/// sequences (capped at n-1), sums balanced by repair_degree_sums, stubs
/// matched uniformly at random, then simplified to a simple digraph.
inline DirectedGraph generate_cm(std::uint64_t n, double exponent,
                                 std::uint64_t min_degree, std::uint64_t seed,
                                 SimplifyStats* stats = nullptr) {
  if (n < 2) throw std::invalid_argument("CM: n must be at least 2");
  if (!(exponent > 2.0))
    throw std::invalid_argument("CM: exponent must be greater than 2");
  if (min_degree < 1 || min_degree >= n)
    throw std::invalid_argument("CM: need 1 <= min_degree < n");
  Rng rng(seed);
  auto out_degrees = draw_power_law_degrees(n, exponent, min_degree, n - 1, rng);
  auto in_degrees = draw_power_law_degrees(n, exponent, min_degree, n - 1, rng);
  repair_degree_sums(in_degrees, out_degrees, n - 1, rng);

  std::vector<VertexId> out_stubs, in_stubs;
  for (std::uint64_t v = 0; v < n; ++v) {
    out_stubs.insert(out_stubs.end(), out_degrees[v], static_cast<VertexId>(v));
    in_stubs.insert(in_stubs.end(), in_degrees[v], static_cast<VertexId>(v));
  }
  // Uniform matching: pair out-stubs positionally with a shuffled
  // permutation of in-stubs.
  for (std::size_t i = in_stubs.size(); i > 1; --i)
    std::swap(in_stubs[i - 1], in_stubs[rng.below(i)]);
  std::vector<std::pair<VertexId, VertexId>> edges(out_stubs.size());
  for (std::size_t i = 0; i < out_stubs.size(); ++i)
    edges[i] = {out_stubs[i], in_stubs[i]};
  return DirectedGraph::from_edges(n, std::move(edges), stats);
}

/// Directed connected caveman graph: `num_cliques` cliques of
/// `clique_size` vertices; in each clique the edge between its first two
/// vertices is removed and the first vertex is linked to the previous
/// clique's last vertex, closing a ring. Every undirected edge becomes a
/// reciprocal pair of directed edges.
inline DirectedGraph generate_caveman(std::uint64_t num_cliques,
                                      std::uint64_t clique_size,
                                      std::uint64_t /*seed*/ = 0) {
  if (num_cliques < 2)
    throw std::invalid_argument("caveman: num_cliques must be at least 2");
  if (clique_size < 2)
    throw std::invalid_argument("caveman: clique_size must be at least 2");
  const std::uint64_t n = num_cliques * clique_size;
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(num_cliques * clique_size * (clique_size - 1));
  const auto add_undirected = [&](std::uint64_t a, std::uint64_t b) {
    edges.emplace_back(static_cast<VertexId>(a), static_cast<VertexId>(b));
    edges.emplace_back(static_cast<VertexId>(b), static_cast<VertexId>(a));
  };
  for (std::uint64_t c = 0; c < num_cliques; ++c) {
    const std::uint64_t base = c * clique_size;
    for (std::uint64_t i = 0; i < clique_size; ++i)
      for (std::uint64_t j = i + 1; j < clique_size; ++j) {
        if (i == 0 && j == 1) continue;  // rewired edge
        add_undirected(base + i, base + j);
      }
    add_undirected(base, (base + n - 1) % n);
  }
  return DirectedGraph::from_edges(n, std::move(edges));
}

/// Block sizes drawn uniformly from [block_min, block_max] until the next
/// draw would overshoot target_n; the residual becomes a final block only
/// if it still reaches block_min.
inline std::vector<std::uint64_t> draw_block_sizes(std::uint64_t target_n,
                                                   std::uint64_t block_min,
                                                   std::uint64_t block_max,
                                                   Rng& rng) {
  if (block_min < 1 || block_min > block_max)
    throw std::invalid_argument("SBM: need 1 <= block_min <= block_max");
  if (target_n < block_min)
    throw std::invalid_argument("SBM: target_n smaller than block_min");
  std::vector<std::uint64_t> sizes;
  std::uint64_t cumulative = 0;
  while (true) {
    const std::uint64_t s = block_min + rng.below(block_max - block_min + 1);
    if (cumulative + s > target_n) {
      const std::uint64_t residual = target_n - cumulative;
      if (residual >= block_min) sizes.push_back(residual);
      break;
    }
    sizes.push_back(s);
    cumulative += s;
    if (cumulative == target_n) break;
  }
  return sizes;
}

/// Directed stochastic block model with constant intra- and inter-block
/// edge probabilities. Warns (stderr) if p_inter >= p_intra, which is
/// allowed but produces no planted structure.
inline DirectedGraph generate_sbm(std::uint64_t target_n, std::uint64_t block_min,
                                  std::uint64_t block_max, double p_intra,
                                  double p_inter, std::uint64_t seed,
                                  std::vector<std::uint64_t>* block_sizes_out = nullptr) {
  detail::check_probability(p_intra, "SBM: p_intra");
  detail::check_probability(p_inter, "SBM: p_inter");
  if (!(p_inter < p_intra))
    std::cerr << "warning: SBM with p_inter >= p_intra has no planted block structure\n";
  Rng rng(seed);
  const auto sizes = draw_block_sizes(target_n, block_min, block_max, rng);
  if (block_sizes_out) *block_sizes_out = sizes;
  std::uint64_t n = 0;
  for (auto s : sizes) n += s;
  if (n < 2) throw std::invalid_argument("SBM: realized graph has fewer than 2 vertices");

  std::vector<std::pair<VertexId, VertexId>> edges;
  const double expected = static_cast<double>(n) * static_cast<double>(n - 1) *
                          std::max(p_intra, p_inter);
  edges.reserve(static_cast<std::size_t>(expected * 1.01) + 1024);
  std::uint64_t block_begin = 0;
  for (const std::uint64_t size : sizes) {
    const std::uint64_t block_end = block_begin + size;
    for (std::uint64_t u = block_begin; u < block_end; ++u) {
      const auto uid = static_cast<VertexId>(u);
      detail::append_bernoulli_row(edges, uid, 0, block_begin, p_inter, rng);
      detail::append_bernoulli_row(edges, uid, block_begin, block_end, p_intra, rng);
      detail::append_bernoulli_row(edges, uid, block_end, n, p_inter, rng);
    }
    block_begin = block_end;
  }
  return DirectedGraph::from_edges(n, std::move(edges));
}

inline DirectedGraph generate(const GeneratorSpec& spec) {
  return std::visit(
      [&](const auto& p) -> DirectedGraph {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ErParams>)
          return generate_er(p.n, p.p, spec.seed);
        else if constexpr (std::is_same_v<T, CmParams>)
          return generate_cm(p.n, p.exponent, p.min_degree, spec.seed);
        else if constexpr (std::is_same_v<T, CavemanParams>)
          return generate_caveman(p.num_cliques, p.clique_size, spec.seed);
        else
          return generate_sbm(p.target_n, p.block_min, p.block_max, p.p_intra,
                              p.p_inter, spec.seed);
      },
      spec.params);
}

inline const char* family_name(const GeneratorSpec& spec) {
  switch (spec.params.index()) {
    case 0: return "er";
    case 1: return "cm";
    case 2: return "caveman";
    case 3: return "sbm";
  }
  return "?";
}

/// True if `text` looks like a generator spec string rather than a path,
/// e.g. "er:n=7000,p=0.333".
inline bool looks_like_generator_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return false;
  const std::string head = text.substr(0, colon);
  return head == "er" || head == "cm" || head == "caveman" || head == "cc" ||
         head == "sbm";
}

/// Parses "family:key=value,key=value" strings. Families: er (n, p),
/// cm (n, exponent, min_degree), caveman/cc (cliques, clique_size),
/// sbm (target_n, block_min, block_max, p_intra, p_inter). Every family
/// accepts an optional seed key.
inline GeneratorSpec parse_generator_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("generator spec needs 'family:key=value,...': " + text);
  const std::string family = text.substr(0, colon);

  std::vector<std::pair<std::string, std::string>> kvs;
  std::size_t pos = colon + 1;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("generator spec item needs key=value: " + item);
    kvs.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    pos = comma + 1;
  }

  GeneratorSpec spec;
  const auto take = [&](const std::string& key) -> const std::string* {
    for (const auto& [k, v] : kvs)
      if (k == key) return &v;
    return nullptr;
  };
  const auto need_u64 = [&](const std::string& key) {
    const auto* v = take(key);
    if (!v) throw std::invalid_argument("generator spec missing key '" + key + "': " + text);
    return static_cast<std::uint64_t>(std::stoull(*v));
  };
  const auto need_double = [&](const std::string& key) {
    const auto* v = take(key);
    if (!v) throw std::invalid_argument("generator spec missing key '" + key + "': " + text);
    return std::stod(*v);
  };
  const auto opt_u64 = [&](const std::string& key, std::uint64_t fallback) {
    const auto* v = take(key);
    return v ? static_cast<std::uint64_t>(std::stoull(*v)) : fallback;
  };
  if (const auto* v = take("seed"); v)
    spec.seed = static_cast<std::uint64_t>(std::stoull(*v));

  std::vector<std::string> known = {"seed"};
  if (family == "er") {
    spec.params = ErParams{need_u64("n"), need_double("p")};
    known.insert(known.end(), {"n", "p"});
  } else if (family == "cm") {
    spec.params = CmParams{need_u64("n"), need_double("exponent"),
                           opt_u64("min_degree", 1)};
    known.insert(known.end(), {"n", "exponent", "min_degree"});
  } else if (family == "caveman" || family == "cc") {
    spec.params = CavemanParams{need_u64("cliques"), need_u64("clique_size")};
    known.insert(known.end(), {"cliques", "clique_size"});
  } else if (family == "sbm") {
    spec.params = SbmParams{need_u64("target_n"), need_u64("block_min"),
                            need_u64("block_max"), need_double("p_intra"),
                            need_double("p_inter")};
    known.insert(known.end(),
                 {"target_n", "block_min", "block_max", "p_intra", "p_inter"});
  } else {
    throw std::invalid_argument("unknown generator family: " + family);
  }
  for (const auto& [k, v] : kvs)
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw std::invalid_argument("unknown generator spec key '" + k + "': " + text);
  return spec;
}

}  // namespace deltatest
