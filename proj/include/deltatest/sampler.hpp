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

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <span>
#include <vector>

#include "deltatest/errors.hpp"
#include "deltatest/graph.hpp"
#include "deltatest/rng.hpp"

namespace deltatest {

/// What to do with a sampled vertex whose neighborhood has fewer than two
/// members (local density undefined).
enum class DegeneratePolicy {
  SkipRedraw,    // replace with a fresh unused vertex (default)
  SkipNoRedraw,  // drop it; the sample shrinks
  CountZero      // keep it with kappa = 0
};

/// One sampled vertex and the density of its neighborhood-induced subgraph.
struct NeighborhoodSample {
  VertexId focal = 0;
  std::uint64_t neighborhood_size = 0;
  std::uint64_t induced_edges = 0;
  double kappa = 0.0;
  bool degenerate = false;  // neighborhood_size < 2; kappa set per policy
};

struct SamplePlan {
  double sample_fraction = 0.01;
  std::uint64_t seed = 0;
  DegeneratePolicy policy = DegeneratePolicy::SkipRedraw;
  NeighborhoodMode mode = NeighborhoodMode::All;
};

/// Sample size from a fraction: floor(s * |V|). Throws when the result is
/// too small for a t test.
inline std::size_t resolve_sample_size(double sample_fraction,
                                       std::size_t vertex_count) {
  if (!(sample_fraction > 0.0) || !(sample_fraction <= 1.0))
    throw std::invalid_argument("sample fraction must lie in (0, 1]");
  const auto count = static_cast<std::size_t>(
      std::floor(sample_fraction * static_cast<double>(vertex_count)));
  if (count < 2)
    throw SampleTooSmallError(
        "sample of " + std::to_string(count) +
        " vertices is too small to test (need at least 2)");
  return count;
}

/// Samples distinct vertices uniformly without replacement and computes
/// each one's neighborhood local density; degenerate neighborhoods are
/// handled per the plan's policy. Results are ordered by draw index, so
/// equal (graph, plan) always yields the identical list. Read-only on the
/// graph; safe to run concurrently against a shared instance.
inline std::vector<NeighborhoodSample> sample_local_densities(
    const DirectedGraph& g, const SamplePlan& plan) {
  const std::size_t n = g.vertex_count();
  const std::size_t target = resolve_sample_size(plan.sample_fraction, n);
  Rng rng(plan.seed);

  std::vector<VertexId> pool(n);
  std::iota(pool.begin(), pool.end(), VertexId{0});

  std::vector<NeighborhoodSample> samples;
  samples.reserve(target);
  const std::size_t max_draws =
      plan.policy == DegeneratePolicy::SkipRedraw
          ? std::min<std::size_t>(n, 10 * target)
          : target;

  for (std::size_t draw = 0; draw < max_draws && samples.size() < target;
       ++draw) {
    const std::size_t j = draw + static_cast<std::size_t>(rng.below(n - draw));
    std::swap(pool[draw], pool[j]);
    const VertexId v = pool[draw];

    const auto nbrs = neighborhood(g, v, plan.mode);
    NeighborhoodSample s;
    s.focal = v;
    s.neighborhood_size = nbrs.size();
    if (nbrs.size() < 2) {
      s.degenerate = true;
      s.kappa = 0.0;
      switch (plan.policy) {
        case DegeneratePolicy::SkipRedraw:
        case DegeneratePolicy::SkipNoRedraw:
          continue;
        case DegeneratePolicy::CountZero:
          samples.push_back(s);
          continue;
      }
    }
    s.induced_edges = induced_edge_count(g, nbrs);
    const double pairs = static_cast<double>(s.neighborhood_size) *
                         static_cast<double>(s.neighborhood_size - 1);
    s.kappa = static_cast<double>(s.induced_edges) / pairs;
    samples.push_back(s);
  }
  return samples;
}

/// Arithmetic mean of the sampled local densities (zeros included under
/// the count-as-zero policy). Throws when no usable samples exist.
inline double mean_local_density(std::span<const NeighborhoodSample> samples) {
  if (samples.empty())
    throw SampleTooSmallError("mean local density of an empty sample");
  double sum = 0.0;
  for (const auto& s : samples) sum += s.kappa;
  return sum / static_cast<double>(samples.size());
}

/// CSV export of per-sample local densities, columns
/// focal_label,n_i,e_i,kappa. Feeds the local-density histograms.
inline void write_local_density_csv(std::ostream& out, const DirectedGraph& g,
                                    std::span<const NeighborhoodSample> samples) {
  out << "focal_label,n_i,e_i,kappa\n";
  out << std::setprecision(12);
  for (const auto& s : samples)
    out << g.label(s.focal) << ',' << s.neighborhood_size << ','
        << s.induced_edges << ',' << s.kappa << '\n';
}

}  // namespace deltatest
