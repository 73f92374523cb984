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

#include "deltatest/sampler.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "deltatest/generators.hpp"
#include "test_util.hpp"

namespace deltatest {
namespace {

using testing::BruteForceGraph;
using testing::figure_graph;

TEST(ResolveSampleSize, FloorOfFractionTimesVertices) {
  EXPECT_EQ(resolve_sample_size(0.01, 7000), 70u);
  EXPECT_EQ(resolve_sample_size(0.005, 7000), 35u);
  EXPECT_EQ(resolve_sample_size(1.0, 9), 9u);
}

TEST(ResolveSampleSize, TooSmallOrInvalid) {
  EXPECT_THROW(resolve_sample_size(0.0001, 7000), SampleTooSmallError);
  EXPECT_THROW(resolve_sample_size(0.1, 10), SampleTooSmallError);
  EXPECT_THROW(resolve_sample_size(0.0, 100), std::invalid_argument);
  EXPECT_THROW(resolve_sample_size(1.5, 100), std::invalid_argument);
}

TEST(Sampler, FullSampleMatchesBruteForceEnumeration) {
  const auto g = figure_graph().graph;
  const BruteForceGraph oracle({{1, 2}, {1, 3}, {1, 4}, {2, 3}, {3, 2},
                                {5, 6}, {7, 5}, {7, 6}, {4, 5}});
  for (const auto mode :
       {NeighborhoodMode::All, NeighborhoodMode::Out, NeighborhoodMode::In}) {
    SamplePlan plan;
    plan.sample_fraction = 1.0;
    plan.seed = 5;
    plan.mode = mode;
    plan.policy = DegeneratePolicy::SkipNoRedraw;
    const auto samples = sample_local_densities(g, plan);

    std::set<VertexId> seen;
    for (const auto& s : samples) {
      seen.insert(s.focal);
      const auto nbrs = oracle.neighborhood(g.label(s.focal), mode);
      ASSERT_GE(nbrs.size(), 2u);
      const auto e = oracle.induced_edges(nbrs);
      EXPECT_EQ(s.neighborhood_size, nbrs.size());
      EXPECT_EQ(s.induced_edges, e);
      const double expected_kappa =
          static_cast<double>(e) / (static_cast<double>(nbrs.size()) *
                                    static_cast<double>(nbrs.size() - 1));
      EXPECT_EQ(s.kappa, expected_kappa);
    }
    // every non-degenerate vertex appears exactly once
    std::size_t non_degenerate = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (oracle.neighborhood(g.label(v), mode).size() >= 2) ++non_degenerate;
    EXPECT_EQ(seen.size(), samples.size());
    EXPECT_EQ(samples.size(), non_degenerate);
  }
}

TEST(Sampler, FigureGraphFullMeanLocalDensity) {
  const auto g = figure_graph().graph;
  SamplePlan plan;
  plan.sample_fraction = 1.0;
  plan.seed = 1;
  const auto samples = sample_local_densities(g, plan);
  ASSERT_EQ(samples.size(), 7u);
  // enumeration oracle: kappas {1/3, 1/2, 1/2, 0, 1/6, 1/2, 1/2}
  EXPECT_NEAR(mean_local_density(samples), 2.5 / 7.0, 1e-15);
}

TEST(Sampler, DeterministicAndDistinct) {
  const auto g = generate_er(400, 0.05, 3);
  SamplePlan plan;
  plan.sample_fraction = 0.1;
  plan.seed = 77;
  const auto a = sample_local_densities(g, plan);
  const auto b = sample_local_densities(g, plan);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].focal, b[i].focal);
    EXPECT_EQ(a[i].kappa, b[i].kappa);
  }
  std::set<VertexId> focals;
  for (const auto& s : a) focals.insert(s.focal);
  EXPECT_EQ(focals.size(), a.size());

  plan.seed = 78;
  const auto c = sample_local_densities(g, plan);
  bool any_difference = c.size() != a.size();
  for (std::size_t i = 0; !any_difference && i < a.size(); ++i)
    any_difference = a[i].focal != c[i].focal;
  EXPECT_TRUE(any_difference);
}

TEST(Sampler, KappaAlwaysInUnitInterval) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = generate_sbm(500, 40, 60, 0.8, 0.1, seed);
    SamplePlan plan;
    plan.sample_fraction = 0.2;
    plan.seed = seed;
    for (const auto& s : sample_local_densities(g, plan)) {
      EXPECT_GE(s.kappa, 0.0);
      EXPECT_LE(s.kappa, 1.0);
      EXPECT_LE(s.induced_edges,
                s.neighborhood_size * (s.neighborhood_size - 1));
    }
  }
}

TEST(Sampler, CompleteDigraphAllKappaOne) {
  const auto g = generate_er(60, 1.0, 1);
  SamplePlan plan;
  plan.sample_fraction = 0.5;
  plan.seed = 9;
  const auto samples = sample_local_densities(g, plan);
  ASSERT_EQ(samples.size(), 30u);
  for (const auto& s : samples) EXPECT_EQ(s.kappa, 1.0);
}

TEST(Sampler, EdgelessGraphPolicies) {
  const auto g = DirectedGraph::from_edges(50, {});
  SamplePlan plan;
  plan.sample_fraction = 0.2;
  plan.seed = 4;

  plan.policy = DegeneratePolicy::SkipNoRedraw;
  EXPECT_TRUE(sample_local_densities(g, plan).empty());

  plan.policy = DegeneratePolicy::SkipRedraw;
  EXPECT_TRUE(sample_local_densities(g, plan).empty());

  plan.policy = DegeneratePolicy::CountZero;
  const auto zeros = sample_local_densities(g, plan);
  ASSERT_EQ(zeros.size(), 10u);
  for (const auto& s : zeros) {
    EXPECT_TRUE(s.degenerate);
    EXPECT_EQ(s.kappa, 0.0);
  }
}

TEST(Sampler, SkipRedrawReplacesDegenerates) {
  // a path 0->1->...->: endpoints have 1 neighbor, interior has 2
  std::vector<std::pair<VertexId, VertexId>> edges;
  const std::size_t n = 40;
  for (VertexId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  const auto g = DirectedGraph::from_edges(n, std::move(edges));

  SamplePlan plan;
  plan.sample_fraction = 0.9;  // 36 of 40; only 38 are non-degenerate
  plan.seed = 12;
  plan.policy = DegeneratePolicy::SkipRedraw;
  const auto samples = sample_local_densities(g, plan);
  EXPECT_EQ(samples.size(), 36u);
  for (const auto& s : samples) EXPECT_GE(s.neighborhood_size, 2u);

  plan.policy = DegeneratePolicy::SkipNoRedraw;
  const auto skipped = sample_local_densities(g, plan);
  EXPECT_LE(skipped.size(), 36u);
  for (const auto& s : skipped) EXPECT_GE(s.neighborhood_size, 2u);
}

TEST(MeanLocalDensity, WorkedExamples) {
  const auto sample = [](double kappa) {
    NeighborhoodSample s;
    s.kappa = kappa;
    return s;
  };
  const std::vector<NeighborhoodSample> pair{sample(1.0), sample(1.0 / 3.0)};
  EXPECT_NEAR(mean_local_density(pair), 2.0 / 3.0, 1e-15);
  const std::vector<NeighborhoodSample> halves{sample(0.5), sample(0.5)};
  EXPECT_EQ(mean_local_density(halves), 0.5);
  const std::vector<NeighborhoodSample> single{sample(0.123)};
  EXPECT_EQ(mean_local_density(single), 0.123);
  EXPECT_THROW(mean_local_density({}), SampleTooSmallError);
}

TEST(MeanLocalDensity, PermutationInvariant) {
  Rng rng(19);
  std::vector<NeighborhoodSample> samples(50);
  for (auto& s : samples) s.kappa = rng.uniform_unit();
  const double base = mean_local_density(samples);
  for (int trial = 0; trial < 10; ++trial) {
    for (std::size_t i = samples.size(); i > 1; --i)
      std::swap(samples[i - 1], samples[rng.below(i)]);
    EXPECT_NEAR(mean_local_density(samples), base, 1e-12);
  }
}

TEST(Sampler, CsvExport) {
  const auto g = figure_graph().graph;
  SamplePlan plan;
  plan.sample_fraction = 1.0;
  plan.seed = 2;
  const auto samples = sample_local_densities(g, plan);
  std::ostringstream out;
  write_local_density_csv(out, g, samples);
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "focal_label,n_i,e_i,kappa");
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  EXPECT_EQ(rows, samples.size());
}

}  // namespace
}  // namespace deltatest
