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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "deltatest/errors.hpp"
#include "deltatest/graph.hpp"
#include "deltatest/sampler.hpp"
#include "deltatest/stats.hpp"

namespace deltatest {

/// One execution of the delta sampling pipeline on a graph.
///
/// delta_values[i] = kappas[i] / K - 1 and delta_mean = mean(kappas)/K - 1.
/// `ttest` is the one-sample one-tailed test of the delta values against 0;
/// it is absent when this run only feeds a two-graph comparison and its own
/// delta values were all identical.
struct DeltaRunResult {
  double global_density = 0.0;
  std::vector<NeighborhoodSample> samples;
  std::vector<double> kappas;
  std::vector<double> delta_values;
  double delta_mean = 0.0;
  std::optional<TTestResult> ttest;
};

/// Two-graph comparison: d_gh = delta_G - delta_H, Welch one-tailed test of
/// G's delta values against H's (alternative: E(delta_G) > E(delta_H)).
struct TwoGraphResult {
  DeltaRunResult run_g;
  DeltaRunResult run_h;
  double d_gh = 0.0;
  TTestResult ttest;
};

/// Samples the graph and computes kappas and delta values, without any
/// significance test attached. Requires K > 0 and at least two usable
/// samples.
inline DeltaRunResult delta_run(const DirectedGraph& g, const SamplePlan& plan) {
  DeltaRunResult run;
  run.global_density = global_density(g);
  if (run.global_density == 0.0)
    throw std::domain_error(
        "delta test undefined on a graph with zero density (no edges)");
  run.samples = sample_local_densities(g, plan);
  if (run.samples.size() < 2)
    throw SampleTooSmallError(
        "only " + std::to_string(run.samples.size()) +
        " usable neighborhood samples; need at least 2 to test");
  run.kappas.reserve(run.samples.size());
  run.delta_values.reserve(run.samples.size());
  for (const auto& s : run.samples) {
    run.kappas.push_back(s.kappa);
    run.delta_values.push_back(s.kappa / run.global_density - 1.0);
  }
  run.delta_mean = mean_local_density(run.samples) / run.global_density - 1.0;
  return run;
}

/// Single-graph clusterability test: H0 E(delta) = 0 vs H1 E(delta) > 0.
/// Rejecting means the graph meets the necessary condition for
/// clusterability. Degenerate samples (all delta values identical) throw
/// ZeroVarianceError.
inline DeltaRunResult single_graph_test(const DirectedGraph& g,
                                        const SamplePlan& plan, double alpha) {
  DeltaRunResult run = delta_run(g, plan);
  run.ttest = one_sample_greater(run.delta_values, 0.0, alpha);
  return run;
}

namespace detail {

template <typename Fn>
auto attribute_errors(const char* which, Fn&& fn) {
  try {
    return fn();
  } catch (const ZeroVarianceError& e) {
    throw ZeroVarianceError(std::string(which) + ": " + e.what());
  } catch (const SampleTooSmallError& e) {
    throw SampleTooSmallError(std::string(which) + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw std::domain_error(std::string(which) + ": " + e.what());
  }
}

}  // namespace detail

/// Two-graph test: H0 E(delta_G) = E(delta_H) vs H1 E(delta_G) > E(delta_H).
/// Each graph is sampled independently and normalized by its own global
/// density; the per-neighborhood delta values are the Welch observations.
/// Per-graph errors are attributed to the offending graph.
inline TwoGraphResult two_graph_test(const DirectedGraph& g,
                                     const DirectedGraph& h,
                                     const SamplePlan& plan_g,
                                     const SamplePlan& plan_h, double alpha) {
  TwoGraphResult result;
  result.run_g =
      detail::attribute_errors("graph G", [&] { return delta_run(g, plan_g); });
  result.run_h =
      detail::attribute_errors("graph H", [&] { return delta_run(h, plan_h); });
  for (auto* run : {&result.run_g, &result.run_h}) {
    try {
      run->ttest = one_sample_greater(run->delta_values, 0.0, alpha);
    } catch (const DegenerateSampleError&) {
      // own-graph verdict unavailable; the Welch test may still be defined
    }
  }
  result.d_gh = result.run_g.delta_mean - result.run_h.delta_mean;
  result.ttest =
      welch_greater(result.run_g.delta_values, result.run_h.delta_values, alpha);
  return result;
}

inline void to_json(nlohmann::json& j, const TTestResult& r) {
  j = nlohmann::json{{"t", r.t_statistic},
                     {"df", r.degrees_of_freedom},
                     {"p", r.p_value},
                     {"alpha", r.alpha},
                     {"reject", r.reject}};
}

inline void from_json(const nlohmann::json& j, TTestResult& r) {
  j.at("t").get_to(r.t_statistic);
  j.at("df").get_to(r.degrees_of_freedom);
  j.at("p").get_to(r.p_value);
  j.at("alpha").get_to(r.alpha);
  j.at("reject").get_to(r.reject);
}

inline void to_json(nlohmann::json& j, const NeighborhoodSample& s) {
  j = nlohmann::json{{"focal", s.focal},
                     {"n", s.neighborhood_size},
                     {"e", s.induced_edges},
                     {"kappa", s.kappa},
                     {"degenerate", s.degenerate}};
}

inline void from_json(const nlohmann::json& j, NeighborhoodSample& s) {
  j.at("focal").get_to(s.focal);
  j.at("n").get_to(s.neighborhood_size);
  j.at("e").get_to(s.induced_edges);
  j.at("kappa").get_to(s.kappa);
  j.at("degenerate").get_to(s.degenerate);
}

inline void to_json(nlohmann::json& j, const DeltaRunResult& r) {
  j = nlohmann::json{{"global_density", r.global_density},
                     {"samples", r.samples},
                     {"kappas", r.kappas},
                     {"delta_values", r.delta_values},
                     {"delta_mean", r.delta_mean}};
  if (r.ttest)
    j["ttest"] = *r.ttest;
  else
    j["ttest"] = nullptr;
}

inline void from_json(const nlohmann::json& j, DeltaRunResult& r) {
  j.at("global_density").get_to(r.global_density);
  j.at("samples").get_to(r.samples);
  j.at("kappas").get_to(r.kappas);
  j.at("delta_values").get_to(r.delta_values);
  j.at("delta_mean").get_to(r.delta_mean);
  if (j.at("ttest").is_null())
    r.ttest.reset();
  else
    r.ttest = j.at("ttest").get<TTestResult>();
}

inline void to_json(nlohmann::json& j, const TwoGraphResult& r) {
  j = nlohmann::json{{"run_g", r.run_g},
                     {"run_h", r.run_h},
                     {"d_gh", r.d_gh},
                     {"ttest", r.ttest}};
}

inline void from_json(const nlohmann::json& j, TwoGraphResult& r) {
  j.at("run_g").get_to(r.run_g);
  j.at("run_h").get_to(r.run_h);
  j.at("d_gh").get_to(r.d_gh);
  j.at("ttest").get_to(r.ttest);
}

}  // namespace deltatest
