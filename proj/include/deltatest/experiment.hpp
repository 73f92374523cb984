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

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "deltatest/delta.hpp"
#include "deltatest/edge_list.hpp"
#include "deltatest/generators.hpp"
#include "deltatest/graph.hpp"

namespace deltatest {

inline const char* to_string(NeighborhoodMode mode) {
  switch (mode) {
    case NeighborhoodMode::All: return "all";
    case NeighborhoodMode::Out: return "out";
    case NeighborhoodMode::In: return "in";
  }
  return "?";
}

inline NeighborhoodMode neighborhood_mode_from_string(const std::string& s) {
  if (s == "all") return NeighborhoodMode::All;
  if (s == "out") return NeighborhoodMode::Out;
  if (s == "in") return NeighborhoodMode::In;
  throw std::invalid_argument("unknown neighborhood mode: " + s);
}

inline const char* to_string(DegeneratePolicy policy) {
  switch (policy) {
    case DegeneratePolicy::SkipRedraw: return "skip-redraw";
    case DegeneratePolicy::SkipNoRedraw: return "skip";
    case DegeneratePolicy::CountZero: return "zero";
  }
  return "?";
}

inline DegeneratePolicy degenerate_policy_from_string(const std::string& s) {
  if (s == "skip-redraw") return DegeneratePolicy::SkipRedraw;
  if (s == "skip") return DegeneratePolicy::SkipNoRedraw;
  if (s == "zero") return DegeneratePolicy::CountZero;
  throw std::invalid_argument("unknown degenerate policy: " + s);
}

/// Worker count: an explicit request wins; otherwise hardware concurrency,
/// capped by the DELTA_THREADS environment variable.
inline unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("DELTA_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && v > 0 && v < hw) hw = static_cast<unsigned>(v);
  }
  return hw;
}

/// A graph source for experiments: either an edge-list file path or a
/// generator spec string such as "er:n=7000,p=0.333".
struct GraphSource {
  std::string text;
  bool is_generator() const { return looks_like_generator_spec(text); }
};

struct ExperimentConfig {
  GraphSource source_g;
  std::optional<GraphSource> source_h;  // set: two-graph comparison
  double sample_fraction = 0.01;
  double alpha = 0.05;
  std::size_t repetitions = 1;
  std::uint64_t master_seed = 0;
  NeighborhoodMode mode = NeighborhoodMode::All;
  DegeneratePolicy policy = DegeneratePolicy::SkipRedraw;
  unsigned threads = 0;  // 0: auto
  bool regenerate_per_repetition = false;
  std::string output_dir;  // empty: no files written
};

/// One repetition of the experiment. Degenerate repetitions (a sample that
/// cannot support a t test: all values identical, or too few usable
/// neighborhoods) are recorded explicitly and never count as rejections.
struct RepetitionOutcome {
  std::size_t index = 0;
  double delta = std::numeric_limits<double>::quiet_NaN();
  double t = std::numeric_limits<double>::quiet_NaN();
  double df = std::numeric_limits<double>::quiet_NaN();
  double p = std::numeric_limits<double>::quiet_NaN();
  bool reject = false;
  bool degenerate = false;
};

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  std::uint64_t count = 0;
};

/// Equal-width bins over the observed range; NaNs are skipped. A constant
/// sample yields one zero-width bin.
inline std::vector<HistogramBin> make_histogram(std::span<const double> values,
                                                std::size_t bins = 30) {
  std::vector<double> xs;
  xs.reserve(values.size());
  for (double v : values)
    if (!std::isnan(v)) xs.push_back(v);
  if (xs.empty() || bins == 0) return {};
  const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  if (*mn == *mx) return {{*mn, *mx, xs.size()}};
  std::vector<HistogramBin> hist(bins);
  const double width = (*mx - *mn) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    hist[b].left = *mn + width * static_cast<double>(b);
    hist[b].right = *mn + width * static_cast<double>(b + 1);
  }
  hist.back().right = *mx;
  for (double x : xs) {
    auto b = static_cast<std::size_t>((x - *mn) / width);
    if (b >= bins) b = bins - 1;  // x == max lands in the last bin
    ++hist[b].count;
  }
  return hist;
}

struct ExperimentReport {
  nlohmann::json config_echo;
  bool two_graph = false;
  double global_density_g = std::numeric_limits<double>::quiet_NaN();
  double global_density_h = std::numeric_limits<double>::quiet_NaN();
  std::vector<RepetitionOutcome> repetitions;
  std::uint64_t num_rejects = 0;
  double prop_reject = 0.0;
  std::uint64_t num_degenerate = 0;
  std::vector<HistogramBin> delta_histogram;
  std::vector<HistogramBin> local_density_histogram_g;
  std::vector<HistogramBin> local_density_histogram_h;
  std::vector<NeighborhoodSample> final_samples_g;
  std::vector<NeighborhoodSample> final_samples_h;
  double wall_time_seconds = 0.0;
};

inline void to_json(nlohmann::json& j, const HistogramBin& b) {
  j = nlohmann::json{{"left", b.left}, {"right", b.right}, {"count", b.count}};
}

inline void to_json(nlohmann::json& j, const RepetitionOutcome& r) {
  j = nlohmann::json{{"index", r.index},   {"delta", r.delta},
                     {"t", r.t},           {"df", r.df},
                     {"p", r.p},           {"reject", r.reject},
                     {"degenerate", r.degenerate}};
}

inline nlohmann::json report_to_json(const ExperimentReport& report) {
  nlohmann::json j{{"config", report.config_echo},
                   {"two_graph", report.two_graph},
                   {"global_density", report.global_density_g},
                   {"repetitions", report.repetitions},
                   {"num_rejects", report.num_rejects},
                   {"prop_reject", report.prop_reject},
                   {"num_degenerate", report.num_degenerate},
                   {"delta_histogram", report.delta_histogram},
                   {"local_density_histogram", report.local_density_histogram_g},
                   {"wall_time_seconds", report.wall_time_seconds}};
  if (report.two_graph) {
    j["global_density_h"] = report.global_density_h;
    j["local_density_histogram_h"] = report.local_density_histogram_h;
  }
  return j;
}

namespace detail {

constexpr std::uint64_t kGraphSeedTagG = 0x67;
constexpr std::uint64_t kGraphSeedTagH = 0x68;

struct ResolvedSource {
  std::optional<GeneratorSpec> spec;  // set when generated
  std::string path;                   // set when loaded from file
};

inline ResolvedSource resolve_source(const GraphSource& source,
                                     std::uint64_t fallback_seed) {
  ResolvedSource r;
  if (source.is_generator()) {
    GeneratorSpec spec = parse_generator_spec(source.text);
    if (source.text.find("seed=") == std::string::npos)
      spec.seed = fallback_seed;
    r.spec = spec;
  } else {
    r.path = source.text;
  }
  return r;
}

inline DirectedGraph materialize(const ResolvedSource& source) {
  if (source.spec) return generate(*source.spec);
  return load_edge_list_file(source.path).graph;
}

inline void write_hist_csv(const std::filesystem::path& path,
                           std::span<const HistogramBin> hist) {
  std::ofstream out(path);
  out << "bin_left,bin_right,count\n" << std::setprecision(12);
  for (const auto& b : hist)
    out << b.left << ',' << b.right << ',' << b.count << '\n';
}

}  // namespace detail

inline nlohmann::json config_echo_json(const ExperimentConfig& cfg) {
  nlohmann::json j{{"mode", cfg.source_h ? "two-graph" : "single"},
                   {"graph", cfg.source_g.text},
                   {"sample_fraction", cfg.sample_fraction},
                   {"alpha", cfg.alpha},
                   {"repetitions", cfg.repetitions},
                   {"master_seed", cfg.master_seed},
                   {"neighborhood", to_string(cfg.mode)},
                   {"degenerate_policy", to_string(cfg.policy)},
                   {"threads", cfg.threads},
                   {"regen_per_rep", cfg.regenerate_per_repetition}};
  if (cfg.source_h) j["graph_h"] = cfg.source_h->text;
  return j;
}

/// One repetition against already-materialized graphs. Exposed so that a
/// run of R repetitions is exactly the union of R single runs with the
/// derived seeds. `graph_h` null means single-graph mode.
inline RepetitionOutcome run_single_repetition(const DirectedGraph& graph_g,
                                               const DirectedGraph* graph_h,
                                               const ExperimentConfig& cfg,
                                               std::size_t index,
                                               std::vector<NeighborhoodSample>* samples_g = nullptr,
                                               std::vector<NeighborhoodSample>* samples_h = nullptr) {
  const std::uint64_t rep_seed = derive_seed(cfg.master_seed, index);
  RepetitionOutcome outcome;
  outcome.index = index;

  const auto apply_ttest = [&](const TTestResult& tt) {
    outcome.t = tt.t_statistic;
    outcome.df = tt.degrees_of_freedom;
    outcome.p = tt.p_value;
    outcome.reject = tt.reject;
  };

  if (graph_h == nullptr) {
    SamplePlan plan{cfg.sample_fraction, rep_seed, cfg.policy, cfg.mode};
    try {
      DeltaRunResult run = delta_run(graph_g, plan);
      outcome.delta = run.delta_mean;
      if (samples_g) *samples_g = run.samples;
      apply_ttest(one_sample_greater(run.delta_values, 0.0, cfg.alpha));
    } catch (const DegenerateSampleError&) {
      outcome.degenerate = true;
    }
  } else {
    SamplePlan plan_g{cfg.sample_fraction, derive_seed(rep_seed, 1), cfg.policy,
                      cfg.mode};
    SamplePlan plan_h{cfg.sample_fraction, derive_seed(rep_seed, 2), cfg.policy,
                      cfg.mode};
    try {
      DeltaRunResult run_g = detail::attribute_errors(
          "graph G", [&] { return delta_run(graph_g, plan_g); });
      DeltaRunResult run_h = detail::attribute_errors(
          "graph H", [&] { return delta_run(*graph_h, plan_h); });
      outcome.delta = run_g.delta_mean - run_h.delta_mean;
      if (samples_g) *samples_g = run_g.samples;
      if (samples_h) *samples_h = run_h.samples;
      apply_ttest(
          welch_greater(run_g.delta_values, run_h.delta_values, cfg.alpha));
    } catch (const DegenerateSampleError&) {
      outcome.degenerate = true;
    }
  }
  return outcome;
}

namespace detail {

inline void write_report_files(const ExperimentReport& report,
                               const ExperimentConfig& cfg,
                               const DirectedGraph& graph_g,
                               const DirectedGraph* graph_h) {
  namespace fs = std::filesystem;
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);

  {
    std::ofstream out(dir / "report.json");
    out << report_to_json(report).dump(2) << '\n';
    if (!out) throw std::runtime_error("failed to write report.json");
  }
  {
    std::ofstream out(dir / "deltas.csv");
    out << "repetition_index,delta,t,p,reject\n" << std::setprecision(12);
    for (const auto& r : report.repetitions)
      out << r.index << ',' << r.delta << ',' << r.t << ',' << r.p << ','
          << (r.reject ? 1 : 0) << '\n';
  }
  if (graph_h == nullptr) {
    std::ofstream out(dir / "local_densities.csv");
    write_local_density_csv(out, graph_g, report.final_samples_g);
    write_hist_csv(dir / "hist_local_density.csv",
                   report.local_density_histogram_g);
  } else {
    std::ofstream out_g(dir / "local_densities_g.csv");
    write_local_density_csv(out_g, graph_g, report.final_samples_g);
    std::ofstream out_h(dir / "local_densities_h.csv");
    write_local_density_csv(out_h, *graph_h, report.final_samples_h);
    write_hist_csv(dir / "hist_local_density_g.csv",
                   report.local_density_histogram_g);
    write_hist_csv(dir / "hist_local_density_h.csv",
                   report.local_density_histogram_h);
  }
  write_hist_csv(dir / "hist_delta.csv", report.delta_histogram);
}

}  // namespace detail

/// Runs the full experiment: materializes the graph source(s) once (unless
/// regenerate_per_repetition), executes `repetitions` independent
/// repetitions with seeds derived from the master seed, and aggregates
/// rejections. Repetitions run concurrently on a bounded worker pool;
/// results are keyed by repetition index, so the report does not depend on
/// scheduling. Degenerate repetitions are recorded as non-rejections; any
/// other repetition error aborts with its index after flushing partial
/// results.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.repetitions < 1)
    throw std::invalid_argument("experiment needs at least 1 repetition");
  const auto t_start = std::chrono::steady_clock::now();

  const bool two_graph = cfg.source_h.has_value();
  const auto src_g = detail::resolve_source(
      cfg.source_g, derive_seed(cfg.master_seed, detail::kGraphSeedTagG));
  const auto src_h =
      two_graph ? std::optional(detail::resolve_source(
                      *cfg.source_h,
                      derive_seed(cfg.master_seed, detail::kGraphSeedTagH)))
                : std::nullopt;
  if (cfg.regenerate_per_repetition) {
    if (!src_g.spec || (two_graph && !src_h->spec))
      throw std::invalid_argument(
          "regenerate-per-repetition requires generator sources");
  }

  DirectedGraph graph_g = detail::materialize(src_g);
  DirectedGraph graph_h_storage;
  const DirectedGraph* graph_h = nullptr;
  if (two_graph) {
    graph_h_storage = detail::materialize(*src_h);
    graph_h = &graph_h_storage;
  }

  const std::size_t reps = cfg.repetitions;
  std::vector<std::optional<RepetitionOutcome>> slots(reps);
  ExperimentReport report;
  report.config_echo = config_echo_json(cfg);
  report.two_graph = two_graph;

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_index = reps;
  std::string error_message;

  const auto worker = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= reps) break;
      try {
        std::vector<NeighborhoodSample> samples_g, samples_h;
        const bool keep_samples = (i == reps - 1);
        RepetitionOutcome outcome;
        if (cfg.regenerate_per_repetition) {
          GeneratorSpec spec_g = *src_g.spec;
          spec_g.seed = derive_seed(spec_g.seed, i);
          DirectedGraph local_g = generate(spec_g);
          DirectedGraph local_h;
          if (two_graph) {
            GeneratorSpec spec_h = *src_h->spec;
            spec_h.seed = derive_seed(spec_h.seed, i);
            local_h = generate(spec_h);
          }
          outcome = run_single_repetition(
              local_g, two_graph ? &local_h : nullptr, cfg, i,
              keep_samples ? &samples_g : nullptr,
              keep_samples ? &samples_h : nullptr);
        } else {
          outcome = run_single_repetition(graph_g, graph_h, cfg, i,
                                          keep_samples ? &samples_g : nullptr,
                                          keep_samples ? &samples_h : nullptr);
        }
        slots[i] = outcome;
        if (keep_samples) {
          report.final_samples_g = std::move(samples_g);
          report.final_samples_h = std::move(samples_h);
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error_message = e.what();
        }
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };

  unsigned thread_count = resolve_thread_count(cfg.threads);
  if (thread_count > reps) thread_count = static_cast<unsigned>(reps);
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (auto& slot : slots)
    if (slot) report.repetitions.push_back(*slot);
  for (const auto& r : report.repetitions) {
    report.num_rejects += r.reject ? 1 : 0;
    report.num_degenerate += r.degenerate ? 1 : 0;
  }
  report.prop_reject = static_cast<double>(report.num_rejects) /
                       static_cast<double>(reps);

  report.global_density_g =
      graph_g.vertex_count() >= 2 ? global_density(graph_g) : 0.0;
  if (two_graph)
    report.global_density_h =
        graph_h->vertex_count() >= 2 ? global_density(*graph_h) : 0.0;

  std::vector<double> deltas;
  deltas.reserve(report.repetitions.size());
  for (const auto& r : report.repetitions) deltas.push_back(r.delta);
  report.delta_histogram = make_histogram(deltas);
  std::vector<double> kappas;
  for (const auto& s : report.final_samples_g) kappas.push_back(s.kappa);
  report.local_density_histogram_g = make_histogram(kappas);
  if (two_graph) {
    kappas.clear();
    for (const auto& s : report.final_samples_h) kappas.push_back(s.kappa);
    report.local_density_histogram_h = make_histogram(kappas);
  }

  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();

  if (!cfg.output_dir.empty())
    detail::write_report_files(report, cfg, graph_g, graph_h);

  if (failed)
    throw std::runtime_error("repetition " + std::to_string(error_index) +
                             " failed: " + error_message);
  return report;
}

}  // namespace deltatest
