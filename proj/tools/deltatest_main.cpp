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

// Command-line front end: statistical clusterability testing of directed
// graphs via sampled neighborhood densities, plus the synthetic graph
// generators and the repeated-experiment harness.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "deltatest/deltatest.hpp"

namespace {

using namespace deltatest;

std::string format_p(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", p);
  return buf;
}

struct TestFlags {
  std::string graph;
  std::string graph_h;
  double sample_fraction = 0.01;
  double alpha = 0.05;
  std::size_t reps = 1;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string neighborhood = "all";
  std::string degenerate = "skip-redraw";
  unsigned threads = 0;
  bool regen_per_rep = false;
};

void add_test_flags(CLI::App* cmd, TestFlags& flags) {
  cmd->add_option("--sample-frac", flags.sample_fraction,
                  "Fraction of vertices to sample per repetition")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--alpha", flags.alpha, "Significance level");
  cmd->add_option("--reps", flags.reps, "Number of repetitions");
  cmd->add_option("--seed", flags.seed, "Master seed");
  cmd->add_option("--out", flags.out_dir,
                  "Directory for report.json and CSV exports");
  cmd->add_option("--neighborhood", flags.neighborhood,
                  "Neighborhood membership: all, out, or in")
      ->check(CLI::IsMember({"all", "out", "in"}));
  cmd->add_option("--degenerate", flags.degenerate,
                  "Degenerate-neighborhood policy: skip-redraw, skip, or zero")
      ->check(CLI::IsMember({"skip-redraw", "skip", "zero"}));
  cmd->add_option("--threads", flags.threads,
                  "Worker threads (default: hardware, capped by DELTA_THREADS)");
  cmd->add_flag("--regen-per-rep", flags.regen_per_rep,
                "Regenerate the graph for every repetition (generator sources)");
}

ExperimentConfig to_config(const TestFlags& flags, bool two_graph) {
  ExperimentConfig cfg;
  cfg.source_g = GraphSource{flags.graph};
  if (two_graph) cfg.source_h = GraphSource{flags.graph_h};
  cfg.sample_fraction = flags.sample_fraction;
  cfg.alpha = flags.alpha;
  cfg.repetitions = flags.reps;
  cfg.master_seed = flags.seed;
  cfg.mode = neighborhood_mode_from_string(flags.neighborhood);
  cfg.policy = degenerate_policy_from_string(flags.degenerate);
  cfg.threads = flags.threads;
  cfg.regenerate_per_repetition = flags.regen_per_rep;
  cfg.output_dir = flags.out_dir;
  return cfg;
}

void print_single_verdict(const RepetitionOutcome& r) {
  if (r.degenerate) {
    std::cout << "FAIL TO REJECT (degenerate sample: delta values carry no "
                 "variance): graph does not meet the necessary condition\n";
  } else if (r.reject) {
    std::cout << "REJECT null (p=" << format_p(r.p)
              << "): graph meets the necessary condition for clusterability\n";
  } else {
    std::cout << "FAIL TO REJECT (p=" << format_p(r.p)
              << "): graph does not meet the necessary condition\n";
  }
}

void print_compare_verdict(const RepetitionOutcome& r) {
  if (r.degenerate) {
    std::cout << "FAIL TO REJECT (degenerate sample: delta values carry no "
                 "variance): no evidence of stronger local density in A\n";
  } else if (r.reject) {
    std::cout << "REJECT null (p=" << format_p(r.p)
              << "): graph A shows significantly stronger local density than "
                 "graph B\n";
  } else {
    std::cout << "FAIL TO REJECT (p=" << format_p(r.p)
              << "): no evidence that graph A has stronger local density than "
                 "graph B\n";
  }
}

int run_test_like(const TestFlags& flags, bool two_graph) {
  const ExperimentConfig cfg = to_config(flags, two_graph);
  const ExperimentReport report = run_experiment(cfg);

  char kbuf[32];
  std::snprintf(kbuf, sizeof kbuf, "%.6g", report.global_density_g);
  std::cout << "graph" << (two_graph ? " A" : "") << ": " << flags.graph
            << "  K=" << kbuf << '\n';
  if (two_graph) {
    std::snprintf(kbuf, sizeof kbuf, "%.6g", report.global_density_h);
    std::cout << "graph B: " << flags.graph_h << "  K=" << kbuf << '\n';
  }

  if (cfg.repetitions == 1) {
    const auto& r = report.repetitions.front();
    if (two_graph)
      print_compare_verdict(r);
    else
      print_single_verdict(r);
  } else {
    std::cout << "rejected null in " << report.num_rejects << "/"
              << cfg.repetitions
              << " repetitions (prop_reject=" << report.prop_reject
              << ", degenerate=" << report.num_degenerate << ")\n";
  }
  if (!cfg.output_dir.empty())
    std::cout << "report written to " << cfg.output_dir << "/report.json\n";
  return 0;
}

int run_density(const std::string& source_text, std::uint64_t seed) {
  DirectedGraph g;
  if (looks_like_generator_spec(source_text)) {
    GeneratorSpec spec = parse_generator_spec(source_text);
    if (source_text.find("seed=") == std::string::npos) spec.seed = seed;
    g = generate(spec);
  } else {
    LoadResult loaded = load_edge_list_file(source_text);
    g = std::move(loaded.graph);
    if (loaded.self_loops_dropped || loaded.duplicate_edges_dropped)
      std::cerr << "note: dropped " << loaded.self_loops_dropped
                << " self-loops and " << loaded.duplicate_edges_dropped
                << " duplicate edges during ingestion\n";
  }
  std::cout << "vertices: " << g.vertex_count() << '\n';
  std::cout << "edges: " << g.edge_count() << '\n';
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", global_density(g));
  std::cout << "density: " << buf << '\n';
  return 0;
}

nlohmann::json spec_sidecar_json(const GeneratorSpec& spec) {
  nlohmann::json j{{"family", family_name(spec)}, {"seed", spec.seed}};
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ErParams>) {
          j["n"] = p.n;
          j["p"] = p.p;
        } else if constexpr (std::is_same_v<T, CmParams>) {
          j["n"] = p.n;
          j["exponent"] = p.exponent;
          j["min_degree"] = p.min_degree;
        } else if constexpr (std::is_same_v<T, CavemanParams>) {
          j["cliques"] = p.num_cliques;
          j["clique_size"] = p.clique_size;
        } else {
          j["target_n"] = p.target_n;
          j["block_min"] = p.block_min;
          j["block_max"] = p.block_max;
          j["p_intra"] = p.p_intra;
          j["p_inter"] = p.p_inter;
        }
      },
      spec.params);
  return j;
}

int run_generate(const GeneratorSpec& spec, const std::string& out_path) {
  const DirectedGraph g = generate(spec);
  emit_edge_list_file(g, out_path);
  const std::string sidecar = out_path + ".spec.json";
  std::ofstream side(sidecar);
  side << spec_sidecar_json(spec).dump(2) << '\n';
  if (!side) throw std::runtime_error("failed to write " + sidecar);
  std::cout << "wrote " << g.vertex_count() << " vertices, " << g.edge_count()
            << " edges to " << out_path << " (sidecar " << sidecar << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "delta test of graph clusterability for directed graphs: samples "
      "neighborhood densities and compares their mean to the global density"};
  app.require_subcommand(1);

  TestFlags test_flags;
  auto* cmd_test = app.add_subcommand(
      "test", "Single-graph clusterability test (repeatable experiment)");
  cmd_test->add_option("graph", test_flags.graph,
                       "Edge-list file or generator spec (er:n=...,p=...)")
      ->required();
  add_test_flags(cmd_test, test_flags);

  TestFlags compare_flags;
  auto* cmd_compare = app.add_subcommand(
      "compare", "Two-graph test: does A have stronger local density than B?");
  cmd_compare->add_option("graphA", compare_flags.graph, "First graph source")
      ->required();
  cmd_compare->add_option("graphB", compare_flags.graph_h, "Second graph source")
      ->required();
  add_test_flags(cmd_compare, compare_flags);

  std::string density_graph;
  std::uint64_t density_seed = 0;
  auto* cmd_density =
      app.add_subcommand("density", "Print |V|, |E| and the global density K");
  cmd_density->add_option("graph", density_graph, "Edge-list file or generator spec")
      ->required();
  cmd_density->add_option("--seed", density_seed,
                          "Seed for generator sources without a seed key");

  auto* cmd_generate =
      app.add_subcommand("generate", "Write a synthetic graph as an edge list");
  cmd_generate->require_subcommand(1);

  struct GenCommon {
    std::string out;
    std::uint64_t seed = 0;
  };

  GenCommon er_common;
  ErParams er_params;
  auto* gen_er = cmd_generate->add_subcommand("er", "Erdos-Renyi-Gilbert digraph");
  gen_er->add_option("--n", er_params.n, "Vertices")->required();
  gen_er->add_option("--p", er_params.p, "Directed edge probability")->required();
  gen_er->add_option("--out", er_common.out, "Output edge-list path")->required();
  gen_er->add_option("--seed", er_common.seed, "Seed");

  GenCommon cm_common;
  CmParams cm_params;
  auto* gen_cm = cmd_generate->add_subcommand(
      "cm", "Configuration model with power-law in/out degrees");
  gen_cm->add_option("--n", cm_params.n, "Vertices")->required();
  gen_cm->add_option("--exponent", cm_params.exponent, "Power-law exponent (> 2)")
      ->required();
  gen_cm->add_option("--min-degree", cm_params.min_degree, "Minimum degree");
  gen_cm->add_option("--out", cm_common.out, "Output edge-list path")->required();
  gen_cm->add_option("--seed", cm_common.seed, "Seed");

  GenCommon cc_common;
  CavemanParams cc_params;
  auto* gen_cc = cmd_generate->add_subcommand(
      "caveman", "Directed connected caveman graph (ring of cliques)");
  gen_cc->add_option("--cliques", cc_params.num_cliques, "Number of cliques")
      ->required();
  gen_cc->add_option("--clique-size", cc_params.clique_size, "Vertices per clique")
      ->required();
  gen_cc->add_option("--out", cc_common.out, "Output edge-list path")->required();
  gen_cc->add_option("--seed", cc_common.seed, "Seed");

  GenCommon sbm_common;
  SbmParams sbm_params;
  auto* gen_sbm = cmd_generate->add_subcommand(
      "sbm", "Directed stochastic block model");
  gen_sbm->add_option("--target-n", sbm_params.target_n, "Target vertex count")
      ->required();
  gen_sbm->add_option("--block-min", sbm_params.block_min, "Minimum block size")
      ->required();
  gen_sbm->add_option("--block-max", sbm_params.block_max, "Maximum block size")
      ->required();
  gen_sbm->add_option("--p-intra", sbm_params.p_intra, "Intra-block edge probability")
      ->required();
  gen_sbm->add_option("--p-inter", sbm_params.p_inter, "Inter-block edge probability")
      ->required();
  gen_sbm->add_option("--out", sbm_common.out, "Output edge-list path")->required();
  gen_sbm->add_option("--seed", sbm_common.seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_test->parsed()) return run_test_like(test_flags, false);
    if (cmd_compare->parsed()) return run_test_like(compare_flags, true);
    if (cmd_density->parsed()) return run_density(density_graph, density_seed);
    if (cmd_generate->parsed()) {
      if (gen_er->parsed())
        return run_generate({er_params, er_common.seed}, er_common.out);
      if (gen_cm->parsed())
        return run_generate({cm_params, cm_common.seed}, cm_common.out);
      if (gen_cc->parsed())
        return run_generate({cc_params, cc_common.seed}, cc_common.out);
      if (gen_sbm->parsed())
        return run_generate({sbm_params, sbm_common.seed}, sbm_common.out);
    }
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
