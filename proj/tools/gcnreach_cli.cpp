// Copyright (c) 2026 the gcnreach developers
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

// Command line front end: verify / compare / sample / ablate / gen.
// Exit codes of `verify`: 0 VERIFIED, 1 UNKNOWN, 2 FALSIFIED, 3 malformed
// files, 4 shape or domain errors, >4 anything else.

#include "gcnreach/drivers.hpp"
#include "gcnreach/instance_gen.hpp"
#include "gcnreach/serialization.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace gcnreach;
using nlohmann::json;

struct CommonPaths {
  std::string network;
  std::string graph;
  std::string input;
  std::string spec;
};

struct Loaded {
  Network net;
  GraphInput graph;
  FeatureInput input;
  SafetySpec spec;
};

Loaded load_bundle(const CommonPaths& paths, bool need_spec) {
  Loaded l;
  l.net = load_network(paths.network);
  l.graph = load_graph(paths.graph);
  l.input = load_input(paths.input);
  if (need_spec) l.spec = load_spec(paths.spec);
  return l;
}

void add_common(CLI::App* cmd, CommonPaths& paths, bool with_spec) {
  cmd->add_option("--network", paths.network, "network.json")->required();
  cmd->add_option("--graph", paths.graph, "graph.json")->required();
  cmd->add_option("--input", paths.input, "input.json")->required();
  if (with_spec) cmd->add_option("--spec", paths.spec, "spec.json")->required();
}

struct EncloseFlags {
  int poly_order = 1;
  int grid_points = 10000;
  double safety_factor = 1.01;
  double reduce_rho = 0.0;
  std::string reduce_method = "box";
  int subgraph_node = 0;  // 1-based; 0 = off

  VerifyConfig config() const {
    VerifyConfig cfg;
    cfg.enclose.poly_order = poly_order;
    cfg.enclose.grid_points = grid_points;
    cfg.enclose.safety_factor = safety_factor;
    cfg.reduce_rho = reduce_rho;
    cfg.reduce_method = reduce_method == "pca" ? ReduceMethod::PCA : ReduceMethod::Box;
    if (subgraph_node > 0) cfg.subgraph_node = subgraph_node - 1;
    return cfg;
  }
};

void add_enclose_flags(CLI::App* cmd, EncloseFlags& flags, bool with_subgraph) {
  cmd->add_option("--poly-order", flags.poly_order, "approximation polynomial order (default 1)");
  cmd->add_option("--grid-points", flags.grid_points, "error-bound grid resolution");
  cmd->add_option("--safety-factor", flags.safety_factor,
                  "padding factor of the error-bound grid search");
  cmd->add_option("--reduce-rho", flags.reduce_rho,
                  "order reduction after activations; 0 disables (default)");
  cmd->add_option("--reduce-method", flags.reduce_method, "box or pca")
      ->check(CLI::IsMember({"box", "pca"}));
  if (with_subgraph)
    cmd->add_option("--subgraph-node", flags.subgraph_node,
                    "dynamic subgraph reduction around this node (1-based)");
}

json edges_json(const UncertainGraph& g, EdgeMask mask) {
  json arr = json::array();
  for (std::size_t k = 0; k < g.uncertain_edges.size(); ++k)
    if (mask & (EdgeMask{1} << k))
      arr.push_back(json::array({g.uncertain_edges[k].i + 1, g.uncertain_edges[k].j + 1}));
  return arr;
}

json matrix_json(const Mat& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

int exit_code(Status s) {
  switch (s) {
    case Status::Verified: return 0;
    case Status::Unknown: return 1;
    case Status::Falsified: return 2;
  }
  return 5;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path);
  out << text;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows) {
  std::string text = header + "\n";
  for (const std::string& r : rows) text += r + "\n";
  write_text(path, text);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_verify(const CommonPaths& paths, const EncloseFlags& flags, int falsify_samples,
               std::uint64_t seed, const std::string& report_path,
               const std::string& dump_prefix) {
  Loaded l = load_bundle(paths, true);
  const VerifyConfig cfg = flags.config();
  const MatPolyZonotope X = l.input.as_set();

  Verdict verdict;
  if (l.graph.adjacency) {
    const EnclosureResult res =
        enclose_network_with_adjacency(l.net, X, *l.graph.adjacency, cfg);
    verdict = check_spec(res, l.spec);
    verdict.diag.dep_generators_per_layer = res.dep_generators_per_layer;
    verdict.diag.output_dep_generators = res.output_dep_generators();
  } else {
    verdict = verify(l.net, X, l.graph.graph, l.spec, cfg);
    if (verdict.status == Status::Unknown) {
      if (auto w = falsify_search(l.net, X, l.graph.graph, l.spec, falsify_samples, seed)) {
        verdict.status = Status::Falsified;
        verdict.witness = std::move(w);
      }
    }
  }

  if (!dump_prefix.empty() && !l.graph.adjacency) {
    const EnclosureResult res = enclose_network(l.net, X, l.graph.graph, cfg);
    const MatPolyZonotope P =
        message_passing_enclosure(build_uncertain_adjacency(l.graph.graph), cfg.enclose);
    write_text(dump_prefix + "X.json", to_json(X, 2));
    write_text(dump_prefix + "Y.json", to_json(res.output_flat(), 2));
    write_text(dump_prefix + "P.json", to_json(P, 2));
  }

  json report;
  report["status"] = to_string(verdict.status);
  report["exit_code"] = exit_code(verdict.status);
  report["generators_per_layer"] = verdict.diag.dep_generators_per_layer;
  report["output_dep_generators"] = verdict.diag.output_dep_generators;
  report["output_indep_generators"] = verdict.diag.output_indep_generators;
  report["generator_budget"] = verdict.diag.generator_budget;
  report["order_reduction"] = verdict.diag.order_reduction;
  report["wall_seconds"] = verdict.diag.wall_seconds;
  if (verdict.witness) {
    report["witness"] = {{"present_edges", edges_json(l.graph.graph, verdict.witness->present)},
                         {"X", matrix_json(verdict.witness->X)}};
  }
  if (!report_path.empty()) write_text(report_path, report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return exit_code(verdict.status);
}

int cmd_compare(const CommonPaths& paths, const EncloseFlags& flags,
                const std::vector<int>& sweep, int repeats, int enum_cap,
                const std::string& out_csv) {
  Loaded l = load_bundle(paths, true);
  require(!l.graph.adjacency, "compare: needs an edge-list graph");
  const MatPolyZonotope X = l.input.as_set();
  const auto rows = run_compare(l.net, l.graph.graph, X, l.spec, sweep, flags.config(), repeats,
                                enum_cap);

  std::vector<std::string> lines;
  for (const CompareRow& r : rows) {
    lines.push_back(std::to_string(r.uncertain_edges) + "," + fmt(r.t_ours) + "," +
                    fmt(r.t_enum) + "," + to_string(r.verdict_ours) + "," +
                    to_string(r.verdict_enum));
  }
  write_csv(out_csv, "uncertain_edges,t_ours,t_enum,verdict_ours,verdict_enum", lines);
  std::cout << "wrote " << out_csv << " (" << rows.size() << " rows)\n";
  return 0;
}

int cmd_sample(const CommonPaths& paths, const EncloseFlags& flags, int count,
               const std::vector<Eigen::Index>& project, int edge, std::uint64_t seed,
               const std::string& out_prefix) {
  Loaded l = load_bundle(paths, false);
  require(!l.graph.adjacency, "sample: needs an edge-list graph");
  require(project.size() == 2, "sample: --project needs two dimensions");
  const MatPolyZonotope X = l.input.as_set();
  const SampleClouds clouds = run_sample(l.net, l.graph.graph, X, count, project[0], project[1],
                                         edge - 1, seed, flags.config());

  auto dump = [&](const char* name, const Mat& pts) {
    std::vector<std::string> lines;
    for (Eigen::Index r = 0; r < pts.rows(); ++r)
      lines.push_back(fmt(pts(r, 0)) + "," + fmt(pts(r, 1)));
    const std::string header =
        "d" + std::to_string(project[0]) + ",d" + std::to_string(project[1]);
    write_csv(out_prefix + name + ".csv", header, lines);
  };
  dump("X", clouds.X);
  dump("Y", clouds.Y);
  dump("P", clouds.P);
  dump("Yfix_present", clouds.Y_fix_present);
  dump("Yfix_absent", clouds.Y_fix_absent);
  std::cout << "wrote " << out_prefix << "{X,Y,P,Yfix_present,Yfix_absent}.csv\n";
  return 0;
}

int cmd_ablate(const CommonPaths& paths, const EncloseFlags& flags,
               const std::vector<double>& rhos, const std::vector<std::string>& methods,
               const std::string& out_csv) {
  Loaded l = load_bundle(paths, false);
  require(!l.graph.adjacency, "ablate: needs an edge-list graph");
  const MatPolyZonotope X = l.input.as_set();
  std::vector<ReduceMethod> ms;
  for (const std::string& m : methods)
    ms.push_back(m == "pca" ? ReduceMethod::PCA : ReduceMethod::Box);
  const AblateResult res = run_ablate(l.net, l.graph.graph, X, flags.config(), rhos, ms);

  std::vector<std::string> lines;
  lines.push_back("error_term,,," + fmt(res.v_rel_error) + ",,");
  for (const AblateRow& r : res.reductions) {
    lines.push_back(std::string("reduction,") +
                    (r.method == ReduceMethod::PCA ? "pca" : "box") + "," + fmt(r.rho) + "," +
                    fmt(r.v_rel) + "," + fmt(r.seconds) + "," + std::to_string(r.generators));
  }
  write_csv(out_csv, "kind,method,rho,v_rel,seconds,generators", lines);
  std::cout << "wrote " << out_csv << "\n";
  return 0;
}

int cmd_gen(const GenParams& params, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const Instance inst = generate_instance(params);
  save_graph(out_dir + "/graph.json", inst.graph);
  save_network(out_dir + "/network.json", inst.net);
  save_input(out_dir + "/input.json", inst.X, inst.epsilon);
  save_spec(out_dir + "/spec.json", inst.spec);
  std::cout << "wrote " << out_dir << "/{graph,network,input,spec}.json\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"set-based reachability and verification for graph convolutional networks"};
  app.require_subcommand(1);

  CommonPaths paths;
  EncloseFlags flags;
  std::uint64_t seed = 0;
  int falsify_samples = 64;
  std::string report_path;
  std::string dump_prefix;

  CLI::App* verify_cmd = app.add_subcommand("verify", "verify one instance");
  add_common(verify_cmd, paths, true);
  add_enclose_flags(verify_cmd, flags, true);
  verify_cmd->add_option("--seed", seed, "random seed for the falsification search");
  verify_cmd->add_option("--falsify-samples", falsify_samples,
                         "feature samples per concrete graph when searching counterexamples");
  verify_cmd->add_option("--report", report_path, "write the run report JSON here");
  verify_cmd->add_option("--dump-sets", dump_prefix,
                         "dump input/output/message-passing sets with this path prefix");

  std::vector<int> sweep;
  int repeats = 3;
  int enum_cap = 20;
  std::string out_csv = "compare.csv";
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "time verify against graph enumeration over a sweep");
  add_common(compare_cmd, paths, true);
  add_enclose_flags(compare_cmd, flags, false);
  compare_cmd->add_option("--sweep", sweep, "uncertain-edge counts, e.g. --sweep 1 2 3")
      ->required();
  compare_cmd->add_option("--repeats", repeats, "timing repetitions (median)");
  compare_cmd->add_option("--enum-cap", enum_cap, "refuse enumeration beyond this many edges");
  compare_cmd->add_option("--out", out_csv, "output CSV path");

  int count = 200;
  std::vector<Eigen::Index> project{0, 1};
  int edge = 1;
  std::string out_prefix = "clouds_";
  CLI::App* sample_cmd =
      app.add_subcommand("sample", "emit random member points of the involved sets");
  add_common(sample_cmd, paths, false);
  add_enclose_flags(sample_cmd, flags, false);
  sample_cmd->add_option("--count", count, "points per set");
  sample_cmd->add_option("--project", project, "two 0-based output dimensions");
  sample_cmd->add_option("--edge", edge, "uncertain edge to fix (1-based list index)");
  sample_cmd->add_option("--seed", seed, "sampling seed");
  sample_cmd->add_option("--out", out_prefix, "output CSV path prefix");

  std::vector<double> rhos{1.5, 2.0};
  std::vector<std::string> methods{"box", "pca"};
  std::string ablate_csv = "ablate.csv";
  CLI::App* ablate_cmd =
      app.add_subcommand("ablate", "error-term contribution and order-reduction study");
  add_common(ablate_cmd, paths, false);
  add_enclose_flags(ablate_cmd, flags, false);
  ablate_cmd->add_option("--rhos", rhos, "orders to reduce to");
  ablate_cmd->add_option("--methods", methods, "box and/or pca")
      ->check(CLI::IsMember({"box", "pca"}));
  ablate_cmd->add_option("--out", ablate_csv, "output CSV path");

  GenParams gen_params;
  std::string gen_dir = "instance";
  std::string gen_act = "tanh";
  bool node_level = false;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a synthetic instance bundle");
  gen_cmd->add_option("--out", gen_dir, "output directory");
  gen_cmd->add_option("--nodes", gen_params.nodes, "node count");
  gen_cmd->add_option("--edge-prob", gen_params.edge_prob, "edge probability");
  gen_cmd->add_option("--uncertain", gen_params.uncertain_edges, "uncertain edge count");
  gen_cmd->add_option("--features", gen_params.in_features, "input features per node");
  gen_cmd->add_option("--hidden", gen_params.hidden_features, "hidden features per node");
  gen_cmd->add_option("--mp-steps", gen_params.mp_steps, "message-passing steps");
  gen_cmd->add_option("--out-dim", gen_params.out_dim, "classes after pooling");
  gen_cmd->add_flag("--node-level", node_level, "omit pooling; node-level outputs");
  gen_cmd->add_option("--act", gen_act, "relu, tanh or sigmoid");
  gen_cmd->add_option("--epsilon", gen_params.epsilon, "feature perturbation radius");
  gen_cmd->add_option("--seed", gen_params.seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify_cmd)
      return cmd_verify(paths, flags, falsify_samples, seed, report_path, dump_prefix);
    if (*compare_cmd) return cmd_compare(paths, flags, sweep, repeats, enum_cap, out_csv);
    if (*sample_cmd) return cmd_sample(paths, flags, count, project, edge, seed, out_prefix);
    if (*ablate_cmd) return cmd_ablate(paths, flags, rhos, methods, ablate_csv);
    if (*gen_cmd) {
      gen_params.graph_level = !node_level;
      gen_params.act = activation_from_name(gen_act);
      return cmd_gen(gen_params, gen_dir);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
  return 5;
}
