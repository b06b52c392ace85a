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

#include "gcnreach/instance_gen.hpp"

#include "gcnreach/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <set>

namespace gcnreach {

namespace {

using Rng = std::mt19937_64;

Mat random_weights(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double scale = 1.2 / std::sqrt(static_cast<double>(rows));
  Mat W(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) W(i, j) = scale * uni(rng);
  return W;
}

struct EdgeSets {
  std::vector<Edge> fixed;
  std::vector<Edge> uncertain;
};

EdgeSets random_connected_edges(Rng& rng, int n, double edge_prob, int uncertain) {
  std::bernoulli_distribution coin(edge_prob);
  std::set<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) edges.insert({i, j});

  // join components until connected
  std::vector<int> comp(static_cast<std::size_t>(n));
  auto recompute = [&] {
    std::iota(comp.begin(), comp.end(), 0);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [a, b] : edges) {
        const int ca = comp[static_cast<std::size_t>(a)], cb = comp[static_cast<std::size_t>(b)];
        if (ca != cb) {
          const int lo = std::min(ca, cb);
          for (int& c : comp)
            if (c == ca || c == cb) c = lo;
          changed = true;
        }
      }
    }
  };
  recompute();
  std::uniform_int_distribution<int> pick(0, n - 1);
  while (*std::max_element(comp.begin(), comp.end()) !=
         *std::min_element(comp.begin(), comp.end())) {
    int a = pick(rng), b = pick(rng);
    if (a == b || comp[static_cast<std::size_t>(a)] == comp[static_cast<std::size_t>(b)]) continue;
    edges.insert({std::min(a, b), std::max(a, b)});
    recompute();
  }

  // breadth-first spanning tree from the highest-degree node
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  int root = 0;
  for (int v = 1; v < n; ++v)
    if (adj[static_cast<std::size_t>(v)].size() > adj[static_cast<std::size_t>(root)].size())
      root = v;
  std::set<std::pair<int, int>> tree;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::queue<int> q;
  seen[static_cast<std::size_t>(root)] = true;
  q.push(root);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int w : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        tree.insert({std::min(u, w), std::max(u, w)});
        q.push(w);
      }
    }
  }

  std::vector<std::pair<int, int>> nontree;
  for (const auto& e : edges)
    if (!tree.count(e)) nontree.push_back(e);
  std::shuffle(nontree.begin(), nontree.end(), rng);

  if (static_cast<int>(nontree.size()) < uncertain) {
    // not enough spare edges: add shuffled non-edges until the request fits
    std::vector<std::pair<int, int>> missing;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (!edges.count({a, b})) missing.push_back({a, b});
    std::shuffle(missing.begin(), missing.end(), rng);
    for (const auto& e : missing) {
      if (static_cast<int>(nontree.size()) >= uncertain) break;
      edges.insert(e);
      nontree.push_back(e);
    }
    if (static_cast<int>(nontree.size()) < uncertain)
      throw DomainError("generate_instance: graph too small for the requested uncertain edges");
  }

  EdgeSets out;
  for (const auto& [a, b] : tree) out.fixed.push_back(Edge{a, b, 1.0});
  for (std::size_t k = 0; k < nontree.size(); ++k) {
    const Edge e{nontree[k].first, nontree[k].second, 1.0};
    if (static_cast<int>(k) < uncertain)
      out.uncertain.push_back(e);
    else
      out.fixed.push_back(e);
  }
  return out;
}

} // namespace

MatPolyZonotope Instance::input_set() const { return feature_ball(X, epsilon); }

std::pair<Mat, Mat> Instance::input_box() const {
  return {X.array() - epsilon, X.array() + epsilon};
}

Instance generate_instance(const GenParams& params) {
  require(params.nodes >= 2, "generate_instance: need at least two nodes");
  require(params.mp_steps >= 1, "generate_instance: need at least one message-passing step");
  Rng rng(params.seed);

  Instance inst;
  inst.graph.num_nodes = params.nodes;
  inst.graph.undirected = true;
  EdgeSets es = random_connected_edges(rng, params.nodes, params.edge_prob, params.uncertain_edges);
  inst.graph.fixed_edges = std::move(es.fixed);
  inst.graph.uncertain_edges = std::move(es.uncertain);
  inst.graph.normalize();
  inst.graph.validate();

  Eigen::Index width = params.in_features;
  for (int k = 0; k < params.mp_steps; ++k) {
    inst.net.layers.push_back(GcLayer{random_weights(rng, width, params.hidden_features)});
    width = params.hidden_features;
    inst.net.layers.push_back(ActLayer{params.act});
  }
  if (params.graph_level) {
    inst.net.layers.push_back(PoolLayer{});
    Mat W = random_weights(rng, width, params.out_dim).transpose();
    Vec b(params.out_dim);
    std::uniform_real_distribution<double> ub(-0.3, 0.3);
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = ub(rng);
    inst.net.layers.push_back(LinLayer{std::move(W), std::move(b)});
  }
  inst.net.validate();

  std::uniform_real_distribution<double> ux(0.0, 1.0);
  inst.X.resize(params.nodes, params.in_features);
  for (Eigen::Index i = 0; i < inst.X.size(); ++i) inst.X.data()[i] = ux(rng);
  inst.epsilon = params.epsilon;

  // target = prediction on the majority graph (all uncertain edges present)
  const EdgeMask all = inst.graph.uncertain_edges.empty()
                           ? 0
                           : ((EdgeMask{1} << inst.graph.uncertain_edges.size()) - 1);
  const NetOutput out = forward(inst.net, inst.X, inst.graph, all);
  if (params.graph_level) {
    Eigen::Index t = 0;
    out.graph.maxCoeff(&t);
    inst.spec = SafetySpec{RobustnessSpec{std::nullopt, static_cast<int>(t)}};
  } else {
    std::uniform_int_distribution<int> un(0, params.nodes - 1);
    const int node = un(rng);
    Eigen::Index t = 0;
    out.node.row(node).maxCoeff(&t);
    inst.spec = SafetySpec{RobustnessSpec{node, static_cast<int>(t)}};
  }
  return inst;
}

} // namespace gcnreach
