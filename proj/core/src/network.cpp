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

#include "gcnreach/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gcnreach {

void UncertainGraph::validate() const {
  require(num_nodes > 0, "graph: num_nodes must be positive");
  std::set<std::pair<int, int>> seen;
  auto check = [&](const Edge& e) {
    require(e.i >= 0 && e.i < num_nodes && e.j >= 0 && e.j < num_nodes,
            "graph: edge index out of range");
    require(e.i != e.j, "graph: self-loops are implicit and may not be listed");
    auto key = (undirected && e.j < e.i) ? std::make_pair(e.j, e.i) : std::make_pair(e.i, e.j);
    require(seen.insert(key).second, "graph: duplicate edge");
  };
  for (const Edge& e : fixed_edges) check(e);
  for (const Edge& e : uncertain_edges) check(e);
  require(uncertain_edges.size() <= 64, "graph: at most 64 uncertain edges supported");
}

void UncertainGraph::normalize() {
  if (!undirected) return;
  for (Edge& e : fixed_edges)
    if (e.j < e.i) std::swap(e.i, e.j);
  for (Edge& e : uncertain_edges)
    if (e.j < e.i) std::swap(e.i, e.j);
}

int Network::message_passing_steps() const {
  int k = 0;
  for (const LayerSpec& l : layers)
    if (std::holds_alternative<GcLayer>(l)) ++k;
  return k;
}

bool Network::graph_level() const {
  return std::any_of(layers.begin(), layers.end(),
                     [](const LayerSpec& l) { return std::holds_alternative<PoolLayer>(l); });
}

Eigen::Index Network::input_features() const {
  for (const LayerSpec& l : layers)
    if (const auto* gc = std::get_if<GcLayer>(&l)) return gc->W.rows();
  for (const LayerSpec& l : layers)
    if (const auto* lin = std::get_if<LinLayer>(&l)) return lin->W.cols();
  throw ShapeError("network: no weighted layer to infer the input width from");
}

Eigen::Index Network::output_dim(int num_nodes) const {
  Eigen::Index width = input_features();
  for (const LayerSpec& l : layers) {
    if (const auto* gc = std::get_if<GcLayer>(&l)) {
      width = gc->W.cols();
    } else if (const auto* lin = std::get_if<LinLayer>(&l)) {
      width = lin->W.rows();
    }
  }
  return graph_level() ? width : width * num_nodes;
}

void Network::validate() const {
  require(!layers.empty(), "network: empty layer list");
  bool pooled = false;
  Eigen::Index width = input_features();
  for (const LayerSpec& l : layers) {
    if (const auto* gc = std::get_if<GcLayer>(&l)) {
      require(!pooled, "network: graph convolution after pooling");
      require(gc->W.rows() == width, "network: feature dimensions do not chain");
      width = gc->W.cols();
    } else if (std::holds_alternative<PoolLayer>(l)) {
      require(!pooled, "network: more than one pooling layer");
      pooled = true;
    } else if (const auto* lin = std::get_if<LinLayer>(&l)) {
      require(pooled, "network: linear layers only after pooling");
      require(lin->W.cols() == width, "network: feature dimensions do not chain");
      require(lin->b.size() == lin->W.rows(), "network: bias size mismatch");
      width = lin->W.rows();
    }
  }
  require(message_passing_steps() >= 1, "network: at least one graph convolution required");
}

Mat message_passing_exact(const UncertainGraph& g, EdgeMask present) {
  const int n = g.num_nodes;
  Mat A = Mat::Zero(n, n);
  auto put = [&](const Edge& e, double w) {
    A(e.i, e.j) = w;
    if (g.undirected) A(e.j, e.i) = w;
  };
  for (const Edge& e : g.fixed_edges) put(e, e.weight);
  for (std::size_t k = 0; k < g.uncertain_edges.size(); ++k)
    if (present & (EdgeMask{1} << k)) put(g.uncertain_edges[k], g.uncertain_edges[k].weight);

  Mat At = A + Mat::Identity(n, n);
  Vec deg = At.colwise().sum();  // column sums; equal to row sums when symmetric
  Vec dinv = deg.array().rsqrt();
  return dinv.asDiagonal() * At * dinv.asDiagonal();
}

Vec NetOutput::flat() const {
  if (graph_level) return graph;
  return Eigen::Map<const Vec>(node.data(), node.size());
}

NetOutput forward(const Network& net, const Mat& X, const UncertainGraph& g, EdgeMask present) {
  net.validate();
  g.validate();
  require(X.rows() == g.num_nodes, "forward: feature rows != node count");
  require(X.cols() == net.input_features(), "forward: feature columns != input width");

  const Mat P = message_passing_exact(g, present);
  NetOutput out;
  Mat H = X;
  Vec h;
  bool pooled = false;

  for (const LayerSpec& l : net.layers) {
    if (const auto* gc = std::get_if<GcLayer>(&l)) {
      H = P * H * gc->W;
    } else if (const auto* act = std::get_if<ActLayer>(&l)) {
      if (pooled) {
        for (Eigen::Index i = 0; i < h.size(); ++i) h[i] = act_eval(act->fn, h[i]);
      } else {
        for (Eigen::Index i = 0; i < H.size(); ++i)
          H.data()[i] = act_eval(act->fn, H.data()[i]);
      }
    } else if (std::holds_alternative<PoolLayer>(l)) {
      h = H.colwise().sum().transpose();
      pooled = true;
    } else if (const auto* lin = std::get_if<LinLayer>(&l)) {
      h = lin->W * h + lin->b;
    }
  }

  out.graph_level = pooled;
  if (pooled)
    out.graph = std::move(h);
  else
    out.node = std::move(H);
  return out;
}

} // namespace gcnreach
