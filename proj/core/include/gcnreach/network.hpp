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

#pragma once

#include "gcnreach/nonlinear.hpp"
#include "gcnreach/types.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace gcnreach {

/// Edge with optional weight (weight 1 = plain edge). 1-based node indices
/// in files, 0-based in memory.
struct Edge {
  int i = 0;
  int j = 0;
  double weight = 1.0;
};

/// Graph with fixed edges and edges whose presence is unknown. Undirected
/// graphs store each edge once with i < j; both symmetric adjacency entries
/// of an uncertain edge are driven by one factor.
struct UncertainGraph {
  int num_nodes = 0;
  std::vector<Edge> fixed_edges;
  std::vector<Edge> uncertain_edges;
  bool undirected = true;

  void validate() const;
  /// Sorts undirected pairs as i < j.
  void normalize();
};

/// Subset of the uncertain edges, one bit per list position.
using EdgeMask = std::uint64_t;

struct GcLayer {
  Mat W;  // c_{k-1} x c_k
};
struct ActLayer {
  ActivationKind fn = ActivationKind::Tanh;
};
struct PoolLayer {};  // global sum pooling
struct LinLayer {
  Mat W;  // n_k x n_{k-1}
  Vec b;  // n_k
};
using LayerSpec = std::variant<GcLayer, ActLayer, PoolLayer, LinLayer>;

/// Ordered layer list. Graph-based layers (GC/ACT) come first, optionally
/// followed by one global pooling layer and a LIN/ACT tail. Networks without
/// pooling produce node-level outputs (a feature matrix), networks with
/// pooling produce a graph-level vector.
struct Network {
  std::vector<LayerSpec> layers;

  int num_layers() const { return static_cast<int>(layers.size()); }
  /// Number of message-passing steps (GC layers).
  int message_passing_steps() const;
  bool graph_level() const;
  /// Input feature count expected by the first GC layer.
  Eigen::Index input_features() const;
  /// Output dimension: features per node (node-level) or vector length.
  Eigen::Index output_dim(int num_nodes) const;

  void validate() const;
};

/// Normalized message passing of the concrete graph with the given subset of
/// uncertain edges present: self-loops added, symmetric inverse-sqrt degree
/// normalization. Self-loops keep every degree >= 1.
Mat message_passing_exact(const UncertainGraph& g, EdgeMask present);

/// Exact point evaluation of the network. Node-level networks fill `node`
/// (|N| x c), graph-level networks fill `graph`.
struct NetOutput {
  bool graph_level = false;
  Mat node;
  Vec graph;

  /// Output flattened column-major (node-level) or the vector itself.
  Vec flat() const;
};

NetOutput forward(const Network& net, const Mat& X, const UncertainGraph& g, EdgeMask present);

} // namespace gcnreach
