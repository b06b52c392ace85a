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

#include "gcnreach/verify.hpp"

namespace gcnreach {

/// Parameters of the synthetic desk-scale instance generator. Graphs are
/// connected: a breadth-first spanning tree rooted at the highest-degree
/// node is always kept fixed, uncertainty only touches non-tree edges.
struct GenParams {
  int nodes = 8;
  double edge_prob = 0.3;
  int uncertain_edges = 2;
  int in_features = 2;
  int hidden_features = 2;
  int mp_steps = 2;
  bool graph_level = true;
  int out_dim = 2;
  ActivationKind act = ActivationKind::Tanh;
  double epsilon = 0.02;
  std::uint64_t seed = 1;
};

struct Instance {
  UncertainGraph graph;
  Network net;
  Mat X;
  double epsilon = 0.0;
  SafetySpec spec;

  MatPolyZonotope input_set() const;
  std::pair<Mat, Mat> input_box() const;
};

/// Random connected graph plus network, features and a robustness target
/// chosen as the majority-graph prediction. Deterministic in the seed.
Instance generate_instance(const GenParams& params);

} // namespace gcnreach
