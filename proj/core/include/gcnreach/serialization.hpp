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

#include <optional>
#include <string>

namespace gcnreach {

/// Thrown for malformed files (bad JSON, missing or mistyped keys).
/// Dimension inconsistencies inside well-formed files raise ShapeError.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Set serialization: {"c":[...],"G":[[...]],"GI":[[...]],"E":[[...]],"id":[...]}
// with row-major nested arrays; matrix sets use {"C":[[...]],"G":[matrix,...]}
// with one matrix per generator. Loading reserves identifiers above the
// largest one seen so later fresh ids cannot collide.
std::string to_json(const PolyZonotope& pz, int indent = -1);
PolyZonotope pz_from_json(const std::string& text);
std::string to_json(const MatPolyZonotope& m, int indent = -1);
MatPolyZonotope mpz_from_json(const std::string& text);

struct GraphInput {
  UncertainGraph graph;
  /// Set when the file carries an explicit adjacency set instead of (or in
  /// addition to) edge lists, e.g. for constrained edge models.
  std::optional<MatPolyZonotope> adjacency;
};

struct FeatureInput {
  std::optional<Mat> X;
  double epsilon = 0.0;
  std::optional<MatPolyZonotope> set;

  /// The input set: the explicit set if given, otherwise the epsilon-ball
  /// around X (one generator per feature when epsilon > 0).
  MatPolyZonotope as_set() const;
  /// Input box for interval propagation.
  std::pair<Mat, Mat> as_box() const;
};

// File loaders. Node indices are 1-based on disk, 0-based in memory.
GraphInput load_graph(const std::string& path);
Network load_network(const std::string& path);
FeatureInput load_input(const std::string& path);
SafetySpec load_spec(const std::string& path);

void save_graph(const std::string& path, const UncertainGraph& g);
void save_network(const std::string& path, const Network& net);
void save_input(const std::string& path, const Mat& X, double epsilon);
void save_spec(const std::string& path, const SafetySpec& spec);

// String-level counterparts used by the loaders and the tests.
GraphInput graph_from_json(const std::string& text);
Network network_from_json(const std::string& text);
FeatureInput input_from_json(const std::string& text);
SafetySpec spec_from_json(const std::string& text);
std::string to_json(const UncertainGraph& g, int indent = -1);
std::string to_json(const Network& net, int indent = -1);
std::string input_to_json(const Mat& X, double epsilon, int indent = -1);
std::string to_json(const SafetySpec& spec, int indent = -1);

/// Epsilon-ball input set around X, one dependent generator per feature.
MatPolyZonotope feature_ball(const Mat& X, double epsilon);

} // namespace gcnreach
