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

#include "gcnreach/mat_poly_zonotope.hpp"
#include "gcnreach/network.hpp"

#include <optional>

namespace gcnreach {

/// Robustness specification: the target class must dominate all others,
/// either for one node (node-level outputs) or for the pooled graph output.
struct RobustnessSpec {
  std::optional<int> node;  // 0-based; empty = graph scope
  int target = 0;
};

/// Unsafe set U = { y : A y <= b } (conjunction over rows). For node-level
/// outputs y is the feature matrix stacked column-major.
struct HalfspaceSpec {
  Mat A;
  Vec b;
};

struct SafetySpec {
  std::variant<RobustnessSpec, HalfspaceSpec> body;

  bool is_robustness() const { return std::holds_alternative<RobustnessSpec>(body); }
};

enum class Status { Verified, Unknown, Falsified };
const char* to_string(Status s);

/// Concrete counterexample: an edge subset and a feature matrix whose
/// forward output violates the specification.
struct Witness {
  EdgeMask present = 0;
  Mat X;
};

struct Diagnostics {
  std::vector<Eigen::Index> dep_generators_per_layer;
  Eigen::Index output_dep_generators = 0;
  Eigen::Index output_indep_generators = 0;
  double generator_budget = 0.0;
  double wall_seconds = 0.0;
  bool order_reduction = false;
  /// Concrete graphs solved by enumerate_verify (2^|uncertain|); 0 elsewhere.
  std::uint64_t subproblems = 0;
};

struct Verdict {
  Status status = Status::Unknown;
  std::optional<Witness> witness;
  Diagnostics diag;
};

struct VerifyConfig {
  EncloseConfig enclose;
  double reduce_rho = 0.0;  // >= 1 enables order reduction after activations
  ReduceMethod reduce_method = ReduceMethod::Box;
  std::optional<int> subgraph_node;  // 0-based; dynamic subgraph reduction
};

/// Weighted adjacency set of an uncertain graph: fixed edges carry their
/// weight, every uncertain edge contributes w/2 to the center and one
/// dependent generator of magnitude w/2 (both symmetric entries when
/// undirected). The identifier vector is aligned with g.uncertain_edges.
MatPolyZonotope build_uncertain_adjacency(const UncertainGraph& g);

/// Enclosure of D^(-1/2) (A+I) D^(-1/2) for an uncertain adjacency set:
/// self-loops are added to the center, the degree set is obtained by a
/// ones-row map, its inverse square root is enclosed element-wise, embedded
/// on the diagonal, and multiplied out with two set products. The result
/// contains the exact message passing of every member adjacency.
MatPolyZonotope message_passing_enclosure(const MatPolyZonotope& A, const EncloseConfig& cfg = {});

/// (P (x) H) W. Exact for point P (and always exact as a set product; the
/// only outer approximation lives in P itself).
MatPolyZonotope enclose_gc_layer(const MatPolyZonotope& H, const MatPolyZonotope& P, const Mat& W);

/// Exact sum pooling (1 H)^T as a vector-valued set.
PolyZonotope enclose_pool_sum(const MatPolyZonotope& H);

struct EnclosureResult {
  bool graph_level = false;
  MatPolyZonotope node_set;  // node-level output
  PolyZonotope graph_set;    // graph-level output
  /// Factor identifiers of the uncertain edges, in list order.
  IdVec edge_ids;
  std::vector<Eigen::Index> dep_generators_per_layer;

  /// Output as a vector set (column-major for node-level).
  const PolyZonotope& output_flat() const;
  Eigen::Index output_dep_generators() const { return output_flat().num_dep(); }
};

/// Output enclosure of the whole network: the message passing is computed
/// once and reused by every graph convolution; activations are enclosed
/// element-wise; pooling and linear layers are exact. When reduce_rho >= 1,
/// order reduction runs after each activation layer.
EnclosureResult enclose_network(const Network& net, const MatPolyZonotope& X,
                                const UncertainGraph& g, const VerifyConfig& cfg = {});

/// Same pipeline with an explicitly given adjacency set (for constrained
/// edge models that a plain edge list cannot express).
EnclosureResult enclose_network_with_adjacency(const Network& net, const MatPolyZonotope& X,
                                               const MatPolyZonotope& A,
                                               const VerifyConfig& cfg = {});

/// Sound, incomplete check: VERIFIED when interval bounds of the relevant
/// linear maps of the output separate it from the unsafe region, UNKNOWN
/// otherwise. Never FALSIFIED.
Verdict check_spec(const EnclosureResult& Y, const SafetySpec& spec);

/// Restriction of the feature set and message passing to a node subset:
/// H' = M H, P' = M P M^T with the selection matrix M = I(keep,:).
std::pair<MatPolyZonotope, MatPolyZonotope> subgraph_select(const MatPolyZonotope& H,
                                                            const MatPolyZonotope& P,
                                                            const std::vector<int>& keep);

/// Nodes within `hops` of root (breadth-first over fixed and uncertain
/// edges), sorted ascending. hops = 0 yields {root}.
std::vector<int> khop_neighborhood(const UncertainGraph& g, int root, int hops);

/// Enclosure of one node's output with dynamic subgraph reduction: the graph
/// is restricted to the (kappa+1)-hop neighborhood of the node up front and
/// shrunk after every graph convolution as the remaining message-passing
/// depth decreases, down to the single node after the last one. Node-level
/// networks only. The returned node_set is 1 x c.
EnclosureResult enclose_node_subgraph(const Network& net, const MatPolyZonotope& X,
                                      const UncertainGraph& g, int node,
                                      const VerifyConfig& cfg = {});

/// End-to-end set-based verification. With subgraph_node set (node-level
/// networks only) the enclosure runs through enclose_node_subgraph and the
/// specification must be local to that node.
Verdict verify(const Network& net, const MatPolyZonotope& X, const UncertainGraph& g,
               const SafetySpec& spec, const VerifyConfig& cfg = {});

struct EnumerateConfig {
  VerifyConfig verify;
  int cap = 20;             // maximum |uncertain edges| before refusing
  int falsify_samples = 64; // feature samples per concrete graph
  std::uint64_t seed = 0;
};

/// Baseline: verifies all 2^|uncertain| concrete graphs individually
/// (features-only uncertainty each). VERIFIED iff every subproblem is;
/// otherwise a sampling search may produce a concrete counterexample.
Verdict enumerate_verify(const Network& net, const MatPolyZonotope& X, const UncertainGraph& g,
                         const SafetySpec& spec, const EnumerateConfig& cfg = {});

/// Random search for a concrete violation: edge subsets times feature
/// samples of X, evaluated with the exact forward pass.
std::optional<Witness> falsify_search(const Network& net, const MatPolyZonotope& X,
                                      const UncertainGraph& g, const SafetySpec& spec,
                                      int samples_per_graph, std::uint64_t seed);

/// True if the concrete output violates the specification.
bool violates(const NetOutput& out, const SafetySpec& spec);

/// Interval bound propagation baseline over the same architecture: interval
/// degrees, monotone inverse square root, interval matrix products, monotone
/// activation images. Returns the output box, column-major for node-level.
IntervalVec ibp_enclose(const Network& net, const Mat& Xlo, const Mat& Xhi,
                        const UncertainGraph& g);

/// Interval message-passing matrix used by the IBP baseline (lo, hi).
std::pair<Mat, Mat> ibp_message_passing(const UncertainGraph& g);

/// Closed-form generator budget h_e^(3 kappa) (h_x + N c_max) + (nu - 2
/// kappa) n_max for the instance dimensions.
double generator_budget(Eigen::Index h_e, Eigen::Index h_x, int kappa, int nu, int num_nodes,
                        Eigen::Index c_max, Eigen::Index n_max);
double generator_budget(const Network& net, const UncertainGraph& g, Eigen::Index h_x);

} // namespace gcnreach
