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

#include <string>
#include <vector>

namespace gcnreach {

/// One sweep point of the set-vs-enumeration timing comparison.
struct CompareRow {
  int uncertain_edges = 0;
  double t_ours = 0.0;
  double t_enum = 0.0;
  Status verdict_ours = Status::Unknown;
  Status verdict_enum = Status::Unknown;
};

/// For each sweep value k, keeps the first k uncertain edges uncertain (the
/// rest become fixed) and times verify() against enumerate_verify() on that
/// instance. Times are medians over `repeats` runs.
std::vector<CompareRow> run_compare(const Network& net, const UncertainGraph& g,
                                    const MatPolyZonotope& X, const SafetySpec& spec,
                                    const std::vector<int>& sweep, const VerifyConfig& cfg,
                                    int repeats = 3, int enum_cap = 20);

struct AblateRow {
  ReduceMethod method = ReduceMethod::Box;
  double rho = 0.0;
  double v_rel = 0.0;
  double seconds = 0.0;
  Eigen::Index generators = 0;
};

struct AblateResult {
  /// Relative volume of the output set against the error-suppressed run.
  double v_rel_error = 0.0;
  std::vector<AblateRow> reductions;
};

/// Measures (a) how much the nonlinear approximation errors contribute to
/// the output set and (b) the volume blow-up and cost of order reduction on
/// the output set, per method and order.
AblateResult run_ablate(const Network& net, const UncertainGraph& g, const MatPolyZonotope& X,
                        const VerifyConfig& cfg, const std::vector<double>& rhos,
                        const std::vector<ReduceMethod>& methods);

/// Random member points of the involved sets projected to two dimensions;
/// one row per point. Y_fix_* are the subsets with the chosen uncertain
/// edge's factor fixed to +1 / -1.
struct SampleClouds {
  Mat X;
  Mat Y;
  Mat P;
  Mat Y_fix_present;
  Mat Y_fix_absent;
};

SampleClouds run_sample(const Network& net, const UncertainGraph& g, const MatPolyZonotope& X,
                        int count, Eigen::Index dim_a, Eigen::Index dim_b, int edge_index,
                        std::uint64_t seed, const VerifyConfig& cfg);

} // namespace gcnreach
