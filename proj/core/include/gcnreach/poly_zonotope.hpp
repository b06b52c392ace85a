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

#include "gcnreach/types.hpp"

#include <optional>
#include <utility>

namespace gcnreach {

/// Axis-aligned box given by per-coordinate bounds, lo <= hi.
struct IntervalVec {
  Vec lo;
  Vec hi;

  Eigen::Index dim() const { return lo.size(); }
  Vec width() const { return hi - lo; }
  bool contains(const Vec& x, double tol = 0.0) const;
};

/// Polynomial zonotope
///
///   { c + sum_i (prod_k alpha_k^E(k,i)) G(:,i) + sum_j beta_j GI(:,j)
///     : alpha_k, beta_j in [-1,1] }.
///
/// Rows of E correspond 1:1 to the entries of `id`; columns of E to the
/// columns of G. Identifiers name the dependent factors alpha_k so that
/// dependencies survive across operations on different sets. Values are
/// immutable by convention: every operation is a pure function returning a
/// new set.
struct PolyZonotope {
  Vec c;      // n
  Mat G;      // n x h, dependent generators
  Mat GI;     // n x q, independent generators
  ExpMat E;   // p x h, exponents, all >= 0
  IdVec id;   // p distinct identifiers

  PolyZonotope() = default;

  Eigen::Index dim() const { return c.size(); }
  Eigen::Index num_dep() const { return G.cols(); }
  Eigen::Index num_indep() const { return GI.cols(); }
  Eigen::Index num_factors() const { return static_cast<Eigen::Index>(id.size()); }

  /// Generator count divided by dimension.
  double order() const {
    return dim() == 0 ? 0.0
                      : static_cast<double>(num_dep() + num_indep()) / static_cast<double>(dim());
  }

  /// Throws if the representation invariants are violated.
  void validate() const;

  /// The singleton set {c}.
  static PolyZonotope point(Vec center);
};

/// Exact representation of the box [lo,hi]: one dependent generator per
/// coordinate with positive radius, exponent matrix = identity, fresh
/// identifiers. Zero-radius coordinates contribute no generator.
PolyZonotope from_interval(const Vec& lo, const Vec& hi);

/// Minkowski sum {x1 + x2}. The second operand's factors are re-labelled
/// with fresh identifiers (block-diagonal exponent matrix): the result's
/// identifier vector is a.id followed by the fresh labels of b.id in order.
PolyZonotope minkowski_sum(const PolyZonotope& a, const PolyZonotope& b);

/// Exact affine image {A x + b}.
PolyZonotope affine_map(const Mat& A, const PolyZonotope& pz, const Vec& b);
PolyZonotope affine_map(const Mat& A, const PolyZonotope& pz);

/// Rewrites both sets over the sorted union of their identifiers, padding
/// exponent matrices with zero rows. The represented sets are unchanged.
std::pair<PolyZonotope, PolyZonotope> merge_ids(const PolyZonotope& a, const PolyZonotope& b);

/// Exact quadratic map { [x1' Q_1 x2; ...; x1' Q_nbar x2] } for sets with a
/// common identifier vector (call merge_ids first) and empty GI. The result
/// is compacted; pre-compaction it has at most h1 + h2 + h1*h2 generators.
PolyZonotope quad_map(const PolyZonotope& a, const PolyZonotope& b, const std::vector<Mat>& Q);

/// Exact element-wise product { x1 .* x2 } under shared factors; the
/// quadratic map with Q_i = e_i e_i'. Same preconditions as quad_map except
/// identifiers are merged internally.
PolyZonotope hadamard(const PolyZonotope& a, const PolyZonotope& b);

/// Removes zero generator columns, sums dependent generators with identical
/// exponent columns, folds all-zero exponent columns into the center and
/// drops identifier rows that are no longer used. Set-preserving, idempotent.
PolyZonotope compact(const PolyZonotope& pz);

/// Evaluates the defining formula at the given factor values; alpha is
/// positional (aligned with `id`), beta with the columns of GI. All factors
/// must lie in [-1,1].
Vec sample(const PolyZonotope& pz, const Vec& alpha, const Vec& beta);
Vec sample(const PolyZonotope& pz, const Vec& alpha);

/// Map-keyed variant for evaluating several sets at shared factor values.
/// Every identifier of pz must be present in the map.
Vec sample(const PolyZonotope& pz, const FactorMap& alpha, const Vec& beta);
Vec sample(const PolyZonotope& pz, const FactorMap& alpha);

/// Sound outer box. Monomials whose exponents are all even range over [0,1],
/// all others over [-1,1]; independent generators contribute +- |GI|.
IntervalVec interval_bounds(const PolyZonotope& pz);

/// Substitutes alpha_k = value for the factor named `ident` and returns the
/// resulting subset; the exponent row of `ident` is removed and the result
/// compacted. |value| <= 1.
PolyZonotope fix_factor(const PolyZonotope& pz, FactorId ident, double value);

/// Turns every independent generator into a dependent generator driven by a
/// fresh identifier (exponent 1). The represented set is unchanged.
PolyZonotope promote_independent(const PolyZonotope& pz);

enum class ReduceMethod { Box, PCA };

/// Order reduction: keeps the ceil(rho*n) - n largest dependent generators
/// exactly (ties broken by column index) and encloses the remainder plus GI
/// by a zonotope reduced to at most n axis generators -- axis-aligned for
/// Box, in the principal-component basis for PCA. The output contains the
/// input and has at most ceil(rho*n) generators in total. rho >= 1.
PolyZonotope reduce_order(const PolyZonotope& pz, double rho, ReduceMethod method);

/// Volume of a box; product of the coordinate widths.
double box_volume(const IntervalVec& iv);

/// Relative volume (vol box(y1) / vol box(y2))^(1/n). Returns +inf if only
/// the denominator volume is zero and 1 if both are zero.
double rel_volume(const PolyZonotope& y1, const PolyZonotope& y2);

namespace detail {

/// Removes identifier rows whose exponents are all zero.
void drop_unused_ids(PolyZonotope& pz);

/// Streaming generator accumulator used by the product-type operations:
/// columns with equal exponent vectors are summed as they arrive, preserving
/// first-occurrence order. Exact zero columns are never materialized.
class MonomialAccumulator {
public:
  MonomialAccumulator(Eigen::Index value_rows, Eigen::Index exp_rows);

  void add(const Eigen::Ref<const Eigen::VectorX<std::int32_t>>& exps,
           const Eigen::Ref<const Vec>& value);

  /// Moves the accumulated columns into (G, E); drops columns that cancelled
  /// to zero and folds all-zero exponent columns into `center`.
  void finish(Vec& center, Mat& G, ExpMat& E);

private:
  Eigen::Index value_rows_;
  Eigen::Index exp_rows_;
  std::vector<double> values_;        // value_rows_ x count, column blocks
  std::vector<std::int32_t> exps_;    // exp_rows_ x count, column blocks
  std::unordered_map<std::uint64_t, std::vector<std::int32_t>> buckets_;
  std::int32_t count_ = 0;
};

} // namespace detail

} // namespace gcnreach
