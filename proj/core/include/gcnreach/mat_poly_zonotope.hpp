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

#include "gcnreach/poly_zonotope.hpp"

namespace gcnreach {

/// Matrix polynomial zonotope: the polynomial zonotope construction whose
/// members are n x m matrices. Internally the center and every generator
/// slice are stored column-major stacked, so vectorize()/reshape() are
/// zero-cost and the generator axis is the last axis of the n x m x h
/// tensor, matching the broadcast formulation of the set multiplication.
class MatPolyZonotope {
public:
  MatPolyZonotope() = default;

  /// The singleton set {C}.
  static MatPolyZonotope point(const Mat& C);

  /// Reinterprets a vector-valued set of dimension rows*cols as a matrix
  /// set, column-major. Inverse of vectorize().
  static MatPolyZonotope reshape(PolyZonotope pz, Eigen::Index rows, Eigen::Index cols);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  Eigen::Index num_dep() const { return flat_.num_dep(); }
  Eigen::Index num_indep() const { return flat_.num_indep(); }
  Eigen::Index num_factors() const { return flat_.num_factors(); }
  const IdVec& ids() const { return flat_.id; }
  const ExpMat& exponents() const { return flat_.E; }

  /// Column-major stacked vector view of the set.
  const PolyZonotope& vectorize() const { return flat_; }

  Mat center() const;
  Mat dep_slice(Eigen::Index i) const;
  Mat indep_slice(Eigen::Index j) const;

private:
  PolyZonotope flat_;
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
};

/// Minkowski sum; the second operand's factors are re-labelled fresh, as in
/// the vector case.
MatPolyZonotope mpz_minkowski_sum(const MatPolyZonotope& a, const MatPolyZonotope& b);

/// Exact left affine image {A X + B}. A is broadcast across all generators;
/// B is added to the center only.
MatPolyZonotope mpz_affine_left(const Mat& A, const MatPolyZonotope& m, const Mat& B);
MatPolyZonotope mpz_affine_left(const Mat& A, const MatPolyZonotope& m);

/// Exact right affine image {X A + B}.
MatPolyZonotope mpz_affine_right(const MatPolyZonotope& m, const Mat& A, const Mat& B);
MatPolyZonotope mpz_affine_right(const MatPolyZonotope& m, const Mat& A);

PolyZonotope vectorize(const MatPolyZonotope& m);
MatPolyZonotope transpose(const MatPolyZonotope& m);

/// Exact product set {M1 M2} under shared factors. Identifier vectors are
/// merged internally; independent generators are rejected (promote first).
/// Generator pairs are visited in (i ascending, j ascending) order and the
/// result is compacted, so outputs are bit-reproducible.
MatPolyZonotope mpz_matmul(const MatPolyZonotope& a, const MatPolyZonotope& b);

MatPolyZonotope promote_independent(const MatPolyZonotope& m);
MatPolyZonotope compact(const MatPolyZonotope& m);

/// Bounds of the column-major stacked entries.
IntervalVec interval_bounds(const MatPolyZonotope& m);

Mat sample(const MatPolyZonotope& m, const Vec& alpha, const Vec& beta);
Mat sample(const MatPolyZonotope& m, const Vec& alpha);
Mat sample(const MatPolyZonotope& m, const FactorMap& alpha, const Vec& beta);
Mat sample(const MatPolyZonotope& m, const FactorMap& alpha);

} // namespace gcnreach
