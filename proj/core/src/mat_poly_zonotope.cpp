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

#include "gcnreach/mat_poly_zonotope.hpp"

namespace gcnreach {

namespace {

using ConstSlice = Eigen::Map<const Mat>;

ConstSlice as_slice(const Vec& col, Eigen::Index rows, Eigen::Index cols) {
  return ConstSlice(col.data(), rows, cols);
}

ConstSlice col_slice(const Mat& M, Eigen::Index j, Eigen::Index rows, Eigen::Index cols) {
  return ConstSlice(M.col(j).data(), rows, cols);
}

} // namespace

MatPolyZonotope MatPolyZonotope::point(const Mat& C) {
  Vec flat = Eigen::Map<const Vec>(C.data(), C.size());
  return reshape(PolyZonotope::point(std::move(flat)), C.rows(), C.cols());
}

MatPolyZonotope MatPolyZonotope::reshape(PolyZonotope pz, Eigen::Index rows, Eigen::Index cols) {
  require(pz.dim() == rows * cols, "reshape: element count mismatch");
  MatPolyZonotope m;
  m.flat_ = std::move(pz);
  m.rows_ = rows;
  m.cols_ = cols;
  return m;
}

Mat MatPolyZonotope::center() const { return as_slice(flat_.c, rows_, cols_); }

Mat MatPolyZonotope::dep_slice(Eigen::Index i) const {
  return col_slice(flat_.G, i, rows_, cols_);
}

Mat MatPolyZonotope::indep_slice(Eigen::Index j) const {
  return col_slice(flat_.GI, j, rows_, cols_);
}

MatPolyZonotope mpz_minkowski_sum(const MatPolyZonotope& a, const MatPolyZonotope& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "mpz_minkowski_sum: shape mismatch");
  return MatPolyZonotope::reshape(minkowski_sum(a.vectorize(), b.vectorize()), a.rows(), a.cols());
}

namespace {

// Applies op to the center and every generator slice of m.
template <typename Op>
MatPolyZonotope map_slices(const MatPolyZonotope& m, Eigen::Index out_rows,
                           Eigen::Index out_cols, const Mat& center_offset, Op&& op) {
  const PolyZonotope& f = m.vectorize();
  PolyZonotope out;
  out.E = f.E;
  out.id = f.id;
  out.c.resize(out_rows * out_cols);
  Eigen::Map<Mat>(out.c.data(), out_rows, out_cols) =
      op(Eigen::Map<const Mat>(f.c.data(), m.rows(), m.cols())) + center_offset;

  out.G.resize(out_rows * out_cols, f.num_dep());
  for (Eigen::Index i = 0; i < f.num_dep(); ++i)
    Eigen::Map<Mat>(out.G.col(i).data(), out_rows, out_cols) =
        op(Eigen::Map<const Mat>(f.G.col(i).data(), m.rows(), m.cols()));

  out.GI.resize(out_rows * out_cols, f.num_indep());
  for (Eigen::Index j = 0; j < f.num_indep(); ++j)
    Eigen::Map<Mat>(out.GI.col(j).data(), out_rows, out_cols) =
        op(Eigen::Map<const Mat>(f.GI.col(j).data(), m.rows(), m.cols()));

  return MatPolyZonotope::reshape(std::move(out), out_rows, out_cols);
}

} // namespace

MatPolyZonotope mpz_affine_left(const Mat& A, const MatPolyZonotope& m, const Mat& B) {
  require(A.cols() == m.rows(), "mpz_affine_left: inner dimension mismatch");
  require(B.rows() == A.rows() && B.cols() == m.cols(), "mpz_affine_left: offset shape mismatch");
  return map_slices(m, A.rows(), m.cols(), B, [&](const auto& X) -> Mat { return A * X; });
}

MatPolyZonotope mpz_affine_left(const Mat& A, const MatPolyZonotope& m) {
  return mpz_affine_left(A, m, Mat::Zero(A.rows(), m.cols()));
}

MatPolyZonotope mpz_affine_right(const MatPolyZonotope& m, const Mat& A, const Mat& B) {
  require(m.cols() == A.rows(), "mpz_affine_right: inner dimension mismatch");
  require(B.rows() == m.rows() && B.cols() == A.cols(), "mpz_affine_right: offset shape mismatch");
  return map_slices(m, m.rows(), A.cols(), B, [&](const auto& X) -> Mat { return X * A; });
}

MatPolyZonotope mpz_affine_right(const MatPolyZonotope& m, const Mat& A) {
  return mpz_affine_right(m, A, Mat::Zero(m.rows(), A.cols()));
}

PolyZonotope vectorize(const MatPolyZonotope& m) { return m.vectorize(); }

MatPolyZonotope transpose(const MatPolyZonotope& m) {
  return map_slices(m, m.cols(), m.rows(), Mat::Zero(m.cols(), m.rows()),
                    [](const auto& X) -> Mat { return X.transpose(); });
}

MatPolyZonotope mpz_matmul(const MatPolyZonotope& a, const MatPolyZonotope& b) {
  require(a.cols() == b.rows(), "mpz_matmul: inner dimension mismatch");
  require(a.num_indep() == 0 && b.num_indep() == 0,
          "mpz_matmul: independent generators must be promoted first");

  auto [fa, fb] = merge_ids(a.vectorize(), b.vectorize());
  const Eigen::Index n = a.rows();
  const Eigen::Index k = a.cols();
  const Eigen::Index mcols = b.cols();
  const Eigen::Index h1 = fa.num_dep();
  const Eigen::Index h2 = fb.num_dep();
  const Eigen::Index p = fa.num_factors();

  const auto Ca = as_slice(fa.c, n, k);
  const auto Cb = as_slice(fb.c, k, mcols);

  PolyZonotope out;
  out.id = fa.id;
  out.c.resize(n * mcols);
  Eigen::Map<Mat>(out.c.data(), n, mcols) = Ca * Cb;

  detail::MonomialAccumulator acc(n * mcols, p);
  Vec scratch(n * mcols);
  Eigen::Map<Mat> S(scratch.data(), n, mcols);

  for (Eigen::Index i = 0; i < h1; ++i) {
    S = col_slice(fa.G, i, n, k) * Cb;
    acc.add(fa.E.col(i), scratch);
  }
  for (Eigen::Index j = 0; j < h2; ++j) {
    S = Ca * col_slice(fb.G, j, k, mcols);
    acc.add(fb.E.col(j), scratch);
  }
  Eigen::VectorX<std::int32_t> exps(p);
  for (Eigen::Index i = 0; i < h1; ++i) {
    const auto Ga = col_slice(fa.G, i, n, k);
    for (Eigen::Index j = 0; j < h2; ++j) {
      S = Ga * col_slice(fb.G, j, k, mcols);
      exps = fa.E.col(i) + fb.E.col(j);
      acc.add(exps, scratch);
    }
  }
  acc.finish(out.c, out.G, out.E);
  out.GI = Mat(n * mcols, 0);
  detail::drop_unused_ids(out);  // accumulation already merged and pruned columns

  return MatPolyZonotope::reshape(std::move(out), n, mcols);
}

MatPolyZonotope promote_independent(const MatPolyZonotope& m) {
  return MatPolyZonotope::reshape(promote_independent(m.vectorize()), m.rows(), m.cols());
}

MatPolyZonotope compact(const MatPolyZonotope& m) {
  return MatPolyZonotope::reshape(compact(m.vectorize()), m.rows(), m.cols());
}

IntervalVec interval_bounds(const MatPolyZonotope& m) { return interval_bounds(m.vectorize()); }

Mat sample(const MatPolyZonotope& m, const Vec& alpha, const Vec& beta) {
  Vec x = sample(m.vectorize(), alpha, beta);
  return Eigen::Map<const Mat>(x.data(), m.rows(), m.cols());
}

Mat sample(const MatPolyZonotope& m, const Vec& alpha) {
  return sample(m, alpha, Vec::Zero(m.num_indep()));
}

Mat sample(const MatPolyZonotope& m, const FactorMap& alpha, const Vec& beta) {
  Vec x = sample(m.vectorize(), alpha, beta);
  return Eigen::Map<const Mat>(x.data(), m.rows(), m.cols());
}

Mat sample(const MatPolyZonotope& m, const FactorMap& alpha) {
  return sample(m, alpha, Vec::Zero(m.num_indep()));
}

} // namespace gcnreach
