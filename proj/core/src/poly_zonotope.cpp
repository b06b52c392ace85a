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

#include "gcnreach/poly_zonotope.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace gcnreach {

namespace {

std::atomic<FactorId> g_id_counter{1};

double pow_int(double base, std::int32_t e) {
  double r = 1.0;
  for (std::int32_t k = 0; k < e; ++k) r *= base;
  return r;
}

} // namespace

FactorId fresh_id() { return g_id_counter.fetch_add(1, std::memory_order_relaxed); }

IdVec fresh_ids(std::size_t count) {
  FactorId first = g_id_counter.fetch_add(count, std::memory_order_relaxed);
  IdVec out(count);
  std::iota(out.begin(), out.end(), first);
  return out;
}

void reserve_ids_above(FactorId seen) {
  FactorId cur = g_id_counter.load(std::memory_order_relaxed);
  while (cur <= seen &&
         !g_id_counter.compare_exchange_weak(cur, seen + 1, std::memory_order_relaxed)) {
  }
}

bool IntervalVec::contains(const Vec& x, double tol) const {
  if (x.size() != lo.size()) return false;
  return (x.array() >= lo.array() - tol).all() && (x.array() <= hi.array() + tol).all();
}

void PolyZonotope::validate() const {
  const Eigen::Index n = c.size();
  require(G.size() == 0 || G.rows() == n, "PolyZonotope: G row count != dim");
  require(GI.size() == 0 || GI.rows() == n, "PolyZonotope: GI row count != dim");
  require(E.cols() == G.cols(), "PolyZonotope: E columns != G columns");
  require(static_cast<Eigen::Index>(id.size()) == E.rows(),
          "PolyZonotope: id length != E rows");
  if ((E.array() < 0).any()) throw DomainError("PolyZonotope: negative exponent");
  std::unordered_set<FactorId> seen(id.begin(), id.end());
  require(seen.size() == id.size(), "PolyZonotope: duplicate identifiers");
}

PolyZonotope PolyZonotope::point(Vec center) {
  PolyZonotope pz;
  pz.c = std::move(center);
  pz.G = Mat(pz.c.size(), 0);
  pz.GI = Mat(pz.c.size(), 0);
  pz.E = ExpMat(0, 0);
  return pz;
}

PolyZonotope from_interval(const Vec& lo, const Vec& hi) {
  require(lo.size() == hi.size(), "from_interval: dimension mismatch");
  if ((lo.array() > hi.array()).any())
    throw DomainError("from_interval: lo > hi in some coordinate");

  const Eigen::Index n = lo.size();
  PolyZonotope pz;
  pz.c = 0.5 * (lo + hi);
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < n; ++i)
    if (hi[i] > lo[i]) active.push_back(i);

  const Eigen::Index h = static_cast<Eigen::Index>(active.size());
  pz.G = Mat::Zero(n, h);
  pz.E = ExpMat::Zero(h, h);
  pz.id = fresh_ids(active.size());
  for (Eigen::Index k = 0; k < h; ++k) {
    pz.G(active[k], k) = 0.5 * (hi[active[k]] - lo[active[k]]);
    pz.E(k, k) = 1;
  }
  pz.GI = Mat(n, 0);
  return pz;
}

PolyZonotope minkowski_sum(const PolyZonotope& a, const PolyZonotope& b) {
  require(a.dim() == b.dim(), "minkowski_sum: dimension mismatch");

  PolyZonotope out;
  out.c = a.c + b.c;
  out.G.resize(a.dim(), a.num_dep() + b.num_dep());
  out.G.leftCols(a.num_dep()) = a.G;
  out.G.rightCols(b.num_dep()) = b.G;
  out.GI.resize(a.dim(), a.num_indep() + b.num_indep());
  out.GI.leftCols(a.num_indep()) = a.GI;
  out.GI.rightCols(b.num_indep()) = b.GI;

  const Eigen::Index pa = a.num_factors();
  const Eigen::Index pb = b.num_factors();
  out.E = ExpMat::Zero(pa + pb, out.G.cols());
  out.E.topLeftCorner(pa, a.num_dep()) = a.E;
  out.E.bottomRightCorner(pb, b.num_dep()) = b.E;

  out.id = a.id;
  IdVec relabeled = fresh_ids(b.id.size());
  out.id.insert(out.id.end(), relabeled.begin(), relabeled.end());
  return out;
}

PolyZonotope affine_map(const Mat& A, const PolyZonotope& pz, const Vec& b) {
  require(A.cols() == pz.dim(), "affine_map: A columns != set dimension");
  require(b.size() == A.rows(), "affine_map: offset size != A rows");

  PolyZonotope out;
  out.c = A * pz.c + b;
  out.G = A * pz.G;
  out.GI = A * pz.GI;
  out.E = pz.E;
  out.id = pz.id;
  return out;
}

PolyZonotope affine_map(const Mat& A, const PolyZonotope& pz) {
  return affine_map(A, pz, Vec::Zero(A.rows()));
}

namespace {

// Row permutation that rewrites E over the sorted union of two id vectors.
ExpMat pad_exponents(const ExpMat& E, const IdVec& id, const IdVec& common) {
  ExpMat out = ExpMat::Zero(static_cast<Eigen::Index>(common.size()), E.cols());
  for (std::size_t r = 0; r < id.size(); ++r) {
    auto it = std::lower_bound(common.begin(), common.end(), id[r]);
    out.row(static_cast<Eigen::Index>(it - common.begin())) = E.row(static_cast<Eigen::Index>(r));
  }
  return out;
}

} // namespace

std::pair<PolyZonotope, PolyZonotope> merge_ids(const PolyZonotope& a, const PolyZonotope& b) {
  IdVec common = a.id;
  common.insert(common.end(), b.id.begin(), b.id.end());
  std::sort(common.begin(), common.end());
  common.erase(std::unique(common.begin(), common.end()), common.end());

  PolyZonotope ma = a;
  PolyZonotope mb = b;
  ma.E = pad_exponents(a.E, a.id, common);
  mb.E = pad_exponents(b.E, b.id, common);
  ma.id = common;
  mb.id = common;
  return {std::move(ma), std::move(mb)};
}

namespace detail {

namespace {

std::uint64_t hash_column(const std::int32_t* data, Eigen::Index rows) {
  std::uint64_t h = 1469598103934665603ull;
  for (Eigen::Index i = 0; i < rows; ++i) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(data[i]));
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace

MonomialAccumulator::MonomialAccumulator(Eigen::Index value_rows, Eigen::Index exp_rows)
    : value_rows_(value_rows), exp_rows_(exp_rows) {}

void MonomialAccumulator::add(const Eigen::Ref<const Eigen::VectorX<std::int32_t>>& exps,
                              const Eigen::Ref<const Vec>& value) {
  const std::uint64_t h = hash_column(exps.data(), exp_rows_);
  if (auto it = buckets_.find(h); it != buckets_.end()) {
    for (std::int32_t idx : it->second) {
      const std::int32_t* stored = exps_.data() + static_cast<std::size_t>(idx) * exp_rows_;
      bool same = true;
      for (Eigen::Index r = 0; r < exp_rows_; ++r) {
        if (stored[r] != exps[r]) {
          same = false;
          break;
        }
      }
      if (same) {
        double* dst = values_.data() + static_cast<std::size_t>(idx) * value_rows_;
        for (Eigen::Index r = 0; r < value_rows_; ++r) dst[r] += value[r];
        return;
      }
    }
  }
  if (value.isZero(0.0)) return;  // never materialize an exactly-zero column
  values_.insert(values_.end(), value.data(), value.data() + value_rows_);
  exps_.insert(exps_.end(), exps.data(), exps.data() + exp_rows_);
  buckets_[h].push_back(count_);
  ++count_;
}

void MonomialAccumulator::finish(Vec& center, Mat& G, ExpMat& E) {
  std::vector<std::int32_t> keep;
  keep.reserve(count_);
  for (std::int32_t i = 0; i < count_; ++i) {
    const double* v = values_.data() + static_cast<std::size_t>(i) * value_rows_;
    const std::int32_t* e = exps_.data() + static_cast<std::size_t>(i) * exp_rows_;
    bool zero_value = true;
    for (Eigen::Index r = 0; r < value_rows_ && zero_value; ++r) zero_value = (v[r] == 0.0);
    if (zero_value) continue;
    bool zero_exps = true;
    for (Eigen::Index r = 0; r < exp_rows_ && zero_exps; ++r) zero_exps = (e[r] == 0);
    if (zero_exps) {
      for (Eigen::Index r = 0; r < value_rows_; ++r) center[r] += v[r];
      continue;
    }
    keep.push_back(i);
  }
  G.resize(value_rows_, static_cast<Eigen::Index>(keep.size()));
  E.resize(exp_rows_, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const std::size_t i = static_cast<std::size_t>(keep[j]);
    std::copy_n(values_.data() + i * value_rows_, value_rows_,
                G.col(static_cast<Eigen::Index>(j)).data());
    std::copy_n(exps_.data() + i * exp_rows_, exp_rows_,
                E.col(static_cast<Eigen::Index>(j)).data());
  }
}

} // namespace detail

namespace detail {

void drop_unused_ids(PolyZonotope& pz) {
  std::vector<Eigen::Index> used;
  for (Eigen::Index r = 0; r < pz.E.rows(); ++r)
    if (pz.E.cols() > 0 && (pz.E.row(r).array() != 0).any()) used.push_back(r);
  if (used.size() == static_cast<std::size_t>(pz.E.rows())) return;

  ExpMat E(static_cast<Eigen::Index>(used.size()), pz.E.cols());
  IdVec id(used.size());
  for (std::size_t k = 0; k < used.size(); ++k) {
    E.row(static_cast<Eigen::Index>(k)) = pz.E.row(used[k]);
    id[k] = pz.id[static_cast<std::size_t>(used[k])];
  }
  pz.E = std::move(E);
  pz.id = std::move(id);
}

} // namespace detail

namespace {

Mat drop_zero_columns(const Mat& M) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < M.cols(); ++j)
    if (!M.col(j).isZero(0.0)) keep.push_back(j);
  if (keep.size() == static_cast<std::size_t>(M.cols())) return M;
  Mat out(M.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = M.col(keep[j]);
  return out;
}

} // namespace

PolyZonotope compact(const PolyZonotope& pz) {
  PolyZonotope out;
  out.c = pz.c;
  out.id = pz.id;

  detail::MonomialAccumulator acc(pz.dim(), pz.num_factors());
  for (Eigen::Index j = 0; j < pz.num_dep(); ++j) acc.add(pz.E.col(j), pz.G.col(j));
  acc.finish(out.c, out.G, out.E);

  out.GI = drop_zero_columns(pz.GI);
  detail::drop_unused_ids(out);
  return out;
}

PolyZonotope quad_map(const PolyZonotope& a, const PolyZonotope& b, const std::vector<Mat>& Q) {
  require(a.num_indep() == 0 && b.num_indep() == 0,
          "quad_map: independent generators must be promoted first");
  require(a.id == b.id, "quad_map: operands must share one identifier vector");
  const Eigen::Index nbar = static_cast<Eigen::Index>(Q.size());
  for (const Mat& Qi : Q)
    require(Qi.rows() == a.dim() && Qi.cols() == b.dim(), "quad_map: Q shape mismatch");

  const Eigen::Index h1 = a.num_dep();
  const Eigen::Index h2 = b.num_dep();
  const Eigen::Index p = a.num_factors();

  PolyZonotope out;
  out.id = a.id;
  out.c.resize(nbar);
  for (Eigen::Index i = 0; i < nbar; ++i) out.c[i] = a.c.dot(Q[i] * b.c);

  detail::MonomialAccumulator acc(nbar, p);
  Vec col(nbar);
  // mixed terms G1' Q c2 and c1' Q G2, then cross terms in (i asc, j asc) order
  for (Eigen::Index j = 0; j < h1; ++j) {
    for (Eigen::Index i = 0; i < nbar; ++i) col[i] = a.G.col(j).dot(Q[i] * b.c);
    acc.add(a.E.col(j), col);
  }
  for (Eigen::Index j = 0; j < h2; ++j) {
    for (Eigen::Index i = 0; i < nbar; ++i) col[i] = a.c.dot(Q[i] * b.G.col(j));
    acc.add(b.E.col(j), col);
  }
  Eigen::VectorX<std::int32_t> exps(p);
  for (Eigen::Index l = 0; l < h1; ++l) {
    for (Eigen::Index j = 0; j < h2; ++j) {
      for (Eigen::Index i = 0; i < nbar; ++i) col[i] = a.G.col(l).dot(Q[i] * b.G.col(j));
      exps = a.E.col(l) + b.E.col(j);
      acc.add(exps, col);
    }
  }
  acc.finish(out.c, out.G, out.E);
  out.GI = Mat(nbar, 0);
  detail::drop_unused_ids(out);
  return out;
}

PolyZonotope hadamard(const PolyZonotope& a, const PolyZonotope& b) {
  require(a.dim() == b.dim(), "hadamard: dimension mismatch");
  require(a.num_indep() == 0 && b.num_indep() == 0,
          "hadamard: independent generators must be promoted first");
  auto [ma, mb] = merge_ids(a, b);

  const Eigen::Index n = ma.dim();
  const Eigen::Index p = ma.num_factors();
  PolyZonotope out;
  out.id = ma.id;
  out.c = ma.c.cwiseProduct(mb.c);

  detail::MonomialAccumulator acc(n, p);
  for (Eigen::Index j = 0; j < ma.num_dep(); ++j)
    acc.add(ma.E.col(j), ma.G.col(j).cwiseProduct(mb.c));
  for (Eigen::Index j = 0; j < mb.num_dep(); ++j)
    acc.add(mb.E.col(j), ma.c.cwiseProduct(mb.G.col(j)));
  Eigen::VectorX<std::int32_t> exps(p);
  Vec col(n);
  for (Eigen::Index l = 0; l < ma.num_dep(); ++l) {
    for (Eigen::Index j = 0; j < mb.num_dep(); ++j) {
      col = ma.G.col(l).cwiseProduct(mb.G.col(j));
      exps = ma.E.col(l) + mb.E.col(j);
      acc.add(exps, col);
    }
  }
  acc.finish(out.c, out.G, out.E);
  out.GI = Mat(n, 0);
  detail::drop_unused_ids(out);
  return out;
}

namespace {

void check_factors(const Vec& v, const char* what) {
  if ((v.array().abs() > 1.0).any()) throw DomainError(what);
}

} // namespace

Vec sample(const PolyZonotope& pz, const Vec& alpha, const Vec& beta) {
  require(alpha.size() == pz.num_factors(), "sample: alpha size != factor count");
  require(beta.size() == pz.num_indep(), "sample: beta size != independent count");
  check_factors(alpha, "sample: alpha outside [-1,1]");
  check_factors(beta, "sample: beta outside [-1,1]");

  Vec x = pz.c;
  for (Eigen::Index j = 0; j < pz.num_dep(); ++j) {
    double m = 1.0;
    for (Eigen::Index k = 0; k < pz.E.rows(); ++k) m *= pow_int(alpha[k], pz.E(k, j));
    x += m * pz.G.col(j);
  }
  for (Eigen::Index j = 0; j < pz.num_indep(); ++j) x += beta[j] * pz.GI.col(j);
  return x;
}

Vec sample(const PolyZonotope& pz, const Vec& alpha) {
  return sample(pz, alpha, Vec::Zero(pz.num_indep()));
}

Vec sample(const PolyZonotope& pz, const FactorMap& alpha, const Vec& beta) {
  Vec a(pz.num_factors());
  for (Eigen::Index k = 0; k < pz.num_factors(); ++k) {
    auto it = alpha.find(pz.id[static_cast<std::size_t>(k)]);
    if (it == alpha.end()) throw DomainError("sample: missing factor value for identifier");
    a[k] = it->second;
  }
  return sample(pz, a, beta);
}

Vec sample(const PolyZonotope& pz, const FactorMap& alpha) {
  return sample(pz, alpha, Vec::Zero(pz.num_indep()));
}

IntervalVec interval_bounds(const PolyZonotope& pz) {
  IntervalVec iv{pz.c, pz.c};
  for (Eigen::Index j = 0; j < pz.num_dep(); ++j) {
    bool all_even = true;
    bool all_zero = true;
    for (Eigen::Index k = 0; k < pz.E.rows(); ++k) {
      if (pz.E(k, j) % 2 != 0) all_even = false;
      if (pz.E(k, j) != 0) all_zero = false;
    }
    if (all_zero) {
      iv.lo += pz.G.col(j);
      iv.hi += pz.G.col(j);
    } else if (all_even) {
      iv.lo += pz.G.col(j).cwiseMin(0.0);
      iv.hi += pz.G.col(j).cwiseMax(0.0);
    } else {
      iv.lo -= pz.G.col(j).cwiseAbs();
      iv.hi += pz.G.col(j).cwiseAbs();
    }
  }
  if (pz.num_indep() > 0) {
    Vec r = pz.GI.cwiseAbs().rowwise().sum();
    iv.lo -= r;
    iv.hi += r;
  }
  return iv;
}

PolyZonotope fix_factor(const PolyZonotope& pz, FactorId ident, double value) {
  if (std::abs(value) > 1.0) throw DomainError("fix_factor: value outside [-1,1]");
  auto it = std::find(pz.id.begin(), pz.id.end(), ident);
  require(it != pz.id.end(), "fix_factor: unknown identifier");
  const Eigen::Index row = static_cast<Eigen::Index>(it - pz.id.begin());

  PolyZonotope out;
  out.c = pz.c;
  out.GI = pz.GI;
  out.G = pz.G;
  for (Eigen::Index j = 0; j < out.G.cols(); ++j)
    out.G.col(j) *= pow_int(value, pz.E(row, j));

  out.E.resize(pz.E.rows() - 1, pz.E.cols());
  out.id.reserve(pz.id.size() - 1);
  Eigen::Index r2 = 0;
  for (Eigen::Index r = 0; r < pz.E.rows(); ++r) {
    if (r == row) continue;
    out.E.row(r2++) = pz.E.row(r);
    out.id.push_back(pz.id[static_cast<std::size_t>(r)]);
  }
  return compact(out);
}

PolyZonotope promote_independent(const PolyZonotope& pz) {
  if (pz.num_indep() == 0) return pz;
  const Eigen::Index q = pz.num_indep();
  const Eigen::Index p = pz.num_factors();
  const Eigen::Index h = pz.num_dep();

  PolyZonotope out;
  out.c = pz.c;
  out.G.resize(pz.dim(), h + q);
  out.G.leftCols(h) = pz.G;
  out.G.rightCols(q) = pz.GI;
  out.GI = Mat(pz.dim(), 0);
  out.E = ExpMat::Zero(p + q, h + q);
  out.E.topLeftCorner(p, h) = pz.E;
  out.E.bottomRightCorner(q, q) = ExpMat::Identity(q, q);
  out.id = pz.id;
  IdVec extra = fresh_ids(static_cast<std::size_t>(q));
  out.id.insert(out.id.end(), extra.begin(), extra.end());
  return out;
}

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Robustness over
// speed; the matrices here are tiny.
Mat jacobi_eigenvectors(Mat S) {
  const Eigen::Index n = S.rows();
  Mat U = Mat::Identity(n, n);
  if (n <= 1) return U;
  const double scale = S.norm();
  if (scale == 0.0) return U;
  S /= scale;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) off += 2.0 * S(i, j) * S(i, j);
    if (std::sqrt(off) < 1e-12) break;

    for (Eigen::Index pidx = 0; pidx < n - 1; ++pidx) {
      for (Eigen::Index qidx = pidx + 1; qidx < n; ++qidx) {
        if (S(pidx, qidx) == 0.0) continue;
        const double tau = (S(qidx, qidx) - S(pidx, pidx)) / (2.0 * S(pidx, qidx));
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(tau * tau + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        for (Eigen::Index i = 0; i < n; ++i) {  // S <- S J
          const double a = S(i, pidx), b = S(i, qidx);
          S(i, pidx) = cs * a - sn * b;
          S(i, qidx) = sn * a + cs * b;
        }
        for (Eigen::Index i = 0; i < n; ++i) {  // S <- J' S
          const double a = S(pidx, i), b = S(qidx, i);
          S(pidx, i) = cs * a - sn * b;
          S(qidx, i) = sn * a + cs * b;
        }
        for (Eigen::Index i = 0; i < n; ++i) {  // U <- U J
          const double a = U(i, pidx), b = U(i, qidx);
          U(i, pidx) = cs * a - sn * b;
          U(i, qidx) = sn * a + cs * b;
        }
      }
    }
  }
  return U;
}

} // namespace

PolyZonotope reduce_order(const PolyZonotope& pz, double rho, ReduceMethod method) {
  if (rho < 1.0) throw DomainError("reduce_order: rho must be >= 1");
  const Eigen::Index n = pz.dim();
  const Eigen::Index budget = static_cast<Eigen::Index>(std::ceil(rho * static_cast<double>(n)));
  if (pz.num_dep() + pz.num_indep() <= budget) return pz;

  const Eigen::Index n_keep = std::max<Eigen::Index>(budget - n, 0);

  // largest dependent generators by Euclidean norm, ties by column index
  std::vector<Eigen::Index> order(static_cast<std::size_t>(pz.num_dep()));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> norms(order.size());
  for (std::size_t j = 0; j < norms.size(); ++j)
    norms[j] = pz.G.col(static_cast<Eigen::Index>(j)).norm();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    if (norms[static_cast<std::size_t>(x)] != norms[static_cast<std::size_t>(y)])
      return norms[static_cast<std::size_t>(x)] > norms[static_cast<std::size_t>(y)];
    return x < y;
  });

  const Eigen::Index kept = std::min<Eigen::Index>(n_keep, pz.num_dep());
  std::vector<Eigen::Index> keep(order.begin(), order.begin() + kept);
  std::sort(keep.begin(), keep.end());

  PolyZonotope out;
  out.c = pz.c;
  out.id = pz.id;
  out.G.resize(n, kept);
  out.E.resize(pz.E.rows(), kept);
  for (Eigen::Index j = 0; j < kept; ++j) {
    out.G.col(j) = pz.G.col(keep[static_cast<std::size_t>(j)]);
    out.E.col(j) = pz.E.col(keep[static_cast<std::size_t>(j)]);
  }

  // Interval relaxation of the dropped part: a monomial with all-even
  // exponents spans [0,1] (vector g/2, centre shift g/2), all others [-1,1].
  std::vector<Vec> segs;
  segs.reserve(static_cast<std::size_t>(pz.num_dep() - kept + pz.num_indep()));
  for (std::size_t j = static_cast<std::size_t>(kept); j < order.size(); ++j) {
    const Eigen::Index col = order[j];
    bool all_even = true;
    for (Eigen::Index k = 0; k < pz.E.rows(); ++k)
      if (pz.E(k, col) % 2 != 0) { all_even = false; break; }
    if (all_even) {
      out.c += 0.5 * pz.G.col(col);
      segs.push_back(0.5 * pz.G.col(col));
    } else {
      segs.push_back(pz.G.col(col));
    }
  }
  for (Eigen::Index j = 0; j < pz.num_indep(); ++j) segs.push_back(pz.GI.col(j));

  Vec radii;
  Mat basis;
  if (method == ReduceMethod::Box || segs.empty()) {
    radii = Vec::Zero(n);
    for (const Vec& v : segs) radii += v.cwiseAbs();
    basis = Mat::Identity(n, n);
  } else {
    Mat V(n, static_cast<Eigen::Index>(segs.size()));
    for (std::size_t j = 0; j < segs.size(); ++j) V.col(static_cast<Eigen::Index>(j)) = segs[j];
    // covariance of the columns and their negations
    basis = jacobi_eigenvectors(V * V.transpose());
    radii = (basis.transpose() * V).cwiseAbs().rowwise().sum();
  }

  std::vector<Eigen::Index> nz;
  for (Eigen::Index i = 0; i < n; ++i)
    if (radii[i] > 0.0) nz.push_back(i);
  out.GI.resize(n, static_cast<Eigen::Index>(nz.size()));
  for (std::size_t j = 0; j < nz.size(); ++j)
    out.GI.col(static_cast<Eigen::Index>(j)) = basis.col(nz[j]) * radii[nz[j]];

  detail::drop_unused_ids(out);
  return out;
}

double box_volume(const IntervalVec& iv) {
  double v = 1.0;
  for (Eigen::Index i = 0; i < iv.dim(); ++i) v *= (iv.hi[i] - iv.lo[i]);
  return v;
}

double rel_volume(const PolyZonotope& y1, const PolyZonotope& y2) {
  require(y1.dim() == y2.dim(), "rel_volume: dimension mismatch");
  const Eigen::Index n = y1.dim();
  const IntervalVec b1 = interval_bounds(y1);
  const IntervalVec b2 = interval_bounds(y2);

  bool zero1 = false, zero2 = false;
  double log1 = 0.0, log2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w1 = b1.hi[i] - b1.lo[i];
    const double w2 = b2.hi[i] - b2.lo[i];
    if (w1 <= 0.0) zero1 = true; else log1 += std::log(w1);
    if (w2 <= 0.0) zero2 = true; else log2 += std::log(w2);
  }
  if (zero1 && zero2) return 1.0;
  if (zero2) return std::numeric_limits<double>::infinity();
  if (zero1) return 0.0;
  return std::exp((log1 - log2) / static_cast<double>(n));
}

} // namespace gcnreach
