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

#include "gcnreach/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gcnreach {

double act_eval(ActivationKind f, double x) {
  switch (f) {
    case ActivationKind::Relu: return x > 0.0 ? x : 0.0;
    case ActivationKind::Tanh: return std::tanh(x);
    case ActivationKind::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case ActivationKind::InvSqrt:
      if (x <= 0.0) throw DomainError("invsqrt: undefined for x <= 0");
      return 1.0 / std::sqrt(x);
  }
  throw DomainError("unknown activation");
}

double act_deriv(ActivationKind f, double x) {
  switch (f) {
    case ActivationKind::Relu: return x > 0.0 ? 1.0 : 0.0;
    case ActivationKind::Tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case ActivationKind::Sigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-x));
      return s * (1.0 - s);
    }
    case ActivationKind::InvSqrt:
      if (x <= 0.0) throw DomainError("invsqrt: undefined for x <= 0");
      return -0.5 * std::pow(x, -1.5);
  }
  throw DomainError("unknown activation");
}

ActivationKind activation_from_name(const std::string& name) {
  if (name == "relu") return ActivationKind::Relu;
  if (name == "tanh") return ActivationKind::Tanh;
  if (name == "sigmoid") return ActivationKind::Sigmoid;
  if (name == "invsqrt") return ActivationKind::InvSqrt;
  throw DomainError("unknown activation name: " + name);
}

std::string activation_name(ActivationKind f) {
  switch (f) {
    case ActivationKind::Relu: return "relu";
    case ActivationKind::Tanh: return "tanh";
    case ActivationKind::Sigmoid: return "sigmoid";
    case ActivationKind::InvSqrt: return "invsqrt";
  }
  return "?";
}

double ScalarPoly::eval(double x) const {
  double y = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) y = y * x + coeffs[i];
  return y;
}

double ScalarPoly::deriv_eval(double x) const {
  double y = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 1;) y = y * x + coeffs[i] * static_cast<double>(i);
  return y;
}

namespace {

constexpr int kFitGridPoints = 1000;

void check_domain(ActivationKind f, double l, double u) {
  if (l > u) throw DomainError("fit: l > u");
  if (f == ActivationKind::InvSqrt && l <= 0.0)
    throw DomainError("invsqrt: domain must be strictly positive");
}

std::vector<double> fit_grid(double l, double u) {
  std::vector<double> xs(kFitGridPoints);
  for (int i = 0; i < kFitGridPoints; ++i)
    xs[static_cast<std::size_t>(i)] =
        l + (u - l) * static_cast<double>(i) / static_cast<double>(kFitGridPoints - 1);
  return xs;
}

// Centers the constant coefficient so the residual band is symmetric.
void center_offset(ActivationKind f, ScalarPoly& p, const std::vector<double>& xs) {
  double rmax = -std::numeric_limits<double>::infinity();
  double rmin = std::numeric_limits<double>::infinity();
  for (double x : xs) {
    const double r = act_eval(f, x) - (p.eval(x) - p.coeffs[0]);
    rmax = std::max(rmax, r);
    rmin = std::min(rmin, r);
  }
  p.coeffs[0] = 0.5 * (rmax + rmin);
}

// Gaussian elimination with partial pivoting; A is small and square.
Vec solve_dense(Mat A, Vec b) {
  const Eigen::Index n = A.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    for (Eigen::Index i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(piv, k))) piv = i;
    if (A(piv, k) == 0.0) throw DomainError("fit: singular normal equations");
    if (piv != k) {
      A.row(piv).swap(A.row(k));
      std::swap(b[piv], b[k]);
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double m = A(i, k) / A(k, k);
      A.row(i).tail(n - k) -= m * A.row(k).tail(n - k);
      b[i] -= m * b[k];
    }
  }
  Vec x(n);
  for (Eigen::Index i = n; i-- > 0;) {
    double s = b[i];
    for (Eigen::Index j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
    x[i] = s / A(i, i);
  }
  return x;
}

// Least squares in the scaled variable t = s*x + o with t in [-1,1], then
// expanded back to monomial coefficients in x.
std::vector<double> least_squares_fit(ActivationKind f, double l, double u, int order,
                                      const std::vector<double>& xs) {
  const double s = 2.0 / (u - l);
  const double o = -(u + l) / (u - l);
  const Eigen::Index m = order + 1;

  Mat ata = Mat::Zero(m, m);
  Vec atb = Vec::Zero(m);
  std::vector<double> tp(static_cast<std::size_t>(m));
  for (double x : xs) {
    const double t = s * x + o;
    tp[0] = 1.0;
    for (Eigen::Index k = 1; k < m; ++k) tp[static_cast<std::size_t>(k)] = tp[static_cast<std::size_t>(k - 1)] * t;
    const double y = act_eval(f, x);
    for (Eigen::Index i = 0; i < m; ++i) {
      atb[i] += tp[static_cast<std::size_t>(i)] * y;
      for (Eigen::Index j = 0; j < m; ++j) ata(i, j) += tp[static_cast<std::size_t>(i)] * tp[static_cast<std::size_t>(j)];
    }
  }
  const Vec q = solve_dense(std::move(ata), std::move(atb));

  // expand sum_k q_k (s x + o)^k into monomials of x
  std::vector<double> coeffs(static_cast<std::size_t>(m), 0.0);
  std::vector<double> basis{1.0};  // (s x + o)^k coefficients
  for (Eigen::Index k = 0; k < m; ++k) {
    for (std::size_t d = 0; d < basis.size(); ++d) coeffs[d] += q[k] * basis[d];
    if (k + 1 < m) {
      std::vector<double> next(basis.size() + 1, 0.0);
      for (std::size_t d = 0; d < basis.size(); ++d) {
        next[d] += basis[d] * o;
        next[d + 1] += basis[d] * s;
      }
      basis = std::move(next);
    }
  }
  return coeffs;
}

} // namespace

ScalarPoly fit_poly(ActivationKind f, double l, double u, int order) {
  check_domain(f, l, u);
  if (order < 1) throw DomainError("fit_poly: order must be >= 1");

  ScalarPoly p;
  p.lo = l;
  p.hi = u;
  if (l == u) {
    p.coeffs = {act_eval(f, l)};
    return p;
  }

  const std::vector<double> xs = fit_grid(l, u);
  if (order == 1) {
    const double a = (act_eval(f, u) - act_eval(f, l)) / (u - l);
    p.coeffs = {0.0, a};
    center_offset(f, p, xs);
    return p;
  }

  p.coeffs = least_squares_fit(f, l, u, order, xs);
  center_offset(f, p, xs);
  // keep the higher-order candidate only if it actually tightens the bound,
  // so raising the order never makes the enclosure worse
  ScalarPoly lower = fit_poly(f, l, u, order - 1);
  if (generic_error(f, lower, l, u) < generic_error(f, p, l, u)) return lower;
  return p;
}

double invsqrt_error(double a, double b, double l, double u) {
  if (l <= 0.0) throw DomainError("invsqrt_error: domain must be strictly positive");
  if (l > u) throw DomainError("invsqrt_error: l > u");

  auto residual = [&](double x) { return std::abs(1.0 / std::sqrt(x) - (a * x + b)); };
  double d = std::max(residual(l), residual(u));
  if (a != 0.0) {
    const double xstar = std::cbrt(1.0 / (4.0 * a * a));
    if (xstar >= l && xstar <= u) d = std::max(d, residual(xstar));
  }
  return d;
}

double generic_error(ActivationKind f, const ScalarPoly& p, double l, double u,
                     const EncloseConfig& cfg) {
  check_domain(f, l, u);
  if (l == u) return std::abs(act_eval(f, l) - p.eval(l));
  if (f == ActivationKind::InvSqrt && p.degree() <= 1) {
    const double b = p.coeffs.empty() ? 0.0 : p.coeffs[0];
    const double a = p.coeffs.size() > 1 ? p.coeffs[1] : 0.0;
    return invsqrt_error(a, b, l, u);
  }

  const int k = std::max(cfg.grid_points, 2);
  std::vector<double> xs(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    xs[static_cast<std::size_t>(i)] = l + (u - l) * static_cast<double>(i) / static_cast<double>(k - 1);
  if (f == ActivationKind::Relu && l < 0.0 && u > 0.0) {
    xs.push_back(0.0);  // kink as a cell boundary, the bound is exact there
    std::sort(xs.begin(), xs.end());
  }

  std::vector<double> res(xs.size()), slope(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    res[i] = std::abs(act_eval(f, xs[i]) - p.eval(xs[i]));
    slope[i] = std::abs(act_deriv(f, xs[i]) - p.deriv_eval(xs[i]));
  }
  // per-cell padding: within one cell the residual moves at most half the
  // cell width times the local slope bound
  double d = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double cell = std::max(res[i], res[i + 1]) +
                        0.5 * (xs[i + 1] - xs[i]) * std::max(slope[i], slope[i + 1]) *
                            cfg.safety_factor;
    d = std::max(d, cell);
  }
  return d;
}

PolyZonotope poly_eval_set(const PolyZonotope& pz, std::span<const ScalarPoly> polys) {
  require(static_cast<Eigen::Index>(polys.size()) == pz.dim(),
          "poly_eval_set: one polynomial per coordinate required");
  const PolyZonotope x = pz.num_indep() > 0 ? promote_independent(pz) : pz;
  const Eigen::Index n = x.dim();

  int max_deg = 0;
  for (const ScalarPoly& p : polys) max_deg = std::max(max_deg, p.degree());

  auto coeff_vec = [&](int d) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& cs = polys[static_cast<std::size_t>(i)].coeffs;
      v[i] = d < static_cast<int>(cs.size()) ? cs[static_cast<std::size_t>(d)] : 0.0;
    }
    return v;
  };

  PolyZonotope out = PolyZonotope::point(coeff_vec(max_deg));
  for (int d = max_deg - 1; d >= 0; --d) {
    out = hadamard(out, x);
    out.c += coeff_vec(d);
  }
  return compact(out);
}

PolyZonotope poly_eval_set(const PolyZonotope& pz, const ScalarPoly& p) {
  return poly_eval_set(pz, std::span<const ScalarPoly>(&p, 1));
}

PolyZonotope enclose_elementwise(const PolyZonotope& pz, ActivationKind f,
                                 const EncloseConfig& cfg) {
  const PolyZonotope x = pz.num_indep() > 0 ? promote_independent(pz) : pz;
  const Eigen::Index n = x.dim();
  const IntervalVec bounds = interval_bounds(x);

  std::vector<ScalarPoly> polys(static_cast<std::size_t>(n));
  Vec errs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    polys[static_cast<std::size_t>(i)] = fit_poly(f, bounds.lo[i], bounds.hi[i], cfg.poly_order);
    errs[i] = generic_error(f, polys[static_cast<std::size_t>(i)], bounds.lo[i], bounds.hi[i], cfg);
  }

  PolyZonotope out = poly_eval_set(x, polys);
  if (cfg.suppress_error) return out;

  std::vector<Eigen::Index> nz;
  for (Eigen::Index i = 0; i < n; ++i)
    if (errs[i] > 0.0) nz.push_back(i);
  Mat gi(n, out.num_indep() + static_cast<Eigen::Index>(nz.size()));
  gi.leftCols(out.num_indep()) = out.GI;
  gi.rightCols(static_cast<Eigen::Index>(nz.size())).setZero();
  for (std::size_t j = 0; j < nz.size(); ++j)
    gi(nz[j], out.num_indep() + static_cast<Eigen::Index>(j)) = errs[nz[j]];
  out.GI = std::move(gi);
  return out;
}

} // namespace gcnreach
