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

#include "gcnreach/drivers.hpp"

#include <algorithm>
#include <chrono>
#include <random>

namespace gcnreach {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <typename F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

std::vector<CompareRow> run_compare(const Network& net, const UncertainGraph& g,
                                    const MatPolyZonotope& X, const SafetySpec& spec,
                                    const std::vector<int>& sweep, const VerifyConfig& cfg,
                                    int repeats, int enum_cap) {
  require(repeats >= 1, "run_compare: repeats must be positive");
  std::vector<CompareRow> rows;
  for (int k : sweep) {
    require(k >= 0 && k <= static_cast<int>(g.uncertain_edges.size()),
            "run_compare: sweep value exceeds available uncertain edges");
    UncertainGraph gk = g;
    gk.uncertain_edges.assign(g.uncertain_edges.begin(), g.uncertain_edges.begin() + k);
    gk.fixed_edges.insert(gk.fixed_edges.end(), g.uncertain_edges.begin() + k,
                          g.uncertain_edges.end());

    CompareRow row;
    row.uncertain_edges = k;

    EnumerateConfig ec;
    ec.verify = cfg;
    ec.cap = enum_cap;

    std::vector<double> t_ours, t_enum;
    for (int r = 0; r < repeats; ++r) {
      Verdict v;
      t_ours.push_back(timed([&] { v = verify(net, X, gk, spec, cfg); }));
      row.verdict_ours = v.status;
      Verdict ve;
      t_enum.push_back(timed([&] { ve = enumerate_verify(net, X, gk, spec, ec); }));
      row.verdict_enum = ve.status;
    }
    row.t_ours = median(std::move(t_ours));
    row.t_enum = median(std::move(t_enum));
    rows.push_back(row);
  }
  return rows;
}

AblateResult run_ablate(const Network& net, const UncertainGraph& g, const MatPolyZonotope& X,
                        const VerifyConfig& cfg, const std::vector<double>& rhos,
                        const std::vector<ReduceMethod>& methods) {
  AblateResult out;

  VerifyConfig full = cfg;
  full.reduce_rho = 0.0;
  const EnclosureResult yres = enclose_network(net, X, g, full);
  const PolyZonotope& y = yres.output_flat();

  VerifyConfig approx = full;
  approx.enclose.suppress_error = true;
  const EnclosureResult ares = enclose_network(net, X, g, approx);
  out.v_rel_error = rel_volume(y, ares.output_flat());

  for (ReduceMethod method : methods) {
    for (double rho : rhos) {
      AblateRow row;
      row.method = method;
      row.rho = rho;
      PolyZonotope reduced;
      row.seconds = timed([&] { reduced = reduce_order(y, rho, method); });
      row.v_rel = rel_volume(reduced, y);
      row.generators = reduced.num_dep() + reduced.num_indep();
      out.reductions.push_back(row);
    }
  }
  return out;
}

SampleClouds run_sample(const Network& net, const UncertainGraph& g, const MatPolyZonotope& X,
                        int count, Eigen::Index dim_a, Eigen::Index dim_b, int edge_index,
                        std::uint64_t seed, const VerifyConfig& cfg) {
  require(count >= 0, "run_sample: count must be nonnegative");
  require(edge_index >= 0 && edge_index < static_cast<int>(g.uncertain_edges.size()),
          "run_sample: edge index out of range");

  const EnclosureResult res = enclose_network(net, X, g, cfg);
  const PolyZonotope& y = res.output_flat();
  const MatPolyZonotope A = build_uncertain_adjacency(g);
  const MatPolyZonotope P = message_passing_enclosure(A, cfg.enclose);
  const PolyZonotope& pflat = P.vectorize();
  const PolyZonotope& xflat = X.vectorize();

  const FactorId edge_id = res.edge_ids[static_cast<std::size_t>(edge_index)];
  const PolyZonotope y_pos = fix_factor(y, edge_id, 1.0);
  const PolyZonotope y_neg = fix_factor(y, edge_id, -1.0);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  auto cloud = [&](const PolyZonotope& set, Eigen::Index da, Eigen::Index db) {
    require(da >= 0 && da < set.dim() && db >= 0 && db < set.dim(),
            "run_sample: projection dimension out of range");
    Mat points(count, 2);
    Vec alpha(set.num_factors()), beta(set.num_indep());
    for (int r = 0; r < count; ++r) {
      for (Eigen::Index i = 0; i < alpha.size(); ++i) alpha[i] = uni(rng);
      for (Eigen::Index i = 0; i < beta.size(); ++i) beta[i] = uni(rng);
      const Vec p = sample(set, alpha, beta);
      points(r, 0) = p[da];
      points(r, 1) = p[db];
    }
    return points;
  };

  SampleClouds clouds;
  clouds.Y = cloud(y, dim_a, dim_b);
  clouds.Y_fix_present = cloud(y_pos, dim_a, dim_b);
  clouds.Y_fix_absent = cloud(y_neg, dim_a, dim_b);
  clouds.X = cloud(xflat, std::min(dim_a, xflat.dim() - 1), std::min(dim_b, xflat.dim() - 1));
  clouds.P = cloud(pflat, std::min(dim_a, pflat.dim() - 1), std::min(dim_b, pflat.dim() - 1));
  return clouds;
}

} // namespace gcnreach
