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

#include "gcnreach/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <queue>
#include <random>
#include <thread>

namespace gcnreach {

const char* to_string(Status s) {
  switch (s) {
    case Status::Verified: return "VERIFIED";
    case Status::Unknown: return "UNKNOWN";
    case Status::Falsified: return "FALSIFIED";
  }
  return "?";
}

MatPolyZonotope build_uncertain_adjacency(const UncertainGraph& g) {
  g.validate();
  const int n = g.num_nodes;
  const auto h = static_cast<Eigen::Index>(g.uncertain_edges.size());

  PolyZonotope flat;
  flat.c = Vec::Zero(static_cast<Eigen::Index>(n) * n);
  flat.G = Mat::Zero(static_cast<Eigen::Index>(n) * n, h);
  flat.GI = Mat(static_cast<Eigen::Index>(n) * n, 0);
  flat.E = ExpMat::Identity(h, h);
  flat.id = fresh_ids(static_cast<std::size_t>(h));

  auto entry = [n](int i, int j) { return static_cast<Eigen::Index>(j) * n + i; };
  for (const Edge& e : g.fixed_edges) {
    flat.c[entry(e.i, e.j)] = e.weight;
    if (g.undirected) flat.c[entry(e.j, e.i)] = e.weight;
  }
  for (Eigen::Index k = 0; k < h; ++k) {
    const Edge& e = g.uncertain_edges[static_cast<std::size_t>(k)];
    flat.c[entry(e.i, e.j)] = 0.5 * e.weight;
    flat.G(entry(e.i, e.j), k) = 0.5 * e.weight;
    if (g.undirected) {
      flat.c[entry(e.j, e.i)] = 0.5 * e.weight;
      flat.G(entry(e.j, e.i), k) = 0.5 * e.weight;
    }
  }
  return MatPolyZonotope::reshape(std::move(flat), n, n);
}

MatPolyZonotope message_passing_enclosure(const MatPolyZonotope& A, const EncloseConfig& cfg) {
  require(A.rows() == A.cols(), "message_passing_enclosure: adjacency must be square");
  const Eigen::Index n = A.rows();

  MatPolyZonotope At = mpz_affine_left(Mat::Identity(n, n), A, Mat::Identity(n, n));
  if (At.num_indep() > 0) At = promote_independent(At);

  // degree vector by a ones-row map, then transpose into a column
  MatPolyZonotope deg_row = mpz_affine_left(Mat::Ones(1, n), At);
  PolyZonotope deg = transpose(deg_row).vectorize();

  const IntervalVec deg_bounds = interval_bounds(deg);
  if (deg_bounds.lo.minCoeff() <= 0.0)
    throw DomainError("message_passing_enclosure: degree lower bound not positive");

  PolyZonotope dinv = enclose_elementwise(deg, ActivationKind::InvSqrt, cfg);
  if (dinv.num_indep() > 0) dinv = promote_independent(dinv);

  // embed the diagonal entries into the n x n zero matrix
  Mat sel = Mat::Zero(n * n, n);
  for (Eigen::Index i = 0; i < n; ++i) sel(i * (n + 1), i) = 1.0;
  MatPolyZonotope dmat = MatPolyZonotope::reshape(affine_map(sel, dinv), n, n);

  return mpz_matmul(mpz_matmul(dmat, At), dmat);
}

MatPolyZonotope enclose_gc_layer(const MatPolyZonotope& H, const MatPolyZonotope& P,
                                 const Mat& W) {
  require(P.rows() == P.cols() && P.cols() == H.rows(), "enclose_gc_layer: shape mismatch");
  require(W.rows() == H.cols(), "enclose_gc_layer: weight shape mismatch");
  MatPolyZonotope Hp = H.num_indep() > 0 ? promote_independent(H) : H;
  MatPolyZonotope Pp = P.num_indep() > 0 ? promote_independent(P) : P;
  return mpz_affine_right(mpz_matmul(Pp, Hp), W);
}

PolyZonotope enclose_pool_sum(const MatPolyZonotope& H) {
  return transpose(mpz_affine_left(Mat::Ones(1, H.rows()), H)).vectorize();
}

const PolyZonotope& EnclosureResult::output_flat() const {
  return graph_level ? graph_set : node_set.vectorize();
}

namespace {

MatPolyZonotope act_layer_matrix(const MatPolyZonotope& H, ActivationKind fn,
                                 const VerifyConfig& cfg) {
  PolyZonotope v = enclose_elementwise(H.vectorize(), fn, cfg.enclose);
  if (cfg.reduce_rho >= 1.0) v = reduce_order(v, cfg.reduce_rho, cfg.reduce_method);
  return MatPolyZonotope::reshape(std::move(v), H.rows(), H.cols());
}

EnclosureResult run_layers(const Network& net, MatPolyZonotope H, const MatPolyZonotope& P,
                           const VerifyConfig& cfg) {
  EnclosureResult res;
  bool pooled = false;
  PolyZonotope v;

  for (const LayerSpec& l : net.layers) {
    if (const auto* gc = std::get_if<GcLayer>(&l)) {
      H = enclose_gc_layer(H, P, gc->W);
    } else if (const auto* act = std::get_if<ActLayer>(&l)) {
      if (pooled) {
        v = enclose_elementwise(v, act->fn, cfg.enclose);
        if (cfg.reduce_rho >= 1.0) v = reduce_order(v, cfg.reduce_rho, cfg.reduce_method);
      } else {
        H = act_layer_matrix(H, act->fn, cfg);
      }
    } else if (std::holds_alternative<PoolLayer>(l)) {
      v = enclose_pool_sum(H);
      pooled = true;
    } else if (const auto* lin = std::get_if<LinLayer>(&l)) {
      v = affine_map(lin->W, v, lin->b);
    }
    res.dep_generators_per_layer.push_back(pooled ? v.num_dep() : H.num_dep());
  }

  res.graph_level = pooled;
  if (pooled)
    res.graph_set = std::move(v);
  else
    res.node_set = std::move(H);
  return res;
}

} // namespace

EnclosureResult enclose_network(const Network& net, const MatPolyZonotope& X,
                                const UncertainGraph& g, const VerifyConfig& cfg) {
  net.validate();
  g.validate();
  require(X.rows() == g.num_nodes, "enclose_network: feature rows != node count");
  require(X.cols() == net.input_features(), "enclose_network: feature columns != input width");

  MatPolyZonotope A = build_uncertain_adjacency(g);
  IdVec edge_ids = A.ids();
  MatPolyZonotope P = message_passing_enclosure(A, cfg.enclose);
  EnclosureResult res = run_layers(net, X, P, cfg);
  res.edge_ids = std::move(edge_ids);
  return res;
}

EnclosureResult enclose_network_with_adjacency(const Network& net, const MatPolyZonotope& X,
                                               const MatPolyZonotope& A,
                                               const VerifyConfig& cfg) {
  net.validate();
  require(A.rows() == A.cols() && A.rows() == X.rows(),
          "enclose_network_with_adjacency: shape mismatch");
  IdVec edge_ids = A.ids();
  MatPolyZonotope P = message_passing_enclosure(A, cfg.enclose);
  EnclosureResult res = run_layers(net, X, P, cfg);
  res.edge_ids = std::move(edge_ids);
  return res;
}

namespace {

// Lower bounds of D * flat for a stack of difference/selection rows.
Vec map_lower_bounds(const Mat& D, const PolyZonotope& flat) {
  return interval_bounds(affine_map(D, flat)).lo;
}

} // namespace

Verdict check_spec(const EnclosureResult& Y, const SafetySpec& spec) {
  Verdict verdict;
  const PolyZonotope& flat = Y.output_flat();

  if (const auto* rb = std::get_if<RobustnessSpec>(&spec.body)) {
    Eigen::Index classes = 0;
    Eigen::Index stride = 0;  // flat index of (node, class j) = offset + j*stride
    Eigen::Index offset = 0;
    if (rb->node) {
      require(!Y.graph_level, "check_spec: node scope needs a node-level output");
      const Eigen::Index n = Y.node_set.rows();
      require(*rb->node >= 0 && *rb->node < n, "check_spec: node index out of range");
      classes = Y.node_set.cols();
      stride = n;
      offset = *rb->node;
    } else {
      require(Y.graph_level, "check_spec: graph scope needs a graph-level output");
      classes = flat.dim();
      stride = 1;
    }
    require(rb->target >= 0 && rb->target < classes, "check_spec: target class out of range");

    if (classes == 1) {  // nothing to dominate
      verdict.status = Status::Verified;
      return verdict;
    }
    Mat D = Mat::Zero(classes - 1, flat.dim());
    Eigen::Index r = 0;
    for (Eigen::Index j = 0; j < classes; ++j) {
      if (j == rb->target) continue;
      D(r, offset + rb->target * stride) = 1.0;
      D(r, offset + j * stride) = -1.0;
      ++r;
    }
    verdict.status =
        (map_lower_bounds(D, flat).minCoeff() > 0.0) ? Status::Verified : Status::Unknown;
    return verdict;
  }

  const auto& hs = std::get<HalfspaceSpec>(spec.body);
  require(hs.A.cols() == flat.dim(), "check_spec: halfspace dimension mismatch");
  require(hs.A.rows() == hs.b.size(), "check_spec: halfspace row count mismatch");
  if (hs.A.rows() == 0) {  // empty unsafe set
    verdict.status = Status::Verified;
    return verdict;
  }
  const Vec lb = map_lower_bounds(hs.A, flat);
  for (Eigen::Index i = 0; i < lb.size(); ++i) {
    if (lb[i] > hs.b[i]) {
      verdict.status = Status::Verified;
      return verdict;
    }
  }
  verdict.status = Status::Unknown;
  return verdict;
}

std::pair<MatPolyZonotope, MatPolyZonotope> subgraph_select(const MatPolyZonotope& H,
                                                            const MatPolyZonotope& P,
                                                            const std::vector<int>& keep) {
  require(!keep.empty(), "subgraph_select: empty node subset");
  const Eigen::Index n = H.rows();
  Mat M = Mat::Zero(static_cast<Eigen::Index>(keep.size()), n);
  for (std::size_t r = 0; r < keep.size(); ++r) {
    require(keep[r] >= 0 && keep[r] < n, "subgraph_select: node index out of range");
    M(static_cast<Eigen::Index>(r), keep[r]) = 1.0;
  }
  MatPolyZonotope Hs = mpz_affine_left(M, H);
  MatPolyZonotope Ps = mpz_affine_left(M, mpz_affine_right(P, M.transpose()));
  return {std::move(Hs), std::move(Ps)};
}

std::vector<int> khop_neighborhood(const UncertainGraph& g, int root, int hops) {
  require(root >= 0 && root < g.num_nodes, "khop_neighborhood: root out of range");
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.num_nodes));
  auto link = [&](const Edge& e) {
    adj[static_cast<std::size_t>(e.i)].push_back(e.j);
    adj[static_cast<std::size_t>(e.j)].push_back(e.i);
  };
  for (const Edge& e : g.fixed_edges) link(e);
  for (const Edge& e : g.uncertain_edges) link(e);

  std::vector<int> dist(static_cast<std::size_t>(g.num_nodes), -1);
  std::queue<int> q;
  dist[static_cast<std::size_t>(root)] = 0;
  q.push(root);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    if (dist[static_cast<std::size_t>(u)] >= hops) continue;
    for (int w : adj[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
        q.push(w);
      }
    }
  }
  std::vector<int> out;
  for (int v = 0; v < g.num_nodes; ++v)
    if (dist[static_cast<std::size_t>(v)] >= 0) out.push_back(v);
  return out;
}

namespace {

Eigen::Index count_uncertain(const UncertainGraph& g) {
  return static_cast<Eigen::Index>(g.uncertain_edges.size());
}

// Specification restricted to a single node of a node-level output.
SafetySpec localize_spec(const SafetySpec& spec, int node, int num_nodes, Eigen::Index classes) {
  if (const auto* rb = std::get_if<RobustnessSpec>(&spec.body)) {
    require(rb->node && *rb->node == node,
            "verify: subgraph reduction needs a specification scoped to the selected node");
    return SafetySpec{RobustnessSpec{0, rb->target}};
  }
  const auto& hs = std::get<HalfspaceSpec>(spec.body);
  require(hs.A.cols() == static_cast<Eigen::Index>(num_nodes) * classes,
          "verify: halfspace dimension mismatch");
  Mat A = Mat::Zero(hs.A.rows(), classes);
  for (Eigen::Index r = 0; r < hs.A.rows(); ++r) {
    for (Eigen::Index c = 0; c < hs.A.cols(); ++c) {
      if (hs.A(r, c) == 0.0) continue;
      require(c % num_nodes == node,
              "verify: subgraph reduction needs a specification local to the selected node");
      A(r, c / num_nodes) = hs.A(r, c);
    }
  }
  return SafetySpec{HalfspaceSpec{std::move(A), hs.b}};
}

UncertainGraph induced_subgraph(const UncertainGraph& g, const std::vector<int>& keep,
                                std::vector<int>& old_to_new) {
  old_to_new.assign(static_cast<std::size_t>(g.num_nodes), -1);
  for (std::size_t r = 0; r < keep.size(); ++r)
    old_to_new[static_cast<std::size_t>(keep[r])] = static_cast<int>(r);

  UncertainGraph sub;
  sub.num_nodes = static_cast<int>(keep.size());
  sub.undirected = g.undirected;
  auto remap = [&](const std::vector<Edge>& in, std::vector<Edge>& out) {
    for (const Edge& e : in) {
      const int a = old_to_new[static_cast<std::size_t>(e.i)];
      const int b = old_to_new[static_cast<std::size_t>(e.j)];
      if (a >= 0 && b >= 0) out.push_back(Edge{a, b, e.weight});
    }
  };
  remap(g.fixed_edges, sub.fixed_edges);
  remap(g.uncertain_edges, sub.uncertain_edges);
  return sub;
}

} // namespace

EnclosureResult enclose_node_subgraph(const Network& net, const MatPolyZonotope& X,
                                      const UncertainGraph& g, int node,
                                      const VerifyConfig& cfg) {
  net.validate();
  g.validate();
  require(!net.graph_level(), "enclose_node_subgraph: requires a node-level network");
  require(node >= 0 && node < g.num_nodes, "enclose_node_subgraph: node out of range");
  require(X.rows() == g.num_nodes, "enclose_node_subgraph: feature rows != node count");
  const int kappa = net.message_passing_steps();

  std::vector<int> K = khop_neighborhood(g, node, kappa + 1);
  std::vector<int> old_to_new;
  const UncertainGraph sub = induced_subgraph(g, K, old_to_new);

  Mat M = Mat::Zero(static_cast<Eigen::Index>(K.size()), g.num_nodes);
  for (std::size_t r = 0; r < K.size(); ++r)
    M(static_cast<Eigen::Index>(r), K[static_cast<std::size_t>(r)]) = 1.0;
  MatPolyZonotope H = mpz_affine_left(M, X);

  MatPolyZonotope A = build_uncertain_adjacency(sub);
  IdVec edge_ids = A.ids();
  MatPolyZonotope P = message_passing_enclosure(A, cfg.enclose);

  EnclosureResult res;
  std::vector<int> cur = K;  // original node indices of the current rows
  int done = 0;
  for (const LayerSpec& l : net.layers) {
    if (const auto* gc = std::get_if<GcLayer>(&l)) {
      H = enclose_gc_layer(H, P, gc->W);
      ++done;
      const int radius = done == kappa ? 0 : kappa - done;
      std::vector<int> nxt = khop_neighborhood(g, node, radius);
      std::vector<int> positions;
      positions.reserve(nxt.size());
      for (int v : nxt) {
        auto it = std::lower_bound(cur.begin(), cur.end(), v);
        if (it != cur.end() && *it == v)
          positions.push_back(static_cast<int>(it - cur.begin()));
      }
      auto [Hs, Ps] = subgraph_select(H, P, positions);
      H = std::move(Hs);
      P = std::move(Ps);
      cur = std::move(nxt);
    } else if (const auto* act = std::get_if<ActLayer>(&l)) {
      H = act_layer_matrix(H, act->fn, cfg);
    }
    res.dep_generators_per_layer.push_back(H.num_dep());
  }

  res.graph_level = false;
  res.node_set = std::move(H);
  res.edge_ids = std::move(edge_ids);
  return res;
}

Verdict verify(const Network& net, const MatPolyZonotope& X, const UncertainGraph& g,
               const SafetySpec& spec, const VerifyConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  net.validate();
  g.validate();

  Verdict verdict;
  EnclosureResult res;
  if (cfg.subgraph_node) {
    const int node = *cfg.subgraph_node;
    res = enclose_node_subgraph(net, X, g, node, cfg);
    const SafetySpec local = localize_spec(spec, node, g.num_nodes, res.node_set.cols());
    verdict = check_spec(res, local);
  } else {
    res = enclose_network(net, X, g, cfg);
    verdict = check_spec(res, spec);
  }
  verdict.diag.dep_generators_per_layer = res.dep_generators_per_layer;
  verdict.diag.output_dep_generators = res.output_dep_generators();
  verdict.diag.output_indep_generators = res.output_flat().num_indep();

  verdict.diag.generator_budget = generator_budget(net, g, X.num_dep());
  verdict.diag.order_reduction = cfg.reduce_rho >= 1.0;
  verdict.diag.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return verdict;
}

bool violates(const NetOutput& out, const SafetySpec& spec) {
  if (const auto* rb = std::get_if<RobustnessSpec>(&spec.body)) {
    Vec scores;
    if (rb->node) {
      if (out.graph_level || *rb->node >= out.node.rows()) return false;
      scores = out.node.row(*rb->node).transpose();
    } else {
      if (!out.graph_level) return false;
      scores = out.graph;
    }
    for (Eigen::Index j = 0; j < scores.size(); ++j)
      if (j != rb->target && scores[j] >= scores[rb->target]) return true;
    return false;
  }
  const auto& hs = std::get<HalfspaceSpec>(spec.body);
  const Vec y = out.flat();
  if (hs.A.cols() != y.size() || hs.A.rows() == 0) return false;
  return ((hs.A * y).array() <= hs.b.array()).all();
}

std::optional<Witness> falsify_search(const Network& net, const MatPolyZonotope& X,
                                      const UncertainGraph& g, const SafetySpec& spec,
                                      int samples_per_graph, std::uint64_t seed) {
  const Eigen::Index m = count_uncertain(g);
  if (m > 20) return std::nullopt;  // witness search only at enumerable sizes
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  const Eigen::Index p = X.num_factors();
  const Eigen::Index q = X.num_indep();
  for (EdgeMask mask = 0; mask < (EdgeMask{1} << m); ++mask) {
    for (int s = 0; s < samples_per_graph; ++s) {
      Vec alpha(p), beta(q);
      if (s == 0) {
        alpha.setZero();
        beta.setZero();
      } else if (s % 2 == 1) {  // corner
        for (Eigen::Index i = 0; i < p; ++i) alpha[i] = coin(rng) ? 1.0 : -1.0;
        for (Eigen::Index i = 0; i < q; ++i) beta[i] = coin(rng) ? 1.0 : -1.0;
      } else {
        for (Eigen::Index i = 0; i < p; ++i) alpha[i] = uni(rng);
        for (Eigen::Index i = 0; i < q; ++i) beta[i] = uni(rng);
      }
      Mat Xs = sample(X, alpha, beta);
      if (violates(forward(net, Xs, g, mask), spec)) return Witness{mask, std::move(Xs)};
    }
  }
  return std::nullopt;
}

namespace {

int thread_cap() {
  if (const char* s = std::getenv("GCNREACH_THREADS")) {
    const int v = std::atoi(s);
    if (v >= 1) return v;
  }
  return 1;
}

} // namespace

Verdict enumerate_verify(const Network& net, const MatPolyZonotope& X, const UncertainGraph& g,
                         const SafetySpec& spec, const EnumerateConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  g.validate();
  const Eigen::Index m = count_uncertain(g);
  if (m > cfg.cap) throw DomainError("enumerate_verify: uncertain edge count exceeds cap");
  const EdgeMask total = EdgeMask{1} << m;

  std::vector<Status> statuses(static_cast<std::size_t>(total), Status::Unknown);
  auto solve_one = [&](EdgeMask mask) {
    UncertainGraph fixed = g;
    fixed.uncertain_edges.clear();
    for (Eigen::Index k = 0; k < m; ++k)
      if (mask & (EdgeMask{1} << k))
        fixed.fixed_edges.push_back(g.uncertain_edges[static_cast<std::size_t>(k)]);
    VerifyConfig vc = cfg.verify;
    vc.subgraph_node.reset();
    EnclosureResult res = enclose_network(net, X, fixed, vc);
    statuses[static_cast<std::size_t>(mask)] = check_spec(res, spec).status;
  };

  const int threads = std::min<int>(thread_cap(), static_cast<int>(total));
  if (threads <= 1) {
    for (EdgeMask mask = 0; mask < total; ++mask) solve_one(mask);
  } else {
    std::vector<std::thread> pool;
    std::atomic<EdgeMask> next{0};
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (EdgeMask mask = next.fetch_add(1); mask < total; mask = next.fetch_add(1))
          solve_one(mask);
      });
    }
    for (std::thread& th : pool) th.join();
  }

  Verdict verdict;
  verdict.diag.subproblems = total;
  verdict.diag.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (std::all_of(statuses.begin(), statuses.end(),
                  [](Status s) { return s == Status::Verified; })) {
    verdict.status = Status::Verified;
    return verdict;
  }
  if (auto w = falsify_search(net, X, g, spec, cfg.falsify_samples, cfg.seed)) {
    verdict.status = Status::Falsified;
    verdict.witness = std::move(w);
  } else {
    verdict.status = Status::Unknown;
  }
  verdict.diag.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return verdict;
}

namespace {

struct IntervalMatrix {
  Mat lo, hi;
};

IntervalMatrix imul(const IntervalMatrix& A, const IntervalMatrix& B) {
  const Eigen::Index n = A.lo.rows(), k = A.lo.cols(), m = B.lo.cols();
  IntervalMatrix C{Mat::Zero(n, m), Mat::Zero(n, m)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      double lo = 0.0, hi = 0.0;
      for (Eigen::Index t = 0; t < k; ++t) {
        const double p1 = A.lo(i, t) * B.lo(t, j);
        const double p2 = A.lo(i, t) * B.hi(t, j);
        const double p3 = A.hi(i, t) * B.lo(t, j);
        const double p4 = A.hi(i, t) * B.hi(t, j);
        lo += std::min(std::min(p1, p2), std::min(p3, p4));
        hi += std::max(std::max(p1, p2), std::max(p3, p4));
      }
      C.lo(i, j) = lo;
      C.hi(i, j) = hi;
    }
  }
  return C;
}

// interval matrix times point matrix (sign split)
IntervalMatrix imul_point(const IntervalMatrix& A, const Mat& W) {
  const Mat wpos = W.cwiseMax(0.0);
  const Mat wneg = W.cwiseMin(0.0);
  return IntervalMatrix{A.lo * wpos + A.hi * wneg, A.hi * wpos + A.lo * wneg};
}

IntervalMatrix point_imul(const Mat& W, const IntervalMatrix& A) {
  const Mat wpos = W.cwiseMax(0.0);
  const Mat wneg = W.cwiseMin(0.0);
  return IntervalMatrix{wpos * A.lo + wneg * A.hi, wpos * A.hi + wneg * A.lo};
}

} // namespace

std::pair<Mat, Mat> ibp_message_passing(const UncertainGraph& g) {
  g.validate();
  const int n = g.num_nodes;

  // degree intervals: self-loop plus fixed weights, plus [0, w] per uncertain
  // edge; degrees are column sums, so a directed arc only counts at its head
  Vec deg_lo = Vec::Ones(n);
  Vec deg_hi = Vec::Ones(n);
  auto add_deg = [&](const Edge& e, bool certain) {
    if (certain) {
      deg_lo[e.j] += e.weight;
      if (g.undirected) deg_lo[e.i] += e.weight;
    }
    deg_hi[e.j] += e.weight;
    if (g.undirected) deg_hi[e.i] += e.weight;
  };
  for (const Edge& e : g.fixed_edges) add_deg(e, true);
  for (const Edge& e : g.uncertain_edges) add_deg(e, false);

  const Vec dinv_lo = deg_hi.array().rsqrt();
  const Vec dinv_hi = deg_lo.array().rsqrt();

  IntervalMatrix At{Mat::Identity(n, n), Mat::Identity(n, n)};
  for (const Edge& e : g.fixed_edges) {
    At.lo(e.i, e.j) = At.hi(e.i, e.j) = e.weight;
    if (g.undirected) At.lo(e.j, e.i) = At.hi(e.j, e.i) = e.weight;
  }
  for (const Edge& e : g.uncertain_edges) {
    At.hi(e.i, e.j) = e.weight;
    if (g.undirected) At.hi(e.j, e.i) = e.weight;
  }

  Mat Plo = Mat::Zero(n, n);
  Mat Phi = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // all three factors are nonnegative
      Plo(i, j) = dinv_lo[i] * At.lo(i, j) * dinv_lo[j];
      Phi(i, j) = dinv_hi[i] * At.hi(i, j) * dinv_hi[j];
    }
  }
  return {std::move(Plo), std::move(Phi)};
}

IntervalVec ibp_enclose(const Network& net, const Mat& Xlo, const Mat& Xhi,
                        const UncertainGraph& g) {
  net.validate();
  g.validate();
  require(Xlo.rows() == g.num_nodes && Xlo.rows() == Xhi.rows() && Xlo.cols() == Xhi.cols(),
          "ibp_enclose: input shape mismatch");

  auto [Plo, Phi] = ibp_message_passing(g);
  IntervalMatrix P{std::move(Plo), std::move(Phi)};

  IntervalMatrix H{Xlo, Xhi};
  bool pooled = false;
  IntervalMatrix h;  // column vector after pooling

  for (const LayerSpec& l : net.layers) {
    if (const auto* gc = std::get_if<GcLayer>(&l)) {
      H = imul_point(imul(P, H), gc->W);
    } else if (const auto* act = std::get_if<ActLayer>(&l)) {
      IntervalMatrix& T = pooled ? h : H;
      for (Eigen::Index i = 0; i < T.lo.size(); ++i) {
        T.lo.data()[i] = act_eval(act->fn, T.lo.data()[i]);
        T.hi.data()[i] = act_eval(act->fn, T.hi.data()[i]);
      }
    } else if (std::holds_alternative<PoolLayer>(l)) {
      h = IntervalMatrix{H.lo.colwise().sum().transpose(), H.hi.colwise().sum().transpose()};
      pooled = true;
    } else if (const auto* lin = std::get_if<LinLayer>(&l)) {
      h = point_imul(lin->W, h);
      h.lo += lin->b;
      h.hi += lin->b;
    }
  }

  IntervalVec out;
  if (pooled) {
    out.lo = h.lo.col(0);
    out.hi = h.hi.col(0);
  } else {
    out.lo = Eigen::Map<const Vec>(H.lo.data(), H.lo.size());
    out.hi = Eigen::Map<const Vec>(H.hi.data(), H.hi.size());
  }
  return out;
}

double generator_budget(Eigen::Index h_e, Eigen::Index h_x, int kappa, int nu, int num_nodes,
                        Eigen::Index c_max, Eigen::Index n_max) {
  const double head = std::pow(static_cast<double>(h_e), 3.0 * kappa) *
                      (static_cast<double>(h_x) + static_cast<double>(num_nodes) * static_cast<double>(c_max));
  const double tail = static_cast<double>(std::max(nu - 2 * kappa, 0)) * static_cast<double>(n_max);
  return head + tail;
}

double generator_budget(const Network& net, const UncertainGraph& g, Eigen::Index h_x) {
  Eigen::Index c_max = 0;
  Eigen::Index n_max = 0;
  bool pooled = false;
  Eigen::Index width = net.input_features();
  for (const LayerSpec& l : net.layers) {
    if (const auto* gc = std::get_if<GcLayer>(&l)) {
      width = gc->W.cols();
      c_max = std::max(c_max, width);
    } else if (const auto* lin = std::get_if<LinLayer>(&l)) {
      width = lin->W.rows();
      n_max = std::max(n_max, width);
    } else if (std::holds_alternative<PoolLayer>(l)) {
      pooled = true;
    } else if (pooled) {
      n_max = std::max(n_max, width);
    }
  }
  return generator_budget(static_cast<Eigen::Index>(g.uncertain_edges.size()), h_x,
                          net.message_passing_steps(), net.num_layers(), g.num_nodes, c_max,
                          n_max);
}

} // namespace gcnreach
