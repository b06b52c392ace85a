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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gcnreach/instance_gen.hpp"
#include "gcnreach/serialization.hpp"
#include "gcnreach/verify.hpp"
#include "support.hpp"

#include <cmath>

using namespace gcnreach;
using namespace gcnreach::testing;

namespace {

UncertainGraph triangle() {
  UncertainGraph g;
  g.num_nodes = 3;
  g.fixed_edges = {Edge{0, 1}, Edge{1, 2}};
  g.uncertain_edges = {Edge{0, 2}};
  return g;
}

Network two_gc_identity() {
  Network net;
  net.layers.push_back(GcLayer{Mat::Identity(2, 2)});
  net.layers.push_back(GcLayer{Mat::Identity(2, 2)});
  return net;
}

// node-0 features in [0.9,1.1]^2, nodes 1 and 2 fixed at (1,1)
MatPolyZonotope triangle_input() {
  Vec lo(6), hi(6);
  lo << 0.9, 1.0, 1.0, 0.9, 1.0, 1.0;
  hi << 1.1, 1.0, 1.0, 1.1, 1.0, 1.0;
  return MatPolyZonotope::reshape(from_interval(lo, hi), 3, 2);
}

Vec flatten(const Mat& M) { return Eigen::Map<const Vec>(M.data(), M.size()); }

} // namespace

TEST_CASE("build_uncertain_adjacency") {
  SUBCASE("no uncertain edges yields the point binary adjacency") {
    UncertainGraph g = triangle();
    g.fixed_edges.push_back(g.uncertain_edges[0]);
    g.uncertain_edges.clear();
    MatPolyZonotope A = build_uncertain_adjacency(g);
    CHECK(A.num_dep() == 0);
    Mat want(3, 3);
    want << 0, 1, 1, 1, 0, 1, 1, 1, 0;
    CHECK(A.center().isApprox(want));
  }

  SUBCASE("uncertain edge becomes a half-weight generator") {
    MatPolyZonotope A = build_uncertain_adjacency(triangle());
    CHECK(A.num_dep() == 1);
    CHECK(A.center()(0, 2) == doctest::Approx(0.5));
    CHECK(A.center()(2, 0) == doctest::Approx(0.5));
    Mat g0 = A.dep_slice(0);
    CHECK(g0(0, 2) == doctest::Approx(0.5));
    CHECK(g0(2, 0) == doctest::Approx(0.5));
    CHECK(g0.cwiseAbs().sum() == doctest::Approx(1.0));

    Vec plus(1), minus(1);
    plus << 1.0;
    minus << -1.0;
    CHECK(sample(A, plus)(0, 2) == doctest::Approx(1.0));   // edge present
    CHECK(sample(A, minus)(0, 2) == doctest::Approx(0.0));  // edge absent
  }
}

TEST_CASE("message_passing_enclosure") {
  SUBCASE("fixed graph reduces to the exact point matrix") {
    UncertainGraph g = triangle();
    g.fixed_edges.push_back(g.uncertain_edges[0]);
    g.uncertain_edges.clear();
    MatPolyZonotope P = message_passing_enclosure(build_uncertain_adjacency(g));
    CHECK(P.num_dep() == 0);
    CHECK(P.num_indep() == 0);
    CHECK(P.center().isApprox(message_passing_exact(g, 0), 1e-12));
  }

  SUBCASE("plugging the edge factor recovers each concrete graph") {
    UncertainGraph g = triangle();
    MatPolyZonotope A = build_uncertain_adjacency(g);
    const FactorId edge = A.ids()[0];
    for (int order : {1, 2}) {
      EncloseConfig cfg;
      cfg.poly_order = order;
      MatPolyZonotope P = message_passing_enclosure(A, cfg);
      const PolyZonotope pflat = P.vectorize();
      IntervalVec present = interval_bounds(fix_factor(pflat, edge, 1.0));
      IntervalVec absent = interval_bounds(fix_factor(pflat, edge, -1.0));
      CHECK(present.contains(flatten(message_passing_exact(g, 0b1)), 1e-9));
      CHECK(absent.contains(flatten(message_passing_exact(g, 0b0)), 1e-9));
    }
  }

  SUBCASE("all binary corners of a multi-edge graph are enclosed") {
    Rng rng(79);
    UncertainGraph g;
    g.num_nodes = 5;
    g.fixed_edges = {Edge{0, 1}, Edge{1, 2}, Edge{2, 3}, Edge{3, 4}};
    g.uncertain_edges = {Edge{0, 2}, Edge{1, 3}, Edge{0, 4}};
    MatPolyZonotope A = build_uncertain_adjacency(g);
    MatPolyZonotope P = message_passing_enclosure(A);
    const PolyZonotope pflat = P.vectorize();
    for (EdgeMask mask = 0; mask < 8; ++mask) {
      PolyZonotope fixed = pflat;
      for (int k = 0; k < 3; ++k)
        fixed = fix_factor(fixed, A.ids()[static_cast<std::size_t>(k)],
                           (mask >> k) & 1 ? 1.0 : -1.0);
      CHECK(interval_bounds(fixed).contains(flatten(message_passing_exact(g, mask)), 1e-9));
    }
  }

  SUBCASE("explicit constrained adjacency: one of two edges must be present") {
    // center and generator encode: edge (0,1) xor edge (0,2), edge (1,2) fixed
    PolyZonotope flat;
    flat.c = Vec::Zero(9);
    flat.G = Mat::Zero(9, 1);
    auto at = [](int i, int j) { return 3 * j + i; };
    flat.c[at(0, 1)] = flat.c[at(1, 0)] = 0.5;
    flat.c[at(0, 2)] = flat.c[at(2, 0)] = 0.5;
    flat.c[at(1, 2)] = flat.c[at(2, 1)] = 1.0;
    flat.G(at(0, 1), 0) = flat.G(at(1, 0), 0) = -0.5;
    flat.G(at(0, 2), 0) = flat.G(at(2, 0), 0) = 0.5;
    flat.GI = Mat(9, 0);
    flat.E = ExpMat::Ones(1, 1);
    flat.id = {fresh_id()};
    MatPolyZonotope A = MatPolyZonotope::reshape(flat, 3, 3);

    MatPolyZonotope P = message_passing_enclosure(A);
    // alpha = +1: edge (0,2) present, (0,1) absent
    UncertainGraph gp;
    gp.num_nodes = 3;
    gp.fixed_edges = {Edge{0, 2}, Edge{1, 2}};
    // alpha = -1: edge (0,1) present, (0,2) absent
    UncertainGraph gm;
    gm.num_nodes = 3;
    gm.fixed_edges = {Edge{0, 1}, Edge{1, 2}};
    const FactorId id = A.ids()[0];
    CHECK(interval_bounds(fix_factor(P.vectorize(), id, 1.0))
              .contains(flatten(message_passing_exact(gp, 0)), 1e-9));
    CHECK(interval_bounds(fix_factor(P.vectorize(), id, -1.0))
              .contains(flatten(message_passing_exact(gm, 0)), 1e-9));
  }

  SUBCASE("nonpositive degree bound is rejected") {
    // a lone negative-weight fixed edge drives the degree set below zero
    UncertainGraph g;
    g.num_nodes = 2;
    g.fixed_edges = {Edge{0, 1, -2.0}};
    CHECK_THROWS_AS(message_passing_enclosure(build_uncertain_adjacency(g)), DomainError);
  }
}

TEST_CASE("enclose_gc_layer and enclose_pool_sum") {
  Rng rng(83);

  SUBCASE("point message passing and features reduce to the plain product") {
    Mat P = random_mat(rng, 3, 3), H = random_mat(rng, 3, 2), W = random_mat(rng, 2, 4);
    MatPolyZonotope out =
        enclose_gc_layer(MatPolyZonotope::point(H), MatPolyZonotope::point(P), W);
    CHECK(out.num_dep() == 0);
    CHECK(out.center().isApprox(P * H * W, 1e-12));
  }

  SUBCASE("identity weights and identity point P leave the set unchanged") {
    MatPolyZonotope H = random_mpz(rng, 3, 2, 3, fresh_ids(2));
    MatPolyZonotope out =
        enclose_gc_layer(H, MatPolyZonotope::point(Mat::Identity(3, 3)), Mat::Identity(2, 2));
    FactorMap f = random_factors(rng, H.ids());
    CHECK(sample(out, f).isApprox(sample(H, f), 1e-12));
  }

  SUBCASE("pooling is the exact column-sum set") {
    MatPolyZonotope H = random_mpz(rng, 4, 3, 3, fresh_ids(2));
    PolyZonotope pooled = enclose_pool_sum(H);
    for (int t = 0; t < 100; ++t) {
      FactorMap f = random_factors(rng, H.ids());
      Vec want = sample(H, f).colwise().sum().transpose();
      CHECK(sample(pooled, f).isApprox(want, 1e-12));
    }
  }

  SUBCASE("single-generator pooling is the column sum of the slice") {
    MatPolyZonotope H = random_mpz(rng, 3, 2, 1, fresh_ids(1));
    PolyZonotope pooled = enclose_pool_sum(H);
    REQUIRE(pooled.num_dep() == 1);
    CHECK(pooled.G.col(0).isApprox(H.dep_slice(0).colwise().sum().transpose(), 1e-14));
  }
}

TEST_CASE("enclose_network") {
  Rng rng(89);

  SUBCASE("fixed graph, point input, no activations: output is the forward pass") {
    UncertainGraph g = triangle();
    g.fixed_edges.push_back(g.uncertain_edges[0]);
    g.uncertain_edges.clear();
    Mat X = random_mat(rng, 3, 2);
    Network net = two_gc_identity();
    EnclosureResult res = enclose_network(net, MatPolyZonotope::point(X), g, {});
    CHECK(res.node_set.num_dep() == 0);
    CHECK(res.node_set.center().isApprox(forward(net, X, g, 0).node, 1e-12));
  }

  SUBCASE("features-only uncertainty stays exact through linear pipelines") {
    UncertainGraph g = triangle();
    g.fixed_edges.push_back(g.uncertain_edges[0]);
    g.uncertain_edges.clear();
    Network net;
    net.layers.push_back(GcLayer{random_mat(rng, 2, 3)});
    net.layers.push_back(GcLayer{random_mat(rng, 3, 2)});
    net.layers.push_back(PoolLayer{});
    MatPolyZonotope X = triangle_input();
    EnclosureResult res = enclose_network(net, X, g, {});
    for (int t = 0; t < 200; ++t) {
      FactorMap f = random_factors(rng, X.ids());
      Vec want = forward(net, sample(X, f), g, 0).graph;
      CHECK((sample(res.graph_set, f) - want).norm() < 1e-10);
    }
  }

  SUBCASE("identity-weight triangle instance encloses both concrete graphs") {
    UncertainGraph g = triangle();
    Network net = two_gc_identity();
    MatPolyZonotope X = triangle_input();
    VerifyConfig cfg;
    cfg.enclose.poly_order = 2;
    EnclosureResult res = enclose_network(net, X, g, cfg);
    const PolyZonotope& y = res.output_flat();
    IntervalVec bounds = interval_bounds(y);
    IntervalVec present = interval_bounds(fix_factor(y, res.edge_ids[0], 1.0));
    IntervalVec absent = interval_bounds(fix_factor(y, res.edge_ids[0], -1.0));

    Mat X0 = Mat::Ones(3, 2);
    for (double f0 : {0.9, 1.1}) {
      for (double f1 : {0.9, 1.1}) {
        Mat Xc = X0;
        Xc(0, 0) = f0;
        Xc(0, 1) = f1;
        const Vec y1 = flatten(forward(net, Xc, g, 0b1).node);
        const Vec y0 = flatten(forward(net, Xc, g, 0b0).node);
        CHECK(bounds.contains(y1, 1e-9));
        CHECK(bounds.contains(y0, 1e-9));
        CHECK(present.contains(y1, 1e-9));
        CHECK(absent.contains(y0, 1e-9));
      }
    }
    // the fixed subsets stay inside the full enclosure
    CHECK((present.lo.array() >= bounds.lo.array() - 1e-12).all());
    CHECK((present.hi.array() <= bounds.hi.array() + 1e-12).all());
    CHECK((absent.lo.array() >= bounds.lo.array() - 1e-12).all());
    CHECK((absent.hi.array() <= bounds.hi.array() + 1e-12).all());
  }

  SUBCASE("random instance with two uncertain edges encloses all concrete graphs") {
    GenParams params;
    params.nodes = 5;
    params.uncertain_edges = 2;
    params.mp_steps = 2;
    params.epsilon = 0.01;
    params.seed = 1234;
    Instance inst = generate_instance(params);
    MatPolyZonotope X = inst.input_set();
    EnclosureResult res = enclose_network(inst.net, X, inst.graph, {});
    IntervalVec bounds = interval_bounds(res.output_flat());
    Rng rs(5);
    for (EdgeMask mask = 0; mask < 4; ++mask) {
      for (int t = 0; t < 100; ++t) {
        Vec alpha = random_vec(rs, X.num_factors());
        Mat Xs = sample(X, alpha);
        CHECK(bounds.contains(forward(inst.net, Xs, inst.graph, mask).flat(), 1e-9));
      }
    }
  }
}

TEST_CASE("check_spec") {
  SUBCASE("point output with a strict maximum verifies") {
    EnclosureResult res;
    res.graph_level = true;
    Vec y(3);
    y << 0.1, 0.9, 0.2;
    res.graph_set = PolyZonotope::point(y);
    Verdict v = check_spec(res, SafetySpec{RobustnessSpec{std::nullopt, 1}});
    CHECK(v.status == Status::Verified);
    CHECK(check_spec(res, SafetySpec{RobustnessSpec{std::nullopt, 0}}).status == Status::Unknown);
  }

  SUBCASE("box straddling the decision boundary is unknown") {
    EnclosureResult res;
    res.graph_level = true;
    Vec lo(2), hi(2);
    lo << 0.0, 0.4;
    hi << 1.0, 0.6;
    res.graph_set = from_interval(lo, hi);
    CHECK(check_spec(res, SafetySpec{RobustnessSpec{std::nullopt, 0}}).status == Status::Unknown);
  }

  SUBCASE("halfspace separation on the triangle instance matches enumeration") {
    UncertainGraph g = triangle();
    Network net = two_gc_identity();
    MatPolyZonotope X = triangle_input();

    // unsafe set: node-3 first feature <= 0.2 (flat index 2 of the 3x2 output)
    HalfspaceSpec hs;
    hs.A = Mat::Zero(1, 6);
    hs.A(0, 2) = 1.0;
    hs.b = Vec::Constant(1, 0.2);
    SafetySpec spec{hs};

    Verdict ours = verify(net, X, g, spec, {});
    EnumerateConfig ec;
    Verdict enumer = enumerate_verify(net, X, g, spec, ec);
    CHECK(ours.status == Status::Verified);
    CHECK(enumer.status == Status::Verified);
  }
}

TEST_CASE("khop_neighborhood and subgraph_select") {
  SUBCASE("path graph neighborhoods") {
    UncertainGraph path;
    path.num_nodes = 5;
    path.fixed_edges = {Edge{0, 1}, Edge{1, 2}, Edge{2, 3}, Edge{3, 4}};
    CHECK(khop_neighborhood(path, 0, 2) == std::vector<int>{0, 1, 2});
    CHECK(khop_neighborhood(path, 0, 0) == std::vector<int>{0});
    CHECK(khop_neighborhood(path, 2, 10) == std::vector<int>{0, 1, 2, 3, 4});
  }

  SUBCASE("keeping all nodes is the identity") {
    Rng rng(97);
    MatPolyZonotope H = random_mpz(rng, 4, 2, 3, fresh_ids(2));
    MatPolyZonotope P = random_mpz(rng, 4, 4, 2, fresh_ids(2));
    auto [Hs, Ps] = subgraph_select(H, P, {0, 1, 2, 3});
    CHECK(Hs.center().isApprox(H.center()));
    CHECK(Ps.center().isApprox(P.center()));
    CHECK(Hs.vectorize().G.isApprox(H.vectorize().G));
  }

  SUBCASE("restriction picks rows and the principal submatrix") {
    Rng rng(101);
    MatPolyZonotope H = random_mpz(rng, 4, 2, 2, fresh_ids(2));
    MatPolyZonotope P = random_mpz(rng, 4, 4, 2, fresh_ids(2));
    auto [Hs, Ps] = subgraph_select(H, P, {1, 3});
    FactorMap f = random_factors(rng, {&H.ids(), &P.ids()});
    Mat h = sample(H, f), p = sample(P, f);
    Mat hs = sample(Hs, f), ps = sample(Ps, f);
    CHECK(hs.row(0).isApprox(h.row(1), 1e-13));
    CHECK(hs.row(1).isApprox(h.row(3), 1e-13));
    CHECK(ps(0, 1) == doctest::Approx(p(1, 3)));
    CHECK(ps(1, 0) == doctest::Approx(p(3, 1)));
  }
}

TEST_CASE("enclose_node_subgraph") {
  SUBCASE("fixed graph: reduced output equals the full-run restriction") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
      GenParams params;
      params.nodes = 7;
      params.uncertain_edges = 0;
      params.mp_steps = 2;
      params.graph_level = false;
      params.epsilon = 0.05;
      params.seed = seed;
      Instance inst = generate_instance(params);
      MatPolyZonotope X = inst.input_set();
      const int node = 0;

      EnclosureResult reduced = enclose_node_subgraph(inst.net, X, inst.graph, node, {});
      REQUIRE(reduced.node_set.rows() == 1);
      EnclosureResult full = enclose_network(inst.net, X, inst.graph, {});

      IntervalVec rb = interval_bounds(reduced.output_flat());
      IntervalVec fb = interval_bounds(full.output_flat());
      for (Eigen::Index c = 0; c < reduced.node_set.cols(); ++c) {
        const Eigen::Index full_idx = c * inst.graph.num_nodes + node;
        CHECK(rb.lo[c] == doctest::Approx(fb.lo[full_idx]).epsilon(1e-9));
        CHECK(rb.hi[c] == doctest::Approx(fb.hi[full_idx]).epsilon(1e-9));
      }
    }
  }

  SUBCASE("uncertain graph: reduced output still encloses all concrete outputs") {
    GenParams params;
    params.nodes = 7;
    params.uncertain_edges = 2;
    params.mp_steps = 1;
    params.graph_level = false;
    params.epsilon = 0.03;
    params.seed = 21;
    Instance inst = generate_instance(params);
    MatPolyZonotope X = inst.input_set();
    const int node = 1;

    EnclosureResult reduced = enclose_node_subgraph(inst.net, X, inst.graph, node, {});
    IntervalVec rb = interval_bounds(reduced.output_flat());
    Rng rs(7);
    for (EdgeMask mask = 0; mask < 4; ++mask) {
      for (int t = 0; t < 100; ++t) {
        Mat Xs = sample(X, random_vec(rs, X.num_factors()));
        Vec row = forward(inst.net, Xs, inst.graph, mask).node.row(node).transpose();
        CHECK(rb.contains(row, 1e-9));
      }
    }
  }

  SUBCASE("graph-level networks are rejected") {
    GenParams params;
    params.graph_level = true;
    Instance inst = generate_instance(params);
    CHECK_THROWS_AS(enclose_node_subgraph(inst.net, inst.input_set(), inst.graph, 0, {}),
                    ShapeError);
  }
}

TEST_CASE("verify") {
  SUBCASE("empty unsafe set verifies trivially") {
    UncertainGraph g = triangle();
    Network net = two_gc_identity();
    HalfspaceSpec hs;
    hs.A = Mat(0, 6);
    hs.b = Vec(0);
    Verdict v = verify(net, triangle_input(), g, SafetySpec{hs}, {});
    CHECK(v.status == Status::Verified);
  }

  SUBCASE("diagnostics carry per-layer counts and the budget value") {
    UncertainGraph g = triangle();
    Network net = two_gc_identity();
    Verdict v = verify(net, triangle_input(), g, SafetySpec{HalfspaceSpec{Mat(0, 6), Vec(0)}}, {});
    CHECK(v.diag.dep_generators_per_layer.size() == 2);
    CHECK(v.diag.output_dep_generators > 0);
    // h_e = 1, h_x = 2, kappa = 2, nu = 2, c_max = 2: 1 * (2 + 6) + 0
    CHECK(v.diag.generator_budget == doctest::Approx(8.0));
    CHECK(v.diag.wall_seconds > 0.0);
  }

  SUBCASE("subgraph verification agrees with the plain run") {
    GenParams params;
    params.nodes = 6;
    params.uncertain_edges = 1;
    params.mp_steps = 1;
    params.graph_level = false;
    params.epsilon = 0.02;
    params.seed = 31;
    Instance inst = generate_instance(params);
    MatPolyZonotope X = inst.input_set();
    const auto& rb = std::get<RobustnessSpec>(inst.spec.body);

    VerifyConfig plain;
    Verdict full = verify(inst.net, X, inst.graph, inst.spec, plain);
    VerifyConfig sub;
    sub.subgraph_node = rb.node;
    Verdict reduced = verify(inst.net, X, inst.graph, inst.spec, sub);
    CHECK(full.status == reduced.status);
  }

  SUBCASE("subgraph verification refuses non-local specifications") {
    GenParams params;
    params.graph_level = false;
    params.mp_steps = 1;
    params.nodes = 5;
    params.seed = 77;
    Instance inst = generate_instance(params);
    VerifyConfig sub;
    sub.subgraph_node = 0;
    SafetySpec other{RobustnessSpec{1, 0}};
    CHECK_THROWS_AS(verify(inst.net, inst.input_set(), inst.graph, other, sub), ShapeError);
  }
}

TEST_CASE("enumerate_verify") {
  SUBCASE("no uncertain edges reduces to a single subproblem") {
    UncertainGraph g = triangle();
    g.fixed_edges.push_back(g.uncertain_edges[0]);
    g.uncertain_edges.clear();
    Network net = two_gc_identity();
    MatPolyZonotope X = triangle_input();
    HalfspaceSpec hs;
    hs.A = Mat::Zero(1, 6);
    hs.A(0, 2) = 1.0;
    hs.b = Vec::Constant(1, 0.2);
    Verdict ours = verify(net, X, g, SafetySpec{hs}, {});
    Verdict enumer = enumerate_verify(net, X, g, SafetySpec{hs}, {});
    CHECK(ours.status == enumer.status);
  }

  SUBCASE("cap is enforced") {
    UncertainGraph g = triangle();
    EnumerateConfig ec;
    ec.cap = 0;
    CHECK_THROWS_AS(enumerate_verify(two_gc_identity(), triangle_input(), g, SafetySpec{}, ec),
                    DomainError);
  }

  SUBCASE("three uncertain edges give eight subproblems") {
    GenParams params;
    params.nodes = 6;
    params.uncertain_edges = 3;
    params.mp_steps = 1;
    params.epsilon = 0.01;
    params.seed = 51;
    Instance inst = generate_instance(params);
    Verdict v = enumerate_verify(inst.net, inst.input_set(), inst.graph, inst.spec, {});
    CHECK(v.diag.subproblems == 8);
  }

  SUBCASE("a falsifiable point instance yields a witness") {
    UncertainGraph g = triangle();
    g.fixed_edges.push_back(g.uncertain_edges[0]);
    g.uncertain_edges.clear();
    Network net = two_gc_identity();
    Mat X = Mat::Ones(3, 2);
    MatPolyZonotope Xp = MatPolyZonotope::point(X);
    // unsafe set: node-3 first feature <= 2 (always true at the point output)
    HalfspaceSpec hs;
    hs.A = Mat::Zero(1, 6);
    hs.A(0, 2) = 1.0;
    hs.b = Vec::Constant(1, 2.0);
    Verdict v = enumerate_verify(net, Xp, g, SafetySpec{hs}, {});
    REQUIRE(v.status == Status::Falsified);
    REQUIRE(v.witness.has_value());
    CHECK(violates(forward(net, v.witness->X, g, v.witness->present), SafetySpec{hs}));
  }

  SUBCASE("never falsified when the set check verified") {
    // soundness implication on a batch of random instances
    for (std::uint64_t seed = 40; seed < 48; ++seed) {
      GenParams params;
      params.nodes = 5;
      params.uncertain_edges = 2;
      params.mp_steps = 1;
      params.epsilon = 0.01;
      params.seed = seed;
      Instance inst = generate_instance(params);
      MatPolyZonotope X = inst.input_set();
      Verdict ours = verify(inst.net, X, inst.graph, inst.spec, {});
      if (ours.status == Status::Verified) {
        Verdict enumer = enumerate_verify(inst.net, X, inst.graph, inst.spec, {});
        CHECK(enumer.status != Status::Falsified);
      }
    }
  }
}

TEST_CASE("ibp_enclose") {
  Rng rng(103);

  SUBCASE("point input, fixed graph, linear pipeline is exact") {
    UncertainGraph g = triangle();
    g.fixed_edges.push_back(g.uncertain_edges[0]);
    g.uncertain_edges.clear();
    Network net;
    net.layers.push_back(GcLayer{random_mat(rng, 2, 3)});
    net.layers.push_back(PoolLayer{});
    net.layers.push_back(LinLayer{random_mat(rng, 2, 3), random_vec(rng, 2)});
    Mat X = random_mat(rng, 3, 2);
    IntervalVec box = ibp_enclose(net, X, X, g);
    Vec want = forward(net, X, g, 0).graph;
    CHECK(box.lo.isApprox(want, 1e-12));
    CHECK(box.hi.isApprox(want, 1e-12));
  }

  SUBCASE("interval message passing is wider than the set enclosure somewhere") {
    UncertainGraph g = triangle();
    auto [plo, phi] = ibp_message_passing(g);
    EncloseConfig cfg;
    cfg.poly_order = 2;
    MatPolyZonotope P = message_passing_enclosure(build_uncertain_adjacency(g), cfg);
    IntervalVec pz = interval_bounds(P.vectorize());
    const Vec ibplo = flatten(plo), ibphi = flatten(phi);
    bool strict = false;
    for (Eigen::Index i = 0; i < pz.dim(); ++i)
      if (ibphi[i] - ibplo[i] > pz.hi[i] - pz.lo[i] + 1e-9) strict = true;
    CHECK(strict);
  }

  SUBCASE("ibp box contains the set-based box on random instances") {
    for (std::uint64_t seed = 60; seed < 66; ++seed) {
      GenParams params;
      params.nodes = 5;
      params.uncertain_edges = 2;
      params.mp_steps = 1;
      params.epsilon = 0.02;
      params.seed = seed;
      Instance inst = generate_instance(params);
      auto [xlo, xhi] = inst.input_box();
      IntervalVec ibp = ibp_enclose(inst.net, xlo, xhi, inst.graph);
      EnclosureResult res = enclose_network(inst.net, inst.input_set(), inst.graph, {});
      IntervalVec pz = interval_bounds(res.output_flat());
      for (Eigen::Index i = 0; i < pz.dim(); ++i) {
        CHECK(ibp.lo[i] <= pz.lo[i] + 1e-9);
        CHECK(ibp.hi[i] >= pz.hi[i] - 1e-9);
      }
    }
  }
}

TEST_CASE("explicit adjacency through the whole pipeline") {
  // one of the edges (0,1) / (0,2) present, never both; (1,2) fixed
  PolyZonotope flat;
  flat.c = Vec::Zero(9);
  flat.G = Mat::Zero(9, 1);
  auto at = [](int i, int j) { return 3 * j + i; };
  flat.c[at(0, 1)] = flat.c[at(1, 0)] = 0.5;
  flat.c[at(0, 2)] = flat.c[at(2, 0)] = 0.5;
  flat.c[at(1, 2)] = flat.c[at(2, 1)] = 1.0;
  flat.G(at(0, 1), 0) = flat.G(at(1, 0), 0) = -0.5;
  flat.G(at(0, 2), 0) = flat.G(at(2, 0), 0) = 0.5;
  flat.GI = Mat(9, 0);
  flat.E = ExpMat::Ones(1, 1);
  flat.id = {fresh_id()};
  MatPolyZonotope A = MatPolyZonotope::reshape(flat, 3, 3);

  Network net;
  net.layers.push_back(GcLayer{Mat::Identity(2, 2)});
  net.layers.push_back(ActLayer{ActivationKind::Tanh});
  MatPolyZonotope X = triangle_input();

  EnclosureResult res = enclose_network_with_adjacency(net, X, A, {});
  REQUIRE(res.edge_ids.size() == 1);
  const PolyZonotope& y = res.output_flat();

  UncertainGraph g02;  // alpha = +1
  g02.num_nodes = 3;
  g02.fixed_edges = {Edge{0, 2}, Edge{1, 2}};
  UncertainGraph g01;  // alpha = -1
  g01.num_nodes = 3;
  g01.fixed_edges = {Edge{0, 1}, Edge{1, 2}};

  IntervalVec plus = interval_bounds(fix_factor(y, res.edge_ids[0], 1.0));
  IntervalVec minus = interval_bounds(fix_factor(y, res.edge_ids[0], -1.0));
  Rng rng(131);
  for (int t = 0; t < 300; ++t) {
    Mat Xs = sample(X, random_vec(rng, X.num_factors()));
    CHECK(plus.contains(forward(net, Xs, g02, 0).flat(), 1e-9));
    CHECK(minus.contains(forward(net, Xs, g01, 0).flat(), 1e-9));
  }
}

TEST_CASE("mpz_matmul is bit-reproducible") {
  Rng rng(137);
  IdVec ids = fresh_ids(3);
  MatPolyZonotope a = random_mpz(rng, 4, 4, 6, ids);
  MatPolyZonotope b = random_mpz(rng, 4, 3, 5, ids);
  MatPolyZonotope r1 = mpz_matmul(a, b);
  MatPolyZonotope r2 = mpz_matmul(a, b);
  CHECK((r1.vectorize().c.array() == r2.vectorize().c.array()).all());
  CHECK((r1.vectorize().G.array() == r2.vectorize().G.array()).all());
  CHECK(r1.exponents() == r2.exponents());
  CHECK(r1.ids() == r2.ids());
}

TEST_CASE("enumeration respects the thread cap") {
  GenParams params;
  params.nodes = 5;
  params.uncertain_edges = 2;
  params.mp_steps = 1;
  params.epsilon = 0.01;
  params.seed = 141;
  Instance inst = generate_instance(params);
  MatPolyZonotope X = inst.input_set();

  Verdict serial = enumerate_verify(inst.net, X, inst.graph, inst.spec, {});
  setenv("GCNREACH_THREADS", "3", 1);
  Verdict parallel = enumerate_verify(inst.net, X, inst.graph, inst.spec, {});
  unsetenv("GCNREACH_THREADS");
  CHECK(serial.status == parallel.status);
}

TEST_CASE("pooling a point set gives the column sums") {
  Mat H(3, 2);
  H << 1, 4, 2, 5, 3, 6;
  PolyZonotope pooled = enclose_pool_sum(MatPolyZonotope::point(H));
  CHECK(pooled.num_dep() == 0);
  Vec want(2);
  want << 6, 15;
  CHECK(pooled.c.isApprox(want));
}

TEST_CASE("directed graphs") {
  UncertainGraph g;
  g.num_nodes = 3;
  g.undirected = false;
  g.fixed_edges = {Edge{0, 1}, Edge{2, 1}};
  g.uncertain_edges = {Edge{0, 2}};

  SUBCASE("exact message passing uses column-sum degrees") {
    Mat P = message_passing_exact(g, 0b1);
    // columns: node 0 has degree 1 (self), node 1 degree 3, node 2 degree 2
    CHECK(P(0, 0) == doctest::Approx(1.0));
    CHECK(P(0, 1) == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(P(0, 2) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(P(1, 0) == doctest::Approx(0.0));
  }

  SUBCASE("interval message passing brackets every concrete graph") {
    auto [plo, phi] = ibp_message_passing(g);
    for (EdgeMask mask = 0; mask < 2; ++mask) {
      Mat P = message_passing_exact(g, mask);
      CHECK(((P - plo).array() >= -1e-12).all());
      CHECK(((phi - P).array() >= -1e-12).all());
    }
  }

  SUBCASE("adjacency set drives only the named arc") {
    MatPolyZonotope A = build_uncertain_adjacency(g);
    Vec plus(1);
    plus << 1.0;
    Mat a = sample(A, plus);
    CHECK(a(0, 2) == doctest::Approx(1.0));
    CHECK(a(2, 0) == doctest::Approx(0.0));
  }

  SUBCASE("set enclosure brackets both concrete graphs") {
    MatPolyZonotope A = build_uncertain_adjacency(g);
    MatPolyZonotope P = message_passing_enclosure(A);
    const FactorId id = A.ids()[0];
    for (double v : {1.0, -1.0}) {
      Mat exact = message_passing_exact(g, v > 0 ? 0b1 : 0b0);
      IntervalVec b = interval_bounds(fix_factor(P.vectorize(), id, v));
      CHECK(b.contains(Eigen::Map<const Vec>(exact.data(), exact.size()), 1e-9));
    }
  }
}

TEST_CASE("generator_budget") {
  CHECK(generator_budget(2, 10, 2, 5, 8, 3, 4) ==
        doctest::Approx(std::pow(2.0, 6) * (10 + 24) + 1 * 4));
  // nu < 2 kappa clamps the tail term at zero
  CHECK(generator_budget(1, 2, 2, 2, 3, 2, 0) == doctest::Approx(8.0));

  GenParams params;
  params.seed = 5;
  Instance inst = generate_instance(params);
  const double b = generator_budget(inst.net, inst.graph, 16);
  CHECK(b > 0.0);
}
