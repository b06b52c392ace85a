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

#include "gcnreach/serialization.hpp"
#include "support.hpp"

using namespace gcnreach;
using namespace gcnreach::testing;

TEST_CASE("set round trips") {
  Rng rng(107);

  SUBCASE("vector sets survive a serialize/parse cycle exactly") {
    for (int t = 0; t < 25; ++t) {
      PolyZonotope pz = random_pz(rng, 3, 5, 2, 3);
      PolyZonotope rt = pz_from_json(to_json(pz));
      CHECK(rt.c == pz.c);
      CHECK(rt.G == pz.G);
      CHECK(rt.GI == pz.GI);
      CHECK(rt.E == pz.E);
      CHECK(rt.id == pz.id);
    }
  }

  SUBCASE("matrix sets survive a serialize/parse cycle exactly") {
    for (int t = 0; t < 25; ++t) {
      MatPolyZonotope m = random_mpz(rng, 3, 2, 4, fresh_ids(2));
      MatPolyZonotope rt = mpz_from_json(to_json(m));
      CHECK(rt.rows() == m.rows());
      CHECK(rt.cols() == m.cols());
      CHECK(rt.vectorize().c == m.vectorize().c);
      CHECK(rt.vectorize().G == m.vectorize().G);
      CHECK(rt.exponents() == m.exponents());
      CHECK(rt.ids() == m.ids());
    }
  }

  SUBCASE("degenerate sets") {
    PolyZonotope pt = PolyZonotope::point(Vec::Zero(2));
    PolyZonotope rt = pz_from_json(to_json(pt));
    CHECK(rt.num_dep() == 0);
    CHECK(rt.num_factors() == 0);
  }

  SUBCASE("loading reserves identifiers") {
    PolyZonotope pz = random_pz(rng, 2, 2, 0, 2);
    const FactorId big = pz.id.back() + 1000;
    pz.id.back() = big;
    (void)pz_from_json(to_json(pz));
    CHECK(fresh_id() > big);
  }
}

TEST_CASE("graph files") {
  SUBCASE("edge lists are 1-based on disk") {
    GraphInput gi = graph_from_json(R"({
      "num_nodes": 3,
      "undirected": true,
      "fixed_edges": [[1,2],[2,3]],
      "uncertain_edges": [[1,3]]
    })");
    CHECK(gi.graph.num_nodes == 3);
    REQUIRE(gi.graph.fixed_edges.size() == 2);
    CHECK(gi.graph.fixed_edges[0].i == 0);
    CHECK(gi.graph.fixed_edges[0].j == 1);
    CHECK(gi.graph.uncertain_edges[0].i == 0);
    CHECK(gi.graph.uncertain_edges[0].j == 2);
    CHECK_FALSE(gi.adjacency.has_value());

    UncertainGraph rt = graph_from_json(to_json(gi.graph)).graph;
    CHECK(rt.fixed_edges.size() == gi.graph.fixed_edges.size());
    CHECK(rt.uncertain_edges.size() == gi.graph.uncertain_edges.size());
  }

  SUBCASE("weighted fixed edges are accepted") {
    GraphInput gi = graph_from_json(R"({
      "num_nodes": 2,
      "fixed_edges": [[1,2,0.5]],
      "uncertain_edges": []
    })");
    CHECK(gi.graph.fixed_edges[0].weight == doctest::Approx(0.5));
  }

  SUBCASE("explicit adjacency sets are recognized") {
    Rng rng(109);
    MatPolyZonotope A = random_mpz(rng, 3, 3, 1, fresh_ids(1));
    std::string text = std::string(R"({"num_nodes": 3, "adjacency_mpz": )") + to_json(A) + "}";
    GraphInput gi = graph_from_json(text);
    REQUIRE(gi.adjacency.has_value());
    CHECK(gi.adjacency->rows() == 3);
  }

  SUBCASE("malformed graphs raise ParseError, invalid ones ShapeError") {
    CHECK_THROWS_AS(graph_from_json("{"), ParseError);
    CHECK_THROWS_AS(graph_from_json(R"({"undirected": true})"), ParseError);
    CHECK_THROWS_AS(
        graph_from_json(R"({"num_nodes": 2, "fixed_edges": [[1,1]], "uncertain_edges": []})"),
        ShapeError);
  }
}

TEST_CASE("network files") {
  const char* text = R"({
    "layers": [
      {"type": "gc", "W": [[1.0, 0.0], [0.0, 1.0]]},
      {"type": "act", "fn": "tanh"},
      {"type": "gpool", "agg": "sum"},
      {"type": "lin", "W": [[0.5, -0.5]], "b": [0.1]}
    ]
  })";
  Network net = network_from_json(text);
  CHECK(net.num_layers() == 4);
  CHECK(net.message_passing_steps() == 1);
  CHECK(net.graph_level());
  CHECK(net.input_features() == 2);

  Network rt = network_from_json(to_json(net));
  CHECK(rt.num_layers() == 4);
  CHECK(std::get<LinLayer>(rt.layers[3]).b[0] == doctest::Approx(0.1));

  SUBCASE("unsupported constructs are rejected") {
    CHECK_THROWS_AS(network_from_json(R"({"layers":[{"type":"conv"}]})"), ParseError);
    CHECK_THROWS_AS(network_from_json(R"({"layers":[{"type":"gpool","agg":"mean"}]})"),
                    ParseError);
  }
}

TEST_CASE("input files") {
  SUBCASE("epsilon ball around X") {
    FeatureInput fi = input_from_json(R"({"X": [[1.0, 2.0],[3.0, 4.0]], "epsilon": 0.1})");
    MatPolyZonotope set = fi.as_set();
    CHECK(set.rows() == 2);
    CHECK(set.cols() == 2);
    CHECK(set.num_dep() == 4);
    auto [lo, hi] = fi.as_box();
    CHECK(lo(0, 0) == doctest::Approx(0.9));
    CHECK(hi(1, 1) == doctest::Approx(4.1));
  }

  SUBCASE("epsilon zero gives a point set") {
    FeatureInput fi = input_from_json(R"({"X": [[1.0]], "epsilon": 0})");
    CHECK(fi.as_set().num_dep() == 0);
  }

  SUBCASE("explicit set input") {
    Rng rng(113);
    MatPolyZonotope m = random_mpz(rng, 2, 2, 2, fresh_ids(2));
    std::string text = std::string(R"({"mpz": )") + to_json(m) + "}";
    FeatureInput fi = input_from_json(text);
    REQUIRE(fi.set.has_value());
    CHECK(fi.as_set().num_dep() == 2);
  }

  SUBCASE("negative epsilon is malformed") {
    CHECK_THROWS_AS(input_from_json(R"({"X": [[0.0]], "epsilon": -1})"), ParseError);
  }
}

TEST_CASE("spec files") {
  SUBCASE("graph-scope robustness") {
    SafetySpec s = spec_from_json(R"({"type":"robustness","scope":"graph","target":2})");
    const auto& rb = std::get<RobustnessSpec>(s.body);
    CHECK_FALSE(rb.node.has_value());
    CHECK(rb.target == 1);  // 1-based on disk
  }

  SUBCASE("node-scope robustness") {
    SafetySpec s = spec_from_json(R"({"type":"robustness","scope":{"node":3},"target":1})");
    const auto& rb = std::get<RobustnessSpec>(s.body);
    CHECK(rb.node == 2);
    CHECK(rb.target == 0);
  }

  SUBCASE("halfspace") {
    SafetySpec s = spec_from_json(R"({"type":"halfspace","A":[[1,0],[0,1]],"b":[0.5,0.5]})");
    const auto& hs = std::get<HalfspaceSpec>(s.body);
    CHECK(hs.A.rows() == 2);
    CHECK(hs.b.size() == 2);
    SafetySpec rt = spec_from_json(to_json(s));
    CHECK(std::get<HalfspaceSpec>(rt.body).A == hs.A);
  }

  SUBCASE("unknown type") {
    CHECK_THROWS_AS(spec_from_json(R"({"type":"ltl"})"), ParseError);
  }
}
