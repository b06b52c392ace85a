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

#include "gcnreach/serialization.hpp"

#include <json.hpp>

#include <fstream>

namespace gcnreach {

namespace {

using nlohmann::json;

json mat_to_json(const Mat& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json expmat_to_json(const ExpMat& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vec_to_json(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Mat mat_from_json(const json& j, Eigen::Index expect_rows = -1) {
  if (!j.is_array()) throw ParseError("expected a nested array for a matrix");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Mat(std::max<Eigen::Index>(expect_rows, 0), 0);
  const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
  Mat M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ParseError("ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c) M(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return M;
}

ExpMat expmat_from_json(const json& j, Eigen::Index expect_rows) {
  if (!j.is_array()) throw ParseError("expected a nested array for an exponent matrix");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return ExpMat(std::max<Eigen::Index>(expect_rows, 0), 0);
  const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
  ExpMat M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ParseError("ragged exponent matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      M(i, c) = row.at(static_cast<std::size_t>(c)).get<std::int32_t>();
  }
  return M;
}

Vec vec_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array for a vector");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

json pz_to_json_obj(const PolyZonotope& pz) {
  json j;
  j["c"] = vec_to_json(pz.c);
  j["G"] = mat_to_json(pz.G);
  j["GI"] = mat_to_json(pz.GI);
  j["E"] = expmat_to_json(pz.E);
  j["id"] = pz.id;
  return j;
}

PolyZonotope pz_from_json_obj(const json& j) {
  PolyZonotope pz;
  pz.c = vec_from_json(j.at("c"));
  pz.G = mat_from_json(j.value("G", json::array()), pz.c.size());
  pz.GI = mat_from_json(j.value("GI", json::array()), pz.c.size());
  pz.id = j.value("id", IdVec{});
  pz.E = expmat_from_json(j.value("E", json::array()),
                          static_cast<Eigen::Index>(pz.id.size()));
  if (pz.E.rows() == 0 && !pz.id.empty())
    pz.E = ExpMat::Zero(static_cast<Eigen::Index>(pz.id.size()), pz.G.cols());
  pz.validate();
  FactorId top = 0;
  for (FactorId v : pz.id) top = std::max(top, v);
  if (top > 0) reserve_ids_above(top);
  return pz;
}

json mpz_to_json_obj(const MatPolyZonotope& m) {
  json j;
  j["C"] = mat_to_json(m.center());
  json gens = json::array();
  for (Eigen::Index i = 0; i < m.num_dep(); ++i) gens.push_back(mat_to_json(m.dep_slice(i)));
  j["G"] = std::move(gens);
  json igens = json::array();
  for (Eigen::Index i = 0; i < m.num_indep(); ++i) igens.push_back(mat_to_json(m.indep_slice(i)));
  j["GI"] = std::move(igens);
  j["E"] = expmat_to_json(m.exponents());
  j["id"] = m.ids();
  return j;
}

MatPolyZonotope mpz_from_json_obj(const json& j) {
  const Mat C = mat_from_json(j.at("C"));
  const Eigen::Index n = C.rows();
  const Eigen::Index m = C.cols();

  PolyZonotope flat;
  flat.c = Eigen::Map<const Vec>(C.data(), C.size());

  const json& gens = j.value("G", json::array());
  flat.G.resize(n * m, static_cast<Eigen::Index>(gens.size()));
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Mat Gi = mat_from_json(gens.at(i));
    if (Gi.rows() != n || Gi.cols() != m) throw ParseError("generator slice shape mismatch");
    flat.G.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vec>(Gi.data(), Gi.size());
  }
  const json& igens = j.value("GI", json::array());
  flat.GI.resize(n * m, static_cast<Eigen::Index>(igens.size()));
  for (std::size_t i = 0; i < igens.size(); ++i) {
    const Mat Gi = mat_from_json(igens.at(i));
    if (Gi.rows() != n || Gi.cols() != m) throw ParseError("generator slice shape mismatch");
    flat.GI.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vec>(Gi.data(), Gi.size());
  }
  flat.id = j.value("id", IdVec{});
  flat.E = expmat_from_json(j.value("E", json::array()),
                            static_cast<Eigen::Index>(flat.id.size()));
  if (flat.E.rows() == 0 && !flat.id.empty())
    flat.E = ExpMat::Zero(static_cast<Eigen::Index>(flat.id.size()), flat.G.cols());
  flat.validate();
  FactorId top = 0;
  for (FactorId v : flat.id) top = std::max(top, v);
  if (top > 0) reserve_ids_above(top);
  return MatPolyZonotope::reshape(std::move(flat), n, m);
}

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON");
  return j;
}

// missing keys / wrong value types surface as ParseError, not json internals
template <typename F>
auto wrap_parse(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON in " + path);
  return j;
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

std::vector<Edge> edges_from_json(const json& j) {
  std::vector<Edge> out;
  for (const json& e : j) {
    if (!e.is_array() || e.size() < 2 || e.size() > 3) throw ParseError("edge must be [i,j] or [i,j,w]");
    Edge edge;
    edge.i = e.at(0).get<int>() - 1;  // files are 1-based
    edge.j = e.at(1).get<int>() - 1;
    if (e.size() == 3) edge.weight = e.at(2).get<double>();
    out.push_back(edge);
  }
  return out;
}

json edges_to_json(const std::vector<Edge>& edges) {
  json arr = json::array();
  for (const Edge& e : edges) {
    if (e.weight == 1.0)
      arr.push_back(json::array({e.i + 1, e.j + 1}));
    else
      arr.push_back(json::array({e.i + 1, e.j + 1, e.weight}));
  }
  return arr;
}

GraphInput graph_from_json_obj(const json& j) {
  GraphInput gi;
  gi.graph.num_nodes = j.at("num_nodes").get<int>();
  gi.graph.undirected = j.value("undirected", true);
  if (j.contains("fixed_edges")) gi.graph.fixed_edges = edges_from_json(j.at("fixed_edges"));
  if (j.contains("uncertain_edges"))
    gi.graph.uncertain_edges = edges_from_json(j.at("uncertain_edges"));
  gi.graph.normalize();
  if (j.contains("adjacency_mpz")) {
    gi.adjacency = mpz_from_json_obj(j.at("adjacency_mpz"));
    require(gi.adjacency->rows() == gi.graph.num_nodes &&
                gi.adjacency->cols() == gi.graph.num_nodes,
            "graph: adjacency set shape != num_nodes");
  } else {
    gi.graph.validate();
  }
  return gi;
}

Network network_from_json_obj(const json& j) {
  Network net;
  for (const json& l : j.at("layers")) {
    const std::string type = l.at("type").get<std::string>();
    if (type == "gc") {
      net.layers.push_back(GcLayer{mat_from_json(l.at("W"))});
    } else if (type == "act") {
      net.layers.push_back(ActLayer{activation_from_name(l.at("fn").get<std::string>())});
    } else if (type == "gpool") {
      if (l.value("agg", std::string("sum")) != "sum")
        throw ParseError("gpool: only sum aggregation is supported");
      net.layers.push_back(PoolLayer{});
    } else if (type == "lin") {
      net.layers.push_back(LinLayer{mat_from_json(l.at("W")), vec_from_json(l.at("b"))});
    } else {
      throw ParseError("unknown layer type: " + type);
    }
  }
  net.validate();
  return net;
}

json network_to_json_obj(const Network& net) {
  json layers = json::array();
  for (const LayerSpec& l : net.layers) {
    json e;
    if (const auto* gc = std::get_if<GcLayer>(&l)) {
      e["type"] = "gc";
      e["W"] = mat_to_json(gc->W);
    } else if (const auto* act = std::get_if<ActLayer>(&l)) {
      e["type"] = "act";
      e["fn"] = activation_name(act->fn);
    } else if (std::holds_alternative<PoolLayer>(l)) {
      e["type"] = "gpool";
      e["agg"] = "sum";
    } else if (const auto* lin = std::get_if<LinLayer>(&l)) {
      e["type"] = "lin";
      e["W"] = mat_to_json(lin->W);
      e["b"] = vec_to_json(lin->b);
    }
    layers.push_back(std::move(e));
  }
  return json{{"layers", std::move(layers)}};
}

FeatureInput input_from_json_obj(const json& j) {
  FeatureInput fi;
  if (j.contains("mpz")) {
    fi.set = mpz_from_json_obj(j.at("mpz"));
    return fi;
  }
  fi.X = mat_from_json(j.at("X"));
  fi.epsilon = j.value("epsilon", 0.0);
  if (fi.epsilon < 0.0) throw ParseError("input: epsilon must be nonnegative");
  return fi;
}

SafetySpec spec_from_json_obj(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "robustness") {
    RobustnessSpec rb;
    const json& scope = j.at("scope");
    if (scope.is_string()) {
      if (scope.get<std::string>() != "graph") throw ParseError("spec: unknown scope");
    } else {
      rb.node = scope.at("node").get<int>() - 1;  // 1-based on disk
    }
    rb.target = j.at("target").get<int>() - 1;  // classes 1-based on disk
    return SafetySpec{rb};
  }
  if (type == "halfspace") {
    HalfspaceSpec hs;
    hs.A = mat_from_json(j.at("A"));
    hs.b = vec_from_json(j.at("b"));
    require(hs.A.rows() == hs.b.size(), "spec: halfspace row mismatch");
    return SafetySpec{hs};
  }
  throw ParseError("unknown spec type: " + type);
}

json spec_to_json_obj(const SafetySpec& spec) {
  json j;
  if (const auto* rb = std::get_if<RobustnessSpec>(&spec.body)) {
    j["type"] = "robustness";
    if (rb->node)
      j["scope"] = json{{"node", *rb->node + 1}};
    else
      j["scope"] = "graph";
    j["target"] = rb->target + 1;
  } else {
    const auto& hs = std::get<HalfspaceSpec>(spec.body);
    j["type"] = "halfspace";
    j["A"] = mat_to_json(hs.A);
    j["b"] = vec_to_json(hs.b);
  }
  return j;
}

} // namespace

std::string to_json(const PolyZonotope& pz, int indent) {
  return pz_to_json_obj(pz).dump(indent);
}

PolyZonotope pz_from_json(const std::string& text) {
  return wrap_parse([&] { return pz_from_json_obj(parse_text(text)); });
}

std::string to_json(const MatPolyZonotope& m, int indent) {
  return mpz_to_json_obj(m).dump(indent);
}

MatPolyZonotope mpz_from_json(const std::string& text) {
  return wrap_parse([&] { return mpz_from_json_obj(parse_text(text)); });
}

MatPolyZonotope FeatureInput::as_set() const {
  if (set) return *set;
  require(X.has_value(), "input: neither X nor an explicit set given");
  return feature_ball(*X, epsilon);
}

std::pair<Mat, Mat> FeatureInput::as_box() const {
  if (set) {
    const IntervalVec b = interval_bounds(*set);
    const Eigen::Index n = set->rows(), m = set->cols();
    return {Eigen::Map<const Mat>(b.lo.data(), n, m), Eigen::Map<const Mat>(b.hi.data(), n, m)};
  }
  require(X.has_value(), "input: neither X nor an explicit set given");
  return {X->array() - epsilon, X->array() + epsilon};
}

MatPolyZonotope feature_ball(const Mat& X, double epsilon) {
  const Vec flat = Eigen::Map<const Vec>(X.data(), X.size());
  PolyZonotope pz = from_interval(flat.array() - epsilon, flat.array() + epsilon);
  return MatPolyZonotope::reshape(std::move(pz), X.rows(), X.cols());
}

GraphInput load_graph(const std::string& path) {
  return wrap_parse([&] { return graph_from_json_obj(parse_file(path)); });
}
Network load_network(const std::string& path) {
  return wrap_parse([&] { return network_from_json_obj(parse_file(path)); });
}
FeatureInput load_input(const std::string& path) {
  return wrap_parse([&] { return input_from_json_obj(parse_file(path)); });
}
SafetySpec load_spec(const std::string& path) {
  return wrap_parse([&] { return spec_from_json_obj(parse_file(path)); });
}

GraphInput graph_from_json(const std::string& text) {
  return wrap_parse([&] { return graph_from_json_obj(parse_text(text)); });
}
Network network_from_json(const std::string& text) {
  return wrap_parse([&] { return network_from_json_obj(parse_text(text)); });
}
FeatureInput input_from_json(const std::string& text) {
  return wrap_parse([&] { return input_from_json_obj(parse_text(text)); });
}
SafetySpec spec_from_json(const std::string& text) {
  return wrap_parse([&] { return spec_from_json_obj(parse_text(text)); });
}

std::string to_json(const UncertainGraph& g, int indent) {
  json j;
  j["num_nodes"] = g.num_nodes;
  j["undirected"] = g.undirected;
  j["fixed_edges"] = edges_to_json(g.fixed_edges);
  j["uncertain_edges"] = edges_to_json(g.uncertain_edges);
  return j.dump(indent);
}

std::string to_json(const Network& net, int indent) {
  return network_to_json_obj(net).dump(indent);
}

std::string input_to_json(const Mat& X, double epsilon, int indent) {
  json j;
  j["X"] = mat_to_json(X);
  j["epsilon"] = epsilon;
  return j.dump(indent);
}

std::string to_json(const SafetySpec& spec, int indent) {
  return spec_to_json_obj(spec).dump(indent);
}

void save_graph(const std::string& path, const UncertainGraph& g) {
  write_file(path, parse_text(to_json(g)));
}
void save_network(const std::string& path, const Network& net) {
  write_file(path, network_to_json_obj(net));
}
void save_input(const std::string& path, const Mat& X, double epsilon) {
  json j;
  j["X"] = mat_to_json(X);
  j["epsilon"] = epsilon;
  write_file(path, j);
}
void save_spec(const std::string& path, const SafetySpec& spec) {
  write_file(path, spec_to_json_obj(spec));
}

} // namespace gcnreach
