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

#include "gcnreach/mat_poly_zonotope.hpp"

#include <random>

namespace gcnreach::testing {

using Rng = std::mt19937_64;

inline double uni(Rng& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec random_vec(Rng& rng, Eigen::Index n, double lo = -1.0, double hi = 1.0) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = uni(rng, lo, hi);
  return v;
}

inline Mat random_mat(Rng& rng, Eigen::Index r, Eigen::Index c, double lo = -1.0,
                      double hi = 1.0) {
  Mat M(r, c);
  for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = uni(rng, lo, hi);
  return M;
}

/// Random set over the given identifiers; exponents in [0, max_exp].
inline PolyZonotope random_pz(Rng& rng, Eigen::Index n, Eigen::Index h, Eigen::Index q,
                              const IdVec& ids, int max_exp = 3) {
  PolyZonotope pz;
  pz.c = random_vec(rng, n);
  pz.G = random_mat(rng, n, h);
  pz.GI = random_mat(rng, n, q);
  pz.id = ids;
  pz.E.resize(static_cast<Eigen::Index>(ids.size()), h);
  std::uniform_int_distribution<int> ue(0, max_exp);
  for (Eigen::Index i = 0; i < pz.E.size(); ++i) pz.E.data()[i] = ue(rng);
  pz.validate();
  return pz;
}

inline PolyZonotope random_pz(Rng& rng, Eigen::Index n, Eigen::Index h, Eigen::Index q,
                              Eigen::Index p, int max_exp = 3) {
  return random_pz(rng, n, h, q, fresh_ids(static_cast<std::size_t>(p)), max_exp);
}

inline MatPolyZonotope random_mpz(Rng& rng, Eigen::Index r, Eigen::Index c, Eigen::Index h,
                                  const IdVec& ids, int max_exp = 2) {
  return MatPolyZonotope::reshape(random_pz(rng, r * c, h, 0, ids, max_exp), r, c);
}

inline FactorMap random_factors(Rng& rng, const IdVec& ids) {
  FactorMap m;
  for (FactorId id : ids) m[id] = uni(rng);
  return m;
}

inline FactorMap random_factors(Rng& rng, std::initializer_list<const IdVec*> id_sets) {
  FactorMap m;
  for (const IdVec* ids : id_sets)
    for (FactorId id : *ids) m[id] = uni(rng);
  return m;
}

inline Vec positional(const FactorMap& m, const IdVec& ids) {
  Vec v(static_cast<Eigen::Index>(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) v[static_cast<Eigen::Index>(i)] = m.at(ids[i]);
  return v;
}

} // namespace gcnreach::testing
