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

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace gcnreach {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
/// Integer exponent matrix, one row per factor identifier, one column per
/// dependent generator.
using ExpMat = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>;
using FactorId = std::uint64_t;
using IdVec = std::vector<FactorId>;
/// Assignment of factor values in [-1,1], keyed by identifier.
using FactorMap = std::unordered_map<FactorId, double>;

/// Thrown when matrix/vector shapes do not chain.
class ShapeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a value is outside its mathematical domain
/// (factor outside [-1,1], inverse square root at x <= 0, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Returns a process-unique factor identifier. Thread safe.
FactorId fresh_id();

/// Returns `count` consecutive fresh identifiers.
IdVec fresh_ids(std::size_t count);

/// Makes sure future fresh_id() calls return values > `seen`. Used when
/// deserializing sets whose identifiers were issued by another process.
void reserve_ids_above(FactorId seen);

inline void require(bool cond, const char* msg) {
  if (!cond) throw ShapeError(msg);
}

} // namespace gcnreach
