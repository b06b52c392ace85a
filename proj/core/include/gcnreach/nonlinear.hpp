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

#include "gcnreach/poly_zonotope.hpp"

#include <span>
#include <string>

namespace gcnreach {

/// Element-wise nonlinear functions supported by the image enclosure.
/// invsqrt (x -> x^(-1/2)) requires a strictly positive domain.
enum class ActivationKind { Relu, Tanh, Sigmoid, InvSqrt };

double act_eval(ActivationKind f, double x);
double act_deriv(ActivationKind f, double x);
ActivationKind activation_from_name(const std::string& name);
std::string activation_name(ActivationKind f);

/// Scalar polynomial with coefficients in ascending degree order, together
/// with the domain it was fitted on.
struct ScalarPoly {
  std::vector<double> coeffs;  // coeffs[0] + coeffs[1] x + ...
  double lo = 0.0;
  double hi = 0.0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  double eval(double x) const;
  double deriv_eval(double x) const;
};

struct EncloseConfig {
  int poly_order = 1;
  int grid_points = 10000;
  double safety_factor = 1.01;
  /// Diagnostics only: skip the error generators (step 6). The resulting set
  /// is NOT an enclosure; used to measure how much the errors contribute.
  bool suppress_error = false;
};

/// Polynomial approximation of f on [l,u]. Order 1 uses the chord slope with
/// the offset centred on the residual band; order >= 2 a least-squares fit
/// on a uniform 1000-point grid, offset re-centred the same way. A point
/// domain yields the constant f(l).
ScalarPoly fit_poly(ActivationKind f, double l, double u, int order);

/// Maximum of |x^(-1/2) - (a x + b)| over [l,u], 0 < l <= u. Closed form:
/// the only stationary point of the residual is cbrt((1/(2a))^2), so the
/// maximum is attained there or at a boundary.
double invsqrt_error(double a, double b, double l, double u);

/// Sound upper bound on max |f - p| over [l,u]: dense-grid maximum plus
/// padding delta*L/2, where L bounds |(f-p)'| via the grid maximum of the
/// derivative magnitude times the safety factor. The relu kink is inserted
/// as a grid point; a linear polynomial under invsqrt uses the closed form.
double generic_error(ActivationKind f, const ScalarPoly& p, double l, double u,
                     const EncloseConfig& cfg = {});

/// Exact image of per-coordinate polynomials over the set, evaluated with a
/// Horner scheme of element-wise dependent products. polys.size() must equal
/// the set dimension. Independent generators are promoted first.
PolyZonotope poly_eval_set(const PolyZonotope& pz, std::span<const ScalarPoly> polys);

/// One-dimensional convenience overload.
PolyZonotope poly_eval_set(const PolyZonotope& pz, const ScalarPoly& p);

/// Image enclosure of an element-wise function: per coordinate, bound the
/// input, fit a polynomial, bound the approximation error, evaluate the
/// polynomial exactly over the set, and append one independent error
/// generator per coordinate (at most n new generators).
PolyZonotope enclose_elementwise(const PolyZonotope& pz, ActivationKind f,
                                 const EncloseConfig& cfg = {});

} // namespace gcnreach
