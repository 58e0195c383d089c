#pragma once

#include <functional>

#include "paralab/numeric.hpp"

namespace paralab {

struct QuadratureResult {
  Complex value;
  Real error;  // difference between the last two levels
  int levels = 0;
};

// Tanh-sinh quadrature of a complex-valued f on [a, b], halving the step until two
// successive levels agree to tol (absolute). Endpoint singularities are tolerated.
QuadratureResult tanh_sinh(const std::function<Complex(const Real&)>& f, const Real& a, const Real& b,
                           const Real& tol, int max_level = 12);

}  // namespace paralab
