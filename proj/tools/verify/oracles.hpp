#pragma once

// Independent reference values used by the test and acceptance suites. Nothing
// here shares code paths with the solvers it checks.

#include <complex>

#include "paralab/numeric.hpp"

namespace paralab::oracle {

// psi(z) by upward recurrence and the Stirling-type asymptotic series.
Complex digamma(const Complex& z);

// Directed area (integral of x + iy) of the union of two radius-eps discs
// centred at 0 and d > 0 on the real axis, via the circular-segment lens area.
double two_disc_directed_area(double d, double eps);

// f0 orbit from z0: z0 / (1 - n z0).
Complex f0_iterate(const Complex& z0, long n);

// Closed form of H+ - H- for f0 and rhs -z on the upper component,
// derived from the reflection formula of psi.
Complex f0_cocycle_closed_form(const Complex& z);

}  // namespace paralab::oracle
