#pragma once

#include <string>
#include <vector>

#include "paralab/cohom.hpp"
#include "paralab/germ.hpp"
#include "paralab/numeric.hpp"

namespace paralab {

enum class PrincipalRoute { cohom, geometric };

// H^f on V+ (side attracting) or H^{f^-1} on V- (side repelling).
struct PrincipalPart {
  Complex value;
  Real error;
  PrincipalRoute route = PrincipalRoute::cohom;
  PetalKind side = PetalKind::attracting;
  Complex nucleus;      // constant from the overlapping discs
  Complex tail_offset;  // (pi/2) log 2 from n_eps ~ (2 eps)^{-1/2}
  Complex c0_term;      // value - nucleus - tail_offset
};

PrincipalPart principal_via_cohom(const Germ& f, const Complex& z, PetalKind side, const Context& ctx);
// Same, reusing a sectorial solution of H(f) - H = -pi z.
PrincipalPart principal_via_cohom(const SectorialSolution& h, const Complex& z);

struct NucleusTailConstants {
  Real nucleus;      // -(pi/4)(1 + log 4)
  Real tail_offset;  // (pi/2) log 2
};
NucleusTailConstants nucleus_tail_constants();

enum class BasisTerm { eps2_log, eps2, eps52_log, eps52 };
std::string to_string(BasisTerm t);
Real basis_value(BasisTerm t, const Real& eps);

struct ExpansionFit {
  std::vector<BasisTerm> basis;
  std::vector<Complex> coefficients;
  std::vector<Real> sensitivity;  // per coefficient, per unit of residual
  Real condition_number;
  Real residual_norm;              // of the eps^2-scaled residuals
  std::vector<Real> eps_grid;
  std::vector<Complex> samples;    // A(z, eps)
  Complex coefficient(BasisTerm t) const;
  Complex principal() const { return coefficient(BasisTerm::eps2); }
};

struct GeometryOptions {
  std::vector<BasisTerm> basis{BasisTerm::eps2_log, BasisTerm::eps2, BasisTerm::eps52_log, BasisTerm::eps52};
  double max_condition = 1e8;
};

std::vector<Real> log_grid(double lo, double hi, int n);

// Least squares of A(z, eps) / eps^2 against basis / eps^2.
ExpansionFit fit_expansion(const std::vector<Real>& eps, const std::vector<Complex>& area, const GeometryOptions& opt = {});
ExpansionFit principal_via_geometry(const Germ& f, const Complex& z, const std::vector<Real>& eps_grid, const Context& ctx,
                                    const GeometryOptions& opt = {});

struct C0Result {
  Complex value;
  Real error;  // difference of the last two diagonal Richardson entries
  long n_max = 0;
};
// C(z) = lim (sum_{l <= n} f^l(z) + log n), Richardson on n = 2^j.
C0Result c0_of_orbit_sum(const Germ& f, const Complex& z, const Context& ctx, double tol = 1e-20);

// -pi log+ phi(z) + i pi^2 - pi/4 on V+, pi z + pi log- phi(z) + pi/4 on V-.
Complex pringlo_closed_form(const Germ& phi, const Complex& z, PetalKind side);

}  // namespace paralab
