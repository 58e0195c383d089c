#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "paralab/errors.hpp"
#include "paralab/fixtures.hpp"
#include "paralab/principal.hpp"
#include "verify/oracles.hpp"

using namespace paralab;

namespace {

double dist(const Complex& a, const Complex& b) { return static_cast<double>(abs(a - b)); }

Rhs minus_pi_z() { return Rhs::monomial(1, ScalarSpec::parse("-pi")); }

std::vector<Complex> petal_points(int n, unsigned seed, double centre) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> r(0.03, 0.3), a(-0.6, 0.6);
  std::vector<Complex> out;
  for (int i = 0; i < n; ++i) {
    double t = centre + a(rng), rr = r(rng);
    out.push_back(Complex(Real(rr * std::cos(t)), Real(rr * std::sin(t))));
  }
  return out;
}

}  // namespace

TEST(Constants, NucleusAndTail) {
  PrecisionScope ps(32);
  NucleusTailConstants c = nucleus_tail_constants();
  EXPECT_NEAR(static_cast<double>(c.nucleus), -1.8741912, 1e-7);
  EXPECT_NEAR(static_cast<double>(c.tail_offset), 1.0887930, 1e-7);
  EXPECT_LT(abs(c.nucleus + c.tail_offset + pi() / 4), 1e-30);
}

TEST(PrincipalCohom, F0AtMinusHalf) {
  Context ctx{32};
  PrincipalPart p = principal_via_cohom(fixtures::f0(), Complex(Real(-0.5)), PetalKind::attracting, ctx);
  PrecisionScope ps(32);
  EXPECT_LT(dist(p.value, Complex(pi() * (Real(3) / 4 - euler_gamma()))), 1e-10);
  EXPECT_NEAR(static_cast<double>(p.value.re), 0.54281, 1e-5);
  EXPECT_LT(dist(p.c0_term + p.nucleus + p.tail_offset, p.value), 1e-30);
}

TEST(PrincipalCohom, ExpFamilyClosedForm) {
  Context ctx{32};
  Germ phi = fixtures::phi("expneg");
  Germ f = fixtures::exp_family(phi);
  PrecisionScope ps(32);
  Complex z(Real(-0.5));
  PrincipalPart p = principal_via_cohom(f, z, PetalKind::attracting, ctx);
  EXPECT_LT(dist(p.value, pringlo_closed_form(phi, z, PetalKind::attracting)), 1e-10);
  Complex w(Real(0.3), Real(0.1));
  PrincipalPart m = principal_via_cohom(f, w, PetalKind::repelling, ctx);
  EXPECT_LT(dist(m.value, pringlo_closed_form(phi, w, PetalKind::repelling)), 1e-10);
}

TEST(PrincipalCohom, DifferenceEquation) {
  Context ctx{32};
  for (const char* name : {"f0", "log2exp", "conj-f0:mobius"}) {
    Germ f = fixtures::by_name(name);
    SectorialSolution hp(f, minus_pi_z(), PetalKind::attracting, ctx);
    SectorialSolution hm(f, minus_pi_z(), PetalKind::repelling, ctx);
    Germ finv = invert(f);
    PrecisionScope ps(32);
    for (const auto& z : petal_points(20, 4, M_PI)) {
      Complex r = principal_via_cohom(hp, f.eval(z)).value - principal_via_cohom(hp, z).value + z * pi();
      EXPECT_LT(abs(r), 1e-10) << name << " " << z;
    }
    for (const auto& z : petal_points(20, 9, 0)) {
      Complex r = principal_via_cohom(hm, finv.eval(z)).value - principal_via_cohom(hm, z).value + z * pi();
      EXPECT_LT(abs(r), 1e-10) << name << " " << z;
    }
  }
}

TEST(C0, F0AndConsistency) {
  Context ctx{32};
  PrecisionScope ps(32);
  C0Result c = c0_of_orbit_sum(fixtures::f0(), Complex(Real(-0.5)), ctx);
  EXPECT_LT(dist(c.value, Complex(1 - euler_gamma())), 1e-15);
  for (const char* name : {"f0", "log2exp"}) {
    Germ f = fixtures::by_name(name);
    for (double z0 : {-0.5, -0.2}) {
      Complex z(Real(z0), Real(0.05));
      C0Result cz = c0_of_orbit_sum(f, z, ctx);
      PrincipalPart p = principal_via_cohom(f, z, PetalKind::attracting, ctx);
      EXPECT_LT(dist(cz.value * pi() - Complex(pi() / 4), p.value), 1e-8) << name << " " << z0;
    }
  }
  EXPECT_THROW(c0_of_orbit_sum(fixtures::f0(), Complex(Real(0.3)), ctx), EscapeError);
}

TEST(Pringlo, IdentityExamples) {
  PrecisionScope ps(32);
  Germ id = fixtures::phi("id");
  Real p = pi();
  EXPECT_LT(dist(pringlo_closed_form(id, Complex(Real(-0.5)), PetalKind::attracting), Complex(p * log(Real(2)) - p / 4)), 1e-30);
  EXPECT_LT(dist(pringlo_closed_form(id, Complex(Real(0.5)), PetalKind::repelling),
                 Complex(p / 2 + p * log(Real(0.5)) + p / 4)),
            1e-30);
  EXPECT_THROW(pringlo_closed_form(id, Complex(Real(0.5)), PetalKind::attracting), BranchError);
  EXPECT_THROW(pringlo_closed_form(id, Complex(Real(-0.5)), PetalKind::repelling), BranchError);
}

TEST(Pringlo, GluingOnIntersections) {
  Context ctx{40};
  std::vector<Complex> up{Complex(Real(0.05), Real(0.2)), Complex(Real(-0.05), Real(0.15))};
  std::vector<Complex> low{Complex(Real(0.05), Real(-0.2)), Complex(Real(-0.05), Real(-0.15))};
  for (const char* phi : {"expneg", "mobius", "quad"}) {
    Germ f = fixtures::exp_family(fixtures::phi(phi));
    SectorialSolution hp(f, minus_pi_z(), PetalKind::attracting, ctx);
    SectorialSolution hm(f, minus_pi_z(), PetalKind::repelling, ctx);
    PrecisionScope ps(40);
    Real p = pi();
    auto glue = [&](const Complex& z) {
      Complex a = principal_via_cohom(hp, z).value - Complex(0, p * p);
      Complex b = z * p - principal_via_cohom(hm, z).value;
      return a - b;
    };
    for (const auto& z : up) EXPECT_LT(abs(glue(z)), 1e-10) << phi << " " << z;
    // On V^low the two log branches differ by 2 pi i: the gluing holds up to -2 pi^2 i.
    for (const auto& z : low) EXPECT_LT(dist(glue(z), Complex(0, -2 * p * p)), 1e-10) << phi << " " << z;
  }
  // f0 is not in the family: the upper difference is the exponentially small cocycle.
  SectorialSolution hp(fixtures::f0(), minus_pi_z(), PetalKind::attracting, ctx);
  SectorialSolution hm(fixtures::f0(), minus_pi_z(), PetalKind::repelling, ctx);
  PrecisionScope ps(40);
  Complex z(Real("0.1"), Real("0.3"));
  Complex d = (principal_via_cohom(hp, z).value - Complex(0, pi() * pi())) - (z * pi() - principal_via_cohom(hm, z).value);
  Complex ref = oracle::f0_cocycle_closed_form(z) * pi();
  EXPECT_LT(static_cast<double>(abs(d - ref) / abs(ref)), 1e-4);
}

TEST(Geometry, F0RouteAgreement) {
  Context ctx{32};
  std::vector<Real> grid;
  {
    PrecisionScope ps(32);
    grid = log_grid(1e-6, 1e-3, 40);
  }
  for (const char* name : {"f0", "log2exp"}) {
    for (double z0 : {-0.3, -0.45}) {
      Germ f = fixtures::by_name(name);
      ExpansionFit fit = principal_via_geometry(f, Complex(Real(z0)), grid, ctx);
      PrincipalPart p = principal_via_cohom(f, Complex(Real(z0)), PetalKind::attracting, ctx);
      PrecisionScope ps(32);
      EXPECT_LT(dist(fit.principal(), p.value), 1e-3) << name << " " << z0;
      EXPECT_LT(dist(fit.coefficient(BasisTerm::eps2_log), Complex(pi() / 2)), 1e-4) << name << " " << z0;
      EXPECT_LT(fit.condition_number, 1e4);
    }
  }
}

TEST(Geometry, MissingLogTermInflatesResidual) {
  Context ctx{32};
  PrecisionScope ps(32);
  std::vector<Real> grid = log_grid(1e-6, 1e-3, 40);
  ExpansionFit full = principal_via_geometry(fixtures::f0(), Complex(Real(-0.3)), grid, ctx);
  GeometryOptions opt;
  opt.basis = {BasisTerm::eps2, BasisTerm::eps52_log, BasisTerm::eps52};
  ExpansionFit cut = fit_expansion(full.eps_grid, full.samples, opt);
  EXPECT_GT(cut.residual_norm, 100 * full.residual_norm);
}

TEST(Geometry, IllConditionedAndPreconditions) {
  PrecisionScope ps(32);
  std::vector<Real> grid = log_grid(1e-4, 1.001e-4, 12);
  std::vector<Complex> samples;
  for (const auto& e : grid) samples.push_back(Complex(e * e * log(e)));
  EXPECT_THROW(fit_expansion(grid, samples), IllConditionedError);
  std::vector<Real> tiny(grid.begin(), grid.begin() + 6);
  std::vector<Complex> ts(samples.begin(), samples.begin() + 6);
  EXPECT_THROW(fit_expansion(tiny, ts), DomainError);
}
