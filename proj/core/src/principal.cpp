#include "paralab/principal.hpp"

#include <cmath>

#include "paralab/errors.hpp"
#include "paralab/linalg.hpp"
#include "paralab/orbit.hpp"

namespace paralab {

NucleusTailConstants nucleus_tail_constants() {
  Real p = pi();
  return {-(p / 4) * (1 + log(Real(4))), (p / 2) * log(Real(2))};
}

namespace {

Rhs minus_pi_z() { return Rhs::monomial(1, ScalarSpec::parse("-pi")); }

}  // namespace

PrincipalPart principal_via_cohom(const SectorialSolution& h, const Complex& z) {
  PrecisionScope ps(h.digits());
  if (h.rhs().degree() != 1 || !(h.rhs().alpha0() == Complex()) || abs(h.rhs().alpha1() + Complex(pi())) > Real(1e-30))
    throw DomainError("principal parts need the sectorial solution of H(f) - H = -pi z");
  SectorialValue v = h.evaluate(z);
  Real p = pi();
  PrincipalPart out;
  out.side = h.side();
  out.error = v.error;
  if (h.side() == PetalKind::attracting)
    out.value = v.value - Complex(p / 4) + Complex(0, p * p);
  else
    out.value = z * p - v.value + Complex(p / 4);
  NucleusTailConstants c = nucleus_tail_constants();
  out.nucleus = Complex(c.nucleus);
  out.tail_offset = Complex(c.tail_offset);
  out.c0_term = out.value - out.nucleus - out.tail_offset;
  return out;
}

PrincipalPart principal_via_cohom(const Germ& f, const Complex& z, PetalKind side, const Context& ctx) {
  return principal_via_cohom(SectorialSolution(f, minus_pi_z(), side, ctx), z);
}

std::string to_string(BasisTerm t) {
  switch (t) {
    case BasisTerm::eps2_log: return "eps^2 log eps";
    case BasisTerm::eps2: return "eps^2";
    case BasisTerm::eps52_log: return "eps^(5/2) log eps";
    case BasisTerm::eps52: return "eps^(5/2)";
  }
  return "?";
}

Real basis_value(BasisTerm t, const Real& eps) {
  Real e2 = eps * eps;
  switch (t) {
    case BasisTerm::eps2_log: return e2 * log(eps);
    case BasisTerm::eps2: return e2;
    case BasisTerm::eps52_log: return e2 * sqrt(eps) * log(eps);
    case BasisTerm::eps52: return e2 * sqrt(eps);
  }
  return 0;
}

Complex ExpansionFit::coefficient(BasisTerm t) const {
  for (size_t i = 0; i < basis.size(); ++i)
    if (basis[i] == t) return coefficients[i];
  throw DomainError("basis term " + to_string(t) + " is not in the fit");
}

std::vector<Real> log_grid(double lo, double hi, int n) {
  if (!(lo > 0 && hi > lo) || n < 2) throw DomainError("log grid needs 0 < lo < hi and n >= 2");
  std::vector<Real> g;
  Real a = log(Real(lo)), b = log(Real(hi));
  for (int i = 0; i < n; ++i) g.push_back(exp(a + (b - a) * i / (n - 1)));
  return g;
}

ExpansionFit fit_expansion(const std::vector<Real>& eps, const std::vector<Complex>& area, const GeometryOptions& opt) {
  int m = static_cast<int>(eps.size()), k = static_cast<int>(opt.basis.size());
  if (m != static_cast<int>(area.size())) throw DomainError("eps grid and samples differ in length");
  if (k == 0 || m < 2 * k) throw DomainError("grid size must be at least twice the basis size");
  // Rows divided by eps^2: the remainder is relatively O(eps^{1/2}), so this weights the
  // small-eps samples where the expansion is sharpest.
  Matrix A(m, k);
  std::vector<Complex> b(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    Real e2 = eps[static_cast<size_t>(i)] * eps[static_cast<size_t>(i)];
    for (int j = 0; j < k; ++j) A(i, j) = Complex(basis_value(opt.basis[static_cast<size_t>(j)], eps[static_cast<size_t>(i)]) / e2);
    b[static_cast<size_t>(i)] = area[static_cast<size_t>(i)] / e2;
  }
  LeastSquares ls = least_squares(A, b);
  ExpansionFit fit;
  fit.basis = opt.basis;
  fit.coefficients = ls.x;
  fit.sensitivity = ls.sensitivity;
  fit.condition_number = ls.condition_number;
  fit.residual_norm = ls.residual_norm;
  fit.eps_grid = eps;
  fit.samples = area;
  if (ls.condition_number > opt.max_condition)
    throw IllConditionedError("design condition number " + to_string(ls.condition_number, 3) +
                              " exceeds the threshold; widen the eps range");
  return fit;
}

ExpansionFit principal_via_geometry(const Germ& f, const Complex& z, const std::vector<Real>& eps_grid,
                                    const Context& ctx, const GeometryOptions& opt) {
  if (eps_grid.empty()) throw DomainError("empty eps grid");
  PrecisionScope ps(ctx);
  Real lo = eps_grid.front(), hi = eps_grid.front();
  for (const auto& e : eps_grid) {
    lo = std::min<Real>(lo, e);
    hi = std::max<Real>(hi, e);
  }
  AreaEvaluator ev(orbit_for_area(f, z, lo.convert_to<double>(), ctx));
  std::vector<Complex> area;
  for (const auto& e : eps_grid) area.push_back(ev.area(e).value);
  return fit_expansion(eps_grid, area, opt);
}

C0Result c0_of_orbit_sum(const Germ& f, const Complex& z, const Context& ctx, double tol) {
  PrecisionScope ps(ctx);
  if (abs(z) == 0) throw DomainError("z = 0");
  Real floor = pow(Real(10), 8 - static_cast<int>(ctx.digits));
  Real target = std::max<Real>(Real(tol), floor);
  // The 1/n expansion of the orbit sum is valid once n exceeds ~1/|z|.
  long n = std::max<long>(16, std::lround(4 / abs(z).convert_to<double>()));
  const int levels = 18;
  std::vector<std::vector<Complex>> R;
  Complex w = z, S = z;
  long l = 0;
  Real escape = std::max<Real>(Real(1), 4 * abs(z));
  C0Result out;
  for (int j = 0; j < levels; ++j) {
    for (; l < n; ++l) {
      w = f.eval(w);
      if (!isfinite(w) || abs(w) > escape) throw EscapeError("z is not in the attracting petal");
      S += w;
    }
    std::vector<Complex> row{S + Complex(log(Real(n)))};
    Real four = 1;
    for (int m = 1; m <= j; ++m) {
      four *= 2;
      row.push_back((row[static_cast<size_t>(m - 1)] * four - R.back()[static_cast<size_t>(m - 1)]) / (four - 1));
    }
    R.push_back(row);
    if (j >= 3) {
      Real err = abs(R[static_cast<size_t>(j)].back() - R[static_cast<size_t>(j - 1)].back());
      out.value = R[static_cast<size_t>(j)].back();
      out.error = err;
      out.n_max = n;
      if (err <= target * std::max<Real>(Real(1), abs(out.value))) return out;
    }
    n *= 2;
  }
  throw ConvergenceError("Richardson estimates of c0 did not settle (last change " + to_string(out.error, 3) + ")");
}

Complex pringlo_closed_form(const Germ& phi, const Complex& z, PetalKind side) {
  Complex p = phi.eval(z);
  Real pp = pi();
  Real guard = pow(Real(10), -static_cast<int>(current_digits()) / 2);
  if (side == PetalKind::attracting) {
    if (p.re > 0 && abs(p.im) <= guard * abs(p)) throw BranchError("phi(z) is on the cut of log+ (positive reals)");
    return log(p, LogBranch::plus) * (-pp) + Complex(-pp / 4, pp * pp);
  }
  if (side == PetalKind::repelling) {
    if (p.re < 0 && abs(p.im) <= guard * abs(p)) throw BranchError("phi(z) is on the cut of the principal log");
    return z * pp + log(p) * pp + Complex(pp / 4);
  }
  throw DomainError("side must be attracting or repelling");
}

}  // namespace paralab
