#include "paralab/cohom.hpp"

#include <cmath>
#include <sstream>

#include "paralab/errors.hpp"
#include "paralab/quadrature.hpp"

namespace paralab {

// ------------------------------------------------------------------------- Rhs

Rhs::Rhs(std::vector<ScalarSpec> coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && c_.back().value() == Complex()) c_.pop_back();
  if (c_.empty()) throw DomainError("right-hand side g must not vanish identically");
}

Rhs Rhs::monomial(int m, const ScalarSpec& c) {
  if (m < 0) throw DomainError("monomial degree must be >= 0");
  std::vector<ScalarSpec> v(static_cast<size_t>(m + 1));
  v[static_cast<size_t>(m)] = c;
  return Rhs(std::move(v));
}

Complex Rhs::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return Complex();
  return c_[static_cast<size_t>(k)].value();
}

int Rhs::multiplicity() const {
  for (int k = 0; k <= degree(); ++k)
    if (!(coeff(k) == Complex())) return k;
  return degree();
}

Complex Rhs::eval(const Complex& z) const {
  Complex s;
  for (int k = degree(); k >= 0; --k) s = s * z + coeff(k);
  return s;
}

Series Rhs::series(int order) const {
  Series s = Series::zero(order);
  for (int k = 0; k <= std::min(order, degree()); ++k) s[k] = coeff(k);
  return s;
}

Rhs Rhs::operator+(const Rhs& o) const {
  std::vector<ScalarSpec> v;
  for (int k = 0; k <= std::max(degree(), o.degree()); ++k) {
    const ScalarSpec* a = k <= degree() ? &c_[static_cast<size_t>(k)] : nullptr;
    const ScalarSpec* b = k <= o.degree() ? &o.c_[static_cast<size_t>(k)] : nullptr;
    if (a && b && !(a->value() == Complex()) && !(b->value() == Complex())) {
      // Keep symbolic pi factors exact; mixed sums are written out at generous precision.
      PrecisionScope ps(120);
      Complex av(Real(a->re), Real(a->im)), bv(Real(b->re), Real(b->im));
      ScalarSpec sum = a->pi_power == b->pi_power ? ScalarSpec::of(av + bv) : ScalarSpec::of(a->value() + b->value());
      if (a->pi_power == b->pi_power) sum.pi_power = a->pi_power;
      v.push_back(sum);
    } else {
      v.push_back(!b || (a && b->value() == Complex()) ? *a : *b);
    }
  }
  return Rhs(std::move(v));
}

std::string Rhs::str() const {
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k <= degree(); ++k) {
    if (c_[static_cast<size_t>(k)].value() == Complex()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << c_[static_cast<size_t>(k)].str() << ")";
    if (k == 1) os << "*z";
    if (k > 1) os << "*z^" << k;
  }
  return os.str();
}

// -------------------------------------------------------------------- formal

Complex FormalSolution::regular(const Complex& z) const {
  Complex s;
  for (int k = order; k >= 1; --k) s = (s + coeffs[static_cast<size_t>(k - 1)]) * z;
  return s;
}

Complex FormalSolution::eval(const Complex& z, LogBranch b) const {
  Complex h = regular(z) - alpha0 / z;
  if (!(alpha1 == Complex())) h += alpha1 * log(z, b);
  return h;
}

FormalSolution formal_solution(const Germ& f, const Rhs& g, int K) {
  if (K < 1) throw DomainError("formal order K must be >= 1");
  Series s = f.series(K + 3);
  Real tol = pow(Real(10), -static_cast<int>(current_digits()) / 2);
  if (abs(s[0]) > tol || abs(s[1] - Complex(1)) > tol) throw NotParabolicError("germ is not tangent to the identity");
  if (abs(s[2] - Complex(1)) > tol) throw DomainError("the solver assumes a_2 = 1 (prenormalize the germ)");
  FormalSolution out;
  out.alpha0 = g.alpha0();
  out.alpha1 = g.alpha1();
  out.order = K;
  Series u = s.shifted(-1);  // f / z
  Series inv = u.reciprocal();
  inv[0] -= Complex(1);
  Series pole = inv.shifted(-1);  // 1/f - 1/z
  Series delta = g.series(K + 1) + pole.truncated(K + 1) * out.alpha0 - u.log().truncated(K + 1) * out.alpha1;
  if (abs(delta[0]) > tol) throw ObstructionError("constant term of the reduced rhs does not vanish");
  if (abs(delta[1]) > tol)
    throw ObstructionError("the z-coefficient of the reduced rhs is " + to_string(abs(delta[1]), 6) +
                           ": no solution of the form -a0/z + a1 log z + zC[[z]] (f is outside the formal class this rhs needs)");
  out.coeffs = solve_difference_series(s, delta, K);
  // Residual of sum c_j (f^j - z^j) - delta through z^{K+1}.
  Series fs = s.truncated(K + 1);
  Series acc = -delta.truncated(K + 1);
  Series fp = Series::constant(Complex(1), K + 1);
  for (int j = 1; j <= K; ++j) {
    fp = mul_trunc(fp, fs, K + 1);
    Series d = fp;
    d[j] -= Complex(1);
    acc += d * out.coeffs[static_cast<size_t>(j - 1)];
  }
  out.residual = 0;
  for (int k = 0; k <= K + 1; ++k) out.residual = std::max<Real>(out.residual, abs(acc[k]));
  return out;
}

// ----------------------------------------------------------------- sectorial

SectorialSolution::SectorialSolution(Germ f, Rhs g, PetalKind side, const Context& ctx, SectorialParams params)
    : f_(std::move(f)), g_(std::move(g)), side_(side), digits_(ctx.digits) {
  if (side != PetalKind::attracting && side != PetalKind::repelling)
    throw DomainError("sectorial solutions live on the attracting or repelling petal");
  PrecisionScope ps(ctx);
  // Optimal truncation of the 1-Gevrey series sits near K ~ 2 pi r^{-1}; the cap keeps
  // the hand-off radius near 0.05 at low precision and grows with the digits otherwise.
  K_ = params.K > 0 ? params.K : (digits_ <= 20 ? 24 : static_cast<int>(digits_) + 4);
  formal_ = formal_solution(f_, g_, K_ + 2);
  // c_{K+1}, c_{K+2} estimate the truncation; parity can make c_K itself vanish.
  tail_.assign(formal_.coeffs.end() - 2, formal_.coeffs.end());
  formal_.coeffs.resize(static_cast<size_t>(K_));
  formal_.order = K_;
  step_ = side == PetalKind::attracting ? f_ : invert(f_);
  n_max_ = params.n_max;
  Real cK = std::max<Real>(abs(tail_[0]), abs(tail_[1]));
  if (params.r_switch > 0) {
    r_switch_ = params.r_switch;
  } else if (cK == 0) {
    r_switch_ = 0.05;
  } else {
    Real r = pow(pow(Real(10), -static_cast<int>(digits_)) / cK, Real(1) / (K_ + 1));
    r_switch_ = std::min(0.05, r.convert_to<double>());
  }
  error_estimate_ = truncation(Complex(Real(r_switch_)));
}

Real SectorialSolution::truncation(const Complex& w) const {
  Real a = abs(w);
  return abs(tail_[0]) * pow(a, K_ + 1) + abs(tail_[1]) * pow(a, K_ + 2);
}

Complex SectorialSolution::delta(const Complex& y, const Complex& fy) const {
  Complex d = g_.eval(y);
  if (!(formal_.alpha0 == Complex())) d += formal_.alpha0 * (Complex(1) / fy - Complex(1) / y);
  if (!(formal_.alpha1 == Complex())) d -= formal_.alpha1 * log(fy / y);
  return d;
}

SectorialValue SectorialSolution::regular(const Complex& z) const {
  PrecisionScope ps(digits_);
  if (abs(z) == 0) throw DomainError("z = 0 is not in a petal");
  Complex w = z, sum;
  Real escape = std::max<Real>(Real(1), 4 * abs(z));
  Real r = r_switch_;
  Real a0 = abs(formal_.alpha0), a1 = abs(formal_.alpha1);
  // Rounding: f(y) carries an absolute error of a few ulp near 0, so the log and pole
  // parts of delta lose 1/|y| and 1/|y|^2 relative to it.
  Real rounding = 0;
  long n = 0;
  while (abs(w) >= r) {
    if (n >= n_max_) throw ConvergenceError("orbit did not reach the hand-off radius within n_max steps");
    Complex next;
    try {
      next = step_.eval(w);
    } catch (const DomainError& e) {
      throw EscapeError(std::string("orbit left the germ's domain: ") + e.what());
    }
    if (!isfinite(next) || abs(next) > escape)
      throw EscapeError("z is not in the " + std::string(side_ == PetalKind::attracting ? "attracting" : "repelling") + " petal");
    Complex d = side_ == PetalKind::attracting ? delta(w, next) : delta(next, w);
    sum += d;
    Real y = std::min<Real>(abs(w), abs(next));
    rounding += 4 + abs(d) + abs(sum) + 4 * a1 / y + 4 * a0 / (y * y);
    w = next;
    ++n;
  }
  SectorialValue v;
  v.value = formal_.regular(w) + (side_ == PetalKind::attracting ? -sum : sum);
  v.steps = n;
  Real ulp = pow(Real(10), -static_cast<int>(digits_));
  v.error = truncation(w) + ulp * (rounding + (K_ + 1) * (1 + abs(v.value)));
  return v;
}

SectorialValue SectorialSolution::evaluate(const Complex& z) const {
  SectorialValue v = regular(z);
  PrecisionScope ps(digits_);
  Complex sing = -formal_.alpha0 / z;
  if (!(formal_.alpha1 == Complex())) sing += formal_.alpha1 * log(z, branch());
  v.value += sing;
  v.error += pow(Real(10), -static_cast<int>(digits_)) * abs(sing) * 4;
  return v;
}

SectorialSolution sectorial_solution(const Germ& f, const Rhs& g, PetalKind side, const Context& ctx,
                                     const SectorialParams& params) {
  return SectorialSolution(f, g, side, ctx, params);
}

std::vector<CocycleSample> cocycle(const Germ& f, const Rhs& g, const std::vector<Complex>& points,
                                   const Context& ctx, const CocycleOptions& opt) {
  SectorialSolution hp(f, g, PetalKind::attracting, ctx, opt.params);
  SectorialSolution hm(f, g, PetalKind::repelling, ctx, opt.params);
  PrecisionScope ps(ctx);
  std::vector<CocycleSample> out;
  for (const auto& z : points) {
    if (z.im == 0) throw DomainError("cocycle points must lie off the real axis");
    CocycleSample s;
    s.z = z;
    s.upper = z.im > 0;
    auto a = hp.evaluate(z), b = hm.evaluate(z);
    s.value = s.upper ? a.value - b.value : b.value - a.value;
    // log+ z - log- z is 0 on V^up and 2 pi i on V^low.
    s.branch_constant = s.upper ? Complex() : Complex(0, -2) * pi() * g.alpha1();
    s.reduced = s.value - s.branch_constant;
    s.error = a.error + b.error;
    s.resolved = abs(s.reduced) > 3 * s.error;
    if (opt.require_resolved && !s.resolved)
      throw PrecisionError("cocycle value " + to_string(abs(s.reduced), 3) + " is below the error estimate " +
                           to_string(s.error, 3) + "; raise the precision");
    out.push_back(s);
  }
  return out;
}

// --------------------------------------------------------------- Borel-Laplace

namespace {

// Taylor series of Bb(xi) / (e^{-xi} - 1), which is regular at 0 with value -1/2.
Series borel_ratio_series(int order) {
  Series num = Series::zero(order), den = Series::zero(order);
  Real fact = 1;  // (m+1)!
  for (int m = 0; m <= order; ++m) {
    fact *= (m + 1);
    Real sign = m % 2 ? -1 : 1;
    den[m] = Complex(-sign / fact);
    num[m] = Complex(sign / (fact * (m + 2)));
  }
  return num * den.reciprocal();
}

}  // namespace

BorelValue borel_laplace_model(double theta, const Complex& w, const Context& ctx) {
  double t = std::remainder(theta, 2 * M_PI);
  if (std::abs(std::abs(t) - M_PI / 2) < 0.2)
    throw RayError("direction within 0.2 rad of the pole rays arg xi = +-pi/2");
  PrecisionScope ps(ctx);
  Complex e = expi(Real(theta));
  Complex c = w * e;
  if (!(c.re > 0)) throw DomainError("Re(w e^{i theta}) must be positive for the Laplace integral");
  int order = static_cast<int>(ctx.digits) + 10;
  Series small = borel_ratio_series(order);
  auto ratio = [&](const Complex& xi) {
    if (abs(xi) < Real(0.5)) return small.eval(xi);
    Complex em = exp(-xi);
    return (em + xi - Complex(1)) / (xi * (em - Complex(1)));
  };
  auto integrand = [&](const Real& r) {
    Complex xi = e * r;
    return exp(-xi * w) * ratio(xi) * e;
  };
  Real digits_ln = Real(static_cast<int>(ctx.digits) + 5) * log(Real(10));
  Real L = digits_ln / c.re + 1;
  Real tol = pow(Real(10), 3 - static_cast<int>(ctx.digits));
  QuadratureResult q = tanh_sinh(integrand, Real(0), L, tol);
  // |ratio| <= 2 on the ray away from 0; tail beyond L.
  Real tail = 2 * exp(-L * c.re) / c.re;
  return {q.value, q.error + tail};
}

// ---------------------------------------------------------------- constructors

namespace {

std::function<Complex(const Complex&)> global_map(const Germ& phi, const Germ& phi_inv, const Rhs& g, int l) {
  Complex a0 = g.alpha0(), a1 = g.alpha1();
  if (l >= 2) {
    return [=](const Complex& z) {
      Complex p = phi.eval(z);
      Complex al = g.coeff(l);
      Complex ratio = Complex(1) + g.eval(z) * Real(l - 1) / (al * powi(p, l - 1));
      Complex root = l == 2 ? ratio : pow(ratio, Complex(Real(1) / (l - 1)));
      return phi_inv.eval(p * root);
    };
  }
  if (a0 == Complex()) {
    return [=](const Complex& z) {
      Complex p = phi.eval(z);
      return phi_inv.eval(p * exp(g.eval(z) / a1));
    };
  }
  if (a1 == Complex()) {
    return [=](const Complex& z) {
      Complex p = phi.eval(z);
      return phi_inv.eval(p / (Complex(1) - g.eval(z) * p / a0));
    };
  }
  // -a0/u + a1 log u = -a0/p + a1 log p + g with u = p e^s:
  // a0 (1 - e^{-s}) + a1 s p - g p = 0.
  return [=](const Complex& z) {
    Complex p = phi.eval(z), gp = g.eval(z) * p;
    Complex s = gp / a0;
    Real tol = pow(Real(10), 2 - static_cast<int>(current_digits()));
    for (int it = 0; it < 80; ++it) {
      Complex em = exp(-s);
      Complex F = a0 * (Complex(1) - em) + a1 * s * p - gp;
      Complex dF = a0 * em + a1 * p;
      Complex step = F / dF;
      s -= step;
      if (abs(s) > Real(0.5)) throw BranchError("h^{-1} leaves the principal sheet (z too large)");
      if (abs(step) <= tol * std::max<Real>(Real(1), abs(s))) return phi_inv.eval(p * exp(s));
    }
    throw BranchError("Newton iteration for h^{-1} did not converge");
  };
}

Series global_series(const Germ& phi, const Rhs& g, int l, int n) {
  Series ps = phi.series(n + std::max(l, 1) + 1);
  Series gs = g.series(ps.order());
  Complex a0 = g.alpha0(), a1 = g.alpha1();
  Series inner;
  if (l >= 2) {
    Complex al = g.coeff(l);
    Series pz = ps.shifted(-1).truncated(n);  // phi / z
    Series q = gs.shifted(-(l - 1)).truncated(n) * (pz.pow(Complex(l - 1)).reciprocal() * (Complex(Real(l - 1)) / al));
    Series ratio = Series::constant(Complex(1), n) + q;
    inner = mul_trunc(ps.truncated(n), ratio.pow(Complex(Real(1) / (l - 1))), n);
  } else if (a0 == Complex()) {
    inner = mul_trunc(ps.truncated(n), (gs.truncated(n) * (Complex(1) / a1)).exp(), n);
  } else if (a1 == Complex()) {
    Series den = Series::constant(Complex(1), n) - mul_trunc(gs.truncated(n), ps.truncated(n), n) * (Complex(1) / a0);
    inner = mul_trunc(ps.truncated(n), den.reciprocal(), n);
  } else {
    Series p = ps.truncated(n), gp = mul_trunc(gs.truncated(n), p, n);
    Series s = gp * (Complex(1) / a0);
    for (int it = 0; it < 3 + static_cast<int>(std::ceil(std::log2(n + 1))); ++it) {
      Series em = (-s).exp();
      Series F = (Series::constant(Complex(1), n) - em) * a0 + mul_trunc(s, p, n) * a1 - gp;
      Series dF = em * a0 + p * a1;
      s = s - F * dF.reciprocal();
    }
    inner = mul_trunc(p, s.exp(), n);
  }
  Series phi_inv = ps.truncated(n).revert();
  return phi_inv.compose(inner);
}

}  // namespace

GlobalSolution construct_global(const Germ& phi, const Rhs& g, const Context& ctx) {
  PrecisionScope ps(ctx);
  {
    Series s = phi.series(2);
    Real tol = pow(Real(10), -static_cast<int>(ctx.digits) / 2);
    if (abs(s[0]) > tol || abs(s[1] - Complex(1)) > tol) throw DomainError("phi must be tangent to the identity");
  }
  int l = g.multiplicity();
  Germ phi_inv = invert(phi);
  Complex a0 = g.alpha0(), a1 = g.alpha1();
  GlobalSolution out;
  ClosedFormParts parts;
  parts.eval = global_map(phi, phi_inv, g, l);
  parts.series = [phi, g, l](int n) { return global_series(phi, g, l, n); };
  parts.radius = phi.validity_radius();
  if (l >= 2) {
    Complex al = g.coeff(l);
    out.h_tag = "a_l*phi^(l-1)/(l-1)";
    out.H = [phi, al, l](const Complex& z, LogBranch) { return al * powi(phi.eval(z), l - 1) / Real(l - 1); };
  } else {
    out.h_tag = "-a0/phi + a1*log(phi)";
    out.H = [phi, a0, a1](const Complex& z, LogBranch b) {
      Complex p = phi.eval(z);
      Complex h = -a0 / p;
      if (!(a1 == Complex())) h += a1 * log(p, b);
      return h;
    };
  }
  parts.tag = "phi^{-1}(h^{-1}(h(phi) + g)), h = " + out.h_tag;
  out.f = make_closed_form("global:" + phi.label() + ":" + g.str(), std::move(parts));
  std::vector<Complex> pts{Complex(-0.1), Complex(-0.05, 0.03), Complex(-0.05, -0.03), Complex(-0.02, 0.001)};
  auto H = out.H;
  out.residual = verify_solution(out.f, g, [H](const Complex& z) { return H(z, LogBranch::plus); }, pts);
  return out;
}

Real verify_solution(const Germ& f, const Rhs& g, const std::function<Complex(const Complex&)>& H,
                     const std::vector<Complex>& points) {
  Real worst = 0;
  for (const auto& z : points) worst = std::max<Real>(worst, abs(H(f.eval(z)) - H(z) - g.eval(z)));
  return worst;
}

}  // namespace paralab
