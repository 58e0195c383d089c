#include "paralab/moduli.hpp"

#include <cmath>

#include "paralab/errors.hpp"
#include "paralab/linalg.hpp"

namespace paralab {

SectorialSolution fatou_coordinate(const Germ& f, PetalKind side, const Context& ctx, const SectorialParams& params) {
  return SectorialSolution(f, Rhs::constant(ScalarSpec::parse("1")), side, ctx, params);
}

Complex invert_fatou(const SectorialSolution& psi, const Complex& w) {
  PrecisionScope ps(psi.digits());
  if (abs(w) < 1) throw InversionError("|w| < 1 is outside the sampled strip");
  Real tol = pow(Real(10), 6 - static_cast<int>(psi.digits())) * std::max<Real>(Real(1), abs(w));
  Real hrel = pow(Real(10), -static_cast<int>(psi.digits()) / 3);
  Complex z = Complex(-1) / w;
  try {
    for (int it = 0; it < 60; ++it) {
      Complex F = psi(z) - w;
      if (abs(F) <= tol) return z;
      Complex h(abs(z) * hrel);
      Complex d = (psi(z + h) - psi(z - h)) / (h * 2);
      if (abs(d) == 0) break;
      Complex step = F / d;
      // Damp steps that would leave the disc of radius |z|/2 around the iterate.
      Real cap = abs(z) / 2;
      if (abs(step) > cap) step = step * (cap / abs(step));
      z -= step;
    }
  } catch (const Error& e) {
    throw InversionError(std::string("Fatou coordinate inversion left the petal: ") + e.what());
  }
  throw InversionError("Newton inversion of the Fatou coordinate did not converge at w = " +
                       to_string(w.re, 8) + " + " + to_string(w.im, 8) + "i");
}

// ------------------------------------------------------------------ moments

namespace {

Complex from_cd(std::complex<double> c) { return Complex(Real(c.real()), Real(c.imag())); }

// 1e-12 at 40 digits, scaling with the precision.
double refusal_floor(unsigned digits) { return std::pow(10.0, -0.3 * digits); }

Complex two_pi_i() { return Complex(0, 2 * pi()); }

// Design points: |lifted| log-spaced in the window, phases spread by the golden ratio.
std::vector<std::pair<Real, Real>> lifted_design(int n, double q_min, double q_max) {
  std::vector<std::pair<Real, Real>> out;
  Real a = log(Real(q_min)), b = log(Real(q_max));
  for (int j = 0; j < n; ++j) {
    Real lm = n == 1 ? b : a + (b - a) * j / (n - 1);
    double x = std::fmod(0.6180339887498949 * (j + 1), 1.0) - 0.5;
    out.emplace_back(lm, Real(x));
  }
  return out;
}

struct PolyFit {
  std::vector<Complex> c;
  Real residual;
  Real condition;
};

// sum_{k in [k0, D]} c_k x^k by least squares with column equilibration.
PolyFit fit_poly(const std::vector<Complex>& x, const std::vector<Complex>& y, int D, int k0 = 0) {
  int n = static_cast<int>(x.size()), k = D - k0 + 1;
  Matrix A(n, k);
  for (int i = 0; i < n; ++i) {
    Complex p = powi(x[static_cast<size_t>(i)], k0);
    for (int j = 0; j < k; ++j) {
      A(i, j) = p;
      p = p * x[static_cast<size_t>(i)];
    }
  }
  LeastSquares ls = least_squares(A, y);
  PolyFit out;
  out.c.assign(static_cast<size_t>(D + 1), Complex());
  for (int j = 0; j < k; ++j) out.c[static_cast<size_t>(k0 + j)] = ls.x[static_cast<size_t>(j)];
  out.residual = ls.residual_norm;
  out.condition = ls.condition_number;
  return out;
}

std::string tag_of(const MomentOptions& opt) {
  std::string t = opt.trivialization == Trivialization::plus ? "psi+" : "psi-";
  if (opt.psi_shift != std::complex<double>(0, 0))
    t += "(+" + std::to_string(opt.psi_shift.real()) + (opt.psi_shift.imag() < 0 ? "" : "+") +
         std::to_string(opt.psi_shift.imag()) + "i)";
  return t;
}

Real weighted_scale(const Moment& M) {
  Real s = 0, q(M.diagnostics.q_max), p = 1;
  for (int k = 0; k <= M.degree; ++k, p *= q)
    s = std::max<Real>(s, std::max<Real>(abs(M.g_inf[static_cast<size_t>(k)]), abs(M.g_0[static_cast<size_t>(k)])) * p);
  return s;
}

}  // namespace

std::vector<LiftedSample> moment_samples(const Germ& f, int m, const MomentOptions& opt) {
  if (m < 0) throw DomainError("moment order m must be >= 0");
  if (!(opt.q_min > 0 && opt.q_max > opt.q_min && opt.q_max < 1)) throw DomainError("need 0 < q_min < q_max < 1");
  if (opt.q_min < refusal_floor(opt.digits))
    throw PrecisionError("lifted magnitudes below " + std::to_string(refusal_floor(opt.digits)) + " are refused at " +
                         std::to_string(opt.digits) + " digits");
  Context ctx{opt.digits};
  PrecisionScope ps(ctx);
  std::vector<ScalarSpec> c(static_cast<size_t>(m + 1), ScalarSpec::parse("0"));
  c[static_cast<size_t>(m)] = ScalarSpec::parse("-1");
  Rhs g(c);
  SectorialSolution hp(f, g, PetalKind::attracting, ctx), hm(f, g, PetalKind::repelling, ctx);
  PetalKind pside = opt.trivialization == Trivialization::plus ? PetalKind::attracting : PetalKind::repelling;
  SectorialSolution psi = fatou_coordinate(f, pside, ctx);
  Complex shift = from_cd(opt.psi_shift);
  Complex branch = -two_pi_i() * g.alpha1();
  Real tp = 2 * pi();

  std::vector<LiftedSample> out;
  for (bool upper : {true, false}) {
    for (const auto& [lm, x] : lifted_design(opt.samples, opt.q_min, opt.q_max)) {
      // |e^{+-2 pi i w}| = e^{-+2 pi Im w}
      Real y = -lm / tp;
      Complex w(x, upper ? y : -y);
      Complex z = invert_fatou(psi, w - shift);
      SectorialValue a = hp.evaluate(z), b = hm.evaluate(z);
      Complex P = psi(z) + shift;
      LiftedSample s;
      s.z = z;
      s.upper = upper;
      s.lifted = upper ? exp(two_pi_i() * P) : exp(-two_pi_i() * P);
      s.value = upper ? a.value - b.value : b.value - a.value - branch;
      s.error = a.error + b.error;
      out.push_back(s);
    }
  }
  return out;
}

Moment m_moment(const Germ& f, int m, const MomentOptions& opt) {
  if (opt.degree < 1) throw DomainError("moment degree must be >= 1");
  if (opt.samples < std::max(14, opt.degree + 2)) throw DomainError("need at least 14 samples and more than degree + 1");
  std::vector<LiftedSample> S = moment_samples(f, m, opt);
  PrecisionScope ps(opt.digits);
  Moment M;
  M.m = m;
  M.degree = opt.degree;
  M.trivialization_tag = tag_of(opt);
  std::vector<Complex> xu, yu, xl, yl;
  Real noise = 0;
  for (const auto& s : S) {
    (s.upper ? xu : xl).push_back(s.lifted);
    (s.upper ? yu : yl).push_back(s.value);
    noise = std::max<Real>(noise, s.error);
  }
  // The smallest lifted sample must still carry ~12 digits above the solver noise.
  if (noise > Real(opt.q_min) * Real(1e-12))
    throw PrecisionError("solver error " + to_string(noise, 3) + " swamps lifted magnitudes near " +
                         std::to_string(opt.q_min) + "; raise the precision");
  PolyFit fu = fit_poly(xu, yu, opt.degree), fl = fit_poly(xl, yl, opt.degree);
  M.g_inf = fu.c;
  M.g_0 = fl.c;
  FitDiagnostics& d = M.diagnostics;
  d.samples = opt.samples;
  d.residual_inf = fu.residual;
  d.residual_0 = fl.residual;
  d.condition_inf = fu.condition;
  d.condition_0 = fl.condition;
  d.noise = noise;
  {
    std::vector<ScalarSpec> c(static_cast<size_t>(m + 1), ScalarSpec::parse("0"));
    c[static_cast<size_t>(m)] = ScalarSpec::parse("-1");
    d.branch_constant = -two_pi_i() * Rhs(c).alpha1();
  }
  d.q_max = opt.q_max;
  d.constant_sum = M.g_inf[0] + M.g_0[0];
  M.g_inf[0] -= d.constant_sum / Real(2);
  M.g_0[0] -= d.constant_sum / Real(2);
  return M;
}

bool Moment::significant(const Complex& c, int k) const {
  Real w = pow(Real(diagnostics.q_max), k);
  // Equilibrated coefficients move by up to cond * |data perturbation|.
  Real cond = std::max<Real>(Real(1), std::max<Real>(diagnostics.condition_inf, diagnostics.condition_0));
  return abs(c) * w > 100 * cond * (diagnostics.noise + diagnostics.residual_inf + diagnostics.residual_0);
}

Moment Moment::acted(const Complex& a, const Complex& b) const {
  Moment out = *this;
  Complex bk(1), ib = Complex(1) / b, ibk(1);
  for (int k = 0; k <= degree; ++k) {
    out.g_inf[static_cast<size_t>(k)] = g_inf[static_cast<size_t>(k)] * bk;
    out.g_0[static_cast<size_t>(k)] = g_0[static_cast<size_t>(k)] * ibk;
    bk = bk * b;
    ibk = ibk * ib;
  }
  out.g_inf[0] += a;
  out.g_0[0] -= a;
  return out;
}

Moment Moment::canonical() const {
  Complex a = g_0[0], b(1);
  for (int k = 1; k <= degree; ++k) {
    if (significant(g_0[static_cast<size_t>(k)], k)) {
      b = pow(g_0[static_cast<size_t>(k)], Complex(Real(1) / k));
      return acted(a, b);
    }
  }
  for (int k = 1; k <= degree; ++k) {
    if (significant(g_inf[static_cast<size_t>(k)], k)) {
      b = pow(Complex(1) / g_inf[static_cast<size_t>(k)], Complex(Real(1) / k));
      return acted(a, b);
    }
  }
  return acted(a, b);
}

MomentEquivalence moment_equivalent(const Moment& M1, const Moment& M2, double tol) {
  MomentEquivalence out;
  if (M1.m != M2.m || M1.degree != M2.degree) return out;
  unsigned digits = std::max(current_digits(), 30u);
  PrecisionScope ps(digits);
  int D = M1.degree;
  auto first = [&](const Moment& M, const std::vector<Complex>& g) {
    for (int k = 1; k <= D; ++k)
      if (M.significant(g[static_cast<size_t>(k)], k)) return k;
    return 0;
  };
  // b^k from g_0 (c1 = c2 b^{-k}) or from g_inf (c1 = c2 b^k).
  std::vector<Complex> candidates;
  int k0 = first(M1, M1.g_0), k2 = first(M2, M2.g_0);
  int ki = first(M1, M1.g_inf), ki2 = first(M2, M2.g_inf);
  if (k0 != k2 || ki != ki2) {
    out.mismatch = Real(-1);
    return out;
  }
  Complex bk;
  int k = 0;
  if (k0 > 0) {
    k = k0;
    bk = M2.g_0[static_cast<size_t>(k)] / M1.g_0[static_cast<size_t>(k)];
  } else if (ki > 0) {
    k = ki;
    bk = M1.g_inf[static_cast<size_t>(k)] / M2.g_inf[static_cast<size_t>(k)];
  }
  if (k == 0) {
    candidates.push_back(Complex(1));
  } else {
    Complex root = pow(bk, Complex(Real(1) / k));
    for (int j = 0; j < k; ++j) candidates.push_back(root * expi(2 * pi() * j / k));
  }
  Real scale = std::max<Real>(weighted_scale(M1), weighted_scale(M2));
  Real floor = 100 * (M1.diagnostics.noise + M1.diagnostics.residual_inf + M1.diagnostics.residual_0 +
                      M2.diagnostics.noise + M2.diagnostics.residual_inf + M2.diagnostics.residual_0);
  Real q(M1.diagnostics.q_max);
  bool first_try = true;
  for (const auto& b : candidates) {
    Complex a = M1.g_inf[0] - M2.g_inf[0];
    Moment T = M2.acted(a, b);
    Real worst = 0, p = 1;
    for (int j = 0; j <= D; ++j, p *= q) {
      worst = std::max<Real>(worst, abs(T.g_inf[static_cast<size_t>(j)] - M1.g_inf[static_cast<size_t>(j)]) * p);
      worst = std::max<Real>(worst, abs(T.g_0[static_cast<size_t>(j)] - M1.g_0[static_cast<size_t>(j)]) * p);
    }
    if (first_try || worst < out.mismatch) {
      out.mismatch = worst;
      out.a = a;
      out.b = b;
      first_try = false;
    }
  }
  out.equivalent = out.mismatch <= Real(tol) * scale + floor;
  return out;
}

// ------------------------------------------------------------------ conjugation

FormalConjugate formclas_conjugate(const Germ& f, const Germ& r) {
  ClosedFormParts p;
  p.tag = "z + r(f(z)) - r(z)";
  p.eval = [f, r](const Complex& z) { return z + r.eval(f.eval(z)) - r.eval(z); };
  p.derivative = [f, r](const Complex& z) { return Complex(1) + r.derivative(f.eval(z)) * f.derivative(z) - r.derivative(z); };
  p.series = [f, r](int n) {
    Series fs = f.series(n), rs = r.series(n);
    Series rc = rs;
    rc[0] = Complex();
    return Series::identity(n) + rc.compose(fs) - rc;
  };
  p.radius = std::min(f.validity_radius(), r.validity_radius());
  Germ phi_inv = make_closed_form("Id+rof-r", std::move(p));
  FormalConjugate out;
  out.phi = invert(phi_inv);
  out.g = compose(phi_inv, compose(f, out.phi));
  return out;
}

// ------------------------------------------------------------------ moduli

EVModulus ev_modulus_direct(const Germ& f, const EVOptions& opt) {
  if (opt.degree < 1 || opt.samples < opt.degree + 2) throw DomainError("need degree >= 1 and samples > degree + 1");
  if (!(opt.t_min > 0 && opt.t_max > opt.t_min && opt.t_max < 1)) throw DomainError("need 0 < t_min < t_max < 1");
  if (opt.t_min < refusal_floor(opt.digits))
    throw PrecisionError("annulus radii below " + std::to_string(refusal_floor(opt.digits)) + " are refused at " +
                         std::to_string(opt.digits) + " digits");
  Context ctx{opt.digits};
  PrecisionScope ps(ctx);
  SectorialSolution pp = fatou_coordinate(f, PetalKind::attracting, ctx);
  SectorialSolution pm = fatou_coordinate(f, PetalKind::repelling, ctx);
  Real tp = 2 * pi();
  std::vector<Complex> x0, y0, xi, yi;
  for (const auto& [lm, x] : lifted_design(opt.samples, opt.t_min, opt.t_max)) {
    Real th = tp * x;
    // t near 0: w = -Log t / (2 pi i) has Im w = log|t| / 2 pi < 0.
    Complex t = exp(Complex(lm, th));
    Complex w = Complex(-th, lm) / tp;
    Complex z = invert_fatou(pp, w);
    x0.push_back(t);
    y0.push_back(exp(-two_pi_i() * pm(z)));
    // tau = 1/t near 0: w = Log tau / (2 pi i), Im w > 0, image tau' = e^{2 pi i Psi-}.
    Complex wi = Complex(th, -lm) / tp;
    Complex zi = invert_fatou(pp, wi);
    xi.push_back(t);
    yi.push_back(exp(two_pi_i() * pm(zi)));
  }
  PolyFit a = fit_poly(x0, y0, opt.degree, 1), b = fit_poly(xi, yi, opt.degree, 1);
  if (a.residual > Real(opt.t_min) * Real(1e-6) || b.residual > Real(opt.t_min) * Real(1e-6))
    throw PrecisionError("modulus fit residual " + to_string(std::max<Real>(a.residual, b.residual), 3) +
                         " is not small against the annulus; lower the degree or raise the precision");
  EVModulus out;
  out.phi_0 = a.c;
  out.phi_inf = b.c;
  out.residual_0 = a.residual;
  out.residual_inf = b.residual;
  out.method = "direct";
  return out;
}

EVModulus ev_from_two_sided_moments(const Moment& plus, const Moment& minus) {
  if (plus.m != minus.m || plus.degree != minus.degree) throw DomainError("moments differ in order or degree");
  if (plus.trivialization_tag.rfind("psi+", 0) != 0 || minus.trivialization_tag.rfind("psi-", 0) != 0)
    throw DomainError("need one moment in the Psi+ trivialization and one in the Psi- trivialization");
  PrecisionScope ps(std::max(current_digits(), 30u));
  int D = plus.degree;
  auto germ = [&](const Moment& M, const std::vector<Complex>& g, const char* what) {
    Series s(g);
    s[0] = Complex();
    if (!M.significant(s[1], 1))
      throw NotInvertibleError(std::string("linear coefficient of ") + what + " (" + M.trivialization_tag +
                               ") is at the noise floor; the moduli cannot be reconstructed");
    return s;
  };
  Series p0 = germ(plus, plus.g_0, "g_0"), m0 = germ(minus, minus.g_0, "g_0");
  Series pi_ = germ(plus, plus.g_inf, "g_inf"), mi = germ(minus, minus.g_inf, "g_inf");
  EVModulus out;
  out.phi_0 = m0.revert().compose(p0).truncated(D).coeffs();
  out.phi_inf = mi.revert().compose(pi_).truncated(D).coeffs();
  out.residual_0 = plus.diagnostics.residual_0 + minus.diagnostics.residual_0;
  out.residual_inf = plus.diagnostics.residual_inf + minus.diagnostics.residual_inf;
  out.method = "two-sided moments";
  return out;
}

Trivialization2D two_dim_trivialization(const Germ& f, const Complex& z, const Complex& w, const Context& ctx) {
  PrecisionScope ps(ctx);
  SectorialSolution psi = fatou_coordinate(f, PetalKind::attracting, ctx);
  SectorialSolution h(f, Rhs::monomial(1, ScalarSpec::parse("-1")), PetalKind::attracting, ctx);
  Complex fz = f.eval(z);
  Trivialization2D out;
  out.T = {psi(z), h(z) + w};
  Complex a = psi(fz) - out.T.first - Complex(1);
  Complex b = h(fz) + z + w - out.T.second;
  out.residual = sqrt(norm(a) + norm(b));
  return out;
}

}  // namespace paralab
