#include "verify/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "paralab/cohom.hpp"
#include "paralab/errors.hpp"
#include "paralab/fixtures.hpp"
#include "paralab/moduli.hpp"
#include "paralab/orbit.hpp"
#include "paralab/principal.hpp"
#include "verify/oracles.hpp"

namespace paralab::verify {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double d(const Real& x) { return x.convert_to<double>(); }

Rhs rhs_monomial(int m, const char* c) { return Rhs::monomial(m, ScalarSpec::parse(c)); }

// Points in the attracting petal around the negative axis.
std::vector<Complex> attracting_points(int n, unsigned seed, double rlo, double rhi) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> r(std::log(rlo), std::log(rhi)), a(M_PI - 0.8, M_PI + 0.8);
  std::vector<Complex> out;
  for (int i = 0; i < n; ++i) {
    double t = a(rng), rr = std::exp(r(rng));
    out.push_back(Complex(Real(rr * std::cos(t)), Real(rr * std::sin(t))));
  }
  return out;
}

CriterionResult c1_fatou() {
  CriterionResult r;
  Context ctx{32};
  SectorialSolution psi = fatou_coordinate(fixtures::f0(), PetalKind::attracting, ctx);
  PrecisionScope ps(ctx);
  Real worst = 0;
  for (const auto& z : attracting_points(20, 11, 0.01, 0.3)) worst = std::max<Real>(worst, abs(psi(z) + Complex(1) / z));
  r.pass = worst < Real(1e-12);
  r.detail = "max |Psi+(z) + 1/z| = " + sci(d(worst)) + " (tol 1e-12, 20 points)";
  return r;
}

CriterionResult c2_digamma() {
  CriterionResult r;
  Context ctx{32};
  SectorialSolution h(fixtures::f0(), rhs_monomial(1, "-pi"), PetalKind::attracting, ctx);
  PrecisionScope ps(ctx);
  Real p = pi();
  Real e0 = abs(h(Complex(Real(-0.5))) - Complex(p * (1 - euler_gamma()), -p * p));
  Real worst = 0;
  for (const auto& z : attracting_points(5, 12, 0.05, 0.3)) {
    Complex ref = oracle::digamma(Complex(-1) / z) * p - Complex(0, p * p);
    worst = std::max<Real>(worst, abs(h(z) - ref));
  }
  r.pass = e0 < Real(1e-10) && worst < Real(1e-8);
  r.detail = "|H+(-1/2) - (pi(1-gamma) - i pi^2)| = " + sci(d(e0)) + " (tol 1e-10); max digamma mismatch = " +
             sci(d(worst)) + " (tol 1e-8, 5 points)";
  return r;
}

// z = -1/w with |q| = |e^{2 pi i w}| log-spaced in [1e-10, 1e-6].
std::vector<Complex> upper_points_by_q(int n, double qlo, double qhi) {
  std::vector<Complex> out;
  Real tp = 2 * pi();
  for (int j = 0; j < n; ++j) {
    double lq = std::log(qlo) + (std::log(qhi) - std::log(qlo)) * j / (n - 1);
    Complex w(Real(0.37 * j - 0.8), Real(-lq) / tp);
    out.push_back(Complex(-1) / w);
  }
  return out;
}

CriterionResult c3_borel_cocycle() {
  CriterionResult r;
  Context ctx{40};
  std::vector<Complex> pts;
  {
    PrecisionScope ps(ctx);
    pts = upper_points_by_q(5, 1e-10, 1e-6);
  }
  auto samples = cocycle(fixtures::f0(), rhs_monomial(1, "-1"), pts, ctx);
  PrecisionScope ps(ctx);
  Real worst = 0, worst_flipped = 0;
  for (const auto& s : samples) {
    Complex q = exp(Complex(0, -2 * pi()) / s.z);
    Complex printed = Complex(0, -2 * pi()) * q / (Complex(1) - q);
    worst = std::max<Real>(worst, abs(s.reduced - printed) / abs(printed));
    worst_flipped = std::max<Real>(worst_flipped, abs(s.reduced + printed) / abs(printed));
  }
  r.pass = worst <= Real(1e-4);
  r.detail = "max rel. error vs -2 pi i q/(1-q) = " + sci(d(worst)) + " (tol 1e-4); vs +2 pi i q/(1-q) = " +
             sci(d(worst_flipped)) + " (measured sign is +)";
  return r;
}

CriterionResult c4_global_family() {
  CriterionResult r;
  Context ctx{40};
  Germ f = fixtures::log2exp();
  std::vector<Complex> up{Complex(Real("0.05"), Real("0.2")), Complex(Real("-0.05"), Real("0.15")),
                          Complex(Real("0.02"), Real("0.1")), Complex(Real("0.1"), Real("0.25")),
                          Complex(Real("-0.02"), Real("0.3"))};
  Real cmax = 0;
  for (const auto& s : cocycle(f, rhs_monomial(1, "-1"), up, ctx)) cmax = std::max<Real>(cmax, abs(s.reduced));
  SectorialSolution h(f, rhs_monomial(1, "-pi"), PetalKind::attracting, ctx);
  PrecisionScope ps(ctx);
  Real hmax = 0;
  for (const auto& z : attracting_points(5, 14, 0.05, 0.3)) {
    Complex ref = log(Complex(1) - exp(-z), LogBranch::plus) * (-pi());
    hmax = std::max<Real>(hmax, abs(h(z) - ref));
  }
  r.pass = cmax < Real(1e-10) && hmax < Real(1e-8);
  r.detail = "max |cocycle| on V^up = " + sci(d(cmax)) + " (tol 1e-10); max |H+ + pi log+(1-e^-z)| = " +
             sci(d(hmax)) + " (tol 1e-8; rhs -pi z)";
  return r;
}

CriterionResult c5_geometry() {
  CriterionResult r;
  Context ctx{24};
  PrecisionScope ps(ctx);
  Real worst_ac = 0, worst_an = 0;
  int configs = 0;
  for (const auto& name : fixtures::names()) {
    Germ f = fixtures::by_name(name);
    AreaOptions opt;
    if (!formal_class(f, 4).model_class()) opt.tol_rel = 1e-6;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> rad(0.05, 0.25), ang(-0.6, 0.6), frac(0.3, 0.95);
    for (int i = 0; i < 20; ++i) {
      Complex z(std::polar(rad(rng), M_PI + ang(rng)));
      Real dz = abs(z - f.eval(z));
      worst_ac = std::max<Real>(worst_ac, check_functional_equation(f, z, dz / 2 * Real(frac(rng)), ctx, opt));
      worst_an = std::max<Real>(worst_an, crescent_relation_residual(f, z, dz / 2 / Real(frac(rng)), ctx, opt));
      ++configs;
    }
  }
  struct Case {
    const char* germ;
    double z, eps;
  };
  double worst_ratio = 0;
  for (Case c : {Case{"f0", -0.5, 0.01}, Case{"f0", -0.3, 0.005}, Case{"log2exp", -0.3, 0.005},
                 Case{"conj-f0:mobius", -0.25, 0.004}, Case{"f0", -0.4, 0.008}}) {
    Orbit o = orbit_for_area(fixtures::by_name(c.germ), Complex(c.z), c.eps, Context{32});
    PrecisionScope p32(32);
    std::complex<double> formula = AreaEvaluator(o).area(Real(c.eps)).value.to_cd();
    OracleResult orc = directed_area_oracle(o, c.eps);
    worst_ratio = std::max(worst_ratio, std::abs(formula - orc.value) / orc.error);
  }
  r.pass = worst_ac < Real(1e-12) && worst_an < Real(1e-12) && worst_ratio <= 3;
  r.detail = "max (ac) residual = " + sci(d(worst_ac)) + ", max (analy) residual = " + sci(d(worst_an)) + " (tol 1e-12, " +
             std::to_string(configs) + " configs); max |formula - oracle| / oracle error = " + sci(worst_ratio) +
             " (tol 3)";
  return r;
}

CriterionResult c6_principal() {
  CriterionResult r;
  Context ctx{32};
  std::vector<Real> grid;
  {
    PrecisionScope ps(ctx);
    grid = log_grid(1e-6, 1e-3, 40);
  }
  Germ f = fixtures::f0();
  ExpansionFit a = principal_via_geometry(f, Complex(Real(-0.3)), grid, ctx);
  ExpansionFit b = principal_via_geometry(f, Complex(Real(-0.45)), grid, ctx);
  PrincipalPart p = principal_via_cohom(f, Complex(Real(-0.3)), PetalKind::attracting, ctx);
  PrecisionScope ps(ctx);
  Real route = abs(a.principal() - p.value);
  Real dq1 = abs(a.coefficient(BasisTerm::eps2_log) - b.coefficient(BasisTerm::eps2_log));
  Real dq2 = abs(a.coefficient(BasisTerm::eps52_log) - b.coefficient(BasisTerm::eps52_log));
  r.pass = route < Real(1e-3) && dq1 < Real(1e-4) && dq2 < Real(1e-4);
  r.detail = "|geometric - cohomological| = " + sci(d(route)) + " (tol 1e-3); |dq1| = " + sci(d(dq1)) +
             ", |dq2| = " + sci(d(dq2)) + " across z = -0.3, -0.45 (tol 1e-4)";
  return r;
}

CriterionResult c7_constructors() {
  CriterionResult r;
  Context ctx{32};
  GlobalSolution q = construct_global(fixtures::phi("id"), Rhs::monomial(2, ScalarSpec::real(1)), ctx);
  GlobalSolution l = construct_global(fixtures::phi("expneg"), rhs_monomial(1, "-pi"), ctx);
  PrecisionScope ps(ctx);
  Real hz = 0;
  for (const auto& z : attracting_points(5, 15, 0.05, 0.3))
    hz = std::max<Real>(hz, abs(q.H(z, LogBranch::plus) - z) + abs(q.f.eval(z) - z - z * z));
  Series sl = l.f.series(8), s2 = fixtures::log2exp().series(8);
  Real tay = 0;
  for (int k = 0; k <= 8; ++k) tay = std::max<Real>(tay, abs(sl[k] - s2[k]));
  Real machine = 100 * epsilon_at(ctx.digits);
  r.pass = q.residual <= machine && hz <= machine && tay < Real(1e-10);
  r.detail = "(Id, z^2): residual = " + sci(d(q.residual)) + ", max |H - z| + |f - z - z^2| = " + sci(d(hz)) +
             " (machine " + sci(d(machine)) + "); (1-e^-z, -pi z): max Taylor diff through order 8 = " + sci(d(tay)) +
             " (tol 1e-10)";
  return r;
}

CriterionResult c8_prop67() {
  CriterionResult r;
  Moment F = m_moment(fixtures::f0(), 1);
  MomentOptions deep;
  deep.digits = 80;
  deep.q_min = 1e-22;
  deep.q_max = 1e-16;
  bool ok = true;
  double worst = 0;
  std::ostringstream os;
  for (const char* rn : {"poly:0,1", "poly:0,0,1", "poly:0,1,0.5"}) {
    FormalConjugate c = formclas_conjugate(fixtures::f0(), fixtures::by_name(rn));
    Moment G = m_moment(c.g, 1, deep);
    PrecisionScope ps(40);
    MomentEquivalence e = moment_equivalent(G, F);
    Moment A = G.canonical(), B = F.canonical();
    double w = 0;
    for (int k = 0; k <= 4; ++k) {
      w = std::max(w, d(abs(A.g_0[static_cast<size_t>(k)] - B.g_0[static_cast<size_t>(k)])));
      w = std::max(w, d(abs(A.g_inf[static_cast<size_t>(k)] - B.g_inf[static_cast<size_t>(k)])));
    }
    worst = std::max(worst, w);
    ok = ok && e.equivalent && w <= 1e-5;
    os << (os.tellp() > 0 ? ", " : "") << rn << (e.equivalent ? " equivalent" : " NOT equivalent");
  }
  r.pass = ok;
  r.detail = os.str() + "; max canonical coefficient diff through degree 4 = " + sci(worst) + " (tol 1e-5)";
  return r;
}

CriterionResult c9_singularity() {
  CriterionResult r;
  Orbit o = orbit_for_area(fixtures::f0(), Complex(-0.5), 1e-3, Context{32});
  std::vector<double> off;
  for (int i = 0; i < 8; ++i) off.push_back(1e-5 * std::pow(3e-4 / 1e-5, i / 7.0));
  ProbeResult a = second_derivative_probe(o, 6, off);
  ProbeOptions half;
  half.step_scale = 0.5;
  ProbeResult b = second_derivative_probe(o, 6, off, half);
  PrecisionScope ps(a.digits);
  Real rel = abs(a.left_limit - b.left_limit) / abs(a.left_limit);
  r.pass = std::abs(a.fitted_exponent + 0.5) <= 0.05 && isfinite(a.left_limit) && rel < Real(1e-4);
  r.detail = "fitted exponent = " + sci(a.fitted_exponent) + " (-0.5 +- 0.05); left-limit change under step halving = " +
             sci(d(rel)) + " (tol 1e-4)";
  return r;
}

CriterionResult c10_reconstruction() {
  CriterionResult r;
  Context ctx{32};
  PrecisionScope ps(ctx);
  AreaEvaluator ev(orbit_for_area(fixtures::f0(), Complex(-0.5), 1e-3, ctx));
  Reconstruction rec = reconstruct_orbit_from_area([&](const Real& e) { return ev.area_any(e).value; }, 1e-3, 5e-2);
  // f0 from -1/2: z_n = -1/(n+2), eps_n = |z_n - z_{n+1}| / 2.
  double tmax = 0, smax = 0;
  int matched = 0;
  long prev = -1;
  bool consecutive = true;
  for (size_t i = 0; i < rec.thresholds.size() && matched < 3; ++i) {
    long best = -1;
    Real bd = 1;
    for (long n = 0; n < 400; ++n) {
      Real t = Real(1) / (2 * (n + 2) * (n + 3));
      if (abs(t - rec.thresholds[i]) < bd) {
        bd = abs(t - rec.thresholds[i]);
        best = n;
      }
    }
    if (prev >= 0 && best != prev + 1) consecutive = false;
    prev = best;
    Complex s(-(Real(1) / (best + 2) + Real(1) / (best + 3)));
    tmax = std::max(tmax, d(bd));
    smax = std::max(smax, d(abs(rec.midpoint_sums[i] - s)));
    ++matched;
  }
  r.pass = matched == 3 && consecutive && tmax < 1e-8 && smax < 1e-3;
  r.detail = std::to_string(matched) + " consecutive thresholds: max threshold error = " + sci(tmax) +
             " (tol 1e-8), max midpoint-sum error = " + sci(smax) + " (tol 1e-3)";
  return r;
}

CriterionResult c11_ev_moduli() {
  CriterionResult r;
  EVModulus D = ev_modulus_direct(fixtures::f0());
  Moment P = m_moment(fixtures::f0(), 1);
  MomentOptions mo;
  mo.trivialization = Trivialization::minus;
  Moment M = m_moment(fixtures::f0(), 1, mo);
  EVModulus T = ev_from_two_sided_moments(P, M);
  bool raised = false;
  std::string raised_name = "nothing";
  try {
    ev_from_two_sided_moments(m_moment(fixtures::log2exp(), 1), m_moment(fixtures::log2exp(), 1, mo));
  } catch (const NotInvertibleError&) {
    raised = true;
    raised_name = "NotInvertibleError";
  } catch (const Error& e) {
    raised_name = e.name();
  }
  PrecisionScope ps(40);
  double id = 0, agree = 0;
  for (int k = 0; k <= 6; ++k) {
    Complex e = k == 1 ? Complex(1) : Complex();
    id = std::max(id, d(abs(D.phi_0[static_cast<size_t>(k)] - e)));
    id = std::max(id, d(abs(D.phi_inf[static_cast<size_t>(k)] - e)));
    agree = std::max(agree, d(abs(D.phi_0[static_cast<size_t>(k)] - T.phi_0[static_cast<size_t>(k)])));
    agree = std::max(agree, d(abs(D.phi_inf[static_cast<size_t>(k)] - T.phi_inf[static_cast<size_t>(k)])));
  }
  r.pass = id < 1e-8 && agree < 1e-6 && raised;
  r.detail = "max |phi - id| = " + sci(id) + " (tol 1e-8); direct vs two-sided = " + sci(agree) +
             " (tol 1e-6); member of S raised " + raised_name;
  return r;
}

CriterionResult c12_trivialization() {
  CriterionResult r;
  Context ctx{32};
  double worst = 0;
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const char* name : {"f0", "log2exp"}) {
    Germ f = fixtures::by_name(name);
    for (const auto& z : attracting_points(10, 16, 0.02, 0.3)) {
      Trivialization2D t = two_dim_trivialization(f, z, Complex(u(rng), u(rng)), ctx);
      worst = std::max(worst, d(t.residual));
    }
  }
  r.pass = worst < 1e-10;
  r.detail = "max residual = " + sci(worst) + " (tol 1e-10, 10 points per germ)";
  return r;
}

}  // namespace

std::vector<Criterion> core_suite() {
  return {
      {1, "Fatou exactness", c1_fatou},
      {2, "Digamma identity", c2_digamma},
      {3, "Borel-Laplace cocycle", c3_borel_cocycle},
      {4, "Global-solution family", c4_global_family},
      {5, "Geometry identities", c5_geometry},
      {6, "Principal-part cross-route", c6_principal},
      {7, "Global constructors", c7_constructors},
      {8, "Same 1-moment conjugation", c8_prop67},
      {9, "Singularity structure", c9_singularity},
      {10, "Orbit reconstruction", c10_reconstruction},
      {11, "EV moduli", c11_ev_moduli},
      {12, "2-D trivialization", c12_trivialization},
  };
}

std::vector<CriterionResult> run_suite(const std::vector<Criterion>& suite, const std::vector<int>& only,
                                       const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (const auto& c : suite) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = c.run();
    } catch (const Error& e) {
      r.pass = false;
      r.detail = std::string(e.name()) + ": " + e.what();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("unexpected error: ") + e.what();
    }
    r.id = c.id;
    r.name = c.name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    out.push_back(r);
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] %2d %-28s", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str());
  char tail[32];
  std::snprintf(tail, sizeof tail, " (%.1fs)", r.seconds);
  return std::string(head) + " " + r.detail + tail;
}

}  // namespace paralab::verify
