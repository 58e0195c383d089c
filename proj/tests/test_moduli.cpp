#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "paralab/errors.hpp"
#include "paralab/fixtures.hpp"
#include "paralab/moduli.hpp"
#include "verify/oracles.hpp"

using namespace paralab;

namespace {

double dist(const Complex& a, const Complex& b) { return static_cast<double>(abs(a - b)); }

const Moment& f0_moment(Trivialization t = Trivialization::plus) {
  static Moment plus = m_moment(fixtures::f0(), 1);
  static Moment minus = [] {
    MomentOptions o;
    o.trivialization = Trivialization::minus;
    return m_moment(fixtures::f0(), 1, o);
  }();
  return t == Trivialization::plus ? plus : minus;
}

std::vector<Complex> attracting_points(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> r(0.01, 0.3), a(M_PI - 0.8, M_PI + 0.8);
  std::vector<Complex> out;
  for (int i = 0; i < n; ++i) {
    double t = a(rng), rr = r(rng);
    out.push_back(Complex(Real(rr * std::cos(t)), Real(rr * std::sin(t))));
  }
  return out;
}

}  // namespace

TEST(Fatou, F0IsMinusOneOverZ) {
  Context ctx{32};
  SectorialSolution psi = fatou_coordinate(fixtures::f0(), PetalKind::attracting, ctx);
  PrecisionScope ps(32);
  EXPECT_LT(dist(psi(Complex(Real("-0.2"))), Complex(5)), 1e-25);
  for (const auto& z : attracting_points(20, 1)) EXPECT_LT(dist(psi(z), Complex(-1) / z), 1e-12) << z;
}

TEST(Fatou, Log2ExpHasNoConstantTerm) {
  // Psi = -1/phi(z) - 1/2 + O(z) for phi = 1 - e^{-z}; the normalized coordinate drops the -1/2.
  Context ctx{32};
  SectorialSolution psi = fatou_coordinate(fixtures::log2exp(), PetalKind::attracting, ctx);
  PrecisionScope ps(32);
  Complex z(Real("-0.5"));
  Complex model = Complex(-1) / (Complex(1) - exp(-z));
  EXPECT_NEAR(static_cast<double>(model.re), 1.54149, 1e-5);
  EXPECT_LT(dist(psi(z), model + Complex(Real(1) / 2)), 1e-20);
  for (const auto& w : attracting_points(10, 2))
    EXPECT_LT(dist(psi(w) - Complex(-1) / (Complex(1) - exp(-w)), Complex(Real(1) / 2)), 1e-20) << w;
}

TEST(Fatou, AbelResidual) {
  Context ctx{32};
  for (const char* name : {"f0", "log2exp", "conj-f0:mobius", "poly:1,1,1"}) {
    Germ f = fixtures::by_name(name);
    SectorialSolution psi = fatou_coordinate(f, PetalKind::attracting, ctx);
    PrecisionScope ps(32);
    for (const auto& z : attracting_points(20, 3)) EXPECT_LT(dist(psi(f.eval(z)) - psi(z), Complex(1)), 1e-12) << name << " " << z;
  }
}

TEST(Fatou, InversionRoundTripAndErrors) {
  Context ctx{40};
  SectorialSolution psi = fatou_coordinate(fixtures::log2exp(), PetalKind::attracting, ctx);
  PrecisionScope ps(40);
  Complex w(Real("0.3"), Real("2.5"));
  EXPECT_LT(dist(psi(invert_fatou(psi, w)), w), 1e-30);
  EXPECT_THROW(invert_fatou(psi, Complex(Real("0.2"))), InversionError);
}

TEST(Moment, F0TrivialOrderZero) {
  Moment M = m_moment(fixtures::f0(), 0);
  PrecisionScope ps(40);
  for (int k = 0; k <= M.degree; ++k) {
    EXPECT_FALSE(M.significant(M.g_inf[static_cast<size_t>(k)], k)) << k;
    EXPECT_FALSE(M.significant(M.g_0[static_cast<size_t>(k)], k)) << k;
  }
  EXPECT_LT(abs(M.g_inf[1]) + abs(M.g_0[1]), 1e-25);
}

TEST(Moment, F0OrderOneMatchesGeometricSeries) {
  // Measured: both components are +2 pi i t / (1 - t) with the fixed branch rule.
  const Moment& M = f0_moment();
  PrecisionScope ps(40);
  Real tp = 2 * pi();
  EXPECT_EQ(M.trivialization_tag, "psi+");
  EXPECT_LT(dist(M.diagnostics.branch_constant, Complex(0, tp)), 1e-30);
  EXPECT_LT(abs(M.diagnostics.constant_sum), 1e-30);
  EXPECT_LT(abs(M.g_inf[0]) + abs(M.g_0[0]), 1e-30);
  for (int k = 1; k <= 4; ++k) {
    EXPECT_LT(dist(M.g_inf[static_cast<size_t>(k)], Complex(0, tp)) / static_cast<double>(tp), 1e-3) << k;
    EXPECT_LT(dist(M.g_0[static_cast<size_t>(k)], Complex(0, tp)) / static_cast<double>(tp), 1e-3) << k;
  }
  // Independent closed form at one sample.
  std::vector<LiftedSample> S = moment_samples(fixtures::f0(), 1);
  const LiftedSample& s = S.front();
  ASSERT_TRUE(s.upper);
  EXPECT_LT(static_cast<double>(abs(s.value - oracle::f0_cocycle_closed_form(s.z)) / abs(s.value)), 1e-20);
}

TEST(Moment, Log2ExpIsTrivial) {
  Moment M = m_moment(fixtures::log2exp(), 1);
  PrecisionScope ps(40);
  // Coefficient k carries noise amplified by q_max^{-k}; through degree 5 it stays below 1e-8.
  for (int k = 0; k <= 5; ++k) {
    EXPECT_LT(abs(M.g_inf[static_cast<size_t>(k)]), 1e-8) << k;
    EXPECT_LT(abs(M.g_0[static_cast<size_t>(k)]), 1e-8) << k;
  }
  for (int k = 1; k <= M.degree; ++k) EXPECT_FALSE(M.significant(M.g_0[static_cast<size_t>(k)], k)) << k;
}

TEST(Moment, PreconditionsAndRefusal) {
  MomentOptions o;
  o.q_min = 1e-13;
  EXPECT_THROW(m_moment(fixtures::f0(), 1, o), PrecisionError);
  MomentOptions low;
  low.digits = 24;
  low.q_min = 1e-9;
  EXPECT_THROW(m_moment(fixtures::f0(), 1, low), PrecisionError);
  EXPECT_THROW(m_moment(fixtures::f0(), -1), DomainError);
  MomentOptions few;
  few.samples = 8;
  EXPECT_THROW(m_moment(fixtures::f0(), 1, few), DomainError);
}

TEST(MomentEquivalent, ReflexiveRescaledAndDistinct) {
  const Moment& M = f0_moment();
  PrecisionScope ps(40);
  MomentEquivalence r = moment_equivalent(M, M);
  EXPECT_TRUE(r.equivalent);
  EXPECT_LT(abs(r.a), 1e-30);
  EXPECT_LT(dist(r.b, Complex(1)), 1e-30);

  Moment S = M.acted(Complex(Real("0.7"), Real("-0.1")), Complex(Real("2.5")));
  MomentEquivalence s = moment_equivalent(S, M);
  EXPECT_TRUE(s.equivalent);
  EXPECT_LT(dist(s.b, Complex(Real("2.5"))), 1e-25);
  EXPECT_LT(dist(s.a, Complex(Real("0.7"), Real("-0.1"))), 1e-25);

  Moment Z = m_moment(fixtures::log2exp(), 1);
  EXPECT_FALSE(moment_equivalent(M, Z).equivalent);
  EXPECT_FALSE(moment_equivalent(Z, M).equivalent);
  Moment M0 = m_moment(fixtures::f0(), 0);
  EXPECT_FALSE(moment_equivalent(M, M0).equivalent);
}

TEST(MomentEquivalent, CanonicalFormsCoincide) {
  const Moment& M = f0_moment();
  PrecisionScope ps(40);
  Moment A = M.canonical();
  Moment B = M.acted(Complex(Real("-1.5")), Complex(Real("0.4"), Real("0.9"))).canonical();
  EXPECT_LT(abs(A.g_0[0]), 1e-30);
  EXPECT_LT(dist(A.g_0[1], Complex(1)), 1e-30);
  for (int k = 0; k <= 4; ++k) {
    EXPECT_LT(dist(A.g_0[static_cast<size_t>(k)], B.g_0[static_cast<size_t>(k)]), 1e-20) << k;
    EXPECT_LT(dist(A.g_inf[static_cast<size_t>(k)], B.g_inf[static_cast<size_t>(k)]), 1e-10) << k;
  }
}

TEST(MomentProperties, TrivializationFreedom) {
  const Moment& M = f0_moment();
  for (std::complex<double> c : {std::complex<double>(0.3, 0), std::complex<double>(1, 0.2)}) {
    MomentOptions o;
    o.psi_shift = c;
    Moment Mc = m_moment(fixtures::f0(), 1, o);
    PrecisionScope ps(40);
    MomentEquivalence e = moment_equivalent(Mc, M);
    EXPECT_TRUE(e.equivalent) << c;
    Complex b = exp(Complex(0, -2 * pi()) * Complex(Real(c.real()), Real(c.imag())));
    EXPECT_LT(dist(e.b, b), 1e-20) << c;
    EXPECT_LT(abs(e.a), 1e-25) << c;
  }
}

TEST(MomentProperties, OrbitInvariance) {
  Context ctx{40};
  MomentOptions o;
  o.samples = 6;
  std::vector<LiftedSample> S = moment_samples(fixtures::f0(), 1, o);
  SectorialSolution hp(fixtures::f0(), Rhs::monomial(1, ScalarSpec::parse("-1")), PetalKind::attracting, ctx);
  SectorialSolution hm(fixtures::f0(), Rhs::monomial(1, ScalarSpec::parse("-1")), PetalKind::repelling, ctx);
  SectorialSolution psi = fatou_coordinate(fixtures::f0(), PetalKind::attracting, ctx);
  PrecisionScope ps(40);
  for (const auto& s : S) {
    if (!s.upper) continue;
    Complex fz = fixtures::f0().eval(s.z);
    Complex v = hp(fz) - hm(fz);
    EXPECT_LT(abs(v - s.value), 1e-30) << s.z;
    EXPECT_LT(abs(exp(Complex(0, 2 * pi()) * psi(fz)) - s.lifted), 1e-30) << s.z;
  }
}

TEST(MomentProperties, ExponentialDecaySlope) {
  std::vector<LiftedSample> S = moment_samples(fixtures::f0(), 1);
  PrecisionScope ps(40);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& s : S) {
    if (!s.upper) continue;
    double x = std::log(static_cast<double>(abs(s.lifted))), y = std::log(static_cast<double>(abs(s.value)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  EXPECT_NEAR(slope, 1.0, 0.1);
}

TEST(Formclas, ZeroRIsIdentity) {
  FormalConjugate c = formclas_conjugate(fixtures::f0(), fixtures::polynomial({0}));
  PrecisionScope ps(32);
  std::vector<Complex> a = c.g.taylor(8), b = fixtures::f0().taylor(8);
  for (size_t k = 0; k < a.size(); ++k) EXPECT_LT(dist(a[k], b[k]), 1e-25) << k;
  Complex z(Real("-0.2"), Real("0.1"));
  EXPECT_LT(dist(c.g.eval(z), fixtures::f0().eval(z)), 1e-25);
}

TEST(Formclas, SameFirstMomentAsF0) {
  FormalConjugate c = formclas_conjugate(fixtures::f0(), fixtures::by_name("poly:0,1"));
  {
    PrecisionScope ps(32);
    std::vector<Complex> a = c.g.taylor(6), b = fixtures::f0().taylor(6);
    Real diff = 0;
    for (size_t k = 0; k < a.size(); ++k) diff = std::max<Real>(diff, abs(a[k] - b[k]));
    EXPECT_GT(diff, 0.5);
    Complex z(Real("-0.1"), Real("0.05"));
    EXPECT_LT(dist(c.phi.eval(c.g.eval(z)), fixtures::f0().eval(c.phi.eval(z))), 1e-25);
  }
  // g has branch points at |z| ~ 0.26, so its lifted germs are sampled on a deeper window.
  MomentOptions deep;
  deep.digits = 80;
  deep.q_min = 1e-22;
  deep.q_max = 1e-16;
  Moment G = m_moment(c.g, 1, deep);
  PrecisionScope ps(40);
  MomentEquivalence e = moment_equivalent(G, f0_moment());
  EXPECT_TRUE(e.equivalent);
  EXPECT_LT(dist(e.b, Complex(1)), 1e-20);
  Moment A = G.canonical(), B = f0_moment().canonical();
  for (int k = 0; k <= 4; ++k) {
    EXPECT_LT(dist(A.g_0[static_cast<size_t>(k)], B.g_0[static_cast<size_t>(k)]), 1e-5) << k;
    EXPECT_LT(dist(A.g_inf[static_cast<size_t>(k)], B.g_inf[static_cast<size_t>(k)]), 1e-5) << k;
  }
}

TEST(EVModulus, DirectIdentityForGlobalFatouCoordinates) {
  for (const char* name : {"f0", "log2exp"}) {
    EVModulus E = ev_modulus_direct(fixtures::by_name(name));
    PrecisionScope ps(40);
    for (int k = 0; k <= 6; ++k) {
      Complex id = k == 1 ? Complex(1) : Complex();
      EXPECT_LT(dist(E.phi_0[static_cast<size_t>(k)], id), 1e-8) << name << " " << k;
      EXPECT_LT(dist(E.phi_inf[static_cast<size_t>(k)], id), 1e-8) << name << " " << k;
    }
  }
}

TEST(EVModulus, TwoSidedMatchesDirect) {
  EVModulus T = ev_from_two_sided_moments(f0_moment(Trivialization::plus), f0_moment(Trivialization::minus));
  EVModulus D = ev_modulus_direct(fixtures::f0());
  PrecisionScope ps(40);
  for (int k = 0; k <= 6; ++k) {
    EXPECT_LT(dist(T.phi_0[static_cast<size_t>(k)], D.phi_0[static_cast<size_t>(k)]), 1e-6) << k;
    EXPECT_LT(dist(T.phi_inf[static_cast<size_t>(k)], D.phi_inf[static_cast<size_t>(k)]), 1e-6) << k;
  }
  EXPECT_THROW(ev_from_two_sided_moments(f0_moment(Trivialization::plus), f0_moment(Trivialization::plus)), DomainError);
  MomentOptions minus;
  minus.trivialization = Trivialization::minus;
  EXPECT_THROW(ev_from_two_sided_moments(m_moment(fixtures::log2exp(), 1), m_moment(fixtures::log2exp(), 1, minus)),
               NotInvertibleError);
}

TEST(EVModulus, NontrivialModulusAgreesAcrossAnnuliAndRoutes) {
  // z + z^2 + z^3 has phi_0(t) = t + c t^2 + ... with |c| ~ 5e5, so the annuli sit deep.
  Germ f = fixtures::by_name("poly:1,1,1");
  EVOptions a, b;
  a.digits = b.digits = 60;
  a.t_min = 1e-17;
  a.t_max = 1e-14;
  b.t_min = 1e-14;
  b.t_max = 1e-11;
  EVModulus A = ev_modulus_direct(f, a), B = ev_modulus_direct(f, b);
  MomentOptions p;
  p.digits = 60;
  p.q_min = 1e-17;
  p.q_max = 1e-12;
  MomentOptions m = p;
  m.trivialization = Trivialization::minus;
  EVModulus T = ev_from_two_sided_moments(m_moment(f, 1, p), m_moment(f, 1, m));
  PrecisionScope ps(60);
  EXPECT_GT(abs(A.phi_0[2]), 1e5);
  for (int k = 1; k <= 5; ++k) {
    Real s = abs(A.phi_0[static_cast<size_t>(k)]);
    EXPECT_LT(abs(A.phi_0[static_cast<size_t>(k)] - B.phi_0[static_cast<size_t>(k)]) / s, 1e-6) << k;
    EXPECT_LT(abs(A.phi_0[static_cast<size_t>(k)] - T.phi_0[static_cast<size_t>(k)]) / s, 1e-6) << k;
    EXPECT_LT(abs(A.phi_inf[static_cast<size_t>(k)] - T.phi_inf[static_cast<size_t>(k)]) / s, 1e-6) << k;
    // Real germ: the two ends are complex conjugate.
    EXPECT_LT(abs(A.phi_inf[static_cast<size_t>(k)] - conj(A.phi_0[static_cast<size_t>(k)])) / s, 1e-6) << k;
  }
}

TEST(Trivialization2D, Residuals) {
  Context ctx{32};
  for (const char* name : {"f0", "log2exp"}) {
    Germ f = fixtures::by_name(name);
    for (const auto& z : attracting_points(10, 5)) {
      Trivialization2D t = two_dim_trivialization(f, z, Complex(Real("0.3")), ctx);
      EXPECT_LT(t.residual, 1e-10) << name << " " << z;
    }
  }
  PrecisionScope ps(32);
  Trivialization2D a = two_dim_trivialization(fixtures::f0(), Complex(Real("-0.2")), Complex(Real("0.3")), ctx);
  Trivialization2D b = two_dim_trivialization(fixtures::f0(), Complex(Real("-0.2")), Complex(Real("-4"), Real("7")), ctx);
  EXPECT_LT(dist(a.T.first, Complex(5)), 1e-25);
  EXPECT_LT(abs(a.residual - b.residual), 1e-25);
  EXPECT_LT(dist(b.T.second - a.T.second, Complex(Real("-4.3"), Real("7"))), 1e-25);
}
