#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "paralab/numeric.hpp"
#include "paralab/series.hpp"
#include "verify/oracles.hpp"

using namespace paralab;

TEST(Numeric, DoubleAgreementAtSixteenDigits) {
  PrecisionScope scope(16);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 200; ++i) {
    std::complex<double> a(u(rng), u(rng)), b(u(rng), u(rng));
    Complex A(a), B(b);
    auto rel = [](std::complex<double> x, std::complex<double> y) { return std::abs(x - y) / std::abs(y); };
    EXPECT_LT(rel((A * B).to_cd(), a * b), 1e-15);
    EXPECT_LT(rel((A / B).to_cd(), a / b), 1e-15);
    EXPECT_LT(rel((A + B).to_cd() + 10.0, a + b + 10.0), 1e-15);
    EXPECT_LT(rel(exp(A).to_cd(), std::exp(a)), 1e-14);
    EXPECT_LT(rel(log(A).to_cd(), std::log(a)), 1e-14);
    EXPECT_LT(rel(sqrt(A).to_cd(), std::sqrt(a)), 1e-15);
  }
}

TEST(Numeric, LogBranches) {
  PrecisionScope scope(30);
  Complex m(-0.5);
  Complex lp = log(m, LogBranch::plus);
  EXPECT_NEAR(static_cast<double>(lp.im), M_PI, 1e-15);
  Complex low(0.3, -0.2);
  EXPECT_NEAR(static_cast<double>(log(low, LogBranch::plus).im - log(low).im), 2 * M_PI, 1e-15);
  EXPECT_NEAR(static_cast<double>(log(Complex(0.3, 0.2), LogBranch::plus).im - log(Complex(0.3, 0.2)).im), 0, 1e-30);
}

TEST(Numeric, HighPrecisionConstants) {
  PrecisionScope scope(50);
  Real p = pi();
  Real ref("3.14159265358979323846264338327950288419716939937510");
  EXPECT_LT(static_cast<double>(abs(p - ref)), 1e-48);
  Real g("0.57721566490153286060651209008240243104215933593992");
  EXPECT_LT(static_cast<double>(abs(euler_gamma() - g)), 1e-48);
}

TEST(Numeric, CrescentKernel) {
  PrecisionScope scope(30);
  EXPECT_EQ(crescent_kernel(Real(0)), Real(0));
  EXPECT_LT(static_cast<double>(abs(crescent_kernel(Real(1)) - pi() / 2)), 1e-29);
  // G'(t) = 2 sqrt(1 - t^2).
  Real t("0.3"), h("1e-10");
  Real d = (crescent_kernel(t + h) - crescent_kernel(t - h)) / (2 * h);
  EXPECT_LT(static_cast<double>(abs(d - 2 * sqrt(1 - t * t))), 1e-15);
}

TEST(Numeric, DigammaOracle) {
  PrecisionScope scope(40);
  // psi(2) = 1 - gamma.
  Complex v = oracle::digamma(Complex(2));
  EXPECT_LT(static_cast<double>(abs(v - Complex(1 - euler_gamma()))), 1e-36);
  // Reflection psi(1 - z) - psi(z) = pi cot(pi z).
  Complex z(0.3, 0.7);
  Complex lhs = oracle::digamma(Complex(1) - z) - oracle::digamma(z);
  Complex e = exp(Complex(0, 2) * pi() * z);
  Complex cot = Complex(0, 1) * (e + Complex(1)) / (e - Complex(1));
  EXPECT_LT(static_cast<double>(abs(lhs - cot * pi())), 1e-35);
}

TEST(Series, ArithmeticIdentities) {
  PrecisionScope scope(30);
  int n = 12;
  Series e = Series::identity(n).exp();
  EXPECT_LT(static_cast<double>(abs(e[5] - Complex(Real(1) / 120))), 1e-29);
  Series l = e.log();
  EXPECT_LT(static_cast<double>(abs(l[1] - Complex(1))), 1e-29);
  for (int k = 2; k <= n; ++k) EXPECT_LT(static_cast<double>(abs(l[k])), 1e-28);
  Series s = Series::constant(Complex(1), n) + Series::identity(n);
  Series r = s.pow(Complex(0.5));
  Series sq = r * r;
  for (int k = 0; k <= n; ++k) EXPECT_LT(static_cast<double>(abs(sq[k] - s[k])), 1e-28);
}

TEST(Series, CompositionAssociativity) {
  PrecisionScope scope(30);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int trial = 0; trial < 5; ++trial) {
    auto random_cubic = [&] {
      Series s = Series::zero(3);
      s[1] = Complex(u(rng), u(rng));
      s[2] = Complex(u(rng), u(rng));
      s[3] = Complex(u(rng), u(rng));
      return s.truncated(8);
    };
    Series f = random_cubic(), g = random_cubic(), h = random_cubic();
    Series a = f.compose(g).compose(h);
    Series b = f.compose(g.compose(h));
    for (int k = 0; k <= 8; ++k) EXPECT_LT(static_cast<double>(abs(a[k] - b[k])), 1e-12);
  }
}

TEST(Series, ReversionRoundTrip) {
  PrecisionScope scope(30);
  Series f = Series::identity(20);
  for (int k = 2; k <= 20; ++k) f[k] = Complex(Real(1) / Real(k), Real(k % 3) / 7);
  Series g = f.revert();
  Series id = f.compose(g);
  EXPECT_LT(static_cast<double>(abs(id[1] - Complex(1))), 1e-27);
  for (int k = 2; k <= 20; ++k) EXPECT_LT(static_cast<double>(abs(id[k])), 1e-25) << k;
}
