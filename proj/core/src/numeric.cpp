#include "paralab/numeric.hpp"

#include <cstdlib>
#include <ostream>

#include <mpfr.h>

namespace paralab {

PrecisionScope::PrecisionScope(unsigned digits) : saved_(Real::default_precision()) {
  Real::default_precision(digits);
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_); }

unsigned current_digits() { return Real::default_precision(); }

unsigned default_digits() {
  if (const char* env = std::getenv("PARALAB_PRECISION")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 10 && v <= 2000) return static_cast<unsigned>(v);
  }
  return 16;
}

Real pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

Real euler_gamma() {
  Real r;
  mpfr_const_euler(r.backend().data(), MPFR_RNDN);
  return r;
}

Real ln2() {
  Real r;
  mpfr_const_log2(r.backend().data(), MPFR_RNDN);
  return r;
}

Real epsilon_at(unsigned digits) { return pow(Real(10), -static_cast<int>(digits)); }

Complex Complex::parse(const std::string& r, const std::string& i) {
  return {Real(r), Real(i)};
}

Complex& Complex::operator*=(const Complex& o) {
  Real r = re * o.re - im * o.im;
  im = re * o.im + im * o.re;
  re = std::move(r);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  // Scale by the larger component to keep intermediate exponents tame.
  if (abs(o.re) >= abs(o.im)) {
    Real q = o.im / o.re;
    Real d = o.re + o.im * q;
    Real r = (re + im * q) / d;
    im = (im - re * q) / d;
    re = std::move(r);
  } else {
    Real q = o.re / o.im;
    Real d = o.re * q + o.im;
    Real r = (re * q + im) / d;
    im = (im * q - re) / d;
    re = std::move(r);
  }
  return *this;
}

Complex I() { return {Real(0), Real(1)}; }

Complex conj(const Complex& z) { return {z.re, -z.im}; }

Real abs(const Complex& z) { return boost::multiprecision::hypot(z.re, z.im); }

Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }

Real arg(const Complex& z, LogBranch b) {
  Real a = atan2(z.im, z.re);
  if (b == LogBranch::plus && a <= 0) a += 2 * pi();
  return a;
}

Complex exp(const Complex& z) {
  Real m = exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}

Complex log(const Complex& z, LogBranch b) { return {log(abs(z)), arg(z, b)}; }

Complex sqrt(const Complex& z) {
  if (z.is_zero()) return {};
  Real r = abs(z);
  Real u = sqrt((r + abs(z.re)) / 2);
  if (z.re >= 0) return {u, z.im / (2 * u)};
  Real v = z.im >= 0 ? u : Real(-u);
  return {abs(z.im) / (2 * u), v};
}

Complex pow(const Complex& z, const Complex& w, LogBranch b) {
  if (z.is_zero()) return {};
  return exp(w * log(z, b));
}

Complex powi(Complex z, long n) {
  if (n < 0) return Complex(1) / powi(z, -n);
  Complex r(1);
  while (n) {
    if (n & 1) r *= z;
    z *= z;
    n >>= 1;
  }
  return r;
}

Complex expi(const Real& t) { return {cos(t), sin(t)}; }

bool isfinite(const Complex& z) {
  return boost::multiprecision::isfinite(z.re) && boost::multiprecision::isfinite(z.im);
}

std::string to_string(const Real& x, unsigned digits) {
  if (digits == 0) digits = current_digits();
  return x.str(static_cast<std::streamsize>(digits), std::ios::scientific);
}

std::ostream& operator<<(std::ostream& os, const Complex& z) {
  auto p = os.precision();
  os << '(' << z.re.str(p) << ", " << z.im.str(p) << ')';
  return os;
}

Real crescent_kernel(const Real& t) {
  if (t >= 1) return pi() / 2;
  if (t <= 0) return Real(0);
  return t * sqrt(1 - t * t) + asin(t);
}

}  // namespace paralab
