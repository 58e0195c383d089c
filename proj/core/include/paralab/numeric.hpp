#pragma once

#include <complex>
#include <iosfwd>
#include <string>

#include <boost/multiprecision/mpfr.hpp>

namespace paralab {

// Variable-precision MPFR real. Expression templates are disabled so that
// `auto` always yields a value.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

// Working precision in decimal digits. Passed explicitly to every computation
// that allocates numbers; see PrecisionScope.
struct Context {
  unsigned digits = 16;
};

// Sets the MPFR default precision for the lifetime of the scope. The backend
// keeps this as a process-wide value, so computations are single-threaded.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits);
  explicit PrecisionScope(const Context& ctx) : PrecisionScope(ctx.digits) {}
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

unsigned current_digits();

// Default digits honouring the PARALAB_PRECISION environment variable.
unsigned default_digits();

Real pi();
Real euler_gamma();
Real ln2();
Real epsilon_at(unsigned digits);

enum class LogBranch {
  principal,  // arg in (-pi, pi]
  plus,       // arg in (0, 2pi]
};

class Complex {
 public:
  Real re;
  Real im;

  Complex() : re(0), im(0) {}
  Complex(const Real& r) : re(r), im(0) {}  // NOLINT: implicit by design
  Complex(const Real& r, const Real& i) : re(r), im(i) {}
  Complex(double r) : re(r), im(0) {}  // NOLINT
  Complex(int r) : re(r), im(0) {}     // NOLINT
  Complex(double r, double i) : re(r), im(i) {}
  explicit Complex(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  // Parses decimal strings at the current precision.
  static Complex parse(const std::string& re, const std::string& im = "0");

  std::complex<double> to_cd() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex& operator*=(const Real& s) {
    re *= s;
    im *= s;
    return *this;
  }
  Complex& operator/=(const Real& s) {
    re /= s;
    im /= s;
    return *this;
  }
  Complex operator-() const { return {-re, -im}; }

  bool is_zero() const { return re == 0 && im == 0; }
};

inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator/(Complex a, const Complex& b) { return a /= b; }
inline Complex operator*(Complex a, const Real& s) { return a *= s; }
inline Complex operator*(const Real& s, Complex a) { return a *= s; }
inline Complex operator/(Complex a, const Real& s) { return a /= s; }
inline Complex operator*(Complex a, int s) { return a *= Real(s); }
inline Complex operator*(int s, Complex a) { return a *= Real(s); }
inline Complex operator*(Complex a, double s) { return a *= Real(s); }
inline Complex operator*(double s, Complex a) { return a *= Real(s); }
inline bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

Complex I();
Complex conj(const Complex& z);
Real abs(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real arg(const Complex& z, LogBranch b = LogBranch::principal);
Complex exp(const Complex& z);
Complex log(const Complex& z, LogBranch b = LogBranch::principal);
Complex sqrt(const Complex& z);
Complex pow(const Complex& z, const Complex& w, LogBranch b = LogBranch::principal);
Complex powi(Complex z, long n);
Complex expi(const Real& t);  // e^{it}
bool isfinite(const Complex& z);

std::string to_string(const Real& x, unsigned digits = 0);
std::ostream& operator<<(std::ostream& os, const Complex& z);

// G(t) = t sqrt(1 - t^2) + arcsin t, the crescent kernel, t in [0, 1].
Real crescent_kernel(const Real& t);

}  // namespace paralab
