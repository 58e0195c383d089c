#include "paralab/quadrature.hpp"

#include <cmath>

#include "paralab/errors.hpp"

namespace paralab {

QuadratureResult tanh_sinh(const std::function<Complex(const Real&)>& f, const Real& a, const Real& b,
                           const Real& tol, int max_level) {
  unsigned digits = current_digits();
  // Beyond t_max the weights fall below 10^{-digits-5}.
  double t_max = std::asinh(2 / M_PI * (digits + 5) * std::log(10.0));
  Real half = (b - a) / 2;
  Real hp = pi() / 2;
  auto node = [&](const Real& t, Complex& sum) {
    Real u = hp * sinh(t);
    Real e = exp(-2 * abs(u));
    // Distance from the nearer endpoint, without cancellation.
    Real d = 2 * half * e / (1 + e);
    Real x = u >= 0 ? b - d : a + d;
    Real ch = cosh(u);
    Real w = half * hp * cosh(t) / (ch * ch);
    if (d > 0) sum += f(x) * w;
  };
  Real h = 1;
  Complex sum;
  node(Real(0), sum);
  for (int k = 1; k <= static_cast<int>(std::ceil(t_max)); ++k) {
    node(Real(k), sum);
    node(Real(-k), sum);
  }
  Complex prev = sum * h;
  QuadratureResult r;
  for (int level = 1; level <= max_level; ++level) {
    h /= 2;
    long count = static_cast<long>(std::ceil(t_max / h.convert_to<double>()));
    for (long k = 1; k <= count; k += 2) {
      Real t = h * k;
      node(t, sum);
      node(-t, sum);
    }
    Complex cur = sum * h;
    r.value = cur;
    r.error = abs(cur - prev);
    r.levels = level;
    if (level >= 3 && r.error <= tol) return r;
    prev = cur;
  }
  throw QuadratureError("tanh-sinh did not converge (last change " + to_string(r.error, 3) + ")");
}

}  // namespace paralab
