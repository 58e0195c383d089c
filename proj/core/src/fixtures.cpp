#include "paralab/fixtures.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "paralab/errors.hpp"

namespace paralab::fixtures {

namespace {

Series exp_series(int n, int sign = 1) {
  Series e = Series::zero(n);
  Real f = 1;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) f *= k;
    e[k] = Complex((k % 2 && sign < 0) ? Real(-1 / f) : Real(1 / f));
  }
  return e;
}

}  // namespace

Germ f0() {
  ClosedFormParts p;
  p.tag = "z/(1-z)";
  p.eval = [](const Complex& z) { return z / (Complex(1) - z); };
  p.derivative = [](const Complex& z) {
    Complex d = Complex(1) - z;
    return Complex(1) / (d * d);
  };
  p.series = [](int n) {
    Series s = Series::zero(n);
    for (int k = 1; k <= n; ++k) s[k] = Complex(1);
    return s;
  };
  p.inverse = [](const Complex& w) { return w / (Complex(1) + w); };
  p.radius = 1.0;
  return make_closed_form("f0", std::move(p));
}

Germ log2exp() {
  ClosedFormParts p;
  p.tag = "-log(2-exp(z))";
  p.eval = [](const Complex& z) { return -log(Complex(2) - exp(z)); };
  p.derivative = [](const Complex& z) {
    Complex e = exp(z);
    return e / (Complex(2) - e);
  };
  p.series = [](int n) {
    Series u = Series::constant(Complex(2), n) - exp_series(n);
    return -u.log();
  };
  p.inverse = [](const Complex& w) { return log(Complex(2) - exp(-w)); };
  p.radius = std::log(2.0);
  return make_closed_form("log2exp", std::move(p));
}

Germ zexpz() {
  ClosedFormParts p;
  p.tag = "z*exp(z)";
  p.eval = [](const Complex& z) { return z * exp(z); };
  p.derivative = [](const Complex& z) { return (Complex(1) + z) * exp(z); };
  p.series = [](int n) { return exp_series(n).shifted(1); };
  return make_closed_form("zexpz", std::move(p));
}

Germ polynomial(const std::vector<double>& a) {
  std::vector<ScalarSpec> c{ScalarSpec{}};
  for (double v : a) c.push_back(ScalarSpec::real(v));
  std::ostringstream label;
  label << "poly:";
  for (size_t i = 0; i < a.size(); ++i) label << (i ? "," : "") << a[i];
  Germ s = make_series_germ(label.str(), c);
  ClosedFormParts p;
  p.tag = "polynomial";
  int deg = static_cast<int>(a.size());
  p.eval = [s, deg](const Complex& z) { return s.series(deg).eval(z); };
  p.derivative = [s, deg](const Complex& z) { return s.series(deg).derivative().eval(z); };
  p.series = [s, deg](int n) { return s.series(deg).truncated(n); };
  return make_closed_form(label.str(), std::move(p));
}

Germ phi(const std::string& name) {
  ClosedFormParts p;
  if (name == "id") return identity_germ();
  if (name == "expneg") {
    p.tag = "1-exp(-z)";
    p.eval = [](const Complex& z) { return Complex(1) - exp(-z); };
    p.derivative = [](const Complex& z) { return exp(-z); };
    p.series = [](int n) {
      Series s = -exp_series(n, -1);
      s[0] = Complex(0);
      return s;
    };
    p.inverse = [](const Complex& u) { return -log(Complex(1) - u); };
  } else if (name == "mobius") {
    p.tag = "z/(1+z)";
    p.eval = [](const Complex& z) { return z / (Complex(1) + z); };
    p.derivative = [](const Complex& z) {
      Complex d = Complex(1) + z;
      return Complex(1) / (d * d);
    };
    p.series = [](int n) {
      Series s = Series::zero(n);
      for (int k = 1; k <= n; ++k) s[k] = Complex(k % 2 ? 1 : -1);
      return s;
    };
    p.inverse = [](const Complex& u) { return u / (Complex(1) - u); };
    p.radius = 1.0;
  } else if (name == "quad") {
    p.tag = "z+z^2";
    p.eval = [](const Complex& z) { return z + z * z; };
    p.derivative = [](const Complex& z) { return Complex(1) + z * 2; };
    p.series = [](int n) {
      Series s = Series::zero(n);
      if (n >= 1) s[1] = Complex(1);
      if (n >= 2) s[2] = Complex(1);
      return s;
    };
    p.inverse = [](const Complex& u) { return (sqrt(Complex(1) + u * 4) - Complex(1)) / Real(2); };
  } else {
    throw DomainError("unknown conjugating map '" + name + "'");
  }
  return make_closed_form(name, std::move(p));
}

Germ exp_family(const Germ& ph) {
  ClosedFormParts p;
  p.tag = "exp(z)*" + ph.closed_form_tag();
  p.eval = [ph](const Complex& z) { return exp(z) * ph.eval(z); };
  p.derivative = [ph](const Complex& z) { return exp(z) * (ph.eval(z) + ph.derivative(z)); };
  p.series = [ph](int n) { return exp_series(n) * ph.series(n); };
  p.radius = ph.validity_radius();
  Germ inner = make_closed_form("exp*" + ph.label(), std::move(p));
  Germ f = compose(invert(ph), inner);
  return Germ("exp-family:" + ph.label(), f.impl());
}

Germ by_name(const std::string& name) {
  if (name == "f0") return f0();
  if (name == "log2exp") return log2exp();
  if (name == "zexpz") return zexpz();
  auto suffix = [&](const std::string& prefix) -> std::optional<std::string> {
    if (name.rfind(prefix, 0) == 0) return name.substr(prefix.size());
    return std::nullopt;
  };
  if (auto s = suffix("exp-family:")) return exp_family(phi(*s));
  if (auto s = suffix("conj-f0:")) {
    Germ g = conjugate(f0(), phi(*s));
    return Germ(name, g.impl());
  }
  if (auto s = suffix("phi:")) return phi(*s);
  if (auto s = suffix("poly:")) {
    std::vector<double> a;
    std::stringstream ss(*s);
    std::string tok;
    while (std::getline(ss, tok, ',')) a.push_back(std::stod(tok));
    if (a.empty()) throw DomainError("empty polynomial germ");
    return polynomial(a);
  }
  throw DomainError("unknown germ '" + name + "'");
}

std::vector<std::string> names() {
  return {"f0", "log2exp", "zexpz", "exp-family:expneg", "exp-family:mobius", "exp-family:quad",
          "conj-f0:expneg", "conj-f0:mobius", "conj-f0:quad"};
}

}  // namespace paralab::fixtures
