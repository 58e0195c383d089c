#include "paralab/germ.hpp"

#include <cmath>
#include <regex>
#include <sstream>

#include "paralab/errors.hpp"

namespace paralab {

// ---------------------------------------------------------------- ScalarSpec

ScalarSpec ScalarSpec::parse(const std::string& text) {
  static const std::regex re_pi(R"(^\s*([+-]?)\s*(?:([0-9.]+(?:[eE][+-]?[0-9]+)?)\s*\*\s*)?pi(?:\^([0-9]+))?\s*$)");
  static const std::regex re_num(R"(^\s*[+-]?[0-9.]+(?:[eE][+-]?[0-9]+)?\s*$)");
  std::smatch m;
  ScalarSpec s;
  if (std::regex_match(text, m, re_pi)) {
    std::string mag = m[2].matched ? m[2].str() : "1";
    s.re = (m[1].str() == "-" ? "-" : "") + mag;
    s.pi_power = m[3].matched ? std::stoi(m[3].str()) : 1;
    return s;
  }
  if (std::regex_match(text, re_num)) {
    s.re = text;
    return s;
  }
  throw DomainError("cannot parse scalar '" + text + "'");
}

ScalarSpec ScalarSpec::real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  ScalarSpec s;
  s.re = os.str();
  return s;
}

ScalarSpec ScalarSpec::of(const Complex& c) {
  ScalarSpec s;
  s.re = to_string(c.re, current_digits() + 5);
  s.im = to_string(c.im, current_digits() + 5);
  return s;
}

Complex ScalarSpec::value() const {
  Complex v = Complex::parse(re, im);
  if (pi_power != 0) v *= pow(pi(), pi_power);
  return v;
}

std::string ScalarSpec::str() const {
  std::string s = re;
  if (im != "0") s = "(" + re + (im[0] == '-' ? "" : "+") + im + "i)";
  if (pi_power == 1) s += "*pi";
  if (pi_power > 1) s += "*pi^" + std::to_string(pi_power);
  return s;
}

// ------------------------------------------------------------------ GermImpl

Complex GermImpl::derivative(const Complex& z) const {
  // Five-point stencil; step balances truncation h^4 against rounding.
  Real h = pow(Real(10), -static_cast<int>(current_digits()) / 5) * std::max(Real(1e-3), abs(z));
  Complex a = eval(z + Complex(2 * h)), b = eval(z + Complex(h));
  Complex c = eval(z - Complex(h)), d = eval(z - Complex(2 * h));
  return (-a + b * 8 - c * 8 + d) / (12 * h);
}

Series GermImpl::series(int order) const {
  unsigned digits = current_digits();
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(digits);
    if (it != cache_.end() && it->second.order() >= order) return it->second.truncated(order);
  }
  Series s = compute_series(order);
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = cache_[digits];
  if (slot.empty() || slot.order() < order) slot = s;
  return s;
}

// ---------------------------------------------------------------------- Germ

Germ::Germ(std::string label, std::shared_ptr<const GermImpl> impl)
    : label_(std::move(label)), impl_(std::move(impl)) {}

Complex Germ::eval(const Complex& z) const {
  if (static_cast<double>(abs(z)) > impl_->validity_radius())
    throw DomainError("|z| outside validity radius of germ " + label_);
  return impl_->eval(z);
}

std::vector<Complex> Germ::taylor(int order) const {
  Series s = series(order);
  return std::vector<Complex>(s.coeffs().begin() + 1, s.coeffs().end());
}

namespace {

class ClosedFormGerm final : public GermImpl {
 public:
  explicit ClosedFormGerm(ClosedFormParts p) : p_(std::move(p)) {}
  Complex eval(const Complex& z) const override { return p_.eval(z); }
  Complex derivative(const Complex& z) const override {
    return p_.derivative ? p_.derivative(z) : GermImpl::derivative(z);
  }
  std::optional<Complex> closed_inverse(const Complex& w) const override {
    if (p_.inverse) return p_.inverse(w);
    return std::nullopt;
  }
  std::string tag() const override { return p_.tag; }
  double validity_radius() const override { return p_.radius; }

 protected:
  Series compute_series(int order) const override { return p_.series(order); }

 private:
  ClosedFormParts p_;
};

class SeriesGerm final : public GermImpl {
 public:
  explicit SeriesGerm(std::vector<ScalarSpec> c) : c_(std::move(c)) {
    // Radius heuristic: half the root-test radius of the given coefficients.
    double lim = 0;
    for (size_t k = 2; k < c_.size(); ++k) {
      double a = std::hypot(std::stod(c_[k].re), std::stod(c_[k].im));
      if (a > 0) lim = std::max(lim, std::pow(a, 1.0 / static_cast<double>(k)));
    }
    radius_ = lim > 0 ? 0.5 / lim : 1e300;
  }
  Complex eval(const Complex& z) const override { return series(static_cast<int>(c_.size()) - 1).eval(z); }
  Complex derivative(const Complex& z) const override {
    return series(static_cast<int>(c_.size()) - 1).derivative().eval(z);
  }
  std::string tag() const override { return "series"; }
  bool has_closed_form() const override { return false; }
  double validity_radius() const override { return radius_; }

 protected:
  Series compute_series(int order) const override {
    Series s = Series::zero(order);
    for (int k = 0; k <= order && k < static_cast<int>(c_.size()); ++k) s[k] = c_[static_cast<size_t>(k)].value();
    return s;
  }

 private:
  std::vector<ScalarSpec> c_;
  double radius_;
};

class CompositionGerm final : public GermImpl {
 public:
  CompositionGerm(Germ outer, Germ inner) : outer_(std::move(outer)), inner_(std::move(inner)) {}
  Complex eval(const Complex& z) const override { return outer_.eval(inner_.eval(z)); }
  Complex derivative(const Complex& z) const override {
    return outer_.derivative(inner_.eval(z)) * inner_.derivative(z);
  }
  std::optional<Complex> closed_inverse(const Complex& w) const override {
    auto u = outer_.closed_inverse(w);
    if (!u) return std::nullopt;
    return inner_.closed_inverse(*u);
  }
  std::string tag() const override { return "compose(" + outer_.closed_form_tag() + "," + inner_.closed_form_tag() + ")"; }
  bool has_closed_form() const override { return outer_.has_closed_form() && inner_.has_closed_form(); }
  double validity_radius() const override { return inner_.validity_radius(); }

 protected:
  Series compute_series(int order) const override {
    return outer_.series(order).compose(inner_.series(order));
  }

 private:
  Germ outer_, inner_;
};

class InverseGerm final : public GermImpl {
 public:
  explicit InverseGerm(Germ g) : g_(std::move(g)) {}

  Complex eval(const Complex& w) const override {
    if (auto v = g_.closed_inverse(w)) return *v;
    return newton(w);
  }
  Complex derivative(const Complex& w) const override { return Complex(1) / g_.derivative(eval(w)); }
  std::optional<Complex> closed_inverse(const Complex& z) const override { return g_.eval(z); }
  std::string tag() const override { return "inverse(" + g_.closed_form_tag() + ")"; }
  bool has_closed_form() const override { return g_.has_closed_form(); }
  double validity_radius() const override { return g_.validity_radius(); }

 protected:
  Series compute_series(int order) const override { return g_.series(order).revert(); }

 private:
  Complex newton(const Complex& w) const {
    Real tol = pow(Real(10), 2 - static_cast<int>(current_digits()));
    Real scale = std::max(abs(w), Real(1e-30));
    Complex h = w;  // tangent to identity
    Real res = abs(g_.eval(h) - w);
    for (int it = 0; it < 40; ++it) {
      if (res <= tol * scale) return h;
      Complex step = (g_.eval(h) - w) / g_.derivative(h);
      Real t = 1;
      Complex hn;
      Real rn;
      for (;;) {
        hn = h - step * t;
        try {
          rn = abs(g_.eval(hn) - w);
        } catch (const DomainError&) {
          rn = res * 2;
        }
        if (rn < res || t < Real(1e-3)) break;
        t /= 2;
      }
      h = hn;
      res = rn;
      if (abs(step) * t <= tol * abs(h) && res <= tol * scale * 100) return h;
    }
    if (res <= tol * scale * 100) return h;
    throw ConvergenceError("Newton inversion of germ " + g_.label() + " did not converge");
  }

  Germ g_;
};

}  // namespace

Germ make_closed_form(std::string label, ClosedFormParts parts) {
  return Germ(std::move(label), std::make_shared<ClosedFormGerm>(std::move(parts)));
}

Germ make_series_germ(std::string label, std::vector<ScalarSpec> coeffs) {
  if (coeffs.size() < 2) throw DomainError("series germ needs at least c_0, c_1");
  return Germ(std::move(label), std::make_shared<SeriesGerm>(std::move(coeffs)));
}

Germ identity_germ() {
  ClosedFormParts p;
  p.tag = "z";
  p.eval = [](const Complex& z) { return z; };
  p.derivative = [](const Complex&) { return Complex(1); };
  p.series = [](int n) { return Series::identity(n); };
  p.inverse = [](const Complex& w) { return w; };
  return make_closed_form("id", std::move(p));
}

Germ compose(const Germ& outer, const Germ& inner) {
  return Germ(outer.label() + "o" + inner.label(), std::make_shared<CompositionGerm>(outer, inner));
}

Germ invert(const Germ& g) {
  Series s = g.series(1);
  if (s[1].is_zero()) throw DomainError("cannot invert germ with a_1 = 0");
  return Germ("inv(" + g.label() + ")", std::make_shared<InverseGerm>(g));
}

Germ conjugate(const Germ& f, const Germ& phi) {
  Germ g = compose(invert(phi), compose(f, phi));
  return Germ("conj(" + f.label() + "," + phi.label() + ")", g.impl());
}

Complex iterate(const Germ& g, long n, const Complex& z, const IterateOptions& opt) {
  if (n < 0) throw DomainError("iterate needs n >= 0; invert the germ for backward orbits");
  Real esc = opt.escape_radius > 0 ? Real(opt.escape_radius) : std::max(Real(1), 4 * abs(z));
  Complex w = z;
  for (long j = 0; j < n; ++j) {
    w = g.eval(w);
    if (!isfinite(w) || abs(w) > esc) throw EscapeError("iterate left the petal after " + std::to_string(j + 1) + " steps");
  }
  return w;
}

// ------------------------------------------------------------- formal class

std::vector<Complex> solve_difference_series(const Series& f, const Series& delta, int K) {
  int n = K + 1;
  if (f.order() < n || delta.order() < n) throw DomainError("series too short for requested formal order");
  Series fn = f.truncated(n);
  Complex a2 = fn[2];
  // Column j holds f^j - z^j.
  std::vector<Series> cols;
  cols.reserve(static_cast<size_t>(K));
  Series p = fn;
  for (int j = 1; j <= K; ++j) {
    Series q = p;
    q[j] -= Complex(1);
    cols.push_back(q);
    if (j < K) p = mul_trunc(p, fn, n);
  }
  std::vector<Complex> c(static_cast<size_t>(K));
  for (int j = 1; j <= K; ++j) {
    Complex s = delta[j + 1];
    for (int i = 1; i < j; ++i) s -= c[static_cast<size_t>(i - 1)] * cols[static_cast<size_t>(i - 1)][j + 1];
    c[static_cast<size_t>(j - 1)] = s / (a2 * Real(j));
  }
  return c;
}

FormalClassInfo formal_class(const Germ& f, int order) {
  if (order < 3) throw DomainError("formal_class needs order >= 3");
  Series s = f.series(order);
  Real tol = pow(Real(10), -static_cast<int>(current_digits()) / 2);
  if (abs(s[0]) > tol || abs(s[1] - Complex(1)) > tol) throw NotParabolicError("germ is not tangent to the identity");
  FormalClassInfo info;
  if (abs(s[2]) <= tol) {
    int k = 1;
    while (k + 1 <= order && abs(s[k + 1]) <= tol) ++k;
    throw NotParabolicError(k + 1 > order ? "no nonlinear term through tested order"
                                          : "a_2 = 0 (tangency order k = " + std::to_string(k) + " unsupported)");
  }
  info.scale = s[2];
  // z -> lambda f(z / lambda) with lambda = a_2 makes a_2 = 1.
  Complex lam = s[2];
  Complex lp(1);
  for (int j = 1; j <= order; ++j) {
    s[j] = s[j] / lp;
    lp *= lam;
  }
  // Fatou recursion with rhs 1: delta = 1 + 1/f - 1/z.
  Series fz = s.shifted(-1);
  Series delta = fz.reciprocal();
  delta[0] -= Complex(1);
  delta = delta.shifted(-1);
  delta[0] += Complex(1);
  info.rho_obstruction = -delta[1];
  info.conjugacy = {Complex(1), Complex(0)};
  if (abs(info.rho_obstruction) > tol) return info;
  int K = delta.order() - 1;
  if (K < 1) return info;
  info.fatou = solve_difference_series(s, delta, K);
  // phi-hat = -1 / Psi-hat = z / (1 - sum c_j z^{j+1}).
  Series den = Series::constant(Complex(1), K + 1);
  for (int j = 1; j <= K; ++j) den[j + 1] = -info.fatou[static_cast<size_t>(j - 1)];
  Series phi = den.reciprocal().shifted(1);
  info.conjugacy.clear();
  for (int j = 1; j <= phi.order(); ++j) info.conjugacy.push_back(phi[j]);
  return info;
}

// -------------------------------------------------------------------- petals

double default_petal_opening() { return 1.5 * M_PI - 0.2; }

PetalSpec PetalSpec::attracting(double r) { return {PetalKind::attracting, default_petal_opening(), r}; }
PetalSpec PetalSpec::repelling(double r) { return {PetalKind::repelling, default_petal_opening(), r}; }
PetalSpec PetalSpec::upper(double r) { return {PetalKind::upper, default_petal_opening(), r}; }
PetalSpec PetalSpec::lower(double r) { return {PetalKind::lower, default_petal_opening(), r}; }

Complex PetalSpec::bisector() const {
  switch (kind) {
    case PetalKind::attracting: return Complex(-1);
    case PetalKind::repelling: return Complex(1);
    case PetalKind::upper: return I();
    case PetalKind::lower: return -I();
  }
  return Complex(1);
}

bool PetalSpec::contains(const Complex& z) const {
  auto zc = z.to_cd();
  double r = std::abs(zc);
  if (r == 0 || r >= radius) return false;
  double half = opening / 2;
  bool in_plus = std::abs(std::arg(-zc)) < half;
  bool in_minus = std::abs(std::arg(zc)) < half;
  switch (kind) {
    case PetalKind::attracting: return in_plus;
    case PetalKind::repelling: return in_minus;
    case PetalKind::upper: return in_plus && in_minus && zc.imag() > 0;
    case PetalKind::lower: return in_plus && in_minus && zc.imag() < 0;
  }
  return false;
}

}  // namespace paralab
