#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "paralab/numeric.hpp"
#include "paralab/series.hpp"

namespace paralab {

// Precision-free scalar (re + i*im) * pi^pi_power, materialized at the
// precision of the calling scope.
struct ScalarSpec {
  std::string re = "0";
  std::string im = "0";
  int pi_power = 0;

  // Accepts plain decimals and forms such as "pi", "-pi", "2*pi", "-0.5*pi".
  static ScalarSpec parse(const std::string& text);
  static ScalarSpec real(double v);
  static ScalarSpec of(const Complex& c);
  Complex value() const;
  std::string str() const;
};

class GermImpl {
 public:
  virtual ~GermImpl() = default;
  virtual Complex eval(const Complex& z) const = 0;
  virtual Complex derivative(const Complex& z) const;
  virtual std::optional<Complex> closed_inverse(const Complex&) const { return std::nullopt; }
  virtual std::string tag() const = 0;
  virtual bool has_closed_form() const { return true; }
  virtual double validity_radius() const { return 1e300; }

  // Coefficients c_0..c_order at the current precision, memoized.
  Series series(int order) const;

 protected:
  virtual Series compute_series(int order) const = 0;

 private:
  mutable std::mutex mu_;
  mutable std::map<unsigned, Series> cache_;  // keyed by digits
};

class Germ {
 public:
  Germ() = default;
  Germ(std::string label, std::shared_ptr<const GermImpl> impl);

  const std::string& label() const { return label_; }
  std::string closed_form_tag() const { return impl_->tag(); }
  bool has_closed_form() const { return impl_->has_closed_form(); }
  double validity_radius() const { return impl_->validity_radius(); }
  const std::shared_ptr<const GermImpl>& impl() const { return impl_; }
  explicit operator bool() const { return static_cast<bool>(impl_); }

  Complex eval(const Complex& z) const;
  Complex operator()(const Complex& z) const { return eval(z); }
  Complex derivative(const Complex& z) const { return impl_->derivative(z); }
  std::optional<Complex> closed_inverse(const Complex& w) const { return impl_->closed_inverse(w); }
  Series series(int order) const { return impl_->series(order); }
  // (a_1, ..., a_order).
  std::vector<Complex> taylor(int order) const;

 private:
  std::string label_;
  std::shared_ptr<const GermImpl> impl_;
};

// Generic closed-form germ assembled from callables evaluated at call-time precision.
struct ClosedFormParts {
  std::string tag;
  std::function<Complex(const Complex&)> eval;
  std::function<Complex(const Complex&)> derivative;  // optional
  std::function<Series(int)> series;
  std::function<Complex(const Complex&)> inverse;     // optional
  double radius = 1e300;
};
Germ make_closed_form(std::string label, ClosedFormParts parts);

// Germ known only through its Taylor coefficients c_0..c_M.
Germ make_series_germ(std::string label, std::vector<ScalarSpec> coeffs);

Germ identity_germ();
Germ compose(const Germ& outer, const Germ& inner);
Germ invert(const Germ& g);
// phi^{-1} o f o phi
Germ conjugate(const Germ& f, const Germ& phi);

struct IterateOptions {
  double escape_radius = 0;  // 0 selects max(1, 4|z|)
};
Complex iterate(const Germ& g, long n, const Complex& z, const IterateOptions& opt = {});

struct FormalClassInfo {
  int k = 1;
  Complex rho_obstruction;
  Complex scale;                 // a_2 used for prenormalization
  std::vector<Complex> conjugacy;  // p_1 = 1, p_2 = 0, p_3, ... of phi-hat
  std::vector<Complex> fatou;      // c_1, c_2, ... of Psi-hat = -1/z + sum c_j z^j
  bool model_class() const { return !fatou.empty(); }
};
FormalClassInfo formal_class(const Germ& f, int order);

// Triangular recursion for sum_j c_j (f^j - z^j) = delta, with f = z + a2 z^2 + ...
// and delta_0 = delta_1 = 0 assumed. Returns c_1..c_K.
std::vector<Complex> solve_difference_series(const Series& f, const Series& delta, int K);

enum class PetalKind { attracting, repelling, upper, lower };

struct PetalSpec {
  PetalKind kind = PetalKind::attracting;
  double opening = 0;
  double radius = 0.4;

  static PetalSpec attracting(double radius = 0.4);
  static PetalSpec repelling(double radius = 0.4);
  static PetalSpec upper(double radius = 0.4);
  static PetalSpec lower(double radius = 0.4);

  Complex bisector() const;
  bool contains(const Complex& z) const;
};

double default_petal_opening();

}  // namespace paralab
