#pragma once

#include <functional>
#include <string>
#include <vector>

#include "paralab/germ.hpp"
#include "paralab/numeric.hpp"
#include "paralab/series.hpp"

namespace paralab {

// Right-hand side g(z) = sum_k c_k z^k of H(f(z)) - H(z) = g(z), polynomial, precision-free.
class Rhs {
 public:
  Rhs() = default;
  explicit Rhs(std::vector<ScalarSpec> coeffs);
  static Rhs monomial(int m, const ScalarSpec& c);
  static Rhs constant(const ScalarSpec& c) { return monomial(0, c); }

  const std::vector<ScalarSpec>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Complex coeff(int k) const;
  Complex alpha0() const { return coeff(0); }
  Complex alpha1() const { return coeff(1); }
  // Smallest l with alpha_l != 0.
  int multiplicity() const;
  Complex eval(const Complex& z) const;
  Series series(int order) const;
  Rhs operator+(const Rhs& o) const;
  std::string str() const;

 private:
  std::vector<ScalarSpec> c_;
};

// H-hat = -alpha0 / z + alpha1 log z + sum_{k=1}^K c_k z^k.
struct FormalSolution {
  Complex alpha0;
  Complex alpha1;
  std::vector<Complex> coeffs;  // c_1..c_K
  int order = 0;
  Real residual;  // largest unmatched coefficient through z^{K+1}

  Complex regular(const Complex& z) const;  // sum c_k z^k
  Complex eval(const Complex& z, LogBranch b) const;
};

FormalSolution formal_solution(const Germ& f, const Rhs& g, int K);

struct SectorialParams {
  long n_max = 1000000;
  int K = 0;            // 0 picks the cap from the precision
  double r_switch = 0;  // 0 picks it from the size of c_K
};

struct SectorialValue {
  Complex value;
  Real error;
  long steps = 0;
};

// H_+ on the attracting petal (log branch arg in (0, 2pi)) or H_- on the repelling
// petal (principal branch), normalized without constant term.
class SectorialSolution {
 public:
  SectorialSolution(Germ f, Rhs g, PetalKind side, const Context& ctx, SectorialParams params = {});

  SectorialValue evaluate(const Complex& z) const;
  Complex operator()(const Complex& z) const { return evaluate(z).value; }
  // R = H + alpha0 / z - alpha1 log z.
  SectorialValue regular(const Complex& z) const;

  PetalKind side() const { return side_; }
  LogBranch branch() const { return side_ == PetalKind::attracting ? LogBranch::plus : LogBranch::principal; }
  const FormalSolution& formal() const { return formal_; }
  const Germ& germ() const { return f_; }
  const Rhs& rhs() const { return g_; }
  unsigned digits() const { return digits_; }
  int K() const { return K_; }
  double r_switch() const { return r_switch_; }
  long n_max() const { return n_max_; }
  // Truncation bound at the hand-off radius; per-point estimates come from evaluate().
  Real error_estimate() const { return error_estimate_; }

 private:
  Complex delta(const Complex& z, const Complex& fz) const;
  Real truncation(const Complex& w) const;

  Germ f_;
  Germ step_;  // f on V+, f^{-1} on V-
  Rhs g_;
  PetalKind side_;
  unsigned digits_;
  FormalSolution formal_;
  std::vector<Complex> tail_;  // c_{K+1}, c_{K+2}
  int K_ = 0;
  double r_switch_ = 0;
  long n_max_ = 0;
  Real error_estimate_;
};

SectorialSolution sectorial_solution(const Germ& f, const Rhs& g, PetalKind side, const Context& ctx,
                                     const SectorialParams& params = {});

struct CocycleSample {
  Complex z;
  bool upper = true;        // V^up: H+ - H-; V^low: H- - H+
  Complex value;            // raw difference
  Complex branch_constant;  // the part coming from log+ versus log- (-2 pi i alpha1 on V^low)
  Complex reduced;          // value - branch_constant
  Real error;
  bool resolved = false;    // |reduced| exceeds three times the error
};

struct CocycleOptions {
  SectorialParams params;
  bool require_resolved = false;  // PrecisionError for unresolved samples
};

std::vector<CocycleSample> cocycle(const Germ& f, const Rhs& g, const std::vector<Complex>& points,
                                   const Context& ctx, const CocycleOptions& opt = {});

// Laplace integral of the Borel transform of the model 1-Abel solution, along the ray
// arg xi = theta: int_0^{inf e^{i theta}} e^{-xi w} Bb(xi) / (e^{-xi} - 1) dxi.
struct BorelValue {
  Complex value;
  Real error;
};
BorelValue borel_laplace_model(double theta, const Complex& w, const Context& ctx);

struct GlobalSolution {
  Germ f;
  std::string h_tag;
  std::function<Complex(const Complex&, LogBranch)> H;
  Real residual;  // max |H(f(z)) - H(z) - g(z)| over the built-in sample points
};

// Germ f with a globally analytic solution H = h o phi of H(f) - H = g.
GlobalSolution construct_global(const Germ& phi, const Rhs& g, const Context& ctx);

Real verify_solution(const Germ& f, const Rhs& g, const std::function<Complex(const Complex&)>& H,
                     const std::vector<Complex>& points);

}  // namespace paralab
