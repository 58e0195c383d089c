#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "paralab/germ.hpp"
#include "paralab/numeric.hpp"

namespace paralab {

struct OrbitStop {
  long max_n = 100000;
  double min_abs = 0;  // stop once |z_n| < min_abs
  double min_gap = 0;  // stop once d_n < min_gap and n >= min_n
  long min_n = 0;
};

// Remainder moments T_j = sum_{k >= N} eps_k^{2j+1} (z_k + z_{k+1}) beyond the last
// stored point, from the formal Fatou coordinate. Only for germs in the model class.
struct OrbitTailModel {
  unsigned digits = 0;
  std::vector<Complex> moments;  // T_0..T_J
  Complex shift;                 // a with z_k = phi-hat^{-1}(-1/(a + k)) in prenormalized coordinates
  Real residual;                 // |model z_k - z_k| at k = N - 50, a self-check
};

struct Orbit {
  Germ germ;
  Complex z0;
  std::vector<Complex> points;  // z_0..z_N
  std::vector<Real> gaps;       // d_0..d_{N-1}
  long monotone_from = 0;
  unsigned digits = 0;
  OrbitStop stop;
  std::shared_ptr<const OrbitTailModel> tail;

  const std::string& label() const { return germ.label(); }
  long size() const { return static_cast<long>(points.size()) - 1; }
  Real threshold(long n) const { return gaps[static_cast<size_t>(n)] / 2; }
  // Orbit of z_k, sharing points and the tail model.
  Orbit drop_front(long k) const;
};

Orbit orbit(const Germ& f, const Complex& z0, const OrbitStop& stop, const Context& ctx);

// Attaches the asymptotic remainder when f is in the model class and the orbit
// is long enough; returns whether it did.
bool attach_tail_model(Orbit& o);

// Orbit long enough to evaluate areas down to eps_min. Germs outside the model class
// have no tail model; their orbit runs until the truncation bound meets tol_rel.
Orbit orbit_for_area(const Germ& f, const Complex& z0, double eps_min, const Context& ctx,
                     double tol_rel = 1e-16);

// The bracketing of the 1/pi factor over the telescoping half-difference terms in the
// crescent sum. `outside` (1/pi only on the crescent terms) agrees with the quadrature
// oracle and with the crescent relation; `inside` is kept for comparison.
enum class Bracketing { outside, inside };

struct AreaOptions {
  Bracketing bracketing = Bracketing::outside;
  double tol_rel = 1e-16;  // truncation tolerance when no tail model is available
};

struct DirectedArea {
  Complex value;
  Complex tail;
  Complex nucleus;
  long n_eps = 0;
};

// Precomputes suffix moments so that each area evaluation costs O(head + J).
class AreaEvaluator {
 public:
  explicit AreaEvaluator(Orbit o, AreaOptions opt = {});

  const Orbit& orbit() const { return o_; }
  unsigned digits() const { return o_.digits; }

  // n_eps = max{n : d_n >= 2 eps}; RangeError outside the resolvable range.
  long separation_index(const Real& eps) const;
  DirectedArea area(const Real& eps) const;
  // Also allows the all-nucleus case (n_eps = -1) when the whole orbit is monotone.
  DirectedArea area_any(const Real& eps) const;

 private:
  long index_unchecked(const Real& eps) const;
  DirectedArea evaluate(const Real& eps, long n) const;

  Orbit o_;
  AreaOptions opt_;
  int J_ = 0;
  std::vector<Complex> prefix_;              // prefix_[n] = z_0 + ... + z_{n-1}
  std::vector<Real> eps_;                    // eps_k
  std::vector<Complex> w_;                   // z_k + z_{k+1}
  std::vector<Real> g_;                      // G(t) = sum g_j t^{2j+1}
  std::vector<std::vector<Complex>> suffix_;  // suffix_[j][k] = sum_{i >= k} eps_i^{2j+1} w_i (+ T_j)
};

long separation_index(const Orbit& o, const Real& eps);
Complex tail_directed_area(const Orbit& o, const Real& eps);
Complex nucleus_directed_area(const Orbit& o, const Real& eps, const AreaOptions& opt = {});
DirectedArea directed_area(const Germ& f, const Complex& z, const Real& eps, const Context& ctx,
                           const AreaOptions& opt = {});

struct OracleResult {
  std::complex<double> value;
  double error = 0;     // Richardson estimate plus orbit-closure bound
  long cells = 0;
};

struct OracleOptions {
  int resolution = 64;    // leaf cells per eps on the coarser of the two grids
  long budget = 20000000;  // total cells visited
};

// Adaptive grid quadrature of the integral of (x + iy) over the union of discs, in
// double precision. Orbits are closed by a polyline to 0 once gaps fall below 1e-4 eps.
OracleResult directed_area_oracle(const Orbit& o, double eps, const OracleOptions& opt = {});
OracleResult directed_area_oracle(const std::vector<std::complex<double>>& centers, double eps,
                                  const OracleOptions& opt = {});

Real check_functional_equation(const Germ& f, const Complex& z, const Real& eps, const Context& ctx,
                               const AreaOptions& opt = {});
Real crescent_relation_residual(const Germ& f, const Complex& z, const Real& eps, const Context& ctx,
                                const AreaOptions& opt = {});

struct ProbeResult {
  Complex left_limit;
  std::vector<Real> offsets;
  std::vector<Complex> right_samples;  // F'' at eps_n + offset
  std::vector<Complex> left_samples;   // F'' at eps_n - offset
  double fitted_exponent = 0;
  Complex blowup_coefficient;          // estimate of z_n + z_{n+1}
  Real step;
  unsigned digits = 0;
};

struct ProbeOptions {
  double step_scale = 1;  // multiplies the default finite-difference step
};

// Second derivative of F(eps) = A(z_0, eps) / (eps^2 pi) around eps_n.
ProbeResult second_derivative_probe(const Orbit& o, long n, const std::vector<double>& offsets,
                                    const ProbeOptions& opt = {});

struct Reconstruction {
  std::vector<Real> thresholds;      // descending
  std::vector<Complex> midpoint_sums;  // z_n + z_{n+1}
};

using AreaFunction = std::function<Complex(const Real&)>;

Reconstruction reconstruct_orbit_from_area(const AreaFunction& area, double eps_lo, double eps_hi,
                                           double scan_step = 0.002);

}  // namespace paralab
