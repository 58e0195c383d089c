#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "paralab/cohom.hpp"
#include "paralab/germ.hpp"
#include "paralab/numeric.hpp"

namespace paralab {

// Psi(f(z)) - Psi(z) = 1 on the petal, no constant term.
SectorialSolution fatou_coordinate(const Germ& f, PetalKind side, const Context& ctx, const SectorialParams& params = {});

// z with psi(z) = w by Newton, starting from -1/w.
Complex invert_fatou(const SectorialSolution& psi, const Complex& w);

enum class Trivialization { plus, minus };

struct MomentOptions {
  int degree = 6;
  int samples = 16;  // per component
  double q_min = 1e-10;
  double q_max = 1e-5;
  Trivialization trivialization = Trivialization::plus;
  std::complex<double> psi_shift{0, 0};  // Psi -> Psi + c
  unsigned digits = 40;
};

struct LiftedSample {
  Complex z;
  bool upper = true;  // V^up: s = e^{2 pi i Psi}, value H+ - H-; V^low: t = e^{-2 pi i Psi}, value H- - H+ - branch
  Complex lifted;
  Complex value;
  Real error;
};

struct FitDiagnostics {
  int samples = 0;  // per component
  Real residual_inf, residual_0;
  Real condition_inf, condition_0;
  Real noise;            // largest solver error over the samples
  Complex branch_constant;  // removed from V^low values (-2 pi i alpha1)
  Complex constant_sum;     // g_inf(0) + g_0(0) before the shift
  double q_max = 0;
};

struct Moment {
  int m = 0;
  int degree = 0;
  std::vector<Complex> g_inf;  // c_0..c_D
  std::vector<Complex> g_0;
  std::string trivialization_tag;
  FitDiagnostics diagnostics;

  // (idii) action: g_inf(t) -> g_inf(b t) + a, g_0(t) -> g_0(t / b) - a.
  Moment acted(const Complex& a, const Complex& b) const;
  // g_0(0) = 0 and the first significant coefficient of g_0 (else of g_inf) equal to 1.
  Moment canonical() const;
  // |c_k| q_max^k well above the noise floor.
  bool significant(const Complex& c, int k) const;
};

std::vector<LiftedSample> moment_samples(const Germ& f, int m, const MomentOptions& opt = {});
Moment m_moment(const Germ& f, int m, const MomentOptions& opt = {});

struct MomentEquivalence {
  bool equivalent = false;
  Complex a;
  Complex b;
  Real mismatch;  // largest weighted coefficient difference for the best witness
};
// Is M1 = M2 acted by (a, b)?
MomentEquivalence moment_equivalent(const Moment& M1, const Moment& M2, double tol = 1e-6);

struct FormalConjugate {
  Germ g;
  Germ phi;
};
// phi^{-1} = Id + r o f - r, g = phi^{-1} o f o phi.
FormalConjugate formclas_conjugate(const Germ& f, const Germ& r);

struct EVOptions {
  int degree = 6;
  int samples = 16;
  double t_min = 1e-8;  // annulus |t| (near 0) and |1/t| (near infinity)
  double t_max = 1e-4;
  unsigned digits = 40;
};

// phi_inf is stored in the chart tau = 1/t at both ends, as a germ at 0.
struct EVModulus {
  std::vector<Complex> phi_0;  // c_0..c_D
  std::vector<Complex> phi_inf;
  Real residual_0, residual_inf;
  std::string method;
};

EVModulus ev_modulus_direct(const Germ& f, const EVOptions& opt = {});
EVModulus ev_from_two_sided_moments(const Moment& plus, const Moment& minus);

struct Trivialization2D {
  std::pair<Complex, Complex> T;
  Real residual;
};
// T(z, w) = (Psi+(z), H+(z) + w) for F(z, w) = (f(z), z + w).
Trivialization2D two_dim_trivialization(const Germ& f, const Complex& z, const Complex& w, const Context& ctx);

}  // namespace paralab
