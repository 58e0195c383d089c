#include "verify/oracles.hpp"

#include <cmath>
#include <string>

namespace paralab::oracle {

namespace {

// B_2, B_4, ..., B_40 as exact fractions.
const char* kBernoulli[][2] = {
    {"1", "6"},
    {"-1", "30"},
    {"1", "42"},
    {"-1", "30"},
    {"5", "66"},
    {"-691", "2730"},
    {"7", "6"},
    {"-3617", "510"},
    {"43867", "798"},
    {"-174611", "330"},
    {"854513", "138"},
    {"-236364091", "2730"},
    {"8553103", "6"},
    {"-23749461029", "870"},
    {"8615841276005", "14322"},
    {"-7709321041217", "510"},
    {"2577687858367", "6"},
    {"-26315271553053477373", "1919190"},
    {"2929993913841559", "6"},
    {"-261082718496449122051", "13530"},
};

}  // namespace

Complex digamma(const Complex& z0) {
  Complex z = z0;
  Complex acc;
  // Shift until |z| is large enough for 20 asymptotic terms at the working precision.
  double need = 2.0 + static_cast<double>(current_digits()) * 0.6;
  while (static_cast<double>(z.re) < need) {
    acc -= Complex(1) / z;
    z += Complex(1);
  }
  Complex inv = Complex(1) / z;
  Complex inv2 = inv * inv;
  Complex s = log(z) - inv / Real(2);
  Complex p = inv2;
  for (int k = 1; k <= 20; ++k) {
    Real b = Real(kBernoulli[k - 1][0]) / Real(kBernoulli[k - 1][1]);
    s -= p * (b / Real(2 * k));
    p *= inv2;
  }
  return s + acc;
}

double two_disc_directed_area(double d, double eps) {
  double disc = M_PI * eps * eps;
  if (d >= 2 * eps) return disc * d;
  double h = d / 2;
  double lens = 2 * eps * eps * std::acos(h / eps) - 2 * h * std::sqrt(eps * eps - h * h);
  // Union = disc(0) + disc(d) - lens; the lens centroid sits at d/2.
  return disc * d - lens * h;
}

Complex f0_iterate(const Complex& z0, long n) { return z0 / (Complex(1) - z0 * Real(n)); }

Complex f0_cocycle_closed_form(const Complex& z) {
  Complex q = exp(-Complex(0, 2) * pi() / z);
  return Complex(0, 2) * pi() * q / (Complex(1) - q);
}

}  // namespace paralab::oracle
