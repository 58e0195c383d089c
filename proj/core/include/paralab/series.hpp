#pragma once

#include <vector>

#include "paralab/numeric.hpp"

namespace paralab {

// Truncated power series c_0 + c_1 z + ... + c_N z^N. Binary operations
// truncate to the smaller order.
class Series {
 public:
  Series() = default;
  explicit Series(std::vector<Complex> c);

  static Series zero(int order);
  static Series constant(const Complex& c, int order);
  static Series identity(int order);
  static Series monomial(int k, int order, const Complex& c = Complex(1));

  int order() const { return static_cast<int>(c_.size()) - 1; }
  bool empty() const { return c_.empty(); }
  const std::vector<Complex>& coeffs() const { return c_; }
  Complex& operator[](int k) { return c_[static_cast<size_t>(k)]; }
  const Complex& operator[](int k) const { return c_[static_cast<size_t>(k)]; }
  // Zero beyond the truncation order.
  Complex coeff(int k) const;

  Series truncated(int order) const;
  // Index of the first coefficient with modulus above tol; order()+1 if none.
  int valuation(const Real& tol = Real(0)) const;

  Series& operator+=(const Series& o);
  Series& operator-=(const Series& o);
  Series operator-() const;
  Series& operator*=(const Complex& s);

  Series compose(const Series& inner) const;  // inner must vanish at 0
  Series revert() const;                      // c0 = 0, c1 != 0
  Series reciprocal() const;                  // c0 != 0
  Series exp() const;
  Series log() const;                         // c0 != 0, principal log of c0
  Series pow(const Complex& alpha) const;     // c0 != 0, principal power of c0
  Series derivative() const;
  Series conj() const;
  // Multiply by z^k (k > 0) or divide by z^{-k} (k < 0, low coefficients dropped).
  Series shifted(int k) const;

  Complex eval(const Complex& z) const;

 private:
  std::vector<Complex> c_;
};

Series operator+(Series a, const Series& b);
Series operator-(Series a, const Series& b);
Series operator*(const Series& a, const Series& b);
Series operator*(Series a, const Complex& s);
Series operator*(const Complex& s, Series a);

// Product truncated at `order`, skipping leading zeros of both factors.
Series mul_trunc(const Series& a, const Series& b, int order);

}  // namespace paralab
