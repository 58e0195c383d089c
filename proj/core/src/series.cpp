#include "paralab/series.hpp"

#include <algorithm>

#include "paralab/errors.hpp"

namespace paralab {

Series::Series(std::vector<Complex> c) : c_(std::move(c)) {}

Series Series::zero(int order) { return Series(std::vector<Complex>(static_cast<size_t>(order + 1))); }

Series Series::constant(const Complex& c, int order) {
  Series s = zero(order);
  s[0] = c;
  return s;
}

Series Series::identity(int order) { return monomial(1, order); }

Series Series::monomial(int k, int order, const Complex& c) {
  Series s = zero(order);
  if (k <= order) s[k] = c;
  return s;
}

Complex Series::coeff(int k) const { return k >= 0 && k <= order() ? c_[static_cast<size_t>(k)] : Complex(); }

Series Series::truncated(int order) const {
  std::vector<Complex> c(static_cast<size_t>(order + 1));
  for (int k = 0; k <= std::min(order, this->order()); ++k) c[static_cast<size_t>(k)] = c_[static_cast<size_t>(k)];
  return Series(std::move(c));
}

int Series::valuation(const Real& tol) const {
  for (int k = 0; k <= order(); ++k)
    if (abs(c_[static_cast<size_t>(k)]) > tol) return k;
  return order() + 1;
}

Series& Series::operator+=(const Series& o) {
  int n = std::min(order(), o.order());
  c_.resize(static_cast<size_t>(n + 1));
  for (int k = 0; k <= n; ++k) (*this)[k] += o[k];
  return *this;
}

Series& Series::operator-=(const Series& o) {
  int n = std::min(order(), o.order());
  c_.resize(static_cast<size_t>(n + 1));
  for (int k = 0; k <= n; ++k) (*this)[k] -= o[k];
  return *this;
}

Series Series::operator-() const {
  Series r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Series& Series::operator*=(const Complex& s) {
  for (auto& c : c_) c *= s;
  return *this;
}

Series operator+(Series a, const Series& b) { return a += b; }
Series operator-(Series a, const Series& b) { return a -= b; }
Series operator*(Series a, const Complex& s) { return a *= s; }
Series operator*(const Complex& s, Series a) { return a *= s; }

Series mul_trunc(const Series& a, const Series& b, int order) {
  Series r = Series::zero(order);
  int va = a.valuation(), vb = b.valuation();
  for (int i = va; i <= std::min(a.order(), order - vb); ++i) {
    if (a[i].is_zero()) continue;
    for (int j = vb; j <= std::min(b.order(), order - i); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

Series operator*(const Series& a, const Series& b) { return mul_trunc(a, b, std::min(a.order(), b.order())); }

Series Series::compose(const Series& inner) const {
  int n = std::min(order(), inner.order());
  if (!inner.coeff(0).is_zero()) throw DomainError("series composition needs inner(0) = 0");
  Series r = constant(coeff(0), n);
  Series p = inner.truncated(n);
  for (int k = 1; k <= n; ++k) {
    if (p.valuation() > n) break;
    if (!coeff(k).is_zero())
      for (int j = k; j <= n; ++j) r[j] += c_[static_cast<size_t>(k)] * p[j];
    if (k < n) p = mul_trunc(p, inner, n);
  }
  return r;
}

Series Series::revert() const {
  int n = order();
  if (n < 1 || !coeff(0).is_zero() || coeff(1).is_zero())
    throw DomainError("series reversion needs c0 = 0 and c1 != 0");
  Series h = monomial(1, n, Complex(1) / c_[1]);
  Series d = derivative();
  // Newton on g(h) = z; each pass doubles the number of correct terms.
  // One extra pass at full order guards against an odd schedule.
  bool last = false;
  for (int m = std::min(2, n);; m = std::min(2 * m, n)) {
    Series hm = h.truncated(m);
    Series gh = truncated(m).compose(hm);
    gh[1] -= Complex(1);
    Series dgh = d.truncated(m).compose(hm);
    hm -= mul_trunc(gh, dgh.reciprocal(), m);
    h = hm;
    if (m == n) {
      if (last) break;
      last = true;
    }
  }
  return h;
}

Series Series::reciprocal() const {
  if (c_.empty() || c_[0].is_zero()) throw DomainError("series reciprocal needs c0 != 0");
  int n = order();
  Series y = zero(n);
  Complex inv = Complex(1) / c_[0];
  y[0] = inv;
  for (int k = 1; k <= n; ++k) {
    Complex s;
    for (int j = 1; j <= k; ++j) s += c_[static_cast<size_t>(j)] * y[k - j];
    y[k] = -s * inv;
  }
  return y;
}

Series Series::exp() const {
  int n = order();
  Series y = zero(n);
  y[0] = paralab::exp(c_[0]);
  for (int k = 1; k <= n; ++k) {
    Complex s;
    for (int j = 1; j <= k; ++j) s += c_[static_cast<size_t>(j)] * y[k - j] * Real(j);
    y[k] = s / Real(k);
  }
  return y;
}

Series Series::log() const {
  if (c_.empty() || c_[0].is_zero()) throw DomainError("series log needs c0 != 0");
  int n = order();
  Series y = zero(n);
  y[0] = paralab::log(c_[0]);
  Complex inv = Complex(1) / c_[0];
  for (int k = 1; k <= n; ++k) {
    Complex s;
    for (int j = 1; j < k; ++j) s += y[j] * c_[static_cast<size_t>(k - j)] * Real(j);
    y[k] = (c_[static_cast<size_t>(k)] - s / Real(k)) * inv;
  }
  return y;
}

Series Series::pow(const Complex& alpha) const {
  if (c_.empty() || c_[0].is_zero()) throw DomainError("series power needs c0 != 0");
  int n = order();
  Series y = zero(n);
  y[0] = paralab::pow(c_[0], alpha);
  Complex inv = Complex(1) / c_[0];
  Complex a1 = alpha + Complex(1);
  for (int k = 1; k <= n; ++k) {
    Complex s;
    for (int j = 1; j <= k; ++j) s += (a1 * Real(j) - Complex(k)) * c_[static_cast<size_t>(j)] * y[k - j];
    y[k] = s * inv / Real(k);
  }
  return y;
}

Series Series::derivative() const {
  int n = order();
  if (n < 1) return zero(0);
  Series d = zero(n - 1);
  for (int k = 1; k <= n; ++k) d[k - 1] = c_[static_cast<size_t>(k)] * Real(k);
  return d;
}

Series Series::conj() const {
  Series r = *this;
  for (auto& c : r.c_) c = paralab::conj(c);
  return r;
}

Series Series::shifted(int k) const {
  if (k >= 0) {
    Series r = zero(order());
    for (int j = 0; j + k <= order(); ++j) r[j + k] = c_[static_cast<size_t>(j)];
    return r;
  }
  int s = -k;
  if (s > order()) return zero(0);
  std::vector<Complex> c(c_.begin() + s, c_.end());
  return Series(std::move(c));
}

Complex Series::eval(const Complex& z) const {
  Complex r;
  for (int k = order(); k >= 0; --k) r = r * z + c_[static_cast<size_t>(k)];
  return r;
}

}  // namespace paralab
