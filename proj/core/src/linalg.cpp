#include "paralab/linalg.hpp"

#include <algorithm>

#include "paralab/errors.hpp"

namespace paralab {

std::vector<Real> singular_values(const Matrix& A) {
  int m = A.rows, n = A.cols;
  Matrix U = A;
  Real tol = pow(Real(10), 2 - static_cast<int>(current_digits()));
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int i = 0; i < n - 1; ++i)
      for (int j = i + 1; j < n; ++j) {
        Real alpha = 0, beta = 0;
        Complex gamma;
        for (int r = 0; r < m; ++r) {
          alpha += norm(U(r, i));
          beta += norm(U(r, j));
          gamma += conj(U(r, i)) * U(r, j);
        }
        Real g = abs(gamma);
        if (g <= tol * sqrt(alpha * beta) || g == 0) continue;
        rotated = true;
        Complex phase = conj(gamma) / g;  // makes the pair's Gram entry real
        Real zeta = (beta - alpha) / (2 * g);
        Real t = (zeta >= 0 ? Real(1) : Real(-1)) / (abs(zeta) + sqrt(1 + zeta * zeta));
        Real c = 1 / sqrt(1 + t * t), s = c * t;
        for (int r = 0; r < m; ++r) {
          Complex ui = U(r, i), uj = U(r, j) * phase;
          U(r, i) = ui * c - uj * s;
          U(r, j) = ui * s + uj * c;
        }
      }
    if (!rotated) break;
  }
  std::vector<Real> sv(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    Real s = 0;
    for (int r = 0; r < m; ++r) s += norm(U(r, j));
    sv[static_cast<size_t>(j)] = sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), [](const Real& a, const Real& b) { return a > b; });
  return sv;
}

LeastSquares least_squares(const Matrix& A0, const std::vector<Complex>& b0, bool condition) {
  int m = A0.rows, n = A0.cols;
  if (m < n) throw FitError("least squares needs at least as many rows as columns");
  Matrix A = A0;
  std::vector<Real> scale(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    Real s = 0;
    for (int i = 0; i < m; ++i) s += norm(A(i, j));
    s = sqrt(s);
    if (s == 0) throw FitError("zero column in least-squares design");
    scale[static_cast<size_t>(j)] = s;
    for (int i = 0; i < m; ++i) A(i, j) /= s;
  }
  LeastSquares out;
  Real tiny = pow(Real(10), 2 - static_cast<int>(current_digits()));
  if (condition) {
    auto sv = singular_values(A);
    if (sv.back() <= tiny * sv.front()) throw FitError("least-squares design is rank deficient");
    out.condition_number = sv.front() / sv.back();
  }

  std::vector<Complex> b = b0;
  // Householder QR, applying reflectors to b on the fly.
  for (int k = 0; k < n; ++k) {
    Real nx = 0;
    for (int i = k; i < m; ++i) nx += norm(A(i, k));
    nx = sqrt(nx);
    Real akk = abs(A(k, k));
    Complex ph = akk == 0 ? Complex(1) : A(k, k) / akk;
    Complex alpha = -ph * nx;
    std::vector<Complex> v(static_cast<size_t>(m - k));
    v[0] = A(k, k) - alpha;
    for (int i = k + 1; i < m; ++i) v[static_cast<size_t>(i - k)] = A(i, k);
    Real vn = 0;
    for (auto& c : v) vn += norm(c);
    if (vn == 0) continue;
    auto reflect = [&](auto get, auto set) {
      Complex dot;
      for (int i = k; i < m; ++i) dot += conj(v[static_cast<size_t>(i - k)]) * get(i);
      Complex f = dot * Real(2) / vn;
      for (int i = k; i < m; ++i) set(i, get(i) - v[static_cast<size_t>(i - k)] * f);
    };
    for (int j = k; j < n; ++j)
      reflect([&](int i) { return A(i, j); }, [&](int i, const Complex& val) { A(i, j) = val; });
    reflect([&](int i) { return b[static_cast<size_t>(i)]; }, [&](int i, const Complex& val) { b[static_cast<size_t>(i)] = val; });
  }
  for (int k = 0; k < n; ++k)
    if (abs(A(k, k)) <= tiny) throw FitError("least-squares design is rank deficient");
  out.x.assign(static_cast<size_t>(n), Complex());
  for (int i = n - 1; i >= 0; --i) {
    Complex s = b[static_cast<size_t>(i)];
    for (int j = i + 1; j < n; ++j) s -= A(i, j) * out.x[static_cast<size_t>(j)];
    out.x[static_cast<size_t>(i)] = s / A(i, i);
  }
  Real res = 0;
  for (int i = n; i < m; ++i) res += norm(b[static_cast<size_t>(i)]);
  out.residual_norm = sqrt(res);
  // R^{-1} row norms give coefficient sensitivity to data perturbations.
  Matrix Rinv(n, n);
  for (int c = 0; c < n; ++c) {
    for (int i = n - 1; i >= 0; --i) {
      Complex s = i == c ? Complex(1) : Complex();
      for (int j = i + 1; j < n; ++j) s -= A(i, j) * Rinv(j, c);
      Rinv(i, c) = s / A(i, i);
    }
  }
  out.sensitivity.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Real s = 0;
    for (int c = 0; c < n; ++c) s += norm(Rinv(i, c));
    out.sensitivity[static_cast<size_t>(i)] = sqrt(s) / scale[static_cast<size_t>(i)];
    out.x[static_cast<size_t>(i)] /= scale[static_cast<size_t>(i)];
  }
  return out;
}

}  // namespace paralab
