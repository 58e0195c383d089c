#include "paralab/orbit.hpp"

#include <algorithm>
#include <cmath>

#include "paralab/errors.hpp"
#include "paralab/linalg.hpp"

namespace paralab {

namespace {

// Crescent terms with eps_k / eps below this ratio are summed through the Taylor
// series of G and precomputed suffix moments.
constexpr double kSplit = 0.02;
// Suffix moments are stored every kBlock indices.
constexpr long kBlock = 64;

int series_terms(unsigned digits) {
  return static_cast<int>(std::ceil((digits + 2) / (-2 * std::log10(kSplit))));
}

// G(t) = 2 sum_j binom(1/2, j) (-1)^j t^{2j+1} / (2j+1).
std::vector<Real> kernel_taylor(int J) {
  std::vector<Real> g(static_cast<size_t>(J + 1));
  Real b = 1;
  for (int j = 0; j <= J; ++j) {
    g[static_cast<size_t>(j)] = 2 * b / (2 * j + 1);
    b *= -(Real(1) / 2 - j) / (j + 1);
  }
  return g;
}

// sum_{k >= N} k^{-p} by Euler-Maclaurin; N is large here (>= 200).
Real hurwitz_tail(int p, long N) {
  static const long long bn[][2] = {{1, 6},         {-1, 30},        {1, 42},        {-1, 30},
                                    {5, 66},        {-691, 2730},    {7, 6},         {-3617, 510},
                                    {43867, 798},   {-174611, 330},  {854513, 138},  {-236364091, 2730},
                                    {8553103, 6}};
  Real n = N;
  Real np = pow(n, -p);
  Real s = np * n / (p - 1) + np / 2;
  Real tol = s * pow(Real(10), -static_cast<int>(current_digits()) - 5);
  Real rising = p;            // (p)_{2m-1}
  Real fact = 2;              // (2m)!
  Real npow = np / n;         // N^{-p-2m+1}
  Real prev = 0;
  for (int m = 1; m <= 13; ++m) {
    Real term = Real(bn[m - 1][0]) / Real(bn[m - 1][1]) / fact * rising * npow;
    if (m > 1 && abs(term) > abs(prev)) break;
    s += term;
    if (abs(term) < tol) break;
    prev = term;
    rising *= Real(p + 2 * m - 1) * Real(p + 2 * m);
    fact *= Real(2 * m + 1) * Real(2 * m + 2);
    npow /= n * n;
  }
  return s;
}

long first_below(const std::vector<Real>& eps, long lo, long hi, const Real& bound) {
  // eps decreasing on [lo, hi); first index with eps <= bound, or hi.
  while (lo < hi) {
    long mid = lo + (hi - lo) / 2;
    if (eps[static_cast<size_t>(mid)] <= bound) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

// Largest n in [lo, hi] with d_n >= 2 eps, assuming gaps decrease on the range; lo - 1 if none.
long last_separated(const Orbit& o, long lo, long hi, const Real& eps) {
  Real d = 2 * eps;
  while (lo <= hi) {
    long mid = lo + (hi - lo) / 2;
    if (o.gaps[static_cast<size_t>(mid)] >= d) lo = mid + 1;
    else hi = mid - 1;
  }
  return lo - 1;
}

long separation_impl(const Orbit& o, const Real& eps, bool allow_all_nucleus) {
  if (!(eps > 0)) throw DomainError("eps must be positive");
  long N = o.size();
  if (N == 0) return 0;
  long m = o.monotone_from;
  if (eps > o.threshold(m)) {
    if (allow_all_nucleus && m == 0) return -1;
    throw RangeError(m == 0 ? "eps >= max gap / 2: no disc is separated from its successor"
                            : "eps probes the pre-monotone part of the orbit");
  }
  long n = last_separated(o, m, N - 1, eps);
  if (n > N - 2) throw RangeError("orbit too short for eps");
  return n;
}

}  // namespace

// ---------------------------------------------------------------------- orbits

Orbit Orbit::drop_front(long k) const {
  if (k < 0 || k > size()) throw DomainError("drop_front out of range");
  Orbit o = *this;
  o.points.erase(o.points.begin(), o.points.begin() + k);
  o.gaps.erase(o.gaps.begin(), o.gaps.begin() + k);
  o.z0 = o.points.front();
  o.monotone_from = std::max(0L, monotone_from - k);
  return o;
}

Orbit orbit(const Germ& f, const Complex& z0, const OrbitStop& stop, const Context& ctx) {
  PrecisionScope ps(ctx);
  if (abs(z0) == 0) throw DomainError("z0 = 0 is the fixed point; its orbit is empty");
  Orbit o;
  o.germ = f;
  o.z0 = z0;
  o.digits = ctx.digits;
  o.stop = stop;
  o.points.push_back(z0);
  Real escape = std::max<Real>(Real(1), 4 * abs(z0));
  for (long n = 0; n < stop.max_n; ++n) {
    Complex z;
    try {
      z = f.eval(o.points.back());
    } catch (const DomainError& e) {
      throw EscapeError(std::string("orbit left the germ's domain: ") + e.what());
    }
    if (!isfinite(z) || abs(z) > escape) throw EscapeError("orbit escaped at n = " + std::to_string(n + 1));
    Real d = abs(z - o.points.back());
    if (d == 0) throw DomainError("orbit is stationary");
    o.gaps.push_back(d);
    o.points.push_back(z);
    if (stop.min_abs > 0 && abs(z) < stop.min_abs) break;
    if (stop.min_gap > 0 && d < stop.min_gap && n + 1 >= stop.min_n) break;
  }
  long N = o.size();
  long m = N - 1;
  while (m > 0 && o.gaps[static_cast<size_t>(m - 1)] > o.gaps[static_cast<size_t>(m)]) --m;
  o.monotone_from = std::max(0L, m);
  if (N >= 4 && o.monotone_from >= N - 2)
    throw NonMonotoneError("gaps do not become monotone within " + std::to_string(N) + " steps");
  return o;
}

bool attach_tail_model(Orbit& o) {
  long N = o.size();
  if (N < 200) return false;
  PrecisionScope ps(o.digits);
  int J = series_terms(o.digits);
  int P = 4 * J + 3 + static_cast<int>(o.digits) / 2 + 6;
  FormalClassInfo fc;
  try {
    fc = formal_class(o.germ, P + 2);
  } catch (const Error&) {
    return false;
  }
  if (!fc.model_class()) return false;
  Complex lam = fc.scale;
  Complex wN = o.points.back() * lam;
  Complex psi = -Complex(1) / wN;
  Complex wp = wN;
  for (const auto& c : fc.fatou) {
    psi += c * wp;
    wp *= wN;
  }
  Complex a = psi - Real(N);
  if (abs(a) * 100 > N) return false;

  Series phi = Series::zero(P);
  for (int j = 1; j <= P && j <= static_cast<int>(fc.conjugacy.size()); ++j) phi[j] = fc.conjugacy[static_cast<size_t>(j - 1)];
  Series phi_inv = phi.revert();
  Series V = Series::zero(P), U1 = Series::zero(P);
  Complex ap(1);
  for (int m = 1; m <= P; ++m) {
    V[m] = -ap;
    ap *= -a;
    U1[m] = Complex(m % 2 ? 1 : -1);
  }
  Series Zw = phi_inv.compose(V);
  Series Zp = Zw.compose(U1);
  Complex inv_lam = Complex(1) / lam;
  Series D = (Zw - Zp) * inv_lam;
  Series W = (Zw + Zp) * inv_lam;
  Complex d2 = D[2];
  Series Dn = D.shifted(-2) * (Complex(1) / d2);
  Series Q = Dn * Dn.conj();
  Real half_d2 = abs(d2) / 2;

  auto model = std::make_shared<OrbitTailModel>();
  model->digits = o.digits;
  model->shift = a;
  for (int j = 0; j <= J; ++j) {
    int ord = P - 4 * j - 2;
    if (ord < 2) {
      model->moments.push_back(Complex());
      continue;
    }
    Series E = Q.truncated(ord).pow(Complex(Real(2 * j + 1) / 2)) * Complex(pow(half_d2, 2 * j + 1));
    Series F = mul_trunc(E, W.truncated(ord), ord);
    Complex T;
    for (int m = 1; m <= ord; ++m) T += F[m] * hurwitz_tail(4 * j + 2 + m, N);
    model->moments.push_back(T);
  }
  // Self-check against a stored point.
  long k = N - 50;
  Complex pred = Zw.eval(Complex(Real(1) / k)) * inv_lam;
  model->residual = abs(pred - o.points[static_cast<size_t>(k)]);
  if (model->residual > pow(Real(10), 6 - static_cast<int>(o.digits)) * abs(o.points[static_cast<size_t>(k)])) return false;
  o.tail = model;
  return true;
}

Orbit orbit_for_area(const Germ& f, const Complex& z0, double eps_min, const Context& ctx, double tol_rel) {
  OrbitStop stop;
  stop.max_n = 200000;
  stop.min_gap = kSplit * eps_min;
  stop.min_n = 1000;
  bool model = false;
  {
    PrecisionScope ps(ctx);
    try {
      FormalClassInfo fc = formal_class(f, 4);
      model = fc.model_class();
      // The tail model needs N >= 100 |a| with a ~ -1 / (a_2 z_0).
      if (model) stop.min_n = std::max<long>(1000, std::lround(150 / abs(fc.scale * z0).convert_to<double>()));
    } catch (const Error&) {
    }
  }
  if (!model) {
    // Parabolic decay |z_k| ~ d_k^{1/2}: the term bound 2 (eps_k / eps)(|z_k| + |z_{k+1}|) is
    // about 2 d_k^{3/2} / eps, against |partial| of order |z_0| / 10.
    double z = abs(z0).convert_to<double>();
    stop.min_gap = std::pow(0.02 * tol_rel * eps_min * z, 2.0 / 3.0);
    stop.min_n = 0;
  }
  Orbit o = orbit(f, z0, stop, ctx);
  if (model) attach_tail_model(o);
  return o;
}

// ----------------------------------------------------------------------- areas

AreaEvaluator::AreaEvaluator(Orbit o, AreaOptions opt) : o_(std::move(o)), opt_(opt) {
  PrecisionScope ps(o_.digits);
  long N = o_.size();
  prefix_.assign(static_cast<size_t>(N + 2), Complex());
  for (long n = 0; n <= N; ++n) prefix_[static_cast<size_t>(n + 1)] = prefix_[static_cast<size_t>(n)] + o_.points[static_cast<size_t>(n)];
  eps_.resize(static_cast<size_t>(N));
  w_.resize(static_cast<size_t>(N));
  for (long k = 0; k < N; ++k) {
    eps_[static_cast<size_t>(k)] = o_.gaps[static_cast<size_t>(k)] / 2;
    w_[static_cast<size_t>(k)] = o_.points[static_cast<size_t>(k)] + o_.points[static_cast<size_t>(k + 1)];
  }
  J_ = series_terms(o_.digits);
  if (o_.tail) J_ = std::min<int>(J_, static_cast<int>(o_.tail->moments.size()) - 1);
  g_ = kernel_taylor(J_);
  long blocks = N / kBlock + 1;
  suffix_.assign(static_cast<size_t>(J_ + 1), std::vector<Complex>(static_cast<size_t>(blocks + 1)));
  for (int j = 0; j <= J_; ++j) {
    Complex acc = o_.tail ? o_.tail->moments[static_cast<size_t>(j)] : Complex();
    suffix_[static_cast<size_t>(j)][static_cast<size_t>(blocks)] = acc;  // index `blocks` means k = N
    for (long k = N - 1; k >= 0; --k) {
      acc += w_[static_cast<size_t>(k)] * pow(eps_[static_cast<size_t>(k)], 2 * j + 1);
      if (k % kBlock == 0) suffix_[static_cast<size_t>(j)][static_cast<size_t>(k / kBlock)] = acc;
    }
  }
}

long AreaEvaluator::separation_index(const Real& eps) const { return separation_impl(o_, eps, false); }
long AreaEvaluator::index_unchecked(const Real& eps) const { return separation_impl(o_, eps, true); }

DirectedArea AreaEvaluator::area(const Real& eps) const {
  PrecisionScope ps(o_.digits);
  return evaluate(eps, separation_index(eps));
}

DirectedArea AreaEvaluator::area_any(const Real& eps) const {
  PrecisionScope ps(o_.digits);
  return evaluate(eps, index_unchecked(eps));
}

DirectedArea AreaEvaluator::evaluate(const Real& eps, long n) const {
  long N = o_.size();
  DirectedArea out;
  Real e2 = eps * eps;
  if (N == 0) {
    out.value = out.tail = o_.points[0] * (e2 * pi());
    return out;
  }
  long s = n + 1;
  if (s > N - 1) throw RangeError("orbit too short for eps");
  long K = first_below(eps_, s, N, eps * kSplit);
  long Kc = std::min(N, (K + kBlock - 1) / kBlock * kBlock);
  Complex head;
  for (long k = s; k < Kc; ++k) head += w_[static_cast<size_t>(k)] * crescent_kernel(eps_[static_cast<size_t>(k)] / eps);
  Complex rest;
  bool tail_used = Kc < N || o_.tail;
  if (Kc == N && o_.tail && eps_[static_cast<size_t>(N - 1)] > eps * kSplit)
    throw RangeError("eps below the range resolved by this orbit");
  if (tail_used) {
    size_t idx = Kc == N ? suffix_[0].size() - 1 : static_cast<size_t>(Kc / kBlock);
    Real inv = 1 / eps;
    Real scale = inv;
    Real inv2 = inv * inv;
    for (int j = 0; j <= J_; ++j) {
      rest += suffix_[static_cast<size_t>(j)][idx] * (g_[static_cast<size_t>(j)] * scale);
      scale *= inv2;
    }
  }
  const Complex& zs = o_.points[static_cast<size_t>(s)];
  Complex Z = opt_.bracketing == Bracketing::outside ? zs / Real(2) : zs * (1 - 1 / (2 * pi()));
  Complex bracket = Z * pi() + head + rest;
  if (!o_.tail) {
    Real bound = 2 * (eps_[static_cast<size_t>(N - 1)] / eps) *
                 (abs(o_.points[static_cast<size_t>(N - 1)]) + abs(o_.points[static_cast<size_t>(N)]));
    if (bound > Real(opt_.tol_rel) * abs(bracket))
      throw TruncationError("crescent sum not converged within the computed orbit (term bound " +
                            to_string(bound, 3) + ")");
  }
  out.n_eps = n;
  out.tail = prefix_[static_cast<size_t>(s)] * (e2 * pi());
  out.nucleus = bracket * e2;
  out.value = out.tail + out.nucleus;
  return out;
}

long separation_index(const Orbit& o, const Real& eps) {
  PrecisionScope ps(o.digits);
  return separation_impl(o, eps, false);
}

Complex tail_directed_area(const Orbit& o, const Real& eps) {
  PrecisionScope ps(o.digits);
  long n = separation_impl(o, eps, false);
  Complex s;
  for (long l = 0; l <= n; ++l) s += o.points[static_cast<size_t>(l)];
  return s * (eps * eps * pi());
}

Complex nucleus_directed_area(const Orbit& o, const Real& eps, const AreaOptions& opt) {
  return AreaEvaluator(o, opt).area(eps).nucleus;
}

DirectedArea directed_area(const Germ& f, const Complex& z, const Real& eps, const Context& ctx,
                           const AreaOptions& opt) {
  PrecisionScope ps(ctx);
  if (f.eval(z) == z) {
    DirectedArea d;
    d.value = d.tail = z * (eps * eps * pi());
    return d;
  }
  return AreaEvaluator(orbit_for_area(f, z, eps.convert_to<double>(), ctx, opt.tol_rel), opt).area(eps);
}

Real check_functional_equation(const Germ& f, const Complex& z, const Real& eps, const Context& ctx,
                               const AreaOptions& opt) {
  PrecisionScope ps(ctx);
  Real eps_z = abs(z - f.eval(z)) / 2;
  if (eps >= eps_z) throw RangeError("eps >= eps_z: the disc at z meets the disc at f(z)");
  Orbit o = orbit_for_area(f, z, eps.convert_to<double>(), ctx, opt.tol_rel);
  AreaEvaluator a(o, opt), b(o.drop_front(1), opt);
  Complex r = a.area(eps).value - b.area_any(eps).value - z * (eps * eps * pi());
  return abs(r);
}

Real crescent_relation_residual(const Germ& f, const Complex& z, const Real& eps, const Context& ctx,
                                const AreaOptions& opt) {
  PrecisionScope ps(ctx);
  Complex fz = f.eval(z);
  Real d = abs(z - fz);
  if (d >= 2 * eps) throw RangeError("z is not in U_eps: |z - f(z)| >= 2 eps");
  Orbit o = orbit_for_area(f, z, eps.convert_to<double>(), ctx, opt.tol_rel);
  AreaEvaluator a(o, opt), b(o.drop_front(1), opt);
  Real e2 = eps * eps;
  Complex r = a.area_any(eps).value - b.area_any(eps).value + (fz - z) * (pi() / 2 * e2) -
              (z + fz) * (e2 * crescent_kernel(d / (2 * eps)));
  return abs(r);
}

// ---------------------------------------------------------------------- probes

ProbeResult second_derivative_probe(const Orbit& o_in, long n, const std::vector<double>& offsets,
                                    const ProbeOptions& opt) {
  if (n < 1 || n > o_in.size() - 3) throw DomainError("probe index out of range");
  if (offsets.size() < 5) throw DomainError("probe needs at least 5 offsets");
  unsigned digits = std::max(32u, o_in.digits);
  for (int attempt = 0; attempt < 2; ++attempt, digits += 16) {
    Orbit o = o_in;
    if (digits != o_in.digits) {
      o = orbit(o_in.germ, o_in.z0, o_in.stop, Context{digits});
      if (o_in.tail) attach_tail_model(o);
    }
    PrecisionScope ps(digits);
    AreaEvaluator ev(o);
    Real en = o.threshold(n);
    Real room = (o.threshold(n - 1) - en) / 4;
    Real h = std::max<Real>(en * Real(1e-5), pow(Real(10), 6 - static_cast<int>(digits))) * Real(opt.step_scale);
    std::vector<Real> off;
    for (double d : offsets) off.push_back(Real(d));
    std::sort(off.begin(), off.end());
    if (!(off.front() > 2 * h) || !(off.back() < room))
      throw DomainError("offsets must lie in (2h, (eps_{n-1} - eps_n) / 4)");
    auto F = [&](const Real& x) { return ev.area_any(x).value / (x * x * pi()); };
    auto F2 = [&](const Real& x) { return (F(x + h) - F(x) * Real(2) + F(x - h)) / (h * h); };
    ProbeResult r;
    r.step = h;
    r.digits = digits;
    r.offsets = off;
    for (const auto& d : off) {
      r.right_samples.push_back(F2(en + d));
      r.left_samples.push_back(F2(en - d));
    }
    // Rounding in the second difference is about 4 ulp |F| / h^2.
    Real noise = 4 * pow(Real(10), -static_cast<int>(digits)) * abs(F(en)) / (h * h);
    Real signal = abs(r.right_samples.back() - r.left_samples.back());
    if (noise > Real(1e-8) * signal) {
      if (attempt == 0) continue;
      throw PrecisionError("second differences lost their significant digits");
    }
    const Real& d1 = off[0];
    const Real& d2 = off[1];
    r.left_limit = (r.left_samples[0] * d2 - r.left_samples[1] * d1) / (d2 - d1);
    // Exponent from log|F''(+) - F''(-)| against log(offset).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t m = off.size();
    Matrix A(static_cast<int>(m), 4);
    std::vector<Complex> b(m);
    for (size_t i = 0; i < m; ++i) {
      Complex D = r.right_samples[i] - r.left_samples[i];
      double x = std::log(off[i].convert_to<double>());
      double y = std::log(abs(D).convert_to<double>());
      sx += x, sy += y, sxx += x * x, sxy += x * y;
      Real sq = sqrt(off[i]);
      A(static_cast<int>(i), 0) = Complex(1 / sq);
      A(static_cast<int>(i), 1) = Complex(sq);
      A(static_cast<int>(i), 2) = Complex(off[i]);
      A(static_cast<int>(i), 3) = Complex(off[i] * sq);
      b[i] = D;
    }
    r.fitted_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    auto ls = least_squares(A, b);
    r.blowup_coefficient = ls.x[0] * (-pi() * en * sqrt(en) / sqrt(Real(2)));
    return r;
  }
  throw PrecisionError("unreachable");
}

// ---------------------------------------------------------------- reconstruction

namespace {

// Jump profile of the area function across a threshold s, vanishing with its derivative at s.
Real crescent_jump(const Real& x, const Real& s) {
  if (x <= s) return 0;
  return crescent_kernel(s / x) / pi() - Real(1) / 2;
}

struct VarProFit {
  Real residual;
  Complex jump;
};

VarProFit varpro(const std::vector<Real>& x, const std::vector<Complex>& F, const Real& s, const Real& c,
                 const Real& half) {
  constexpr int kDegree = 7;
  Matrix A(static_cast<int>(x.size()), kDegree + 2);
  for (size_t i = 0; i < x.size(); ++i) {
    Real t = (x[i] - c) / half, tp = 1;
    for (int p = 0; p <= kDegree; ++p, tp *= t) A(static_cast<int>(i), p) = Complex(tp);
    A(static_cast<int>(i), kDegree + 1) = Complex(crescent_jump(x[i], s));
  }
  auto ls = least_squares(A, F, false);
  return {ls.residual_norm, ls.x.back()};
}

}  // namespace

Reconstruction reconstruct_orbit_from_area(const AreaFunction& area, double eps_lo, double eps_hi,
                                           double scan_step) {
  if (!(eps_lo > 0) || !(eps_hi > eps_lo) || !(scan_step > 0)) throw DomainError("bad scan range");
  unsigned digits = current_digits();
  std::vector<Real> x;
  for (Real e = eps_lo; e <= Real(eps_hi); e *= 1 + Real(scan_step)) x.push_back(e);
  long M = static_cast<long>(x.size());
  if (M < 16) throw DomainError("scan grid too coarse");
  auto F = [&](const Real& e) { return area(e) / (e * e * pi()); };
  std::vector<Complex> Fv(static_cast<size_t>(M));
  Real Fmax = 0;
  for (long i = 0; i < M; ++i) {
    Fv[static_cast<size_t>(i)] = F(x[static_cast<size_t>(i)]);
    Fmax = std::max<Real>(Fmax, abs(Fv[static_cast<size_t>(i)]));
  }
  auto X = [&](long i) -> const Real& { return x[static_cast<size_t>(i)]; };
  std::vector<Complex> D2(static_cast<size_t>(M));
  for (long i = 1; i + 1 < M; ++i) {
    Complex sl = (Fv[static_cast<size_t>(i)] - Fv[static_cast<size_t>(i - 1)]) / (X(i) - X(i - 1));
    Complex sr = (Fv[static_cast<size_t>(i + 1)] - Fv[static_cast<size_t>(i)]) / (X(i + 1) - X(i));
    D2[static_cast<size_t>(i)] = (sr - sl) / ((X(i + 1) - X(i - 1)) / 2);
  }
  std::vector<Real> T(static_cast<size_t>(M));
  for (long i = 1; i + 2 < M; ++i) T[static_cast<size_t>(i)] = abs(D2[static_cast<size_t>(i + 1)] - D2[static_cast<size_t>(i)]);
  std::vector<long> cand;
  Real ulp = pow(Real(10), 4 - static_cast<int>(digits));
  for (long i = 5; i + 5 < M; ++i) {
    const Real& t = T[static_cast<size_t>(i)];
    bool peak = true;
    for (long k = i - 3; k <= i + 3 && peak; ++k)
      if (k != i && T[static_cast<size_t>(k)] > t) peak = false;
    if (!peak) continue;
    Real h = X(i + 1) - X(i);
    Real noise = ulp * Fmax / (h * h);
    if (t > 8 * T[static_cast<size_t>(i - 4)] && t > noise) cand.push_back(i);
  }
  if (cand.empty()) throw DetectionError("no second-difference spike above the noise threshold");

  Reconstruction out;
  for (size_t ci = 0; ci < cand.size(); ++ci) {
    long i = cand[ci];
    long lo_i = std::max(0L, i - 2), hi_i = std::min(M - 1, i + 3);
    Real h = X(i + 1) - X(i);
    Real half = 10 * h;
    if (ci > 0) half = std::min<Real>(half, (X(i) - X(cand[ci - 1])) * Real(0.3));
    if (ci + 1 < cand.size()) half = std::min<Real>(half, (X(cand[ci + 1]) - X(i)) * Real(0.3));
    half = std::max<Real>(half, (X(hi_i) - X(lo_i)) * Real(0.75));
    Real c = (X(lo_i) + X(hi_i)) / 2;
    std::vector<Real> xs;
    std::vector<Complex> Fs;
    constexpr int kSamples = 40;
    for (int k = 0; k < kSamples; ++k) {
      Real e = c - half + 2 * half * k / (kSamples - 1);
      xs.push_back(e);
      Fs.push_back(F(e));
    }
    // Golden-section search of the variable-projection residual over the bracket.
    Real a = X(lo_i), b = X(hi_i);
    const Real gr = (sqrt(Real(5)) - 1) / 2;
    Real p = b - gr * (b - a), q = a + gr * (b - a);
    Real rp = varpro(xs, Fs, p, c, half).residual, rq = varpro(xs, Fs, q, c, half).residual;
    Real stop = c * pow(Real(10), 2 - static_cast<int>(digits) / 2);
    for (int it = 0; it < 200 && b - a > stop; ++it) {
      if (rp < rq) {
        b = q, q = p, rq = rp;
        p = b - gr * (b - a);
        rp = varpro(xs, Fs, p, c, half).residual;
      } else {
        a = p, p = q, rp = rq;
        q = a + gr * (b - a);
        rq = varpro(xs, Fs, q, c, half).residual;
      }
    }
    Real s = (a + b) / 2;
    VarProFit fit = varpro(xs, Fs, s, c, half);
    if (!out.thresholds.empty() && abs(out.thresholds.back() - s) < s * Real(1e-6)) continue;
    out.thresholds.push_back(s);
    out.midpoint_sums.push_back(fit.jump);
  }
  std::vector<size_t> idx(out.thresholds.size());
  for (size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  std::sort(idx.begin(), idx.end(), [&](size_t u, size_t v) { return out.thresholds[u] > out.thresholds[v]; });
  Reconstruction sorted;
  for (size_t k : idx) {
    sorted.thresholds.push_back(out.thresholds[k]);
    sorted.midpoint_sums.push_back(out.midpoint_sums[k]);
  }
  return sorted;
}

}  // namespace paralab
