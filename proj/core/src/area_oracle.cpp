#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "paralab/errors.hpp"
#include "paralab/orbit.hpp"

namespace paralab {

namespace {

using cd = std::complex<double>;

// A disc (a == b) or capsule of radius eps around the segment [a, b].
struct Primitive {
  cd a, b;
};

double dot(cd u, cd v) { return u.real() * v.real() + u.imag() * v.imag(); }

class Scene {
 public:
  Scene(std::vector<Primitive> prims, double eps) : prims_(std::move(prims)), eps_(eps) {
    lo_ = hi_ = prims_.front().a;
    for (const auto& p : prims_)
      for (cd c : {p.a, p.b}) {
        lo_ = {std::min(lo_.real(), c.real()), std::min(lo_.imag(), c.imag())};
        hi_ = {std::max(hi_.real(), c.real()), std::max(hi_.imag(), c.imag())};
      }
    lo_ -= cd(eps, eps);
    hi_ += cd(eps, eps);
    bucket_ = 2 * eps;
    nx_ = static_cast<int>(std::ceil((hi_.real() - lo_.real()) / bucket_)) + 1;
    ny_ = static_cast<int>(std::ceil((hi_.imag() - lo_.imag()) / bucket_)) + 1;
    grid_.assign(static_cast<size_t>(nx_) * ny_, {});
    // Register each primitive in every bucket within 2 eps of it.
    for (size_t i = 0; i < prims_.size(); ++i) {
      const auto& p = prims_[i];
      double r = 2 * eps;
      int x0 = cell_x(std::min(p.a.real(), p.b.real()) - r), x1 = cell_x(std::max(p.a.real(), p.b.real()) + r);
      int y0 = cell_y(std::min(p.a.imag(), p.b.imag()) - r), y1 = cell_y(std::max(p.a.imag(), p.b.imag()) + r);
      for (int x = x0; x <= x1; ++x)
        for (int y = y0; y <= y1; ++y) {
          cd center = lo_ + cd((x + 0.5) * bucket_, (y + 0.5) * bucket_);
          if (distance(p, center) <= r + bucket_ * M_SQRT1_2) grid_[static_cast<size_t>(x) * ny_ + y].push_back(static_cast<int>(i));
        }
    }
  }

  cd lo() const { return lo_; }
  cd hi() const { return hi_; }

  // Signed distance bound of the union and the outward normal of the nearest primitive.
  double sd(cd p, cd* normal) const {
    int x = cell_x(p.real()), y = cell_y(p.imag());
    double best = 1e300;
    const auto& list = grid_[static_cast<size_t>(x) * ny_ + y];
    for (int i : list) {
      cd q = nearest(prims_[static_cast<size_t>(i)], p);
      double d = std::abs(p - q);
      if (d < best) {
        best = d;
        if (normal) *normal = d > 0 ? (p - q) / d : cd(1, 0);
      }
    }
    return best - eps_;
  }

 private:
  static cd nearest(const Primitive& pr, cd p) {
    cd ab = pr.b - pr.a;
    double l2 = std::norm(ab);
    if (l2 == 0) return pr.a;
    double t = std::clamp(dot(p - pr.a, ab) / l2, 0.0, 1.0);
    return pr.a + t * ab;
  }
  static double distance(const Primitive& pr, cd p) { return std::abs(p - nearest(pr, p)); }
  int cell_x(double v) const { return std::clamp(static_cast<int>((v - lo_.real()) / bucket_), 0, nx_ - 1); }
  int cell_y(double v) const { return std::clamp(static_cast<int>((v - lo_.imag()) / bucket_), 0, ny_ - 1); }

  std::vector<Primitive> prims_;
  double eps_;
  cd lo_, hi_;
  double bucket_ = 0;
  int nx_ = 0, ny_ = 0;
  std::vector<std::vector<int>> grid_;
};

struct Moments {
  double area = 0;
  cd first;
};

// Area and first moment of the square [c - h/2, c + h/2]^2 cut by {x : n.(x - c) <= -s}.
Moments clip_square(cd c, double h, cd n, double s) {
  double r = h / 2;
  std::vector<cd> poly{c + cd(-r, -r), c + cd(r, -r), c + cd(r, r), c + cd(-r, r)};
  std::vector<cd> out;
  auto f = [&](cd p) { return dot(n, p - c) + s; };
  for (size_t i = 0; i < poly.size(); ++i) {
    cd p = poly[i], q = poly[(i + 1) % poly.size()];
    double fp = f(p), fq = f(q);
    if (fp <= 0) out.push_back(p);
    if ((fp < 0) != (fq < 0) && fp != fq) out.push_back(p + (q - p) * (fp / (fp - fq)));
  }
  Moments m;
  for (size_t i = 0; i < out.size(); ++i) {
    cd p = out[i], q = out[(i + 1) % out.size()];
    double cross = p.real() * q.imag() - q.real() * p.imag();
    m.area += cross / 2;
    m.first += (p + q) * (cross / 6);
  }
  return m;
}

struct GridResult {
  cd value;
  long cells = 0;
};

GridResult integrate(const Scene& scene, double eps, int resolution, long budget) {
  int L = static_cast<int>(std::floor(std::log2(resolution)));
  double h_leaf = eps / resolution;
  double H = h_leaf * std::ldexp(1.0, L);
  cd lo = scene.lo(), hi = scene.hi();
  int nx = static_cast<int>(std::ceil((hi.real() - lo.real()) / H));
  int ny = static_cast<int>(std::ceil((hi.imag() - lo.imag()) / H));
  GridResult res;
  struct Cell {
    cd c;
    double h;
    int level;
  };
  std::vector<Cell> stack;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      // Sum each coarse cell separately so the order of accumulation is fixed.
      stack.push_back({lo + cd((i + 0.5) * H, (j + 0.5) * H), H, 0});
      cd acc;
      while (!stack.empty()) {
        Cell cell = stack.back();
        stack.pop_back();
        if (++res.cells > budget) throw ResourceError("quadrature cell budget exceeded");
        cd n;
        double s = scene.sd(cell.c, &n);
        double half_diag = cell.h * M_SQRT1_2;
        if (s >= half_diag) continue;
        if (s <= -half_diag) {
          acc += cell.c * (cell.h * cell.h);
          continue;
        }
        if (cell.level == L) {
          acc += clip_square(cell.c, cell.h, n, s).first;
          continue;
        }
        double q = cell.h / 4;
        for (cd d : {cd(-q, -q), cd(q, -q), cd(q, q), cd(-q, q)}) stack.push_back({cell.c + d, cell.h / 2, cell.level + 1});
      }
      res.value += acc;
    }
  return res;
}

OracleResult run(const std::vector<Primitive>& prims, double eps, const OracleOptions& opt, double closure) {
  if (prims.empty()) throw DomainError("oracle needs at least one disc");
  if (!(eps > 0)) throw DomainError("eps must be positive");
  Scene scene(prims, eps);
  GridResult coarse = integrate(scene, eps, opt.resolution, opt.budget);
  GridResult fine = integrate(scene, eps, 2 * opt.resolution, opt.budget - coarse.cells);
  cd ext = (4.0 * fine.value - coarse.value) / 3.0;
  OracleResult r;
  r.value = ext;
  r.error = std::abs(ext - fine.value) + closure;
  r.cells = coarse.cells + fine.cells;
  return r;
}

}  // namespace

OracleResult directed_area_oracle(const std::vector<std::complex<double>>& centers, double eps,
                                  const OracleOptions& opt) {
  std::vector<Primitive> prims;
  for (auto c : centers) prims.push_back({c, c});
  return run(prims, eps, opt, 0);
}

OracleResult directed_area_oracle(const Orbit& o, double eps, const OracleOptions& opt) {
  std::vector<cd> z;
  for (const auto& p : o.points) z.push_back(p.to_cd());
  long N = static_cast<long>(z.size()) - 1;
  std::vector<Primitive> prims;
  long k = 0;
  for (; k <= N; ++k) {
    prims.push_back({z[static_cast<size_t>(k)], z[static_cast<size_t>(k)]});
    if (k < N && std::abs(z[static_cast<size_t>(k + 1)] - z[static_cast<size_t>(k)]) < 1e-4 * eps) break;
  }
  double closure = 0;
  if (N > 0) {
    // Polyline through geometrically spaced later points, then to the fixed point.
    double dev = 0, length = 0;
    long a = std::min(k, N);
    double last_gap = a < N ? std::abs(z[static_cast<size_t>(a + 1)] - z[static_cast<size_t>(a)]) : 0;
    while (a < N) {
      long b = std::min(N, std::max(a + 1, static_cast<long>(std::ceil(a * 1.1))));
      cd p = z[static_cast<size_t>(a)], q = z[static_cast<size_t>(b)];
      prims.push_back({p, q});
      length += std::abs(q - p);
      cd mid = z[static_cast<size_t>((a + b) / 2)];
      cd u = q - p;
      if (std::abs(u) > 0) dev = std::max(dev, std::abs(std::imag((mid - p) * std::conj(u))) / std::abs(u));
      a = b;
    }
    cd zN = z.back();
    prims.push_back({zN, cd(0, 0)});
    length += std::abs(zN);
    // Chord deviation and scallops shift the boundary by at most this much along the polyline;
    // the final segment's deviation is taken as |z_N|^2.
    double shift = dev + last_gap * last_gap / (8 * eps) + std::norm(zN);
    double reach = std::abs(z[static_cast<size_t>(std::min(k, N))]) + eps;
    closure = 2 * shift * (length + 2 * eps) * reach;
  }
  return run(prims, eps, opt, closure);
}

}  // namespace paralab
