#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "paralab/cohom.hpp"
#include "paralab/errors.hpp"
#include "paralab/fixtures.hpp"
#include "paralab/io.hpp"
#include "paralab/moduli.hpp"
#include "paralab/orbit.hpp"
#include "paralab/principal.hpp"
#include "verify/acceptance.hpp"
#include "verify/oracles.hpp"

using namespace paralab;
using io::json;

namespace {

// Options bound to variables; JSON config fills whatever the command line left unset.
class Binder {
 public:
  explicit Binder(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& var, const std::string& help) {
    CLI::Option* o = app_->add_option("--" + name, var, help)->capture_default_str();
    entries_.push_back({name, o, [&var](const json& j) { var = j.get<T>(); }, [&var] { return json(var); }});
    return o;
  }

  void merge(const json& cfg) {
    for (auto& e : entries_)
      if (e.opt->count() == 0 && cfg.contains(e.name)) e.set(cfg.at(e.name));
  }

  json effective() const {
    json j;
    for (const auto& e : entries_) j[e.name] = e.get();
    return j;
  }

 private:
  struct Entry {
    std::string name;
    CLI::Option* opt;
    std::function<void(const json&)> set;
    std::function<json()> get;
  };
  CLI::App* app_;
  std::vector<Entry> entries_;
};

struct Command {
  CLI::App* app = nullptr;
  std::unique_ptr<Binder> bind;
  std::string config, out;
  unsigned precision = 0;
  long seed = 1;
  unsigned fallback_digits = 32;
  std::function<int(Command&)> run;

  unsigned digits() const {
    if (precision) return precision;
    if (std::getenv("PARALAB_PRECISION")) return default_digits();
    return fallback_digits;
  }
};

std::ostream& sink(const Command& c, std::ofstream& file) {
  if (c.out.empty()) return std::cout;
  file.open(c.out);
  if (!file) throw ResourceError("cannot write '" + c.out + "'");
  return file;
}

json effective_config(const Command& c) {
  json j = c.bind->effective();
  j["precision"] = c.digits();
  return j;
}

void emit_json(const Command& c, const std::string& name, json body) {
  json doc;
  doc["command"] = name;
  doc["config"] = effective_config(c);
  for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
  std::ofstream f;
  sink(c, f) << doc.dump(2) << '\n';
}

void check_finite(const Complex& z, const char* what) {
  if (!isfinite(z)) throw ConvergenceError(std::string("non-finite ") + what + " in output");
}

json cjson(const Complex& z) {
  check_finite(z, "value");
  return io::to_json(z);
}

json cjson(const std::vector<Complex>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(cjson(z));
  return a;
}

std::vector<Complex> petal_points(PetalKind side, int n, long seed) {
  std::mt19937 rng(static_cast<unsigned>(seed));
  std::uniform_real_distribution<double> r(0.03, 0.3), a(-0.7, 0.7);
  double centre = side == PetalKind::attracting ? M_PI : 0.0;
  std::vector<Complex> out;
  for (int i = 0; i < n; ++i) {
    double t = centre + a(rng), rr = r(rng);
    out.push_back(Complex(Real(rr * std::cos(t)), Real(rr * std::sin(t))));
  }
  return out;
}

// Intersection points with |q| = |e^{+-2 pi i w}|, w = -1/z, log-spaced in [1e-10, 1e-6].
std::vector<Complex> intersection_points(int n) {
  std::vector<Complex> out;
  Real tp = 2 * pi();
  for (bool upper : {true, false})
    for (int j = 0; j < n; ++j) {
      double lq = std::log(1e-10) + (std::log(1e-6) - std::log(1e-10)) * j / std::max(1, n - 1);
      Real y = Real(-lq) / tp;
      Complex w(Real(0.37 * j - 0.8), upper ? y : -y);
      out.push_back(Complex(-1) / w);
    }
  return out;
}

bool is_minus_z(const Rhs& g) {
  return g.degree() == 1 && g.alpha0() == Complex() && abs(g.alpha1() + Complex(1)) < Real(1e-30);
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? lo : lo * std::pow(hi / lo, double(i) / (n - 1)));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paralab: parabolic germs, directed areas of orbit neighbourhoods, and their moduli"};
  app.require_subcommand(1);
  std::vector<std::unique_ptr<Command>> commands;

  auto make = [&](const std::string& name, const std::string& help, unsigned fallback) -> Command& {
    auto c = std::make_unique<Command>();
    c->app = app.add_subcommand(name, help);
    c->bind = std::make_unique<Binder>(c->app);
    c->fallback_digits = fallback;
    c->app->add_option("--config", c->config, "JSON config; command-line flags override its fields");
    c->app->add_option("--out", c->out, "output path (default stdout)");
    c->bind->add("precision", c->precision, "decimal digits (0: command default or PARALAB_PRECISION)");
    c->bind->add("seed", c->seed, "seed for randomized point sampling");
    commands.push_back(std::move(c));
    return *commands.back();
  };

  // orbit
  std::string germ = "f0", z0 = "-0.5";
  long n_orbit = 100;
  {
    Command& c = make("orbit", "orbit points and gaps as CSV", 32);
    c.bind->add("germ", germ, "germ name (see fixtures)");
    c.bind->add("z0", z0, "initial point");
    c.bind->add("n", n_orbit, "number of steps");
    c.run = [&](Command& c) {
      Context ctx{c.digits()};
      OrbitStop stop;
      stop.max_n = n_orbit;
      Orbit o = orbit(fixtures::by_name(germ), io::parse_complex(z0), stop, ctx);
      PrecisionScope ps(ctx);
      std::ofstream f;
      std::ostream& os = sink(c, f);
      os << "# " << json{{"command", "orbit"}, {"config", effective_config(c)}}.dump() << '\n';
      io::csv_row(os, {"n", "re", "im", "gap"});
      for (size_t k = 0; k < o.points.size(); ++k) {
        check_finite(o.points[k], "orbit point");
        io::csv_row(os, {std::to_string(k), io::num(o.points[k].re), io::num(o.points[k].im),
                         k < o.gaps.size() ? io::num(o.gaps[k]) : ""});
      }
      return 0;
    };
  }

  // area
  std::string eps_range = "1e-4:1e-2";
  int n_eps = 50;
  {
    Command& c = make("area", "directed area A(z0, eps) on a log-spaced eps sweep as CSV", 32);
    c.bind->add("germ", germ, "germ name");
    c.bind->add("z0", z0, "initial point");
    c.bind->add("eps-range", eps_range, "lo:hi");
    c.bind->add("n", n_eps, "number of eps values");
    c.run = [&](Command& c) {
      Context ctx{c.digits()};
      auto [lo, hi] = io::parse_range(eps_range);
      AreaEvaluator ev(orbit_for_area(fixtures::by_name(germ), io::parse_complex(z0), lo, ctx));
      PrecisionScope ps(ctx);
      std::ofstream f;
      std::ostream& os = sink(c, f);
      os << "# " << json{{"command", "area"}, {"config", effective_config(c)}}.dump() << '\n';
      io::csv_row(os, {"eps", "re", "im", "n_eps", "tail_re", "tail_im", "nucleus_re", "nucleus_im"});
      for (double e : log_spaced(lo, hi, n_eps)) {
        DirectedArea a = ev.area_any(Real(e));
        check_finite(a.value, "area");
        io::csv_row(os, {io::num(Real(e)), io::num(a.value.re), io::num(a.value.im), std::to_string(a.n_eps),
                         io::num(a.tail.re), io::num(a.tail.im), io::num(a.nucleus.re), io::num(a.nucleus.im)});
      }
      return 0;
    };
  }

  // fit-expansion
  std::string fit_range = "1e-6:1e-3";
  int n_fit = 40;
  {
    Command& c = make("fit-expansion", "eps-expansion fit of the area; compares the eps^2 term with H^f", 32);
    c.bind->add("germ", germ, "germ name");
    c.bind->add("z0", z0, "initial point in the attracting petal");
    c.bind->add("eps-range", fit_range, "lo:hi");
    c.bind->add("n", n_fit, "grid size");
    c.run = [&](Command& c) {
      Context ctx{c.digits()};
      auto [lo, hi] = io::parse_range(fit_range);
      Germ f = fixtures::by_name(germ);
      Complex z = io::parse_complex(z0);
      std::vector<Real> grid;
      {
        PrecisionScope ps(ctx);
        grid = log_grid(lo, hi, n_fit);
      }
      ExpansionFit fit = principal_via_geometry(f, z, grid, ctx);
      PrincipalPart p = principal_via_cohom(f, z, PetalKind::attracting, ctx);
      PrecisionScope ps(ctx);
      json terms = json::array();
      for (size_t i = 0; i < fit.basis.size(); ++i)
        terms.push_back({{"term", to_string(fit.basis[i])}, {"coefficient", cjson(fit.coefficients[i])},
                         {"sensitivity", io::num(fit.sensitivity[i])}});
      emit_json(c, "fit-expansion",
                {{"terms", terms},
                 {"condition_number", io::num(fit.condition_number)},
                 {"residual_norm", io::num(fit.residual_norm)},
                 {"principal_geometric", cjson(fit.principal())},
                 {"principal_cohomological", cjson(p.value)},
                 {"difference", io::num(abs(fit.principal() - p.value))}});
      return 0;
    };
  }

  // solve-cohom
  std::string rhs = "-z", side = "+", points = "auto";
  {
    Command& c = make("solve-cohom", "sectorial solution of H(f) - H = g at points", 32);
    c.bind->add("germ", germ, "germ name");
    c.bind->add("rhs", rhs, "polynomial right-hand side, e.g. -z, -pi*z, 1");
    c.bind->add("side", side, "+ (attracting) or - (repelling)");
    c.bind->add("points", points, "'auto' or semicolon-separated points");
    c.run = [&](Command& c) {
      Context ctx{c.digits()};
      PetalKind s = io::parse_side(side);
      SectorialSolution h(fixtures::by_name(germ), io::parse_rhs(rhs), s, ctx);
      PrecisionScope ps(ctx);
      std::vector<Complex> pts = points == "auto" ? petal_points(s, 10, c.seed) : io::parse_points(points);
      json rows = json::array();
      for (const auto& z : pts) {
        SectorialValue v = h.evaluate(z);
        rows.push_back({{"z", cjson(z)}, {"value", cjson(v.value)}, {"error", io::num(v.error)}, {"steps", v.steps}});
      }
      emit_json(c, "solve-cohom",
                {{"K", h.K()}, {"r_switch", h.r_switch()}, {"formal_residual", io::num(h.formal().residual)}, {"values", rows}});
      return 0;
    };
  }

  // cocycle
  {
    Command& c = make("cocycle", "H+ - H- on V^up and H- - H+ on V^low with branch-constant removal", 40);
    c.bind->add("germ", germ, "germ name");
    c.bind->add("rhs", rhs, "polynomial right-hand side");
    c.bind->add("points", points, "'auto' or semicolon-separated points");
    c.run = [&](Command& c) {
      Context ctx{c.digits()};
      Germ f = fixtures::by_name(germ);
      Rhs g = io::parse_rhs(rhs);
      std::vector<Complex> pts;
      {
        PrecisionScope ps(ctx);
        pts = points == "auto" ? intersection_points(5) : io::parse_points(points);
      }
      std::vector<CocycleSample> S = cocycle(f, g, pts, ctx);
      PrecisionScope ps(ctx);
      bool closed = germ == "f0" && is_minus_z(g);
      json rows = json::array();
      for (const auto& s : S) {
        json r = {{"z", cjson(s.z)},
                  {"component", s.upper ? "up" : "low"},
                  {"value", cjson(s.value)},
                  {"branch_constant", cjson(s.branch_constant)},
                  {"reduced", cjson(s.reduced)},
                  {"error", io::num(s.error)},
                  {"resolved", s.resolved}};
        if (closed && s.upper) {
          Complex ref = oracle::f0_cocycle_closed_form(s.z);
          r["closed_form"] = cjson(ref);
          r["relative_error"] = io::num(abs(s.reduced - ref) / abs(ref));
        } else {
          r["closed_form"] = nullptr;
        }
        rows.push_back(r);
      }
      emit_json(c, "cocycle", {{"closed_form_formula", closed ? "+2 pi i q/(1-q), q = exp(-2 pi i / z)" : ""}, {"samples", rows}});
      return 0;
    };
  }

  // moment
  int m_order = 1, degree = 6, samples = 16;
  std::string triv = "+", q_range = "1e-10:1e-5", shift = "0";
  {
    Command& c = make("moment", "m-moment (g_inf, g_0) of f with its canonical form", 40);
    c.bind->add("germ", germ, "germ name");
    c.bind->add("m", m_order, "moment order");
    c.bind->add("trivialization", triv, "+ (Psi+) or - (Psi-)");
    c.bind->add("q-range", q_range, "lifted-variable window lo:hi");
    c.bind->add("degree", degree, "fitted germ degree");
    c.bind->add("samples", samples, "samples per component");
    c.bind->add("psi-shift", shift, "constant c in Psi -> Psi + c");
    c.run = [&](Command& c) {
      MomentOptions o;
      o.digits = c.digits();
      o.degree = degree;
      o.samples = samples;
      o.trivialization = io::parse_side(triv) == PetalKind::attracting ? Trivialization::plus : Trivialization::minus;
      std::tie(o.q_min, o.q_max) = io::parse_range(q_range);
      {
        PrecisionScope ps(o.digits);
        o.psi_shift = io::parse_complex(shift).to_cd();
      }
      Moment M = m_moment(fixtures::by_name(germ), m_order, o);
      PrecisionScope ps(o.digits);
      Moment C = M.canonical();
      const FitDiagnostics& d = M.diagnostics;
      emit_json(c, "moment",
                {{"m", M.m},
                 {"degree", M.degree},
                 {"g_inf", cjson(M.g_inf)},
                 {"g_0", cjson(M.g_0)},
                 {"trivialization_tag", M.trivialization_tag},
                 {"canonical", {{"g_inf", cjson(C.g_inf)}, {"g_0", cjson(C.g_0)}}},
                 {"diagnostics",
                  {{"samples", d.samples},
                   {"residual_inf", io::num(d.residual_inf)},
                   {"residual_0", io::num(d.residual_0)},
                   {"condition_inf", io::num(d.condition_inf)},
                   {"condition_0", io::num(d.condition_0)},
                   {"noise", io::num(d.noise)},
                   {"branch_constant", cjson(d.branch_constant)},
                   {"constant_sum_before_shift", cjson(d.constant_sum)}}}});
      return 0;
    };
  }

  // ev-modulus
  std::string method = "direct", t_range = "1e-8:1e-4";
  {
    Command& c = make("ev-modulus", "EV moduli phi_0, phi_inf (chart 1/t at infinity)", 40);
    c.bind->add("germ", germ, "germ name");
    c.bind->add("method", method, "direct or moments");
    c.bind->add("t-range", t_range, "annulus lo:hi (direct) or lifted window (moments)");
    c.bind->add("degree", degree, "fitted degree");
    c.bind->add("samples", samples, "samples per component");
    c.run = [&](Command& c) {
      Germ f = fixtures::by_name(germ);
      auto [lo, hi] = io::parse_range(t_range);
      EVModulus E;
      if (method == "direct") {
        EVOptions o;
        o.digits = c.digits();
        o.degree = degree;
        o.samples = samples;
        o.t_min = lo;
        o.t_max = hi;
        E = ev_modulus_direct(f, o);
      } else if (method == "moments") {
        MomentOptions p;
        p.digits = c.digits();
        p.degree = degree;
        p.samples = samples;
        p.q_min = lo;
        p.q_max = hi;
        MomentOptions m = p;
        m.trivialization = Trivialization::minus;
        E = ev_from_two_sided_moments(m_moment(f, 1, p), m_moment(f, 1, m));
      } else {
        throw DomainError("method must be direct or moments");
      }
      PrecisionScope ps(c.digits());
      emit_json(c, "ev-modulus",
                {{"method", E.method},
                 {"phi_0", cjson(E.phi_0)},
                 {"phi_inf", cjson(E.phi_inf)},
                 {"phi_inf_chart", "tau = 1/t"},
                 {"residual_0", io::num(E.residual_0)},
                 {"residual_inf", io::num(E.residual_inf)}});
      return 0;
    };
  }

  // construct-global
  std::string phi_name = "expneg";
  int order = 8;
  {
    Command& c = make("construct-global", "germ f with a global solution H = h o phi of H(f) - H = g", 32);
    c.bind->add("phi", phi_name, "conjugating map: id, expneg, mobius, quad");
    c.bind->add("rhs", rhs, "polynomial right-hand side");
    c.bind->add("order", order, "Taylor order reported");
    c.run = [&](Command& c) {
      Context ctx{c.digits()};
      GlobalSolution s = construct_global(fixtures::phi(phi_name), io::parse_rhs(rhs), ctx);
      PrecisionScope ps(ctx);
      Series t = s.f.series(order);
      emit_json(c, "construct-global",
                {{"f", s.f.label()}, {"h", s.h_tag}, {"taylor", cjson(t.coeffs())}, {"residual", io::num(s.residual)}});
      return 0;
    };
  }

  // probe-singularity
  long index = 6;
  std::string offsets = "1e-5:3e-4";
  int n_off = 8;
  double step_scale = 1;
  {
    Command& c = make("probe-singularity", "second derivative of A/(pi eps^2) around eps_n", 32);
    c.bind->add("germ", germ, "germ name");
    c.bind->add("z0", z0, "initial point");
    c.bind->add("index", index, "threshold index n");
    c.bind->add("offsets", offsets, "offset range lo:hi");
    c.bind->add("n", n_off, "number of offsets");
    c.bind->add("step-scale", step_scale, "multiplier of the finite-difference step");
    c.run = [&](Command& c) {
      Context ctx{c.digits()};
      auto [lo, hi] = io::parse_range(offsets);
      Orbit o = orbit_for_area(fixtures::by_name(germ), io::parse_complex(z0), 1e-3, ctx);
      ProbeOptions po;
      po.step_scale = step_scale;
      ProbeResult r = second_derivative_probe(o, index, log_spaced(lo, hi, n_off), po);
      PrecisionScope ps(r.digits);
      json off = json::array();
      for (const auto& x : r.offsets) off.push_back(io::num(x));
      emit_json(c, "probe-singularity",
                {{"threshold", io::num(o.threshold(index))},
                 {"offsets", off},
                 {"right", cjson(r.right_samples)},
                 {"left", cjson(r.left_samples)},
                 {"fitted_exponent", r.fitted_exponent},
                 {"blowup_coefficient", cjson(r.blowup_coefficient)},
                 {"left_limit", cjson(r.left_limit)},
                 {"step", io::num(r.step)}});
      return 0;
    };
  }

  // reconstruct-orbit
  std::string rec_range = "1e-3:5e-2";
  {
    Command& c = make("reconstruct-orbit", "thresholds and midpoint sums from black-box area samples", 32);
    c.bind->add("germ", germ, "germ name");
    c.bind->add("z0", z0, "initial point");
    c.bind->add("eps-range", rec_range, "lo:hi");
    c.run = [&](Command& c) {
      Context ctx{c.digits()};
      auto [lo, hi] = io::parse_range(rec_range);
      AreaEvaluator ev(orbit_for_area(fixtures::by_name(germ), io::parse_complex(z0), lo, ctx));
      PrecisionScope ps(ctx);
      Reconstruction r = reconstruct_orbit_from_area([&](const Real& e) { return ev.area_any(e).value; }, lo, hi);
      json th = json::array();
      for (const auto& t : r.thresholds) th.push_back(io::num(t));
      emit_json(c, "reconstruct-orbit", {{"thresholds", th}, {"midpoint_sums", cjson(r.midpoint_sums)}});
      return 0;
    };
  }

  // verify
  std::string suite = "core", only;
  {
    Command& c = make("verify", "run the acceptance suite; one pass/fail line per criterion", 32);
    c.bind->add("suite", suite, "suite name (core)");
    c.bind->add("only", only, "comma-separated criterion ids");
    c.run = [&](Command& c) {
      if (suite != "core") throw DomainError("unknown suite '" + suite + "'");
      std::vector<int> ids;
      std::stringstream ss(only);
      for (std::string t; std::getline(ss, t, ',');)
        if (!t.empty()) ids.push_back(std::stoi(t));
      int failed = 0;
      json rows = json::array();
      verify::run_suite(verify::core_suite(), ids, [&](const verify::CriterionResult& r) {
        std::cout << verify::format_line(r) << std::endl;
        if (!r.pass) ++failed;
        rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
      });
      if (!c.out.empty()) {
        std::ofstream f(c.out);
        f << json{{"command", "verify"}, {"suite", suite}, {"failed", failed}, {"criteria", rows}}.dump(2) << '\n';
      }
      return failed == 0 ? 0 : 1;
    };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", "UsageError"}, {"class", "precondition"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }

  for (auto& c : commands) {
    if (!c->app->parsed()) continue;
    try {
      if (!c->config.empty()) c->bind->merge(io::load_config(c->config));
      return c->run(*c);
    } catch (const Error& e) {
      static const char* cls[] = {"precondition", "convergence", "resource"};
      std::cerr << json{{"error", e.name()}, {"class", cls[static_cast<int>(e.error_class())]}, {"message", e.what()}}.dump()
                << '\n';
      return exit_code(e.error_class());
    } catch (const json::exception& e) {
      std::cerr << json{{"error", "ConfigError"}, {"class", "precondition"}, {"message", e.what()}}.dump() << '\n';
      return 2;
    }
  }
  return 2;
}
