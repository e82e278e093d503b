#include "cli/selftest.hpp"

#include "foliation/errors.hpp"
#include "foliation/flow.hpp"
#include "foliation/foliation.hpp"
#include "foliation/gaussmanin.hpp"
#include "foliation/melnikov.hpp"
#include "foliation/monodromy.hpp"
#include "foliation/parallel.hpp"
#include "foliation/parser.hpp"
#include "foliation/singularities.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

namespace fol::cli {

namespace {

using Rng = std::mt19937_64;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string g3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Poly P2(const char* s) { return parse_poly(s, std::vector<std::string>{"x", "y"}); }

DifferentialForm dxdy(const char* a, const char* b) { return DifferentialForm::from_dx_dy(P2(a), P2(b)); }

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

Rational random_rational(Rng& rng, long num, long den) {
  Rational q(uniform(rng, -num, num), uniform(rng, 1, den));
  q.canonicalize();
  return q;
}

// Dense polynomial of total degree <= d with integer coefficients.
Poly dense_poly(Rng& rng, std::size_t nvars, unsigned d, long bound) {
  Poly p(nvars);
  std::function<void(Exponent&, std::size_t, unsigned)> fill = [&](Exponent& e, std::size_t i, unsigned left) {
    if (i == nvars) {
      p.add_term(e, Rational(uniform(rng, -bound, bound)));
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[i] = k;
      fill(e, i + 1, left - k);
    }
    e[i] = 0;
  };
  Exponent e(nvars, 0);
  fill(e, 0, d);
  return p;
}

Poly random_line(Rng& rng) {
  long a, b;
  do {
    a = uniform(rng, -9, 9);
    b = uniform(rng, -9, 9);
  } while (a == 0 && b == 0);
  Poly l(2);
  l.add_term({1, 0}, Rational(a));
  l.add_term({0, 1}, Rational(b));
  l.add_term({0, 0}, Rational(uniform(rng, -9, 9)));
  return l;
}

// Sparse random polynomial for the round trip.
Poly random_sparse(Rng& rng, std::size_t nvars) {
  Poly p(nvars);
  const long terms = uniform(rng, 0, 8);
  for (long k = 0; k < terms; ++k) {
    Exponent e(nvars, 0);
    long budget = uniform(rng, 0, 6);
    for (std::size_t i = 0; i < nvars && budget > 0; ++i) {
      e[i] = static_cast<std::uint32_t>(i + 1 == nvars ? budget : uniform(rng, 0, budget));
      budget -= e[i];
    }
    p.add_term(e, random_rational(rng, 99, 20));
  }
  return p;
}

Transversal gradient(const FoliationRecord& F, const Point& q, double reach) {
  return Transversal::gradient_section(*F.first_integral, q, reach);
}

MelnikovOptions mel_options(const SelftestOptions& o) {
  MelnikovOptions m;
  m.quad_tol = o.quad_tol;
  m.flow.rel_tol = o.rel_tol;
  return m;
}

FlowOptions flow_options(const SelftestOptions& o) {
  FlowOptions f;
  f.rel_tol = o.rel_tol;
  return f;
}

SingularityOptions sing_options(const SelftestOptions& o) {
  SingularityOptions s;
  s.root_residual = o.root_residual;
  s.ratio_band = o.ratio_band;
  return s;
}

Outcome census(const SelftestOptions& o) {
  Rng rng(o.seed + 1);
  const auto so = sing_options(o);
  Outcome out;
  struct Shape {
    std::vector<unsigned> degrees;
    int draws;
    int centers;
  };
  for (const Shape& sh : {Shape{{1, 1, 1}, 20, 1}, Shape{{1, 1}, 5, 0}, Shape{{2, 1}, 5, 2}}) {
    int good = 0, degenerate = 0;
    for (int k = 0; k < sh.draws;) {
      LogarithmicSpec s;
      for (unsigned d : sh.degrees) s.f.push_back(d == 1 ? random_line(rng) : dense_poly(rng, 2, d, 9));
      s.lambda.assign(sh.degrees.size(), Rational(1));
      CenterCensus c;
      try {
        c = count_centers(s, so);
      } catch (const InputError&) {
        ++degenerate;
        continue;
      }
      const int inter = expected_intersections(s.degrees());
      const bool hit = c.centers == sh.centers && c.line_intersections == inter &&
                       static_cast<int>(c.points.size()) == sh.centers + inter;
      good += hit;
      ++k;
    }
    out.ok = out.ok && good == sh.draws;
    std::string name = "(";
    for (std::size_t i = 0; i < sh.degrees.size(); ++i) name += (i ? "," : "") + std::to_string(sh.degrees[i]);
    out.detail += name + "): " + std::to_string(good) + "/" + std::to_string(sh.draws) + " draws with " +
                  std::to_string(sh.centers) + " centers (" + std::to_string(degenerate) + " degenerate redrawn); ";
  }
  return out;
}

Outcome melnikov_oracle(const SelftestOptions& o) {
  const auto F = hamiltonian(P2("1/2*x^2 + 1/2*y^2"));
  const auto sig = gradient(F, {1, 0}, 2);
  const auto mo = mel_options(o);
  const auto rot = make_melnikov_problem(F, dxdy("-y", "x"), sig);
  double rel = 0, exact = 0;
  for (int k = 1; k <= 9; ++k) {
    const double t = 0.1 * k;
    const double v = m1(rot, t, mo).value;
    rel = std::max(rel, std::fabs(v + 4 * kPi * t) / (4 * kPi * t));
    for (const char* g : {"x^3*y - 2*x*y^2 + y", "x^2 + 3*x*y - y^4", "x^5 - 7/3*x^2*y^3 + x*y"}) {
      const auto pe = make_melnikov_problem(F, DifferentialForm::exact(P2(g)), sig);
      exact = std::max(exact, std::fabs(m1(pe, t, mo).value));
    }
  }
  return {rel <= 1e-6 && exact < 1e-9,
          "max rel err vs -4 pi t " + g3(rel) + " (tol 1e-6); max |M1(dg)| " + g3(exact) + " (tol 1e-9)"};
}

Outcome holonomy_consistency(const SelftestOptions& o) {
  const auto F = hamiltonian(P2("1/2*x^2 + 1/2*y^2"));
  const auto sig = gradient(F, {1, 0}, 2);
  const auto mo = mel_options(o);
  const auto fo = flow_options(o);
  const Rational eps(1, 10000);
  double worst = 0;
  for (const auto& w : {dxdy("-y", "x"), dxdy("0", "x"), dxdy("-x^2*y - y^3", "x^3 + x*y^2")}) {
    const auto pr = make_melnikov_problem(F, w, sig);
    const auto Fe = make_record(F.omega + eps * w);
    for (double t : {0.25, 0.5}) {
      const double M = m1(pr, t, mo).value;
      const auto h = holonomy(Fe, sig, trace_cycle(F, sig, t, fo), t, fo);
      const double first = (h.t_out - t) / to_double(eps);
      worst = std::max(worst, std::fabs(first - M) / std::fabs(M));
    }
  }
  return {worst <= 0.05, "max |(h-t)/eps - M1| / |M1| " + g3(worst) + " (tol 0.05)"};
}

Outcome center_identity(const SelftestOptions& o) {
  struct System {
    FoliationRecord F;
    Point q;
    double reach;
    std::function<double(int)> level;
  };
  const std::vector<System> systems{
      {hamiltonian(P2("1/2*x^2 + 1/2*y^2")), {1, 0}, 2, [](int k) { return 0.1 * k; }},
      {hamiltonian(P2("1/2*x^2 + 2*y^2 + 1/4*x^4")), {0.5, 0}, 2, [](int k) { return 0.1 * k; }},
      {hamiltonian(P2("y^2 + x^3 - 3*x")), {1.5, 0}, 3, [](int k) { return -2.0 + 4.0 * k / 11.0; }},
      {hamiltonian(P2("1/2*x^2 + 1/2*y^2 + 1/3*x^3 - x*y^2")), {0.2, 0.1}, 0.2, [](int k) { return 0.005 * k; }},
      {logarithmic({{P2("x"), P2("y"), P2("1 - x - y")}, {Rational(1), Rational(1), Rational(1)}}),
       {0.45, 1.0 / 3},
       0.5,
       [](int k) { return k / 300.0; }},
  };
  const auto fo = flow_options(o);
  std::vector<double> err(systems.size() * 10);
  parallel_for(err.size(), [&](std::size_t idx) {
    const auto& s = systems[idx / 10];
    const double t = s.level(static_cast<int>(idx % 10) + 1);
    const auto sig = gradient(s.F, s.q, s.reach);
    err[idx] = std::fabs(holonomy(s.F, sig, trace_cycle(s.F, sig, t, fo), t, fo).t_out - t);
  });
  double worst = 0;
  for (double e : err) worst = std::max(worst, e);
  return {worst <= 1e-8, "5 systems x 10 levels, max |h(t) - t| " + g3(worst) + " (tol 1e-8)"};
}

UPoly upoly(std::vector<long> c) {
  std::vector<Rational> q;
  for (long v : c) q.emplace_back(v);
  return UPoly(q);
}

Outcome monodromy_suite(const SelftestOptions& o) {
  Outcome out;
  const auto M = build_model(upoly({0, -3, 0, 1}));
  double cv_err = 1e300;
  if (M.critical_values.size() == 2) {
    // Either order.
    const double a = std::max(std::abs(M.critical_values[0] - 2.0), std::abs(M.critical_values[1] + 2.0));
    const double b = std::max(std::abs(M.critical_values[0] + 2.0), std::abs(M.critical_values[1] - 2.0));
    cv_err = std::min(a, b);
  }
  const auto ops = monodromy_generators(M);
  bool pl_ok = ops.size() == 2;
  for (const auto& op : ops)
    pl_ok = pl_ok && op.matrix.determinant() == 1 &&
            op.matrix.transpose() * M.lattice.intersection * op.matrix == M.lattice.intersection;
  const std::size_t rank3 = orbit_span(ops, M.lattice, ops.at(0).vanishing_cycle).rank;
  out.ok = cv_err <= 1e-10 && pl_ok && rank3 == 2;
  out.detail = "x^3-3x: critical value err " + g3(cv_err) + ", operators " + (pl_ok ? "det 1, form-preserving" : "INVALID") +
               ", orbit rank " + std::to_string(rank3) + "; ";

  Rng rng(o.seed + 5);
  int full = 0, done = 0, skipped = 0;
  while (done < 20) {
    const int m = static_cast<int>(uniform(rng, 3, 7));
    std::vector<long> c(m + 1);
    for (auto& x : c) x = uniform(rng, -5, 5);
    c[m] = 1;
    FibrationModel R;
    try {
      R = build_model(upoly(c));
    } catch (const InputError&) {
      ++skipped;
      continue;
    }
    const auto g = monodromy_generators(R);
    full += orbit_span(g, R.lattice, g[done % g.size()].vanishing_cycle).rank == static_cast<std::size_t>(m - 1);
    ++done;
  }
  out.ok = out.ok && full == 20;
  out.detail += "random p: " + std::to_string(full) + "/20 orbits of rank deg-1 (" + std::to_string(skipped) +
                " non-generic redrawn)";
  return out;
}

// Derivative factor of d^k/dt^k y^-1 = c_k y^-(2k+1).
double derivative_factor(int k) {
  double c = 1;
  for (int j = 1; j <= k; ++j) c *= -(2.0 * j - 1) / 2.0;
  return c;
}

Outcome gauss_manin_suite(const SelftestOptions& o) {
  Outcome out;
  const UPoly p = upoly({0, -3, 0, 1});
  const auto G = picard_fuchs(p);
  const auto eq = scalar_equation(G);
  double pf = 0;
  for (Complex t : {Complex(0), Complex(1), Complex(0, 3)}) {
    const Complex yref = contour_period(p, t, 0, 1, [](Complex, Complex y) { return 1.0 / y; }).y_start;
    auto I = [&](int k) {
      return derivative_factor(k) *
             contour_period(p, t, 0, 1, [&](Complex, Complex y) { return std::pow(y, -(2 * k + 1)); }, yref).value;
    };
    const int n = static_cast<int>(eq.coeffs.size());
    Complex res = I(n);
    double scale = std::abs(res);
    for (int k = 0; k < n; ++k) {
      const Complex term = eq.coeffs[k].eval(t) * I(k);
      res -= term;
      scale += std::abs(term);
    }
    pf = std::max(pf, std::abs(res) / std::max(1.0, scale));
  }

  struct GL {
    const char* f;
    Point q;
    double reach;
    std::vector<double> grid;
    DifferentialForm w;
  };
  const std::vector<GL> gl{
      {"1/2*x^2 + 1/2*y^2", {1, 0}, 2, {0.2, 0.5, 1.0}, dxdy("x*y^2", "x")},
      {"y^2 - x^3 + 3*x", {-1.5, 0}, 0.4, {-1.5, -0.5, 0.5}, dxdy("x^2", "x^2*y")},
      {"1/2*x^2 + 2*y^2 + 1/4*x^4", {0.5, 0}, 1.0, {0.2, 0.6}, dxdy("y^3 + x", "x*y")},
  };
  double gle = 0;
  for (const auto& s : gl) {
    const Poly f = P2(s.f);
    const auto sig = Transversal::gradient_section(PowerProduct::polynomial(f), s.q, s.reach);
    gle = std::max(gle, gelfand_leray_check(f, s.w, s.grid, sig, mel_options(o)).max_error);
  }

  Rng rng(o.seed + 6);
  const int m = 3;
  const Poly fb = P2("y^2 - x^3");
  const auto df = DifferentialForm::exact(fb);
  int zero = 0;
  for (int k = 0; k < 50; ++k) {
    const Poly g = dense_poly(rng, 2, static_cast<unsigned>(uniform(rng, 1, 6)), 9);
    bool z = true;
    for (const auto& c : brieskorn_reduce(m, DifferentialForm::exact(g))) z = z && c.is_zero();
    for (const auto& c : brieskorn_reduce(m, g * df)) z = z && c.is_zero();
    zero += z;
  }

  const auto basis = brieskorn_basis(m);
  const UPoly xm = UPoly::monomial(m);
  const Complex t(1);
  std::vector<Complex> bp;
  for (const auto& b : basis.forms) bp.push_back(contour_period(xm, t, 0, 1, b).value);
  double pid = 0;
  for (const auto& w : {dxdy("x*y", "0"), dxdy("x^4*y", "0"), dxdy("y^3", "x^3*y^2"), dxdy("0", "x^2*y")}) {
    const auto r = brieskorn_reduce(m, w);
    Complex rhs = 0;
    for (std::size_t i = 0; i < r.size(); ++i) rhs += r[i].eval(t) * bp[i];
    const Complex lhs = contour_period(xm, t, 0, 1, w).value;
    pid = std::max(pid, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  out.ok = pf < 1e-5 && gle < 1e-5 && zero == 50 && pid < 1e-6;
  out.detail = "PF residual " + g3(pf) + " (tol 1e-5); Gelfand-Leray " + g3(gle) + " (tol 1e-5); reduce(dg), reduce(g df) zero " +
               std::to_string(zero) + "/50; period identity " + g3(pid) + " (tol 1e-6)";
  return out;
}

Outcome integrability_suite(const SelftestOptions& o) {
  Rng rng(o.seed + 7);
  int integrable = 0, rejected = 0;
  const DifferentialForm kick(3, 1, {parse_poly("x2", 3), Poly::constant(3, 1), Poly::constant(3, 1)});
  for (int k = 0; k < 10; ++k) {
    std::vector<Poly> f;
    std::vector<Rational> lambda;
    for (int i = 0; i < 3; ++i) {
      f.push_back(dense_poly(rng, 3, static_cast<unsigned>(uniform(rng, 1, 2)), 5));
      Rational l;
      do l = random_rational(rng, 9, 5);
      while (l == 0);
      lambda.push_back(l);
    }
    const auto w = pullback_form(f, logarithmic_model(lambda));
    integrable += integrability_check(w).integrable;
    rejected += !integrability_check(w + kick).integrable;
  }
  return {integrable == 10 && rejected == 10, "pullback forms integrable " + std::to_string(integrable) +
                                                  "/10; perturbed forms rejected " + std::to_string(rejected) + "/10"};
}

Outcome parser_round_trip(const SelftestOptions& o) {
  Rng rng(o.seed + 8);
  int ok = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 4));
    const Poly p = random_sparse(rng, n);
    const auto names = default_names(n);
    const std::string s = print_poly(p, names);
    const Poly q = parse_poly(s, names);
    ok += q == p && print_poly(q, names) == s;
  }
  return {ok == 1000, "round trip exact " + std::to_string(ok) + "/1000"};
}

struct Spec {
  int id;
  const char* name;
  double budget;
  Outcome (*run)(const SelftestOptions&);
};

const std::vector<Spec>& specs() {
  static const std::vector<Spec> s{
      {1, "logarithmic center census", 10, census},
      {2, "Melnikov oracle", 5, melnikov_oracle},
      {3, "holonomy/Melnikov consistency", 30, holonomy_consistency},
      {4, "center identity holonomy", 30, center_identity},
      {5, "monodromy suite", 60, monodromy_suite},
      {6, "Gauss-Manin suite", 60, gauss_manin_suite},
      {7, "integrability", 5, integrability_suite},
  };
  return s;
}

CriterionResult run_one(const Spec& s, const SelftestOptions& o) {
  CriterionResult r;
  r.id = s.id;
  r.name = s.name;
  r.budget = s.budget;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Outcome out = s.run(o);
    r.checks_passed = out.ok;
    r.detail = out.detail;
  } catch (const std::exception& e) {
    r.checks_passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string core_report(const std::vector<CriterionResult>& rs) {
  std::string s;
  for (const auto& r : rs) s += std::to_string(r.id) + (r.checks_passed ? " ok " : " bad ") + r.detail + "\n";
  return s;
}

} // namespace

std::vector<CriterionResult> run_selftest(const SelftestOptions& opt) {
  auto wanted = [&](int id) { return opt.only.empty() || opt.only.count(id) > 0; };
  std::vector<CriterionResult> out, first;
  for (const auto& s : specs()) {
    if (!wanted(s.id) && !wanted(8)) continue;
    auto r = run_one(s, opt);
    first.push_back(r);
    if (wanted(s.id)) out.push_back(r);
  }
  if (!wanted(8)) return out;

  CriterionResult r;
  r.id = 8;
  r.name = "parser round trip and determinism";
  r.budget = 300;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Outcome rt = parser_round_trip(opt);
    // Criteria 1-7 again at another worker count.
    const unsigned before = worker_count();
    set_worker_count(before == opt.alternate_threads ? 1 : opt.alternate_threads);
    std::vector<CriterionResult> second;
    for (const auto& s : specs()) second.push_back(run_one(s, opt));
    set_worker_count(before);
    const bool same = core_report(first) == core_report(second);
    r.checks_passed = rt.ok && same;
    // The worker counts stay out of the detail so the report itself is
    // identical across FOLIATION_THREADS settings.
    r.detail = rt.detail + "; criteria 1-7 at a second worker count " + (same ? "byte-identical" : "DIFFER");
  } catch (const std::exception& e) {
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.push_back(r);
  return out;
}

std::string format_report(const std::vector<CriterionResult>& results, bool timings) {
  std::string s;
  int passed = 0;
  for (const auto& r : results) {
    passed += r.passed();
    s += std::string(r.passed() ? "PASS" : "FAIL") + " criterion " + std::to_string(r.id) + " (" + r.name + "): " + r.detail;
    if (r.checks_passed && !r.passed()) s += "; over the " + g3(r.budget) + " s budget";
    if (timings) s += " [" + g3(r.seconds) + " s of " + g3(r.budget) + " s]";
    s += "\n";
  }
  s += "selftest: " + std::to_string(passed) + "/" + std::to_string(results.size()) + " criteria passed\n";
  return s;
}

} // namespace fol::cli
