#include "foliation/gaussmanin.hpp"

#include "foliation/errors.hpp"
#include "foliation/monodromy.hpp"
#include "foliation/numeric_poly.hpp"
#include "foliation/parallel.hpp"
#include "foliation/roots.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace fol {

GelfandLerayReport gelfand_leray_check(const Poly& f, const DifferentialForm& omega, const std::vector<double>& grid,
                                       const Transversal& section, const MelnikovOptions& opt) {
  if (f.nvars() != 2) throw InputError("Gelfand-Leray check needs a plane polynomial");
  if (omega.nvars() != 2 || omega.degree() != 1) throw InputError("omega must be a plane 1-form");
  if (section.chart() != Transversal::Chart::FirstIntegral) throw InputError("section must be charted by f");
  const FoliationRecord F = hamiltonian(f);
  const Poly g = omega.coefficient(1).diff(0) - omega.coefficient(0).diff(1);
  const NumericPoly G(g), fx(f.diff(0)), fy(f.diff(1));
  const auto range = section.parameter_range();

  GelfandLerayReport rep;
  rep.t = grid;
  rep.derivative.resize(grid.size());
  rep.eta_period.resize(grid.size());
  std::vector<double> err(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double t = grid[i];
    const double h = std::min(1e-3 * std::max(1.0, std::fabs(t)), 0.1 * std::min(t - range[0], range[1] - t));
    if (!(h > 0)) throw InputError("level outside the section range");
    auto period = [&](double u) { return cycle_integral(F, trace_cycle(F, section, u, quadrature_flow(opt)), omega, opt); };
    // Centered differences at h and h/2, Richardson-combined to O(h^4).
    const double d1 = (period(t + h) - period(t - h)) / (2 * h);
    const double d2 = (period(t + h / 2) - period(t - h / 2)) / h;
    rep.derivative[i] = (4 * d2 - d1) / 3;
    const auto c = trace_cycle(F, section, t, quadrature_flow(opt));
    rep.eta_period[i] = oint(
        F, c,
        [&](const Point& z, const Point& v) {
          const double a = fx(z[0], z[1]), b = fy(z[0], z[1]);
          // Chart switch where f_y is the smaller partial.
          if (std::fabs(b) >= std::fabs(a)) {
            if (b == 0) throw NumericError("f_x and f_y both vanish on the cycle");
            return -G(z[0], z[1]) / b * v[0];
          }
          return G(z[0], z[1]) / a * v[1];
        },
        opt);
    err[i] = std::fabs(rep.derivative[i] - rep.eta_period[i]) / std::max(1.0, std::fabs(rep.eta_period[i]));
    if (i == 0) rep.step = h;
  });
  for (double e : err) rep.max_error = std::max(rep.max_error, e);
  return rep;
}

namespace {

// Polynomials in x over Q(t), coefficient k multiplies x^k.
using RPoly = std::vector<RatFunc>;

void trim(RPoly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

RPoly add(RPoly a, const RPoly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  trim(a);
  return a;
}

RPoly scale(RPoly a, const RatFunc& c) {
  for (auto& x : a) x *= c;
  trim(a);
  return a;
}

RPoly mul(const RPoly& a, const RPoly& b) {
  if (a.empty() || b.empty()) return {};
  RPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

RPoly shift(const RPoly& a, std::size_t k) {
  if (a.empty()) return a;
  RPoly r(k);
  r.insert(r.end(), a.begin(), a.end());
  return r;
}

RPoly dx(const RPoly& a) {
  RPoly r;
  for (std::size_t k = 1; k < a.size(); ++k) r.push_back(a[k] * RatFunc(Rational(static_cast<long>(k))));
  trim(r);
  return r;
}

void divmod(RPoly a, const RPoly& d, RPoly& q, RPoly& r) {
  q.assign(a.size() >= d.size() ? a.size() - d.size() + 1 : 0, RatFunc());
  const RatFunc inv = RatFunc(Rational(1)) / d.back();
  while (a.size() >= d.size() && !a.empty()) {
    const std::size_t k = a.size() - d.size();
    const RatFunc c = a.back() * inv;
    q[k] = c;
    for (std::size_t i = 0; i < d.size(); ++i) a[k + i] -= c * d[i];
    a.pop_back();
    trim(a);
  }
  trim(q);
  r = std::move(a);
}

RPoly from_upoly(const UPoly& p) {
  RPoly r;
  for (const auto& c : p.coeffs()) r.emplace_back(c);
  trim(r);
  return r;
}

} // namespace

std::vector<std::vector<Complex>> ConnectionMatrix::eval(Complex t) const {
  std::vector<std::vector<Complex>> m(size(), std::vector<Complex>(size()));
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) m[i][j] = entries[i][j].eval(t);
  return m;
}

ConnectionMatrix gauss_manin_matrix(const UPoly& p) {
  const int m = p.degree();
  if (m < 2) throw InputError("Gauss-Manin matrix needs deg p >= 2");
  const std::size_t mu = static_cast<std::size_t>(m - 1);
  RPoly Fx = from_upoly(p);
  Fx[0] += RatFunc(UPoly::monomial(1));
  const RPoly dF = from_upoly(p.derivative());

  // A F + B F' = 1 over Q(t).
  RPoly r0 = Fx, r1 = dF, s0 = {RatFunc(Rational(1))}, s1, u0, u1 = {RatFunc(Rational(1))};
  while (!r1.empty()) {
    RPoly q, r;
    divmod(r0, r1, q, r);
    RPoly s2 = add(s0, scale(mul(q, s1), RatFunc(Rational(-1))));
    RPoly u2 = add(u0, scale(mul(q, u1), RatFunc(Rational(-1))));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    u0 = std::move(u1);
    u1 = std::move(u2);
  }
  if (r0.size() != 1) throw InputError("p(x) + t is not squarefree over Q(t)");
  const RatFunc inv = RatFunc(Rational(1)) / r0[0];
  const RPoly A = scale(s0, inv), B = scale(u0, inv);

  // x^k F' / 2 + k x^(k-1) F is the numerator of d(x^k y) / (dx / y).
  auto relation = [&](std::size_t k) {
    RPoly rel = scale(shift(dF, k), RatFunc(Rational(1, 2)));
    if (k > 0) rel = add(rel, scale(shift(Fx, k - 1), RatFunc(Rational(static_cast<long>(k)))));
    return rel;
  };
  auto reduce = [&](RPoly n) {
    while (n.size() > mu) {
      const std::size_t k = n.size() - 1 - mu;
      const RPoly rel = relation(k);
      n = add(n, scale(rel, -(n.back() / rel.back())));
    }
    n.resize(mu);
    return n;
  };

  ConnectionMatrix G;
  G.p = p;
  G.discriminant = critical_value_polynomial(p);
  G.entries.assign(mu, std::vector<RatFunc>(mu));
  for (std::size_t i = 0; i < mu; ++i) G.basis.push_back(i == 0 ? "dx/y" : i == 1 ? "x dx/y" : "x^" + std::to_string(i) + " dx/y");
  parallel_for(mu, [&](std::size_t i) {
    // oint x^i dx / y^3 = oint (x^i A + 2 (x^i B)') dx / y, and
    // d/dt (x^i / y) = -x^i / (2 y^3).
    const RPoly n = reduce(add(shift(A, i), scale(dx(shift(B, i)), RatFunc(Rational(2)))));
    for (std::size_t j = 0; j < mu; ++j) G.entries[i][j] = n[j] * RatFunc(Rational(-1, 2));
  });
  return G;
}

ConnectionMatrix picard_fuchs(const UPoly& p) {
  if (p.degree() < 3) throw InputError("Picard-Fuchs system needs deg p >= 3");
  const UPoly D = critical_value_polynomial(p);
  if (D.degree() != p.degree() - 1 || !is_squarefree(D)) throw InputError("non-generic p: repeated critical values");
  return gauss_manin_matrix(p);
}

ScalarEquation scalar_equation(const ConnectionMatrix& G, std::size_t component) {
  const std::size_t n = G.size();
  if (component >= n) throw InputError("component out of range");
  std::vector<std::vector<RatFunc>> r(n + 1, std::vector<RatFunc>(n));
  r[0][component] = RatFunc(Rational(1));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) {
      RatFunc v = r[k][j].derivative();
      for (std::size_t i = 0; i < n; ++i)
        if (!r[k][i].is_zero()) v += r[k][i] * G.entries[i][j];
      r[k + 1][j] = v;
    }
  // Least k with r_k in the span of r_0..r_(k-1); those are independent.
  for (std::size_t k = 1; k <= n; ++k) {
    // Rows j, columns r_0..r_(k-1), augmented with r_k.
    std::vector<std::vector<RatFunc>> a(n, std::vector<RatFunc>(k + 1));
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t l = 0; l < k; ++l) a[j][l] = r[l][j];
      a[j][k] = r[k][j];
    }
    std::size_t row = 0;
    for (std::size_t col = 0; col < k; ++col) {
      std::size_t p = row;
      while (p < n && a[p][col].is_zero()) ++p;
      if (p == n) throw NumericError("dependent cyclic vectors");
      std::swap(a[row], a[p]);
      const RatFunc inv = RatFunc(Rational(1)) / a[row][col];
      for (auto& x : a[row]) x *= inv;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == row || a[i][col].is_zero()) continue;
        const RatFunc c = a[i][col];
        for (std::size_t j = col; j <= k; ++j) a[i][j] -= c * a[row][j];
      }
      ++row;
    }
    bool consistent = true;
    for (std::size_t i = k; i < n; ++i) consistent = consistent && a[i][k].is_zero();
    if (!consistent) continue;
    ScalarEquation eq;
    for (std::size_t l = 0; l < k; ++l) eq.coeffs.push_back(a[l][k]);
    return eq;
  }
  throw NumericError("no scalar equation found");
}

std::vector<Complex> fiber_roots(const UPoly& p, Complex t) {
  auto c = p.complex_coeffs();
  c[0] += t;
  auto r = polynomial_roots(c);
  std::sort(r.begin(), r.end(), lex_less);
  return r;
}

ContourPeriod contour_period(const UPoly& p, Complex t, std::size_t a, std::size_t b,
                             const std::function<Complex(Complex, Complex)>& integrand, Complex y_reference,
                             double tol) {
  ContourPeriod out;
  out.roots = fiber_roots(p, t);
  const auto& R = out.roots;
  if (a >= R.size() || b >= R.size() || a == b) throw InputError("branch point indices out of range");
  auto c = p.complex_coeffs();
  c[0] += t;
  const Complex mid = 0.5 * (R[a] + R[b]), h = 0.5 * (R[b] - R[a]);
  if (std::abs(h) == 0) throw NumericError("branch points coincide: t is a critical value");
  // Confocal ellipse halfway (in elliptic radius) to the nearest other root.
  double rho = 1.0;
  for (std::size_t k = 0; k < R.size(); ++k) {
    if (k == a || k == b) continue;
    rho = std::min(rho, 0.5 * std::acosh((R[k] - mid) / h).real());
  }
  if (!(rho > 1e-6)) throw NumericError("another branch point lies on the segment between the pair");

  auto run = [&](std::size_t n, Complex& sum, double& scale, Complex& y0) {
    sum = 0;
    scale = 0;
    Complex prev = 0;
    for (std::size_t k = 0; k <= n; ++k) {
      const double th = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      const Complex w(rho, th);
      const Complex z = mid + h * std::cosh(w);
      Complex y = std::sqrt(horner(c, z));
      const Complex ref = k == 0 ? y_reference : prev;
      if (ref != Complex(0) && std::abs(-y - ref) < std::abs(y - ref)) y = -y;
      if (k > 0 && std::abs(y - prev) > 0.5 * std::abs(y)) return false;
      if (k == 0) y0 = y;
      if (k == n) return std::abs(y - y0) <= 1e-8 * std::abs(y0);
      const Complex v = integrand(z, y) * (Complex(0, 1) * h * std::sinh(w));
      sum += v;
      scale += std::abs(v);
      prev = y;
    }
    return false;
  };
  Complex prev_sum;
  bool have_prev = false;
  for (std::size_t n = 64; n <= (1u << 20); n *= 2) {
    Complex sum, y0;
    double scale;
    if (!run(n, sum, scale, y0)) {
      have_prev = false;
      continue;
    }
    const double w = 2 * std::numbers::pi / static_cast<double>(n);
    sum *= w;
    if (have_prev && std::abs(sum - prev_sum) <= tol * std::max(std::abs(sum), scale * w)) {
      out.value = sum;
      out.nodes = n;
      out.y_start = y0;
      return out;
    }
    prev_sum = sum;
    have_prev = true;
  }
  throw NumericError("contour period did not converge");
}

ContourPeriod contour_period(const UPoly& p, Complex t, std::size_t a, std::size_t b, const DifferentialForm& omega,
                             Complex y_reference, double tol) {
  if (omega.nvars() != 2 || omega.degree() != 1) throw InputError("omega must be a plane 1-form");
  const NumericPoly A(omega.coefficient(0)), B(omega.coefficient(1));
  const auto dp = p.derivative().complex_coeffs();
  return contour_period(
      p, t, a, b, [&](Complex x, Complex y) { return A(x, y) + B(x, y) * horner(dp, x) / (2.0 * y); }, y_reference,
      tol);
}

BrieskornBasis brieskorn_basis(int m) {
  if (m < 2) throw InputError("Brieskorn family needs m >= 2");
  BrieskornBasis B;
  B.m = m;
  for (int i = 0; i + 1 < m; ++i) {
    B.labels.push_back(i == 0 ? "y dx" : i == 1 ? "x*y dx" : "x^" + std::to_string(i) + "*y dx");
    Poly c = Poly::monomial({static_cast<std::uint32_t>(i), 1u}, 1);
    B.forms.push_back(DifferentialForm::from_dx_dy(c, Poly(2)));
  }
  return B;
}

int brieskorn_family(const Poly& f) {
  if (f.nvars() != 2) throw InputError("Brieskorn reduction needs a plane polynomial");
  const int m = f.degree_in(0);
  if (m < 2) throw InputError("f is not of the form y^2 - x^m");
  Poly g(2);
  g.add_term({0, 2}, 1);
  g.add_term({static_cast<std::uint32_t>(m), 0}, -1);
  if (!(g == f)) throw InputError("f is not of the form y^2 - x^m");
  return m;
}

std::vector<UPoly> brieskorn_reduce(int m, const DifferentialForm& omega) {
  if (m < 2) throw InputError("Brieskorn family needs m >= 2");
  if (omega.nvars() != 2 || omega.degree() != 1) throw InputError("omega must be a plane 1-form");
  // Coefficients of x^a y^b dx, each a polynomial in t.
  std::map<std::pair<unsigned, unsigned>, UPoly> dx;
  auto add = [&](unsigned a, unsigned b, const UPoly& c) {
    auto& slot = dx[{a, b}];
    slot += c;
  };
  for (const auto& [e, c] : omega.coefficient(0).terms()) add(e[0], e[1], UPoly::constant(c));
  // x^a y^b dy = d(x^a y^(b+1)) / (b+1) - a/(b+1) x^(a-1) y^(b+1) dx.
  for (const auto& [e, c] : omega.coefficient(1).terms())
    if (e[0] > 0) add(e[0] - 1, e[1] + 1, UPoly::constant(-c * Rational(e[0]) / Rational(e[1] + 1)));

  const UPoly t = UPoly::monomial(1);
  const unsigned mm = static_cast<unsigned>(m);
  // y^2 = f + x^m, and f acts as t.
  while (true) {
    auto it = std::find_if(dx.begin(), dx.end(), [](const auto& kv) { return kv.first.second >= 2 && !kv.second.is_zero(); });
    if (it == dx.end()) break;
    const auto [a, b] = it->first;
    const UPoly c = it->second;
    dx.erase(it);
    add(a, b - 2, c * t);
    add(a + mm, b - 2, c);
  }
  // x^(k+m-1) y dx = -2k / (3m + 2k) t x^(k-1) y dx, from x^k y df.
  std::vector<UPoly> out(mm - 1);
  std::map<unsigned, UPoly> ydx;
  for (const auto& [ab, c] : dx)
    if (ab.second == 1 && !c.is_zero()) ydx[ab.first] += c;
  while (!ydx.empty()) {
    auto it = std::prev(ydx.end());
    const unsigned a = it->first;
    const UPoly c = it->second;
    ydx.erase(it);
    if (a + 1 < mm) {
      out[a] += c;
      continue;
    }
    const unsigned k = a + 1 - mm;
    if (k == 0) continue;
    Rational r(-2 * static_cast<long>(k), 3 * static_cast<long>(mm) + 2 * static_cast<long>(k));
    r.canonicalize();
    ydx[k - 1] += c * t * r;
  }
  return out;
}

} // namespace fol
