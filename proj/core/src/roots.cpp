#include "foliation/roots.hpp"

#include "foliation/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace fol {

Complex horner(std::span<const Complex> coeffs, Complex x) {
  Complex s = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * x + *it;
  return s;
}

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs) {
  std::size_t n = coeffs.size();
  while (n > 0 && coeffs[n - 1] == Complex(0)) --n;
  if (n == 0) throw InputError("roots of the zero polynomial");
  const std::size_t deg = n - 1;
  if (deg == 0) return {};
  const Complex lead = coeffs[deg];
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (std::size_t i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[i] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  if (solver.info() != Eigen::Success) throw NumericError("companion eigenvalue solver failed");

  std::vector<Complex> deriv(deg);
  for (std::size_t k = 1; k <= deg; ++k) deriv[k - 1] = coeffs[k] * static_cast<double>(k);
  std::vector<Complex> roots(deg);
  for (std::size_t i = 0; i < deg; ++i) {
    Complex z = solver.eigenvalues()[static_cast<Eigen::Index>(i)];
    for (int it = 0; it < 8; ++it) {
      const Complex d = horner(deriv, z);
      if (std::abs(d) == 0) break;
      const Complex step = horner(coeffs.first(n), z) / d;
      z -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    roots[i] = z;
  }
  std::sort(roots.begin(), roots.end(), lex_less);
  return roots;
}

namespace {

constexpr mp_bitcnt_t kWorkBits = 256;

struct MpComplex {
  mpf_class re{0, kWorkBits}, im{0, kWorkBits};
};

MpComplex mul(const MpComplex& a, const MpComplex& b) {
  MpComplex r;
  r.re = a.re * b.re - a.im * b.im;
  r.im = a.re * b.im + a.im * b.re;
  return r;
}

MpComplex div(const MpComplex& a, const MpComplex& b) {
  MpComplex r;
  const mpf_class n(b.re * b.re + b.im * b.im, kWorkBits);
  r.re = (a.re * b.re + a.im * b.im) / n;
  r.im = (a.im * b.re - a.re * b.im) / n;
  return r;
}

double mag(const MpComplex& a) { return std::hypot(a.re.get_d(), a.im.get_d()); }

// Aberth-Ehrlich iteration in 256-bit arithmetic on exact coefficients.
// Clustered roots of resultants with large coefficients are resolved far
// beyond what double evaluation allows.
void aberth_refine(const UPoly& p, std::vector<Complex>& roots) {
  const std::size_t n = roots.size();
  std::vector<mpf_class> c, dc;
  for (const auto& q : p.coeffs()) c.emplace_back(q, kWorkBits);
  for (std::size_t k = 1; k < c.size(); ++k) dc.emplace_back(c[k] * static_cast<unsigned long>(k), kWorkBits);
  std::vector<MpComplex> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i].re = roots[i].real();
    z[i].im = roots[i].imag();
  }
  auto eval = [](const std::vector<mpf_class>& co, const MpComplex& x) {
    MpComplex s;
    for (auto it = co.rbegin(); it != co.rend(); ++it) {
      s = mul(s, x);
      s.re += *it;
    }
    return s;
  };
  std::vector<bool> done(n, false);
  for (int it = 0; it < 200; ++it) {
    bool all = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      const MpComplex pv = eval(c, z[k]), dv = eval(dc, z[k]);
      if (mag(dv) == 0.0 && mag(pv) == 0.0) {
        done[k] = true;
        continue;
      }
      const MpComplex w = div(pv, dv);
      MpComplex sum;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        MpComplex d;
        d.re = z[k].re - z[j].re;
        d.im = z[k].im - z[j].im;
        if (mag(d) == 0.0) d.re += mpf_class(1e-30, kWorkBits);
        MpComplex one;
        one.re = 1;
        const MpComplex inv = div(one, d);
        sum.re += inv.re;
        sum.im += inv.im;
      }
      MpComplex den = mul(w, sum);
      den.re = 1 - den.re;
      den.im = -den.im;
      const MpComplex step = div(w, den);
      z[k].re -= step.re;
      z[k].im -= step.im;
      if (mag(step) <= 1e-40 * std::max(1.0, mag(z[k]))) done[k] = true;
      else all = false;
    }
    if (all) break;
  }
  for (std::size_t i = 0; i < n; ++i) roots[i] = Complex(z[i].re.get_d(), z[i].im.get_d());
}

} // namespace

std::vector<Complex> distinct_roots(const UPoly& p) {
  if (p.is_zero()) throw InputError("roots of the zero polynomial");
  const UPoly sf = squarefree_part(p);
  auto roots = polynomial_roots(sf.complex_coeffs());
  aberth_refine(sf, roots);
  std::sort(roots.begin(), roots.end(), lex_less);
  return roots;
}

} // namespace fol
