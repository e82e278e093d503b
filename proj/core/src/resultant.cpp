#include "foliation/resultant.hpp"

#include "foliation/errors.hpp"

namespace fol {

Poly determinant(std::vector<std::vector<Poly>> m) {
  const std::size_t n = m.size();
  if (n == 0) throw InputError("determinant of an empty matrix");
  const std::size_t nv = m[0][0].nvars();
  Poly prev = Poly::constant(nv, 1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) return Poly(nv);
      std::swap(m[k], m[r]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Poly v = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        m[i][j] = v.divide_exact(prev);
      }
      m[i][k] = Poly(nv);
    }
    prev = m[k][k];
  }
  Poly d = m[n - 1][n - 1];
  return negate ? -d : d;
}

Poly resultant(const Poly& a, const Poly& b, std::size_t var) {
  if (a.nvars() != b.nvars()) throw InputError("resultant: variable count mismatch");
  if (a.is_zero() || b.is_zero()) return Poly(a.nvars());
  const auto ca = a.coefficients_in(var);
  const auto cb = b.coefficients_in(var);
  const std::size_t m = ca.size() - 1, n = cb.size() - 1;
  if (m == 0 && n == 0) return Poly::constant(a.nvars(), 1);
  if (m == 0) return ca[0].pow(static_cast<unsigned>(n));
  if (n == 0) return cb[0].pow(static_cast<unsigned>(m));
  const std::size_t size = m + n;
  std::vector<std::vector<Poly>> syl(size, std::vector<Poly>(size, Poly(a.nvars())));
  // Rows 0..n-1 hold shifted copies of a, rows n..n+m-1 of b, leading
  // coefficient first.
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k <= m; ++k) syl[r][r + k] = ca[m - k];
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t k = 0; k <= n; ++k) syl[n + r][r + k] = cb[n - k];
  return determinant(std::move(syl));
}

bool have_common_factor(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return true;
  for (std::size_t v = 0; v < a.nvars(); ++v) {
    if (a.degree_in(v) <= 0 && b.degree_in(v) <= 0) continue;
    if (resultant(a, b, v).is_zero()) return true;
  }
  return false;
}

} // namespace fol
