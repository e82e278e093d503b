#include "foliation/monodromy.hpp"

#include "foliation/errors.hpp"
#include "foliation/parallel.hpp"
#include "foliation/resultant.hpp"
#include "foliation/roots.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>

namespace fol {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Integer IntMatrix::determinant() const {
  if (r_ != c_) throw InputError("determinant of a non-square matrix");
  if (r_ == 0) return 1;
  // Bareiss: every division is exact.
  std::vector<Integer> a = a_;
  const std::size_t n = r_;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p * n + k] == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i * n + j] = v;
      }
      a[i * n + k] = 0;
    }
    prev = a[k * n + k];
  }
  return sign * a[n * n - 1];
}

IntVector IntMatrix::apply(const IntVector& v) const {
  if (v.size() != c_) throw InputError("vector size does not match matrix");
  IntVector out(r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j)
      if ((*this)(i, j) != 0) out[i] += (*this)(i, j) * v[j];
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.c_ != b.r_) throw InputError("matrix shapes do not match");
  IntMatrix m(a.r_, b.c_);
  for (std::size_t i = 0; i < a.r_; ++i)
    for (std::size_t k = 0; k < a.c_; ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.c_; ++j) m(i, j) += a(i, k) * b(k, j);
    }
  return m;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix m = a;
  for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] -= b.a_[i];
  return m;
}

std::vector<IntVector> hermite_basis(std::vector<IntVector> rows) {
  if (rows.empty()) return rows;
  const std::size_t n = rows.front().size();
  std::vector<IntVector> out;
  std::size_t col = 0;
  while (col < n && !rows.empty()) {
    // Euclid on column col until a single row has a nonzero entry.
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col]))) best = i;
      if (best == rows.size()) break;
      bool done = true;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == best || rows[i][col] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(), rows[best][col].get_mpz_t());
        for (std::size_t j = col; j < n; ++j) rows[i][j] -= q * rows[best][j];
        if (rows[i][col] != 0) done = false;
      }
      if (done) {
        IntVector piv = rows[best];
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best));
        if (piv[col] < 0)
          for (auto& x : piv) x = -x;
        out.push_back(std::move(piv));
        break;
      }
    }
    std::erase_if(rows, [](const IntVector& r) { return std::all_of(r.begin(), r.end(), [](const Integer& x) { return x == 0; }); });
    ++col;
  }
  // Reduce entries above each pivot.
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::size_t pc = 0;
    while (out[k][pc] == 0) ++pc;
    for (std::size_t i = 0; i < k; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), out[i][pc].get_mpz_t(), out[k][pc].get_mpz_t());
      if (q != 0)
        for (std::size_t j = pc; j < n; ++j) out[i][j] -= q * out[k][j];
    }
  }
  return out;
}

bool in_lattice(const std::vector<IntVector>& hnf, const IntVector& v) {
  IntVector r = v;
  for (const auto& row : hnf) {
    std::size_t pc = 0;
    while (row[pc] == 0) ++pc;
    for (std::size_t j = 0; j < pc; ++j)
      if (r[j] != 0) return false;
    if (r[pc] % row[pc] != 0) return false;
    const Integer q = r[pc] / row[pc];
    for (std::size_t j = pc; j < r.size(); ++j) r[j] -= q * row[j];
  }
  return std::all_of(r.begin(), r.end(), [](const Integer& x) { return x == 0; });
}

Integer HomologyLattice::pairing(const IntVector& a, const IntVector& b) const {
  Integer s = 0;
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < rank; ++j)
      if (intersection(i, j) != 0) s += a[i] * intersection(i, j) * b[j];
  return s;
}

UPoly critical_value_polynomial(const UPoly& p) {
  const Poly px = p.to_poly(2, 0);
  const Poly g = px + Poly::variable(2, 1);
  return UPoly::from_poly(resultant(g, px.diff(0), 0), 1);
}

namespace {

constexpr double kPi = std::numbers::pi;
// Directions from the base closer than this count as collinear.
constexpr double kAngleTie = 1e-12;

HomologyLattice chain_lattice(std::size_t rank) {
  HomologyLattice L;
  L.rank = rank;
  L.intersection = IntMatrix(rank, rank);
  for (std::size_t i = 0; i < rank; ++i) {
    L.labels.push_back("gamma_" + std::to_string(i + 1));
    if (i + 1 < rank) {
      L.intersection(i, i + 1) = 1;
      L.intersection(i + 1, i) = -1;
    }
  }
  return L;
}

double projection(Complex z, double theta) { return (z * std::polar(1.0, -theta)).real(); }
double height(Complex z, double theta) { return (z * std::polar(1.0, -theta)).imag(); }

// Lexicographic (projection, height): at theta = 0 this is the (Re, Im)
// order, so exact conjugate pairs are never tied.
std::vector<std::size_t> projection_order(const std::vector<Complex>& r, double theta) {
  std::vector<std::size_t> o(r.size());
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = i;
  std::sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) {
    const double pa = projection(r[a], theta), pb = projection(r[b], theta);
    if (pa != pb) return pa < pb;
    return height(r[a], theta) < height(r[b], theta);
  });
  return o;
}

struct BraidAmbiguity {};

// t(s) for s in [0, 1].
using Piece = std::function<Complex(double)>;

Piece segment(Complex a, Complex b) {
  return [a, b](double s) { return a + s * (b - a); };
}

Piece arc(Complex center, double radius, double theta0, double sweep) {
  return [=](double s) { return center + std::polar(radius, theta0 + s * sweep); };
}

// Transport of the chain frame of straight arcs between consecutive roots in
// projection order: transported start frame = current frame * transport().
class Tracker {
public:
  Tracker(const UPoly& p, double theta, const std::vector<Complex>& roots)
      : theta_(theta), roots_(roots), A_(IntMatrix::identity(roots.size() - 1)),
        Ainv_(IntMatrix::identity(roots.size() - 1)), L_(chain_lattice(roots.size() - 1)) {
    c_ = p.complex_coeffs();
    for (std::size_t k = 1; k < c_.size(); ++k) dc_.push_back(static_cast<double>(k) * c_[k]);
    order_ = projection_order(roots_, theta_);
    for (auto z : roots_) scale_ = std::max(scale_, std::abs(z));
  }

  const std::vector<Complex>& roots() const { return roots_; }
  const std::vector<std::size_t>& order() const { return order_; }
  const IntMatrix& transport() const { return A_; }
  const IntMatrix& transport_inverse() const { return Ainv_; }
  std::size_t steps() const { return steps_; }

  // Roots of p(x) + t(s).
  void follow(const Piece& piece) {
    Complex t0 = piece(0);
    walk([&](double s, std::vector<Complex>& next) {
      const Complex t1 = piece(s);
      const bool ok = newton(t0, t1, next);
      if (ok) t0 = t1;
      return ok;
    });
  }

  // Explicitly given root configurations, continuous in s.
  void follow_roots(const std::function<std::vector<Complex>(double)>& conf) {
    walk([&](double s, std::vector<Complex>& next) {
      next = conf(s);
      return small_moves(next);
    });
  }

private:
  template <class Try>
  void walk(Try&& attempt) {
    double s = 0, h = 1.0 / 64;
    while (s < 1) {
      h = std::min(h, 1 - s);
      std::vector<Complex> next;
      if (!attempt(s + h, next)) {
        h *= 0.5;
        if (h < 1e-13) throw NumericError("root tracking step collision");
        continue;
      }
      const auto ord = projection_order(next, theta_);
      std::vector<Swap> swaps;
      if (!resolve(ord, next, swaps, h < 1e-9)) {
        h *= 0.5;
        continue;
      }
      for (const auto& sw : swaps) cross(sw, next);
      roots_ = std::move(next);
      order_ = ord;
      s += h;
      ++steps_;
      h = std::min(2 * h, 0.125);
    }
  }

  Complex eval(const std::vector<Complex>& c, Complex x) const {
    Complex v = 0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
  }

  std::vector<double> separations() const {
    const std::size_t m = roots_.size();
    std::vector<double> sep(m, INFINITY);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (i != j) sep[i] = std::min(sep[i], std::abs(roots_[i] - roots_[j]));
    return sep;
  }

  bool small_moves(const std::vector<Complex>& next) const {
    const auto sep = separations();
    for (std::size_t i = 0; i < next.size(); ++i)
      if (std::abs(next[i] - roots_[i]) > 0.25 * sep[i]) return false;
    double min_sep = INFINITY;
    for (std::size_t i = 0; i < next.size(); ++i)
      for (std::size_t j = i + 1; j < next.size(); ++j) min_sep = std::min(min_sep, std::abs(next[i] - next[j]));
    if (min_sep < 1e-9) throw NumericError("root tracking step collision: two roots within 1e-9");
    return true;
  }

  bool newton(Complex t0, Complex t1, std::vector<Complex>& next) const {
    const std::size_t m = roots_.size();
    next.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      Complex x = roots_[i];
      const Complex d0 = eval(dc_, x);
      if (std::abs(d0) == 0) return false;
      x -= (t1 - t0) / d0;
      bool ok = false;
      for (int it = 0; it < 30; ++it) {
        const Complex f = eval(c_, x) + t1, d = eval(dc_, x);
        if (std::abs(d) == 0) return false;
        const Complex dx = f / d;
        x -= dx;
        if (std::abs(dx) <= 1e-14 * std::max(1.0, std::abs(x))) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
      next[i] = x;
    }
    return small_moves(next);
  }

  struct Swap {
    std::size_t k, a, b;
    double lam;
  };

  // Crossing parameter of roots a, b on the linear interpolation of the step.
  double crossing(std::size_t a, std::size_t b, const std::vector<Complex>& next) const {
    const double d0 = projection(roots_[a], theta_) - projection(roots_[b], theta_);
    const double d1 = projection(next[a], theta_) - projection(next[b], theta_);
    return d0 == d1 ? 0.5 : d0 / (d0 - d1);
  }

  // Adjacent transpositions taking the old order to `ord`, in crossing
  // order.  Without `general` only disjoint swaps are accepted, so steps
  // with several interacting crossings are refined first.
  bool resolve(const std::vector<std::size_t>& ord, const std::vector<Complex>& next, std::vector<Swap>& swaps,
               bool general) const {
    std::vector<std::size_t> rank(ord.size());
    for (std::size_t k = 0; k < ord.size(); ++k) rank[ord[k]] = k;
    std::vector<std::size_t> cur = order_;
    std::vector<bool> touched(ord.size(), false);
    while (cur != ord) {
      std::size_t best = ord.size();
      double lam = INFINITY;
      bool tie = false;
      for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
        if (rank[cur[k]] < rank[cur[k + 1]]) continue;
        const double l = crossing(cur[k], cur[k + 1], next);
        if (best != ord.size() && std::fabs(l - lam) < 1e-12 && k == best + 1) tie = true;
        if (l < lam) {
          lam = l;
          best = k;
          tie = false;
        }
      }
      if (tie) throw BraidAmbiguity{};
      if (!general && (touched[best] || touched[best + 1])) return false;
      touched[best] = touched[best + 1] = true;
      swaps.push_back({best, cur[best], cur[best + 1], lam});
      std::swap(cur[best], cur[best + 1]);
    }
    return true;
  }

  void cross(const Swap& sw, const std::vector<Complex>& next) {
    const double lam = sw.lam;
    const double va = (1 - lam) * height(roots_[sw.a], theta_) + lam * height(next[sw.a], theta_);
    const double vb = (1 - lam) * height(roots_[sw.b], theta_) + lam * height(next[sw.b], theta_);
    if (std::fabs(va - vb) < 1e-9 * scale_) throw BraidAmbiguity{};
    IntVector e(L_.rank);
    e[sw.k] = 1;
    // Left root passing below: counterclockwise half twist.
    if (va < vb) {
      A_ = twist(L_, e) * A_;
      Ainv_ = Ainv_ * twist_inverse(L_, e);
    } else {
      A_ = twist_inverse(L_, e) * A_;
      Ainv_ = Ainv_ * twist(L_, e);
    }
  }

  double theta_;
  std::vector<Complex> c_, dc_;
  std::vector<Complex> roots_;
  std::vector<std::size_t> order_;
  IntMatrix A_, Ainv_;
  HomologyLattice L_;
  double scale_ = 1;
  std::size_t steps_ = 0;
};

// Base frame (theta = 0) = frame(theta) * B, from rigidly rotating the
// roots by -theta under the theta = 0 order.  Returns {B, B^-1}.
std::pair<IntMatrix, IntMatrix> frame_change(const FibrationModel& M, double theta) {
  const std::size_t n = M.lattice.rank;
  if (theta == 0) return {IntMatrix::identity(n), IntMatrix::identity(n)};
  Tracker tr(M.p, 0.0, M.branch_points);
  tr.follow_roots([&](double s) {
    std::vector<Complex> r = M.branch_points;
    for (auto& z : r) z *= std::polar(1.0, -s * theta);
    return r;
  });
  return {tr.transport(), tr.transport_inverse()};
}

void check_closure(const std::vector<Complex>& start, const std::vector<Complex>& end) {
  for (auto z : end) {
    double d = INFINITY;
    for (auto w : start) d = std::min(d, std::abs(z - w));
    if (d > 1e-8 * std::max(1.0, std::abs(z))) throw NumericError("root tracking did not close up");
  }
}

std::vector<Complex> roots_at(const UPoly& p, Complex t) {
  auto c = p.complex_coeffs();
  c[0] += t;
  return polynomial_roots(c);
}

double min_other_distance(const std::vector<Complex>& C, std::size_t j) {
  double d = INFINITY;
  for (std::size_t i = 0; i < C.size(); ++i)
    if (i != j) d = std::min(d, std::abs(C[i] - C[j]));
  return d;
}

// Path from the base point to the point at distance r_j before c_j on the
// straight line.  Critical values close to the line are bypassed on the side
// the line already leaves them; exactly collinear ones are passed above.
std::vector<Piece> approach(const FibrationModel& M, std::size_t j) {
  const auto& C = M.critical_values;
  const Complex b = M.base, c = C[j];
  const double D = std::abs(c - b);
  const Complex dir = (c - b) / D;
  const double rj = 0.1 * min_other_distance(C, j);
  const double stop = D - rj;
  struct Detour {
    double enter, leave;
    Complex center;
    double radius;
    bool left;
  };
  std::vector<Detour> ds;
  for (std::size_t i = 0; i < C.size(); ++i) {
    if (i == j) continue;
    const double rho = std::min(0.3 * min_other_distance(C, i), 0.5 * std::abs(C[i] - b));
    const Complex w = (C[i] - b) / dir;
    const double along = w.real(), off = w.imag();
    if (std::fabs(off) >= rho || along <= 0 || along >= stop) continue;
    const double half = std::sqrt(rho * rho - off * off);
    const bool left = std::arg(w) > kAngleTie;
    ds.push_back({along - half, along + half, C[i], rho, left});
  }
  std::sort(ds.begin(), ds.end(), [](const Detour& x, const Detour& y) { return x.enter < y.enter; });
  std::vector<Piece> out;
  double pos = 0;
  for (const auto& d : ds) {
    if (d.enter > pos) out.push_back(segment(b + pos * dir, b + d.enter * dir));
    const Complex p0 = b + d.enter * dir, p1 = b + d.leave * dir;
    const double a0 = std::arg(p0 - d.center), a1 = std::arg(p1 - d.center);
    // Counterclockwise about the center keeps it on the left of the path.
    double sweep = a1 - a0;
    if (d.left) {
      while (sweep <= 0) sweep += 2 * kPi;
      while (sweep > 2 * kPi) sweep -= 2 * kPi;
    } else {
      while (sweep >= 0) sweep -= 2 * kPi;
      while (sweep < -2 * kPi) sweep += 2 * kPi;
    }
    out.push_back(arc(d.center, d.radius, a0, sweep));
    pos = d.leave;
  }
  out.push_back(segment(b + pos * dir, b + stop * dir));
  return out;
}

Piece reversed(const Piece& p) {
  return [p](double s) { return p(1 - s); };
}

MonodromyOperator generator_with_angle(const FibrationModel& M, std::size_t j, double theta) {
  const auto in = approach(M, j);
  Tracker tr(M.p, theta, M.branch_points);
  for (const auto& p : in) tr.follow(p);
  const Complex c = M.critical_values[j];
  const Complex s0 = in.back()(1.0);
  // The colliding pair: the two closest roots at the circle.
  const auto& r = tr.roots();
  std::size_t ia = 0, ib = 1;
  double best = INFINITY;
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b2 = a + 1; b2 < r.size(); ++b2)
      if (std::abs(r[a] - r[b2]) < best) {
        best = std::abs(r[a] - r[b2]);
        ia = a;
        ib = b2;
      }
  const auto& ord = tr.order();
  const auto pa = std::find(ord.begin(), ord.end(), ia) - ord.begin();
  const auto pb = std::find(ord.begin(), ord.end(), ib) - ord.begin();
  if (std::abs(pa - pb) != 1) throw BraidAmbiguity{};
  IntVector e(M.lattice.rank);
  e[static_cast<std::size_t>(std::min(pa, pb))] = 1;
  MonodromyOperator op;
  op.critical_index = j;
  op.projection_angle = theta;
  op.vanishing_cycle = tr.transport_inverse().apply(e);

  tr.follow(arc(c, std::abs(s0 - c), std::arg(s0 - c), 2 * kPi));
  for (auto it = in.rbegin(); it != in.rend(); ++it) tr.follow(reversed(*it));
  check_closure(M.branch_points, tr.roots());
  const IntMatrix Mt = tr.transport();
  if (!(Mt == twist(chain_lattice(M.lattice.rank), op.vanishing_cycle))) throw BraidAmbiguity{};
  const auto [B, Binv] = frame_change(M, theta);
  op.matrix = Binv * Mt * B;
  op.vanishing_cycle = Binv.apply(op.vanishing_cycle);
  return op;
}

} // namespace

FibrationModel build_model(const UPoly& p, std::optional<Complex> base) {
  if (p.degree() < 3) throw InputError("hyperelliptic model needs deg p >= 3");
  FibrationModel M;
  M.p = p;
  M.m = p.degree();
  const UPoly D = critical_value_polynomial(p);
  if (D.degree() != M.m - 1 || !is_squarefree(D))
    throw InputError("non-generic p: repeated critical values");
  M.critical_values = distinct_roots(D);
  for (auto& c : M.critical_values)
    if (std::fabs(c.imag()) < 1e-14 * std::max(1.0, std::abs(c))) c = Complex(c.real(), 0.0);
  if (base) {
    M.base = *base;
    if (std::abs(D.eval(M.base)) == 0) throw InputError("base point is a critical value");
  } else {
    double lo = INFINITY;
    for (auto c : M.critical_values) lo = std::min(lo, c.real());
    M.base = Complex(std::floor(lo) - 1.0, 0.0);
  }
  M.branch_points = roots_at(p, M.base);
  if (M.base.imag() == 0) {
    // Real fiber equation: make conjugate pairs exact so the (Re, Im) order
    // is stable and tracking along real bases keeps the symmetry.
    auto& r = M.branch_points;
    for (auto& z : r)
      if (std::fabs(z.imag()) < 1e-12 * std::max(1.0, std::abs(z))) z = Complex(z.real(), 0.0);
    for (auto& z : r) {
      if (z.imag() <= 0) continue;
      auto it = std::min_element(r.begin(), r.end(), [&](Complex a, Complex b) {
        return std::abs(a - std::conj(z)) < std::abs(b - std::conj(z));
      });
      const Complex mid = 0.5 * (z + std::conj(*it));
      z = mid;
      *it = std::conj(mid);
    }
  }
  std::sort(M.branch_points.begin(), M.branch_points.end(), lex_less);
  M.lattice = chain_lattice(static_cast<std::size_t>(M.m - 1));
  return M;
}

IntMatrix twist(const HomologyLattice& L, const IntVector& delta) {
  // Column i is the image of gamma_i.
  IntMatrix T = IntMatrix::identity(L.rank);
  for (std::size_t i = 0; i < L.rank; ++i) {
    IntVector e(L.rank);
    e[i] = 1;
    const Integer k = L.pairing(e, delta);
    if (k == 0) continue;
    for (std::size_t r = 0; r < L.rank; ++r) T(r, i) += k * delta[r];
  }
  return T;
}

IntMatrix twist_inverse(const HomologyLattice& L, const IntVector& delta) {
  IntVector neg = delta;
  IntMatrix T = IntMatrix::identity(L.rank);
  for (std::size_t i = 0; i < L.rank; ++i) {
    IntVector e(L.rank);
    e[i] = 1;
    const Integer k = L.pairing(e, delta);
    if (k == 0) continue;
    for (std::size_t r = 0; r < L.rank; ++r) T(r, i) -= k * delta[r];
  }
  return T;
}

std::vector<MonodromyOperator> monodromy_generators(const FibrationModel& M) {
  return monodromy_generators(M, kProjectionAngles);
}

std::vector<MonodromyOperator> monodromy_generators(const FibrationModel& M, const std::vector<double>& angles) {
  const std::size_t n = M.critical_values.size();
  std::vector<MonodromyOperator> ops(n);
  parallel_for(n, [&](std::size_t j) {
    for (double theta : angles) {
      try {
        ops[j] = generator_with_angle(M, j, theta);
        return;
      } catch (const BraidAmbiguity&) {
      }
    }
    throw NumericError("braid word extraction ambiguous for every projection angle");
  });
  return ops;
}

IntMatrix monodromy_at_infinity(const FibrationModel& M) { return monodromy_at_infinity(M, kProjectionAngles); }

IntMatrix monodromy_at_infinity(const FibrationModel& M, const std::vector<double>& angles) {
  double R = std::abs(M.base);
  for (auto c : M.critical_values) R = std::max(R, std::abs(c));
  R = 2 * R + 1;
  for (double theta : angles) {
    try {
      Tracker tr(M.p, theta, M.branch_points);
      const Complex far(-R, 0.0);
      tr.follow(segment(M.base, far));
      tr.follow(arc(0.0, R, kPi, 2 * kPi));
      tr.follow(segment(far, M.base));
      check_closure(M.branch_points, tr.roots());
      const auto [B, Binv] = frame_change(M, theta);
      return Binv * tr.transport() * B;
    } catch (const BraidAmbiguity&) {
    }
  }
  throw NumericError("braid word extraction ambiguous for every projection angle");
}

std::vector<std::size_t> angular_order(const FibrationModel& M) {
  const auto& C = M.critical_values;
  std::vector<std::size_t> o(C.size());
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = i;
  // Paths pass above nearer collinear values, as if the base sat slightly
  // higher: ties go to the nearer value first.
  std::sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) {
    const double ta = std::arg(C[a] - M.base), tb = std::arg(C[b] - M.base);
    if (std::fabs(ta - tb) > kAngleTie) return ta < tb;
    return std::abs(C[a] - M.base) < std::abs(C[b] - M.base);
  });
  return o;
}

namespace {

IntMatrix unimodular_inverse(const IntMatrix& A) {
  const std::size_t n = A.rows();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = A(i, j);
    a[i][n + i] = 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) throw InputError("operator is not invertible");
    std::swap(a[k], a[p]);
    const Rational piv = a[k][k];
    for (auto& x : a[k]) x /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a[i][k] == 0) continue;
      const Rational f = a[i][k];
      for (std::size_t j = 0; j < 2 * n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  IntMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][n + j].get_den() != 1) throw InputError("operator is not unimodular");
      inv(i, j) = a[i][n + j].get_num();
    }
  return inv;
}

} // namespace

OrbitReport orbit_span(const std::vector<IntMatrix>& operators, const HomologyLattice& L, const IntVector& start) {
  if (start.size() != L.rank || std::all_of(start.begin(), start.end(), [](const Integer& x) { return x == 0; }))
    throw InputError("orbit start must be a nonzero vector of the lattice rank");
  std::vector<IntMatrix> all;
  for (const auto& M : operators) {
    all.push_back(M);
    all.push_back(unimodular_inverse(M));
  }
  OrbitReport rep;
  rep.start = start;
  rep.generators = operators.size();
  rep.basis = hermite_basis({start});
  // Invariance of the lattice only needs to be checked on a basis.
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t k = 0; k < rep.basis.size() && !grew; ++k)
      for (const auto& M : all) {
        const IntVector w = M.apply(rep.basis[k]);
        if (!in_lattice(rep.basis, w)) {
          auto rows = rep.basis;
          rows.push_back(w);
          rep.basis = hermite_basis(std::move(rows));
          grew = true;
          break;
        }
      }
  }
  rep.rank = rep.basis.size();
  return rep;
}

OrbitReport orbit_span(const std::vector<MonodromyOperator>& operators, const HomologyLattice& L,
                       const IntVector& start) {
  std::vector<IntMatrix> ms;
  for (const auto& op : operators) ms.push_back(op.matrix);
  return orbit_span(ms, L, start);
}

std::vector<IntVector> orbit_ball(const std::vector<MonodromyOperator>& operators, const HomologyLattice& L,
                                  const IntVector& start, std::size_t max_length) {
  std::vector<IntMatrix> all;
  for (const auto& op : operators) {
    all.push_back(twist(L, op.vanishing_cycle));
    all.push_back(twist_inverse(L, op.vanishing_cycle));
  }
  std::set<IntVector> seen{start};
  std::vector<IntVector> frontier{start};
  for (std::size_t len = 0; len < max_length && !frontier.empty(); ++len) {
    std::vector<IntVector> next;
    for (const auto& v : frontier)
      for (const auto& M : all) {
        IntVector w = M.apply(v);
        if (seen.insert(w).second) next.push_back(std::move(w));
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

std::optional<IntVector> cycle_at_infinity(const FibrationModel& M) {
  if (M.m % 2 == 1) return std::nullopt;
  IntVector v(M.lattice.rank);
  for (std::size_t i = 0; i < v.size(); i += 2) v[i] = 1;
  return v;
}

} // namespace fol
