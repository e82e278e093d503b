#include "foliation/singularities.hpp"

#include "foliation/errors.hpp"
#include "foliation/parallel.hpp"
#include "foliation/resultant.hpp"
#include "foliation/roots.hpp"

#include <algorithm>
#include <cmath>

namespace fol {

const char* class_name(SingularClass c) {
  switch (c) {
    case SingularClass::NonReduced: return "non-reduced";
    case SingularClass::CenterCandidate: return "center-candidate";
    case SingularClass::ResonantOther: return "resonant-other";
    case SingularClass::GenericReduced: return "generic-reduced";
    case SingularClass::DicriticalCandidate: return "dicritical-candidate";
  }
  return "non-reduced";
}

namespace {

struct Field {
  PlaneFunction P, Q;
  explicit Field(const FoliationRecord& F) : P(F.P), Q(F.Q) {}

  double residual(const ComplexPoint& z) const {
    return std::max(std::abs(P.value(z[0], z[1])), std::abs(Q.value(z[0], z[1])));
  }
  double scale(const ComplexPoint& z) const {
    return std::max({1.0, P.value.magnitude(z[0], z[1]), Q.value.magnitude(z[0], z[1])});
  }
  ComplexMatrix2 jacobian(const ComplexPoint& z) const {
    return {{{P.dx(z[0], z[1]), P.dy(z[0], z[1])}, {Q.dx(z[0], z[1]), Q.dy(z[0], z[1])}}};
  }
};

double norm(const ComplexPoint& z) { return std::max(std::abs(z[0]), std::abs(z[1])); }

double dist(const ComplexPoint& a, const ComplexPoint& b) {
  return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
}

// Newton on (P, Q); linear convergence at non-reduced points is expected.
void newton(const Field& f, ComplexPoint& z, int max_iter = 120) {
  for (int it = 0; it < max_iter; ++it) {
    const Complex p = f.P.value(z[0], z[1]), q = f.Q.value(z[0], z[1]);
    if (p == 0.0 && q == 0.0) return;
    const auto J = f.jacobian(z);
    const Complex det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    if (det == 0.0) return;
    const Complex dx = -(J[1][1] * p - J[0][1] * q) / det;
    const Complex dy = -(-J[1][0] * p + J[0][0] * q) / det;
    z[0] += dx;
    z[1] += dy;
    if (std::max(std::abs(dx), std::abs(dy)) <= 1e-15 * (1.0 + norm(z))) return;
  }
}

Complex snap_real(Complex v) {
  return std::fabs(v.imag()) <= 1e-11 * (1.0 + std::fabs(v.real())) ? Complex(v.real(), 0.0) : v;
}

bool near_small_rational(Complex r, double band) {
  if (std::fabs(r.imag()) > band * std::abs(r)) return false;
  for (int b = 1; b <= 12; ++b) {
    const double a = std::round(r.real() * b);
    if (a != 0.0 && std::fabs(r.real() - a / b) <= band * std::max(1.0, std::abs(r))) return true;
  }
  return false;
}

bool cmp_less(double a, double b) { return a < b - 1e-9 * (1.0 + std::fabs(a) + std::fabs(b)); }

SingularPoint classify_at(const FoliationRecord& F, const Field& field, const ComplexPoint& z,
                          const SingularityOptions& opt) {
  SingularPoint s;
  s.location = z;
  s.residual = field.residual(z);
  s.jacobian = field.jacobian(z);
  const auto& J = s.jacobian;
  const Complex tr = J[0][0] + J[1][1];
  const Complex det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
  const Complex disc = std::sqrt(tr * tr / 4.0 - det);
  Complex m0 = tr / 2.0 + disc, m1 = tr / 2.0 - disc;
  if (std::abs(m1) > std::abs(m0) ||
      (std::abs(std::abs(m1) - std::abs(m0)) <= 1e-14 * std::abs(m0) && lex_less(m1, m0)))
    std::swap(m0, m1);
  s.eigenvalues = {m0, m1};
  double nrm2 = 0;
  for (const auto& row : J)
    for (const auto& v : row) nrm2 += std::norm(v);

  if (nrm2 == 0.0 || std::abs(det) <= opt.det_tolerance * nrm2 || m1 == 0.0) {
    s.classification = SingularClass::NonReduced;
  } else {
    s.ratio = m0 / m1;
    const double d = std::abs(s.ratio + 1.0);
    if (d <= opt.ratio_band) {
      s.classification = SingularClass::CenterCandidate;
    } else if (d <= 2.0 * opt.ratio_band) {
      s.classification = SingularClass::ResonantOther;
      s.warning = "eigenvalue ratio within twice the decision band of -1";
    } else if (near_small_rational(s.ratio, opt.ratio_band)) {
      s.classification = SingularClass::ResonantOther;
    } else {
      s.classification = SingularClass::GenericReduced;
    }
  }

  if (F.log_spec && F.log_spec->mixed_signs()) {
    const auto& spec = *F.log_spec;
    std::vector<bool> zero(spec.s());
    for (std::size_t i = 0; i < spec.s(); ++i) {
      const NumericPoly fi(spec.f[i]);
      zero[i] = std::abs(fi(z[0], z[1])) <= 1e-8 * std::max(1.0, fi.magnitude(z[0], z[1]));
    }
    for (std::size_t i = 0; i < spec.s(); ++i)
      for (std::size_t j = i + 1; j < spec.s(); ++j)
        if (zero[i] && zero[j] && sgn(spec.lambda[i]) != sgn(spec.lambda[j]))
          s.classification = SingularClass::DicriticalCandidate;
  }
  return s;
}

} // namespace

bool point_less(const ComplexPoint& a, const ComplexPoint& b) {
  const double ka[4] = {a[0].real(), a[0].imag(), a[1].real(), a[1].imag()};
  const double kb[4] = {b[0].real(), b[0].imag(), b[1].real(), b[1].imag()};
  for (int i = 0; i < 4; ++i) {
    if (cmp_less(ka[i], kb[i])) return true;
    if (cmp_less(kb[i], ka[i])) return false;
  }
  return false;
}

std::vector<SingularPoint> find_singularities(const FoliationRecord& F, const SingularityOptions& opt) {
  if (!F.reduced_pair || have_common_factor(F.P, F.Q))
    throw InputError("P and Q share a nonconstant factor; singular set is not isolated");
  const Field field(F);

  const UPoly ry = UPoly::from_poly(resultant(F.P, F.Q, 0), 1);
  const UPoly rx = UPoly::from_poly(resultant(F.P, F.Q, 1), 0);
  if (ry.is_zero() || rx.is_zero())
    throw InputError("P and Q share a nonconstant factor; singular set is not isolated");
  const auto ys = ry.degree() > 0 ? distinct_roots(ry) : std::vector<Complex>{};
  const auto xs = rx.degree() > 0 ? distinct_roots(rx) : std::vector<Complex>{};

  // Leading coefficients in x; a y-root where both vanish can come from a
  // common zero at infinity.
  const auto cP = F.P.coefficients_in(0), cQ = F.Q.coefficients_in(0);
  const NumericPoly lcP(cP.back()), lcQ(cQ.back());

  std::vector<ComplexPoint> found;
  std::vector<SingularPoint> failed;
  auto accept = [&](ComplexPoint z) {
    for (const auto& w : found)
      if (dist(z, w) <= 1e-7 * (1.0 + norm(z))) return;
    found.push_back(z);
  };
  auto polish = [&](ComplexPoint z) -> std::pair<ComplexPoint, bool> {
    const ComplexPoint z0 = z;
    newton(field, z);
    if (field.residual(z0) < field.residual(z)) z = z0;
    z = {snap_real(z[0]), snap_real(z[1])};
    newton(field, z, 3);
    return {z, field.residual(z) <= opt.root_residual * field.scale(z)};
  };
  auto rel_residual = [&](const ComplexPoint& z) {
    const double sp = std::max(1e-300, field.P.value.magnitude(z[0], z[1]));
    const double sq = std::max(1e-300, field.Q.value.magnitude(z[0], z[1]));
    return std::max(std::abs(field.P.value(z[0], z[1])) / sp, std::abs(field.Q.value(z[0], z[1])) / sq);
  };

  for (const Complex y : ys) {
    bool covered = false;
    double best = INFINITY;
    ComplexPoint best_z{};
    for (const Complex x : xs) {
      const ComplexPoint z0{x, y};
      const double r = rel_residual(z0);
      if (r < best) {
        best = r;
        best_z = z0;
      }
      if (r > 1e-5) continue;
      auto [z, ok] = polish(z0);
      if (ok && dist(z, z0) <= 1e-3 * (1.0 + norm(z0))) {
        accept(z);
        covered = true;
      }
    }
    if (covered) continue;
    if (!xs.empty()) {
      auto [z, ok] = polish(best_z);
      if (ok && std::abs(z[1] - y) <= 1e-6 * (1.0 + std::abs(y))) {
        accept(z);
        continue;
      }
    }
    const double lscale = 1e-8 * (1.0 + std::pow(std::abs(y), cP.size()));
    if (std::abs(lcP(Complex(0), y)) <= lscale && std::abs(lcQ(Complex(0), y)) <= lscale) continue;
    if (xs.empty()) continue;
    SingularPoint s;
    s.location = best_z;
    s.residual = field.residual(best_z);
    s.converged = false;
    s.warning = "root polishing did not converge";
    failed.push_back(s);
  }

  std::vector<ComplexPoint> inside;
  for (const auto& z : found)
    if (std::fabs(z[0].real()) <= opt.search_box && std::fabs(z[0].imag()) <= opt.search_box &&
        std::fabs(z[1].real()) <= opt.search_box && std::fabs(z[1].imag()) <= opt.search_box)
      inside.push_back(z);

  std::vector<SingularPoint> out(inside.size());
  parallel_for(inside.size(), [&](std::size_t i) { out[i] = classify_at(F, field, inside[i], opt); });
  out.insert(out.end(), failed.begin(), failed.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const SingularPoint& a, const SingularPoint& b) { return point_less(a.location, b.location); });
  return out;
}

SingularPoint classify_singularity(const FoliationRecord& F, const ComplexPoint& p, const SingularityOptions& opt) {
  const Field field(F);
  if (field.residual(p) > 1e-6 * field.scale(p))
    throw InputError("point is not a singular point of the foliation");
  ComplexPoint z = p;
  newton(field, z);
  if (field.residual(z) > field.residual(p)) z = p;
  z = {snap_real(z[0]), snap_real(z[1])};
  return classify_at(F, field, z, opt);
}

int expected_intersections(const std::vector<int>& degrees) {
  int s = 0;
  for (std::size_t i = 0; i < degrees.size(); ++i)
    for (std::size_t j = i + 1; j < degrees.size(); ++j) s += degrees[i] * degrees[j];
  return s;
}

int expected_centers(const std::vector<int>& degrees) {
  int d = -1;
  for (int k : degrees) d += k;
  return d * d - expected_intersections(degrees);
}

CenterCensus count_centers(const LogarithmicSpec& spec, const SingularityOptions& opt) {
  const FoliationRecord F = logarithmic(spec);
  CenterCensus c;
  c.points = find_singularities(F, opt);
  std::vector<NumericPoly> fs;
  for (const auto& f : spec.f) fs.emplace_back(f);
  for (const auto& p : c.points) {
    if (!p.converged) throw NumericError("singularity polishing did not converge");
    int vanish = 0;
    for (const auto& f : fs)
      if (std::abs(f(p.location[0], p.location[1])) <=
          1e-8 * std::max(1.0, f.magnitude(p.location[0], p.location[1])))
        ++vanish;
    if (vanish >= 3) throw InputError("degenerate spec: three curves share a point");
    const bool inter = vanish == 2;
    c.on_intersection.push_back(inter);
    if (inter) {
      if (p.classification == SingularClass::NonReduced)
        throw InputError("degenerate spec: non-transversal intersection");
      ++c.line_intersections;
    } else if (p.classification == SingularClass::CenterCandidate) {
      ++c.centers;
    } else {
      ++c.other;
    }
  }
  if (c.line_intersections != expected_intersections(spec.degrees()))
    throw InputError("degenerate spec: expected " + std::to_string(expected_intersections(spec.degrees())) +
                     " transversal intersections, found " + std::to_string(c.line_intersections));
  return c;
}

} // namespace fol
