#include "foliation/melnikov.hpp"

#include "foliation/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fol {

namespace {

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const double abx = b[0] - a[0], aby = b[1] - a[1];
  const double apx = p[0] - a[0], apy = p[1] - a[1];
  const double L2 = abx * abx + aby * aby;
  const double s = L2 > 0 ? std::clamp((apx * abx + apy * aby) / L2, 0.0, 1.0) : 0.0;
  return std::hypot(apx - s * abx, apy - s * aby);
}

} // namespace

MelnikovProblem make_melnikov_problem(const FoliationRecord& base, const DifferentialForm& omega1,
                                      const Transversal& section) {
  if (!base.first_integral || !base.integrating_factor)
    throw InputError("Melnikov problem needs a base record with a first integral and integrating factor");
  if (omega1.nvars() != 2 || omega1.degree() != 1) throw InputError("perturbation must be a plane 1-form");
  if (section.chart() != Transversal::Chart::FirstIntegral)
    throw InputError("Melnikov problem needs a section parameterized by the first integral");
  const auto& f = *base.first_integral;
  const auto& s = *base.integrating_factor;

  // omega = s df: P = s f_y, Q = -s f_x.
  const NumericPoly P(base.P), Q(base.Q);
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double sk = section.s_min() + (0.05 + 0.9 * u(rng)) * section.length();
    const Point z = section.at(sk);
    const auto g = f.gradient(z[0], z[1]);
    const double sv = s.value(z[0], z[1]);
    const double px = P(z[0], z[1]), qx = Q(z[0], z[1]);
    const double scale = std::max({1.0, P.magnitude(z[0], z[1]), Q.magnitude(z[0], z[1])});
    if (!std::isfinite(sv) || std::fabs(px - sv * g[1]) > 1e-9 * scale || std::fabs(qx + sv * g[0]) > 1e-9 * scale)
      throw InputError("omega = s df fails on the working region");
  }

  MelnikovProblem p{base, omega1, section, section.parameter_range()[0]};
  double best = INFINITY;
  try {
    for (const auto& q : find_singularities(base)) {
      if (q.classification != SingularClass::CenterCandidate) continue;
      if (std::fabs(q.location[0].imag()) > 1e-9 || std::fabs(q.location[1].imag()) > 1e-9) continue;
      const Point c{q.location[0].real(), q.location[1].real()};
      const double d = segment_distance(c, section.at(section.s_min()), section.at(section.s_max()));
      const double fc = f.value(c[0], c[1]);
      if (d < best && std::isfinite(fc)) {
        best = d;
        p.t_center = fc;
      }
    }
  } catch (const InputError&) {
  }
  return p;
}

FlowOptions quadrature_flow(const MelnikovOptions& opt) {
  FlowOptions f = opt.flow;
  f.rel_tol = std::min(f.rel_tol, 1e-3 * opt.quad_tol);
  return f;
}

double oint(const FoliationRecord& base, const CycleApprox& cycle,
            const std::function<double(const Point&, const Point&)>& integrand, const MelnikovOptions& opt,
            std::size_t* nodes) {
  const PlaneField X(base);
  const double sign = static_cast<double>(cycle.flow_sign);
  // Periodic trapezoid in time: spectrally accurate for smooth closed orbits.
  auto rule = [&](std::size_t n) {
    double sum = 0;
    for (const auto& z : sample_uniform_time(base, cycle, n)) {
      const Point v = X(z);
      sum += integrand(z, {sign * v[0], sign * v[1]});
    }
    return sum * cycle.period / static_cast<double>(n);
  };
  std::size_t n = opt.min_nodes;
  double prev = rule(n);
  while (true) {
    n *= 2;
    const double cur = rule(n);
    if (std::fabs(cur - prev) < opt.quad_tol * std::max(1.0, std::fabs(cur))) {
      if (nodes) *nodes = n;
      return cur;
    }
    if (n >= opt.max_nodes) throw NumericError("cycle quadrature did not converge");
    prev = cur;
  }
}

double cycle_integral(const FoliationRecord& base, const CycleApprox& cycle, const DifferentialForm& omega1,
                      const MelnikovOptions& opt, std::size_t* nodes) {
  const NumericPoly A(omega1.coefficient(0)), B(omega1.coefficient(1));
  const auto& s = base.integrating_factor;
  double smax = 0, smin = INFINITY;
  const double v = oint(
      base, cycle,
      [&](const Point& z, const Point& u) {
        const double sv = s ? s->value(z[0], z[1]) : 1.0;
        smax = std::max(smax, std::fabs(sv));
        smin = std::min(smin, std::fabs(sv));
        return (A(z[0], z[1]) * u[0] + B(z[0], z[1]) * u[1]) / sv;
      },
      opt, nodes);
  if (!(smin >= 1e-12 * std::max(1.0, smax))) throw NumericError("integrating factor vanishes on the cycle");
  return v;
}

M1Value m1(const MelnikovProblem& problem, double t, const MelnikovOptions& opt) {
  const CycleApprox c = trace_cycle(problem.base, problem.section, t, quadrature_flow(opt));
  M1Value v;
  v.t = t;
  v.value = -cycle_integral(problem.base, c, problem.omega1, opt, &v.nodes);
  v.cycle_length = c.length;
  return v;
}

MelnikovSamples m1_sweep(const MelnikovProblem& problem, const std::vector<double>& grid, const MelnikovOptions& opt,
                         std::optional<double> threshold) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InputError("t grid must be strictly increasing");

  std::vector<std::optional<M1Value>> vals(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      vals[i] = m1(problem, grid[i], opt);
    } catch (const FlowError&) {
    }
  });

  MelnikovSamples out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!vals[i]) {
      out.skipped.push_back(grid[i]);
      continue;
    }
    out.grid.push_back(grid[i]);
    out.values.push_back(vals[i]->value);
    out.cycle_lengths.push_back(vals[i]->cycle_length);
  }
  if (out.grid.size() < 4) throw NumericError("fewer than 4 valid Melnikov samples");

  const double Lmax = *std::max_element(out.cycle_lengths.begin(), out.cycle_lengths.end());
  out.zero_threshold = threshold.value_or(1e-8 * Lmax);
  out.identically_zero = std::all_of(out.values.begin(), out.values.end(),
                                     [&](double v) { return std::fabs(v) < out.zero_threshold; });
  if (out.identically_zero) return out;

  // Log-log slope of |M1| against |t - t_center| over the smallest decade.
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    const double u = std::fabs(out.grid[i] - problem.t_center);
    if (u > 0 && std::fabs(out.values[i]) > 0) pts.emplace_back(u, std::fabs(out.values[i]));
  }
  std::sort(pts.begin(), pts.end());
  if (pts.size() < 2) return out;
  std::size_t m = 0;
  while (m < pts.size() && pts[m].first <= 10.0 * pts[0].first) ++m;
  m = std::min(pts.size(), std::max<std::size_t>(m, 3));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(pts[i].first), y = std::log(pts[i].second);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(m);
  const double den = n * sxx - sx * sx;
  if (den <= 0) return out;
  out.slope = (n * sxy - sx * sy) / den;
  const double icpt = (sy - out.slope * sx) / n;
  double rss = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = std::log(pts[i].second) - (icpt + out.slope * std::log(pts[i].first));
    rss += r * r;
  }
  out.fit_residual = std::sqrt(rss / n);
  out.multiplicity = std::max(0, static_cast<int>(std::lround(out.slope)));
  return out;
}

TangencyVerdict tangency_test(const MelnikovProblem& problem, const std::vector<double>& grid,
                              std::optional<double> threshold, const MelnikovOptions& opt) {
  TangencyVerdict v;
  v.samples = m1_sweep(problem, grid, opt, threshold);
  v.threshold = v.samples.zero_threshold;
  for (double m : v.samples.values) v.max_abs = std::max(v.max_abs, std::fabs(m));
  v.compatible = v.max_abs <= v.threshold;
  return v;
}

} // namespace fol
