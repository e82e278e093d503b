#include "foliation/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fol {

namespace {

double cross(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }
double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1]; }
double norm(const Point& a) { return std::hypot(a[0], a[1]); }
Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }
Point add(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1]}; }

// Dormand-Prince 5(4) on a shifted plane: u = z - origin.
class Stepper {
public:
  Stepper(const PlaneField& X, const Point& origin, double sign) : X_(X), o_(origin), sign_(sign) {}

  Point rhs(const Point& u) const {
    const Point v = X_(add(u, o_));
    return {sign_ * v[0], sign_ * v[1]};
  }

  // One step of size h from u with k1 = rhs(u).  Returns the fifth-order
  // solution, the embedded error estimate and k7 = rhs(result).
  void step(const Point& u, const Point& k1, double h, Point& out, Point& k7, Point& err) const {
    auto comb = [&](std::initializer_list<std::pair<double, const Point*>> terms) {
      Point r = u;
      for (const auto& [c, k] : terms) {
        r[0] += h * c * (*k)[0];
        r[1] += h * c * (*k)[1];
      }
      return r;
    };
    const Point k2 = rhs(comb({{1.0 / 5, &k1}}));
    const Point k3 = rhs(comb({{3.0 / 40, &k1}, {9.0 / 40, &k2}}));
    const Point k4 = rhs(comb({{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}}));
    const Point k5 = rhs(comb({{19372.0 / 6561, &k1}, {-25360.0 / 2187, &k2}, {64448.0 / 6561, &k3},
                               {-212.0 / 729, &k4}}));
    const Point k6 = rhs(comb({{9017.0 / 3168, &k1}, {-355.0 / 33, &k2}, {46732.0 / 5247, &k3},
                               {49.0 / 176, &k4}, {-5103.0 / 18656, &k5}}));
    out = comb({{35.0 / 384, &k1}, {500.0 / 1113, &k3}, {125.0 / 192, &k4}, {-2187.0 / 6784, &k5},
                {11.0 / 84, &k6}});
    k7 = rhs(out);
    static constexpr double e[7] = {71.0 / 57600,      0.0,          -71.0 / 16695, 71.0 / 1920,
                                    -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
    const Point* ks[7] = {&k1, &k2, &k3, &k4, &k5, &k6, &k7};
    err = {0.0, 0.0};
    for (int i = 0; i < 7; ++i) {
      err[0] += h * e[i] * (*ks[i])[0];
      err[1] += h * e[i] * (*ks[i])[1];
    }
  }

  Point advance(const Point& u, double h) const {
    Point out, k7, err;
    step(u, rhs(u), h, out, k7, err);
    return out;
  }

  const Point& origin() const { return o_; }

private:
  const PlaneField& X_;
  Point o_;
  double sign_;
};

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = sub(b, a), ap = sub(p, a);
  const double L2 = dot(ab, ab);
  const double s = L2 > 0 ? std::clamp(dot(ap, ab) / L2, 0.0, 1.0) : 0.0;
  return norm(sub(ap, {s * ab[0], s * ab[1]}));
}

double polyline_distance(const Point& p, const std::vector<Point>& poly) {
  double d = INFINITY;
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) d = std::min(d, segment_distance(p, poly[i], poly[i + 1]));
  return d;
}

struct Tube {
  const std::vector<Point>* polyline = nullptr;
  double radius = 0;
};

struct Return {
  Point point{};
  double time = 0;
  std::vector<double> times;
  std::vector<Point> points;
  FlowDiagnostics diag;
  double max_tube_distance = 0;
  double diameter = 0;
};

// Integrates sign * X from z0 (on the section) until the orbit crosses the
// section again in the starting direction inside [s_min, s_max].
Return first_return(const PlaneField& X, double sign, const Transversal& sigma, const Point& z0,
                    const Point& origin, double L0, const FlowOptions& opt, const Tube& tube,
                    FlowError::Kind budget_kind) {
  const Stepper st(X, origin, sign);
  const Point dir = sigma.direction();
  const Point b = sub(sigma.base(), origin);
  auto g = [&](const Point& u) { return cross(dir, sub(u, b)); };

  Point u = sub(z0, origin);
  Point k1 = st.rhs(u);
  const double v0 = norm(k1);
  if (!(v0 > 0.0)) throw FlowError(FlowError::Kind::SingularityApproach, "start point is a singularity");
  const double orient = cross(dir, k1) >= 0 ? 1.0 : -1.0;
  if (std::fabs(cross(dir, k1)) < 1e-6 * v0)
    throw FlowError(FlowError::Kind::BadSection, "section is tangent to the foliation at the start point");

  Return r;
  r.diag.rel_tol = opt.rel_tol;
  r.times.push_back(0.0);
  r.points.push_back(add(u, origin));
  double L = L0;
  double xr[2] = {u[0], u[0]}, yr[2] = {u[1], u[1]};
  double tau = 0.0;
  double h = 0.02 * L / v0;
  double gu = 0.0;
  double vmax = v0;
  const double slack = 1e-9 * sigma.length();

  while (true) {
    if (r.diag.steps + r.diag.rejected >= opt.max_steps) {
      throw FlowError(budget_kind, budget_kind == FlowError::Kind::NoReturn
                                       ? "no return to the section within the step budget"
                                       : "step budget exceeded");
    }
    const double vnorm = norm(k1);
    vmax = std::max(vmax, vnorm);
    if (vnorm < opt.singular_fraction * vmax)
      throw FlowError(FlowError::Kind::SingularityApproach, "orbit approaches a singularity");
    h = std::min(h, 0.05 * L / vnorm);

    Point un, k7, err;
    st.step(u, k1, h, un, k7, err);
    const double w = opt.rel_tol * L;
    const double e = std::max(std::fabs(err[0]), std::fabs(err[1])) / w;
    if (!(e <= 1.0)) {
      ++r.diag.rejected;
      h *= std::isfinite(e) ? std::max(0.2, 0.9 * std::pow(e, -0.2)) : 0.2;
      continue;
    }
    ++r.diag.steps;
    const double gn = g(un);

    if (orient * gu < 0.0 && orient * gn >= 0.0) {
      // Bisect the substep size until the crossing is resolved.
      double a = 0.0, c = h;
      Point zc = un;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + c);
        const Point zm = st.advance(u, m);
        const double gm = g(zm);
        if (orient * gm >= 0.0) {
          c = m;
          zc = zm;
        } else {
          a = m;
        }
        if (std::fabs(gm) <= opt.event_tol * L || c - a <= 1e-16 * (tau + h)) break;
      }
      const Point zabs = add(zc, origin);
      const double s = sigma.coordinate(zabs);
      if (s >= sigma.s_min() - slack && s <= sigma.s_max() + slack) {
        r.point = zabs;
        r.time = tau + c;
        r.times.push_back(r.time);
        r.points.push_back(zabs);
        r.diameter = std::max(xr[1] - xr[0], yr[1] - yr[0]);
        return r;
      }
    }

    tau += h;
    u = un;
    k1 = k7;
    gu = gn;
    r.times.push_back(tau);
    r.points.push_back(add(u, origin));
    xr[0] = std::min(xr[0], u[0]);
    xr[1] = std::max(xr[1], u[0]);
    yr[0] = std::min(yr[0], u[1]);
    yr[1] = std::max(yr[1], u[1]);
    const double diam = std::max(xr[1] - xr[0], yr[1] - yr[0]);
    L = std::max(L, diam);
    if (norm(u) > 1e6 * L0)
      throw FlowError(FlowError::Kind::NoReturn, "orbit escapes to infinity");
    if (tube.polyline) {
      const double d = polyline_distance(r.points.back(), *tube.polyline);
      r.max_tube_distance = std::max(r.max_tube_distance, d);
      if (d > tube.radius) throw FlowError(FlowError::Kind::LeftTube, "orbit leaves the tube around the seed cycle");
    }
    h *= std::min(5.0, 0.9 * std::pow(std::max(e, 1e-10), -0.2));
  }
}

// Origin and initial length scale for integrating near level t.
std::pair<Point, double> local_frame(const Transversal& sigma, const Point& z0) {
  if (sigma.chart() == Transversal::Chart::Distance) {
    return {sigma.base(), std::max(norm(sub(z0, sigma.base())), 1e-300)};
  }
  const Point end = sigma.at(sigma.s_min());
  return {end, std::max(norm(sub(z0, end)), 1e-12 * std::max(1.0, sigma.length()))};
}

double shoelace(const std::vector<Point>& pts) {
  double a = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) a += cross(pts[i], pts[i + 1]);
  return 0.5 * a;
}

Point state_at(const Stepper& st, const CycleApprox& c, double tau) {
  const auto& T = c.raw_times;
  auto it = std::upper_bound(T.begin(), T.end(), tau);
  std::size_t i = it == T.begin() ? 0 : static_cast<std::size_t>(it - T.begin()) - 1;
  if (i + 1 >= T.size()) i = T.size() - 2;
  const Point u = sub(c.raw_points[i], st.origin());
  const double dt = tau - T[i];
  if (dt == 0.0) return c.raw_points[i];
  return add(st.advance(u, dt), st.origin());
}

} // namespace

Transversal Transversal::gradient_section(const PowerProduct& f, const Point& q, double reach) {
  const auto g = f.gradient(q[0], q[1]);
  const double gn = std::hypot(g[0], g[1]);
  if (!(gn > 0.0) || !std::isfinite(gn))
    throw FlowError(FlowError::Kind::BadSection, "cannot construct section: singular gradient");
  Transversal t;
  t.chart_ = Chart::FirstIntegral;
  t.base_ = q;
  t.dir_ = {g[0] / gn, g[1] / gn};
  t.f_ = f;
  // Walk outwards while the directional derivative stays positive.
  const int n = 2048;
  const double ds = reach / n;
  auto dd = [&](double s) {
    const Point z = t.at(s);
    const auto gz = f.gradient(z[0], z[1]);
    return gz[0] * t.dir_[0] + gz[1] * t.dir_[1];
  };
  // Last positive sample, refined onto the first stationary point beyond it.
  auto extent = [&](double sgn) {
    double good = 0;
    for (int k = 1; k <= n; ++k) {
      const double v = dd(sgn * k * ds);
      if (!(v > 0.0) || !std::isfinite(v)) {
        double a = good, b = sgn * k * ds;
        for (int it = 0; it < 100; ++it) {
          const double m = 0.5 * (a + b);
          const double vm = dd(m);
          if (vm > 0.0 && std::isfinite(vm)) a = m;
          else b = m;
        }
        return std::isfinite(v) ? b : a;
      }
      good = sgn * k * ds;
    }
    return good;
  };
  const double hi = extent(1.0), lo = extent(-1.0);
  t.s_min_ = lo;
  t.s_max_ = hi;
  if (hi - lo <= 0.0) throw FlowError(FlowError::Kind::BadSection, "cannot construct section: empty range");
  return t;
}

Transversal Transversal::ray(const Point& base, const Point& dir, double length) {
  const double n = std::hypot(dir[0], dir[1]);
  if (!(n > 0.0) || !(length > 0.0)) throw FlowError(FlowError::Kind::BadSection, "degenerate ray section");
  Transversal t;
  t.chart_ = Chart::Distance;
  t.base_ = base;
  t.dir_ = {dir[0] / n, dir[1] / n};
  t.s_min_ = 0.0;
  t.s_max_ = length;
  return t;
}

double Transversal::coordinate(const Point& z) const { return dot(sub(z, base_), dir_); }

double Transversal::parameter(const Point& z) const {
  if (chart_ == Chart::Distance) return coordinate(z);
  const Point p = at(coordinate(z));
  return f_->value(p[0], p[1]);
}

std::array<double, 2> Transversal::parameter_range() const {
  if (chart_ == Chart::Distance) return {s_min_, s_max_};
  const Point a = at(s_min_), b = at(s_max_);
  return {f_->value(a[0], a[1]), f_->value(b[0], b[1])};
}

Point Transversal::point_at(double t) const {
  if (chart_ == Chart::Distance) {
    if (t < s_min_ || t > s_max_) throw FlowError(FlowError::Kind::BadSection, "parameter outside the section");
    return at(t);
  }
  const auto [t0, t1] = parameter_range();
  const double tol = 1e-14 * std::max({1.0, std::fabs(t0), std::fabs(t1)});
  if (t < t0 - tol || t > t1 + tol) throw FlowError(FlowError::Kind::BadSection, "parameter outside the section");
  double a = s_min_, b = s_max_;
  for (int it = 0; it < 200 && b - a > 1e-16 * std::max(1.0, std::fabs(a) + std::fabs(b)); ++it) {
    const double m = 0.5 * (a + b);
    const Point z = at(m);
    if (f_->value(z[0], z[1]) < t) a = m;
    else b = m;
  }
  return at(0.5 * (a + b));
}

Point flow_map(const FoliationRecord& F, const Point& z0, double time, const FlowOptions& opt) {
  const PlaneField X(F);
  const Stepper st(X, z0, time >= 0 ? 1.0 : -1.0);
  const double T = std::fabs(time);
  Point u{0.0, 0.0};
  Point k1 = st.rhs(u);
  const double v0 = norm(k1);
  if (!(v0 > 0.0) || T == 0.0) return z0;
  double L = 0.0, tau = 0.0;
  double h = std::min(T, 1e-3 / v0);
  std::size_t steps = 0;
  while (tau < T) {
    if (++steps > opt.max_steps) throw FlowError(FlowError::Kind::StepBudget, "step budget exceeded");
    h = std::min(h, T - tau);
    Point un, k7, err;
    st.step(u, k1, h, un, k7, err);
    const double scale = std::max({L, norm(un), 1e-300});
    const double e = std::max(std::fabs(err[0]), std::fabs(err[1])) / (opt.rel_tol * scale);
    if (!(e <= 1.0)) {
      h *= std::isfinite(e) ? std::max(0.2, 0.9 * std::pow(e, -0.2)) : 0.2;
      continue;
    }
    tau += h;
    u = un;
    k1 = k7;
    L = std::max(L, norm(u));
    h *= std::min(5.0, 0.9 * std::pow(std::max(e, 1e-10), -0.2));
  }
  return add(u, z0);
}

CycleApprox trace_cycle(const FoliationRecord& F, const Transversal& sigma, double t, const FlowOptions& opt) {
  const PlaneField X(F);
  const Point z0 = sigma.point_at(t);
  const auto [origin, L0] = local_frame(sigma, z0);
  Return r = first_return(X, 1.0, sigma, z0, origin, L0, opt, {}, FlowError::Kind::NoReturn);
  if (const auto& f = sigma.first_integral()) {
    // Drift can carry a critical-level orbit past its saddle; test the level.
    std::vector<SingularPoint> sing;
    try {
      sing = find_singularities(F);
    } catch (const InputError&) {
    }
    for (const auto& p : sing) {
      if (std::fabs(p.location[0].imag()) > 1e-9 || std::fabs(p.location[1].imag()) > 1e-9) continue;
      const Point q{p.location[0].real(), p.location[1].real()};
      const double fq = f->value(q[0], q[1]);
      if (!std::isfinite(fq) || std::fabs(fq - t) > 1e-9 * std::max(1.0, std::fabs(t))) continue;
      if (polyline_distance(q, r.points) <= 1e-2 * r.diameter)
        throw FlowError(FlowError::Kind::SingularityApproach, "level is a critical value; orbit meets a singularity");
    }
  }

  CycleApprox c;
  c.level = t;
  c.period = r.time;
  c.diagnostics = r.diag;
  c.diagnostics.closure_error = norm(sub(r.point, z0));
  c.diameter = r.diameter;
  c.flow_sign = shoelace(r.points) >= 0 ? 1 : -1;
  if (c.flow_sign < 0) {
    std::reverse(r.points.begin(), r.points.end());
    for (auto& tt : r.times) tt = r.time - tt;
    std::reverse(r.times.begin(), r.times.end());
  }
  c.raw_times = std::move(r.times);
  c.raw_points = std::move(r.points);
  c.raw_points.front() = z0;
  c.raw_times.front() = 0.0;

  // Uniform-arclength resampling via a fine time-uniform pass.
  const std::size_t N = std::max<std::size_t>(opt.resample_points, 8);
  const auto fine = sample_uniform_time(F, c, 4 * N);
  std::vector<double> arc(fine.size() + 1, 0.0);
  for (std::size_t i = 0; i < fine.size(); ++i)
    arc[i + 1] = arc[i] + norm(sub(fine[(i + 1) % fine.size()], fine[i]));
  c.length = arc.back();
  const Stepper st(X, origin, static_cast<double>(c.flow_sign));
  c.points.reserve(N + 1);
  const double dt = c.period / static_cast<double>(fine.size());
  for (std::size_t k = 0; k < N; ++k) {
    const double target = c.length * static_cast<double>(k) / static_cast<double>(N);
    const auto it = std::upper_bound(arc.begin(), arc.end(), target);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - arc.begin()) - 1, fine.size() - 1);
    const double seg = arc[i + 1] - arc[i];
    const double frac = seg > 0 ? (target - arc[i]) / seg : 0.0;
    c.points.push_back(k == 0 ? z0 : state_at(st, c, (static_cast<double>(i) + frac) * dt));
  }
  c.points.push_back(c.points.front());
  c.section_index = 0;

  const auto& f = sigma.first_integral();
  if (f) {
    double lev = 0;
    for (const auto& p : c.points) lev = std::max(lev, std::fabs(f->value(p[0], p[1]) - t));
    c.diagnostics.level_error = lev;
  }
  return c;
}

std::vector<Point> sample_uniform_time(const FoliationRecord& F, const CycleApprox& cycle, std::size_t n) {
  const PlaneField X(F);
  const Stepper st(X, cycle.raw_points.front(), static_cast<double>(cycle.flow_sign));
  std::vector<Point> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = state_at(st, cycle, cycle.period * static_cast<double>(k) / static_cast<double>(n));
  return out;
}

HolonomySample holonomy(const FoliationRecord& F_eps, const Transversal& sigma, const CycleApprox& seed, double t,
                        const FlowOptions& opt) {
  const PlaneField X(F_eps);
  const Point z0 = sigma.point_at(t);
  const auto [origin, L0] = local_frame(sigma, z0);
  const Tube tube{&seed.points, opt.tube_fraction * seed.diameter};
  const Return r = first_return(X, static_cast<double>(seed.flow_sign), sigma, z0, origin,
                                std::max(L0, seed.diameter), opt, tube, FlowError::Kind::StepBudget);
  HolonomySample h;
  h.t_in = t;
  h.t_out = sigma.parameter(r.point);
  h.return_time = r.time;
  h.max_tube_distance = r.max_tube_distance;
  h.diagnostics = r.diag;
  h.diagnostics.closure_error = norm(sub(r.point, z0));
  return h;
}

CenterVerdict numeric_center_test(const FoliationRecord& F, const SingularPoint& p, std::size_t samples,
                                  const FlowOptions& opt) {
  const double scale = 1.0 + std::abs(p.location[0]) + std::abs(p.location[1]);
  if (std::fabs(p.location[0].imag()) > 1e-9 * scale || std::fabs(p.location[1].imag()) > 1e-9 * scale)
    throw InputError("numeric center test needs a real singular point");
  if (samples == 0) throw InputError("numeric center test needs at least one sample");
  const Point c{p.location[0].real(), p.location[1].real()};

  double mind = INFINITY;
  for (const auto& q : find_singularities(F)) {
    const double d = std::max(std::abs(q.location[0] - p.location[0]), std::abs(q.location[1] - p.location[1]));
    if (d > 1e-8 * scale) mind = std::min(mind, d);
  }
  const double r0 = std::isfinite(mind) ? 0.25 * mind : 0.25 * scale;
  CenterVerdict v;
  for (std::size_t k = 0; k < samples; ++k) v.t.push_back(r0 * std::pow(0.5, static_cast<double>(k)));

  const PlaneField X(F);
  Point best_dir{1, 0};
  double best = -1;
  for (int k = 0; k < 8; ++k) {
    const double th = k * std::numbers::pi / 4;
    const Point d{std::cos(th), std::sin(th)};
    double score = INFINITY;
    for (double t : v.t) {
      const Point z{c[0] + t * d[0], c[1] + t * d[1]};
      const Point x = X(z);
      const double n = norm(x);
      score = std::min(score, n > 0 ? std::fabs(cross(d, x)) / n : 0.0);
    }
    if (score > best + 1e-12) {
      best = score;
      best_dir = d;
    }
  }
  if (best < 1e-3) throw FlowError(FlowError::Kind::BadSection, "cannot construct section transversal near the point");
  const Transversal ray = Transversal::ray(c, best_dir, 4.0 * r0);

  v.h.resize(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const Point z0 = ray.point_at(v.t[k]);
    const Return r = first_return(X, 1.0, ray, z0, c, v.t[k], opt, {}, FlowError::Kind::NoReturn);
    v.h[k] = ray.parameter(r.point);
    if (std::fabs(v.h[k] - v.t[k]) > v.threshold_factor * v.t[k] && !v.violation) {
      v.violation = k;
      v.consistent_with_center = false;
    }
  }
  return v;
}

} // namespace fol
