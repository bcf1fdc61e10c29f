#include "mcmullen/param.hpp"

#include "mcmullen/parallel.hpp"
#include "ray_detail.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcm {

using detail::AngleOrbit;
using detail::wrap_pi;

namespace {

cplx dv_dlambda(cplx lambda, cplx v) { return v / (2.0 * lambda); }

// Newton in lambda on 2 log phi(f^m(v+)) = n^m (g + 2 pi i t) mod 2 pi i.
std::optional<cplx> solve_param_point(int n, cplx seed, double g, AngleOrbit& orbit, int maxiter) {
  auto residual = [&](cplx lam, EscapeJet& jet) -> std::optional<cplx> {
    if (lam == 0.0) return std::nullopt;
    const Params p(n, lam);
    const cplx v = critical_values(p).plus;
    auto j = escape_jet(p, v, 0, maxiter, dv_dlambda(lam, v));
    if (!j) return std::nullopt;
    jet = *j;
    const double nm = std::pow(double(n), jet.m);
    cplx E = 2.0 * jet.log_phi - cplx(nm * g, kTwoPi * orbit.at(jet.m));
    E.imag(wrap_pi(E.imag()));
    return E;
  };
  cplx lam = seed;
  EscapeJet jet;
  auto E = residual(lam, jet);
  if (!E) return std::nullopt;
  for (int it = 0; it < 60; ++it) {
    const double scale = std::max(1.0, std::abs(2.0 * jet.log_phi.real()));
    if (std::abs(*E) < 1e-12 * scale) return lam;
    const cplx d = 2.0 * jet.d_lambda;
    if (std::abs(d) == 0.0) return std::nullopt;
    cplx step = -*E / d;
    const double e0 = std::abs(*E) / std::pow(double(n), jet.m);
    bool moved = false;
    for (int h = 0; h < 12; ++h) {
      EscapeJet j2;
      const auto E2 = residual(lam + step, j2);
      if (E2 && std::abs(*E2) / std::pow(double(n), j2.m) < e0) {
        lam += step;
        jet = j2;
        E = E2;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) return std::abs(*E) < 1e-9 * scale ? std::optional<cplx>(lam) : std::nullopt;
  }
  return std::nullopt;
}

// theta in [0, 1) as a rational
Rational unit_rational(const Angle& t) {
  Rational q = t.rational();
  if (q == 1) q = 0;
  return q;
}

// eps with tau^(l+q)(alpha) = tau^l(alpha) + (eps == -1 ? 1/2 : 0), alpha = theta/2.
int half_angle_sign(int n, const Angle& theta, int l, int q) {
  const Rational alpha = unit_rational(theta) / 2;
  const Rational a = tau_iterate(n, Angle::exact(alpha), l).rational();
  const Rational b = tau_iterate(n, Angle::exact(alpha), l + q).rational();
  Rational d = b - a;
  while (d < 0) d += 1;
  while (d >= 1) d -= 1;
  if (d == 0) return 1;
  if (d == Rational(1, 2)) return -1;
  throw std::logic_error("half_angle_sign: theta/2 is not periodic modulo 1/2 with the given period");
}

// Orbit points of v+ where |eps f^q(z) - z| has local minima, best first.
std::vector<cplx> lingering_points(const Params& p, int eps, int q, int steps, int keep) {
  std::vector<std::pair<double, cplx>> cand;
  cplx z = critical_values(p).plus;
  double prev = std::numeric_limits<double>::infinity(), prev2 = prev;
  cplx prevz = z;
  for (int j = 0; j < steps; ++j) {
    cplx w = z;
    for (int i = 0; i < q && !is_infinite(w); ++i) w = eval(p, w);
    if (is_infinite(w) || std::abs(z) > p.escape_radius()) break;
    const double d = std::abs(double(eps) * w - z);
    if (prev < prev2 && prev <= d) cand.emplace_back(prev, prevz);
    prev2 = prev;
    prev = d;
    prevz = z;
    z = eval(p, z);
  }
  if (std::isfinite(prev)) cand.emplace_back(prev, prevz);
  std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<cplx> out;
  for (const auto& c : cand) {
    bool dup = false;
    for (cplx o : out) dup = dup || std::abs(o - c.second) < 1e-6;
    if (!dup) out.push_back(c.second);
    if (int(out.size()) >= keep) break;
  }
  return out;
}

// (l, q): preperiod and period of theta under tau.
std::pair<int, int> pre_and_period(int n, const Angle& theta) {
  const Itinerary it = itinerary(n, theta, 1);
  if (!it.period) throw std::invalid_argument("angle orbit did not close: " + theta.str());
  return {*it.preperiod, *it.period};
}

// Newton on f^(l+q)(v+) = eps f^l(v+) in lambda.
std::optional<cplx> solve_misiurewicz(int n, int l, int q, int eps, cplx seed) {
  cplx lam = seed;
  for (int it = 0; it < 80; ++it) {
    if (lam == 0.0) return std::nullopt;
    const Params p(n, lam);
    const cplx v = critical_values(p).plus, dv = dv_dlambda(lam, v);
    const IterateJet a = iterate_jet(p, v, l), b = iterate_jet(p, v, l + q);
    if (!a.ok || !b.ok) return std::nullopt;
    const cplx g = b.value - double(eps) * a.value;
    const cplx dg = (b.dlambda + b.dz * dv) - double(eps) * (a.dlambda + a.dz * dv);
    if (std::abs(g) < 1e-14 * std::max(1.0, std::abs(a.value))) return lam;
    if (std::abs(dg) == 0.0) return std::nullopt;
    const cplx step = -g / dg;
    lam += step;
    if (std::abs(step) < 1e-16 * std::abs(lam)) return lam;
  }
  return std::nullopt;
}

}  // namespace

cplx phi0(const Params& p) {
  const cplx v = critical_values(p).plus;
  if (std::abs(v) > p.escape_radius()) return std::exp(2.0 * log_phi_direct(p, v).value);
  return std::exp(2.0 * log_boettcher_extended(p, v));
}

std::pair<cplx, cplx> phi0_jet(const Params& p) {
  const cplx value = phi0(p);
  const cplx v = critical_values(p).plus;
  const auto jet = escape_jet(p, v, 0, 2000, dv_dlambda(p.lambda(), v));
  if (!jet) throw BranchError("phi0_jet: v+ does not escape");
  const cplx dL = jet->d_lambda / std::pow(double(p.n()), jet->m);
  return {value, 2.0 * value * dL};
}

RayPolyline trace_param_ray(int n, const Angle& t, const ParamRayOptions& opts) {
  RayPolyline ray;
  ray.kind = RayKind::parameter;
  ray.angle = t;
  AngleOrbit orbit(n, t);
  const double g0 = std::log(4 * opts.anchor);
  const auto l0 = solve_param_point(n, std::polar(opts.anchor, kTwoPi * t.to_double()), g0, orbit, opts.maxiter);
  if (!l0) {
    ray.truncated = true;
    ray.failure = "could not start the parameter ray at the anchor";
    return ray;
  }
  RayOptions ro;
  ro.g_min = opts.g_min;
  ro.descent = opts.descent;
  ro.max_points = opts.max_points;
  ro.maxiter = opts.maxiter;
  detail::descend(ray, *l0, g0, opts.g_min, ro, [](double g) { return g; },
                  [&](cplx seed, double g) { return solve_param_point(n, seed, g, orbit, opts.maxiter); });
  if (!ray.truncated) ray.landing_estimate = aitken_limit(ray.points);
  return ray;
}

std::pair<int, int> cusp_signature(int n, const Angle& theta) {
  if (!theta.is_exact()) throw std::invalid_argument("cusp_signature: theta must be exact");
  const auto per = is_tau_periodic(n, theta);
  if (!per) throw std::invalid_argument("cusp_signature: theta = " + theta.str() + " is not tau-periodic");
  return {half_angle_sign(n, theta, 0, *per), *per};
}

std::optional<MultiplierSolution> solve_multiplier_system(int n, int eps, int q, cplx mu, cplx lambda_seed,
                                                          cplx z_seed, double tol, int max_steps) {
  using Vec = Eigen::Vector2cd;
  using Mat = Eigen::Matrix2cd;
  const double e = eps;
  auto F = [&](const Vec& x, Mat* J) -> std::optional<Vec> {
    if (x(0) == 0.0 || x(1) == 0.0) return std::nullopt;
    const Params p(n, x(0));
    const IterateJet j = iterate_jet(p, x(1), q);
    if (!j.ok || is_infinite(j.value)) return std::nullopt;
    if (J) *J << e * j.dlambda, e * j.dz - 1.0, e * j.dz_dlambda, e * j.dzz;
    return Vec(e * j.value - x(1), e * j.dz - mu);
  };
  Vec x(lambda_seed, z_seed);
  Mat J;
  auto r = F(x, &J);
  if (!r) return std::nullopt;
  for (int it = 0; it < max_steps; ++it) {
    const double res = r->cwiseAbs().maxCoeff();
    if (std::abs((*r)(0)) < tol * std::max(1.0, std::abs(x(1))) && std::abs((*r)(1)) < tol)
      return MultiplierSolution{x(0), x(1), res};
    const auto lu = J.fullPivLu();
    if (!lu.isInvertible()) return std::nullopt;
    Vec step = -lu.solve(*r);
    bool moved = false;
    for (int h = 0; h < 20; ++h) {
      Mat J2;
      const auto r2 = F(x + step, &J2);
      if (r2 && r2->norm() < r->norm()) {
        x += step;
        r = r2;
        J = J2;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  const double res = r->cwiseAbs().maxCoeff();
  if (std::abs((*r)(0)) < tol * std::max(1.0, std::abs(x(1))) && std::abs((*r)(1)) < tol)
    return MultiplierSolution{x(0), x(1), res};
  return std::nullopt;
}

CuspResult find_cusp(int n, const Angle& theta, std::optional<cplx> lambda_seed) {
  const auto [eps0, q] = cusp_signature(n, theta);
  std::vector<cplx> lseeds;
  if (lambda_seed) {
    lseeds.push_back(*lambda_seed);
  } else {
    const RayPolyline ray = trace_param_ray(n, theta);
    if (ray.points.empty()) throw std::runtime_error("find_cusp: parameter ray failed: " + ray.failure);
    if (ray.landing_estimate) lseeds.push_back(*ray.landing_estimate);
    for (size_t i = 0; i < 4 && i < ray.points.size(); ++i) lseeds.push_back(ray.points[ray.points.size() - 1 - i]);
  }
  std::string tried;
  // The half-angle test predicts eps; for even n the other sign is tried as well.
  std::vector<int> signs{eps0};
  if (n % 2 == 0) signs.push_back(-eps0);
  for (int eps : signs)
  for (cplx ls : lseeds) {
    if (ls == 0.0) continue;
    const Params p(n, ls);
    for (cplx zs : lingering_points(p, eps, q, 20000, 6)) {
      const auto sol = solve_multiplier_system(n, eps, q, 1.0, ls, zs);
      if (!sol) continue;
      const Params ps(n, sol->lambda);
      CuspResult c;
      c.theta = theta;
      c.lambda = sol->lambda;
      c.period = q;
      c.sign = eps;
      c.parabolic_point = sol->z;
      c.multiplier = double(eps) * iterate_jet(ps, sol->z, q).dz;
      c.residual = sol->residual;
      return c;
    }
    tried += " " + std::to_string(ls.real()) + (ls.imag() < 0 ? "" : "+") + std::to_string(ls.imag()) + "i";
  }
  throw std::runtime_error("find_cusp: Newton failed for theta = " + theta.str() + " (eps " + std::to_string(eps0) +
                           ", q " + std::to_string(q) + ") from seeds" + tried);
}

LandingResult param_landing(int n, const Angle& theta, const ParamRayOptions& opts) {
  LandingResult out;
  out.ray = trace_param_ray(n, theta, opts);
  if (out.ray.points.empty()) throw std::runtime_error("param_landing: " + out.ray.failure);
  const cplx last = out.ray.points.back();
  const cplx est = out.ray.landing_estimate.value_or(last);
  out.lambda = est;
  out.method = "extrapolated";
  if (!theta.is_exact() || out.ray.truncated) return out;
  const auto [l, q] = pre_and_period(n, theta);
  if (l == 0) {
    // Rays approach cusps like 1/log^2(1/G): the landing point is closer to the last point than
    // the point at potential sqrt(g_min) is.
    size_t k = 0;
    while (k + 1 < out.ray.points.size() && out.ray.potentials[k] > std::sqrt(opts.g_min)) ++k;
    const double reach = std::abs(out.ray.points[k] - last);
    try {
      const CuspResult c = find_cusp(n, theta, last);
      if (std::abs(c.lambda - last) <= reach) {
        out.lambda = c.lambda;
        out.method = "cusp";
      }
    } catch (const std::runtime_error&) {
    }
  } else {
    const double reach = 10 * std::abs(est - last) + 1e-3 * std::abs(est);
    const int eps = half_angle_sign(n, theta, l, q);
    const auto m = solve_misiurewicz(n, l, q, eps, est);
    if (m && std::abs(*m - est) <= reach) {
      out.lambda = *m;
      out.method = "misiurewicz";
    }
  }
  return out;
}

cplx nu(int n, const Angle& theta) { return param_landing(n, theta).lambda; }

std::optional<MultiplierSolution> parabolic_near(int n, cplx center, double radius, int qmax, int z_grid) {
  std::vector<cplx> lseeds = {center};
  for (int k = 0; k < 4; ++k) lseeds.push_back(center + std::polar(radius / 2, k * kPi / 2));
  const double h = 1.2 * Params(n, center).escape_radius();
  for (int q = 1; q <= qmax; ++q)
    for (int eps : {1, -1})
      for (cplx ls : lseeds) {
        std::vector<cplx> zseeds = lingering_points(Params(n, ls), eps, q, 2000, 4);
        for (int i = 0; i < z_grid; ++i)
          for (int j = 0; j < z_grid; ++j)
            zseeds.emplace_back(-h + 2 * h * (i + 0.5) / z_grid, -h + 2 * h * (j + 0.5) / z_grid);
        for (cplx zs : zseeds) {
          try {
            const auto sol = solve_multiplier_system(n, eps, q, 1.0, ls, zs, 1e-11, 40);
            if (sol && std::abs(sol->lambda - center) < radius) return sol;
          } catch (const std::invalid_argument&) {
          }
        }
      }
  return std::nullopt;
}

cplx phi2(const Params& p) {
  const int n = p.n();
  const cplx lam = p.lambda();
  auto log_phi_fv = [n](cplx l) {
    const Params q(n, l);
    const cplx w = eval(q, critical_values(q).plus);
    if (is_infinite(w)) throw BranchError("phi2: f(v+) is the pole");
    if (std::abs(w) > q.escape_radius()) return log_phi_direct(q, w).value;
    return log_boettcher_extended(q, w);
  };
  if (n == 3) return std::exp(2.0 * log_phi_fv(lam));
  // lambda^(n-2) Phi_2^(n-2) is analytic and nonzero near 0; follow its log along the ray to 0.
  const double r0 = 1e-6;
  auto log_g = [&](double r) {
    const cplx l = std::polar(r, std::arg(lam));
    return double(n - 2) * std::log(l) + 2.0 * log_phi_fv(l);
  };
  double r = std::min(r0, std::abs(lam));
  cplx L = log_g(r);
  L = cplx(L.real(), wrap_pi(L.imag()));
  const double r1 = std::abs(lam);
  const int steps = std::max(1, int(std::ceil(40 * std::log(r1 / r))));
  for (int i = 1; i <= steps; ++i) {
    const double rn = r * std::pow(r1 / r, 1.0 / (steps - i + 1));
    const cplx Ln = log_g(rn);
    L = cplx(Ln.real(), L.imag() + wrap_pi(Ln.imag() - L.imag()));
    r = rn;
  }
  return std::exp(L / double(n - 2)) / lam;
}

namespace {

cplx phiH_from(const Params& p, int k, cplx v) {
  const IterateJet j = iterate_jet(p, v, k - 2);
  if (!j.ok || is_infinite(j.value)) throw BranchError("phiH: critical orbit hits the pole");
  return riemann_T(p, j.value);
}

}  // namespace

cplx phiH(const Params& p, int k) {
  if (k < 3) throw std::invalid_argument("phiH: k must be >= 3");
  return phiH_from(p, k, critical_values(p).plus);
}

cplx phiH(const Params& p) {
  const auto c = classify_fast(p);
  if (c.kind != ClassKind::escape || c.level < 3) throw std::domain_error("phiH: lambda is not in a Sierpinski hole");
  return phiH(p, c.level);
}

std::optional<MultiplierResult> multiplier_kappa(const Params& p, int maxiter) {
  const auto r = attracting_cycle_from_critical_orbit(p, maxiter);
  if (r.fate != CriticalOrbitFate::attracted || !r.cycle) return std::nullopt;
  MultiplierResult m;
  m.kappa = r.cycle->reduced.multiplier;
  m.rho = r.cycle->rho;
  m.eps = r.cycle->reduced.sign;
  m.k = r.cycle->reduced.period;
  m.p = r.cycle->full_period;
  m.z = r.cycle->reduced.points.front();
  return m;
}

namespace {

// Continuation of a solution lambda(mu) along mu(u), u in [u0, u1], refining steps that fail or jump
// further than `bound`. Returns the solutions at the requested nodes.
struct Tracker {
  std::function<std::optional<std::pair<cplx, double>>(cplx mu, cplx seed)> solve;
  double bound = 0.05;
  int max_depth = 14;
  double max_step = 0, max_residual = 0;

  bool step(const std::function<cplx(double)>& mu, double u0, double u1, cplx& lam, int depth = 0) {
    const auto s = solve(mu(u1), lam);
    if (s && std::abs(s->first - lam) <= bound) {
      max_step = std::max(max_step, std::abs(s->first - lam));
      max_residual = std::max(max_residual, s->second);
      lam = s->first;
      return true;
    }
    if (depth >= max_depth) return false;
    const double um = 0.5 * (u0 + u1);
    return step(mu, u0, um, lam, depth + 1) && step(mu, um, u1, lam, depth + 1);
  }
};

ComponentBoundary trace_boundary(Tracker& tr, cplx seed, cplx mu0, int samples, double varrho,
                                 std::function<void()> on_radial_done = {}) {
  ComponentBoundary out;
  out.seed = seed;
  out.varrho = varrho;
  if (samples < 1) throw std::invalid_argument("component_boundary: need at least one sample");
  cplx lam = seed;
  const int radial = 100;
  auto radial_mu = [&](double u) { return mu0 + (varrho - mu0) * u; };
  for (int i = 0; i < radial; ++i)
    if (!tr.step(radial_mu, double(i) / radial, double(i + 1) / radial, lam)) {
      out.diagnostics = "radial continuation failed at step " + std::to_string(i);
      return out;
    }
  if (on_radial_done) on_radial_done();
  // The step bound scales with the distance from the seed to the boundary.
  tr.bound = std::max(1e-9, 0.25 * std::abs(lam - seed));
  tr.max_step = 0;
  auto arc_mu = [&](double s) { return varrho * std::polar(1.0, kTwoPi * s); };
  out.samples.emplace_back(0.0, lam);
  const cplx start = lam;
  for (int j = 0; j < samples; ++j) {
    const double s0 = double(j) / samples, s1 = double(j + 1) / samples;
    if (!tr.step(arc_mu, s0, s1, lam)) {
      out.diagnostics = "arc continuation failed near s = " + std::to_string(s0);
      out.closure_defect = std::numeric_limits<double>::infinity();
      break;
    }
    if (j + 1 < samples) out.samples.emplace_back(s1, lam);
    else out.closure_defect = std::abs(lam - start);
  }
  for (size_t i = 1; i < out.samples.size(); ++i)
    out.max_step = std::max(out.max_step, std::abs(out.samples[i].second - out.samples[i - 1].second));
  out.max_residual = tr.max_residual;
  return out;
}

}  // namespace

ComponentBoundary component_boundary(int n, cplx seed, int samples, double varrho) {
  const auto m = multiplier_kappa(Params(n, seed));
  if (!m) throw std::domain_error("component_boundary: no attracting cycle at the seed");
  cplx z = m->z;
  Tracker tr;
  tr.bound = std::max(1e-3, 0.05 * std::abs(seed));
  tr.solve = [&](cplx mu, cplx lam) -> std::optional<std::pair<cplx, double>> {
    const auto s = solve_multiplier_system(n, m->eps, m->k, mu, lam, z);
    if (!s || std::abs(s->z - z) > 0.25 * std::max(std::abs(z), 1e-3)) return std::nullopt;
    z = s->z;
    return std::pair{s->lambda, s->residual};
  };
  ComponentBoundary out = trace_boundary(tr, seed, m->kappa, samples, varrho);
  if (out.diagnostics.empty() && out.max_residual > 1e-8) out.diagnostics = "multiplier residual above 1e-8";
  return out;
}

ComponentBoundary hole_boundary(int n, cplx center, int samples, double varrho) {
  const auto c = classify_fast(Params(n, center));
  if (c.kind != ClassKind::escape || c.level < 3) throw std::domain_error("hole_boundary: center is not in a hole");
  const int k = c.level;
  // Phi_H depends on the branches of sqrt(lambda) and c0 up to a 2n-th root of unity; values are
  // aligned with the last accepted one.
  cplx ref = 0;
  cplx v = critical_values(Params(n, center)).plus;
  auto aligned = [&](cplx lam, cplx target) {
    const Params p(n, lam);
    cplx w = critical_values(p).plus;
    if (std::abs(w + v) < std::abs(w - v)) w = -w;
    const cplx raw = phiH_from(p, k, w);
    cplx best = raw;
    for (int j = 1; j < 2 * n; ++j) {
      const cplx cand = raw * std::polar(1.0, kPi * j / n);
      if (std::abs(cand - target) < std::abs(best - target)) best = cand;
    }
    return std::pair{best, w};
  };
  Tracker tr;
  tr.bound = std::max(1e-4, 0.05 * std::abs(center));
  tr.solve = [&](cplx mu, cplx lam) -> std::optional<std::pair<cplx, double>> {
    try {
      for (int it = 0; it < 40; ++it) {
        const auto [F, w] = aligned(lam, ref == 0.0 ? mu : ref);
        const double res = std::abs(F - mu);
        if (res < 1e-10) {
          ref = F;
          v = w;
          return std::pair{lam, res};
        }
        const double h = 1e-7 * std::max(std::abs(lam), 1e-3);
        const cplx dF = (aligned(lam + h, F).first - F) / h;
        if (dF == 0.0) return std::nullopt;
        lam -= (F - mu) / dF;
      }
    } catch (const std::exception&) {
    }
    return std::nullopt;
  };
  ComponentBoundary out = trace_boundary(tr, center, 0.0, samples, varrho);
  if (out.diagnostics.empty() && out.max_residual > 1e-8) out.diagnostics = "Phi_H residual above 1e-8";
  return out;
}

Image render_param_plane(int n, const BBox& bbox, int width, int height, int maxiter) {
  if (width < 1 || height < 1) throw std::invalid_argument("render_param_plane: empty image");
  Image img(width, height);
  const double dx = bbox.width() / width, dy = bbox.height() / height;
  parallel_for(height, [&](long y) {
    for (int x = 0; x < width; ++x) {
      const cplx lam(bbox.lo.real() + (x + 0.5) * dx, bbox.hi.imag() - (y + 0.5) * dy);
      Rgb col{255, 255, 255};
      if (lam != 0.0) {
        const auto c = classify_fast(Params(n, lam), maxiter);
        if (c.kind == ClassKind::non_escape) col = {0, 0, 0};
        else if (c.kind == ClassKind::undetermined) col = {128, 128, 128};
        else if (c.level == 0) col = palette(0.05 * c.escape_index.value_or(0), 0.5);
        else col = palette(0.13 * c.level + 0.4, 0.9);
      }
      img.at(x, int(y)) = col;
    }
  });
  return img;
}

std::vector<cplx> capacity_check(int n, const std::vector<double>& radii, double arg) {
  std::vector<cplx> out;
  for (double r : radii) {
    const cplx lam = std::polar(r, arg);
    out.push_back(phi0(Params(n, lam)) / (4.0 * lam));
  }
  return out;
}


}  // namespace mcm
