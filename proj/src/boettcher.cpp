#include "mcmullen/boettcher.hpp"

#include "ray_detail.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace mcm {

using detail::AngleOrbit;
using detail::wrap_pi;
using detail::descend;

namespace {

cplx clog1p(cplx u) {
  if (std::abs(u) < 1e-4) return u * (1.0 - u * (0.5 - u * (1.0 / 3 - u * 0.25)));
  return std::log(1.0 + u);
}

cplx cexpm1(cplx s) {
  if (std::abs(s) < 1e-4) return s * (1.0 + s * (0.5 + s * (1.0 / 6 + s / 24.0)));
  return std::exp(s) - 1.0;
}

// sum_k n^-(k+1) Log(1 + lambda zeta_k^-2n) and its partials.
struct Series {
  cplx sum, d_zeta, d_lambda;
};

Series phi_series(const Params& p, cplx zeta) {
  const int n = p.n();
  const cplx lam = p.lambda();
  Series s{0.0, 0.0, 0.0};
  cplx z = zeta, dz = 1.0, dl = 0.0;
  double scale = 1.0 / n;
  double u0 = 0, z0 = 0;
  for (int k = 0; k < 200; ++k) {
    const cplx zi2n = ipow(z, -2 * n);
    const cplx u = lam * zi2n;
    if (k == 0) {
      u0 = std::abs(u);
      z0 = std::abs(zi2n);
    } else if (std::abs(u) <= 1e-18 * u0 && std::abs(zi2n) <= 1e-18 * z0) {
      break;
    }
    const cplx inv = 1.0 / (1.0 + u);
    const cplx du_dz = -2.0 * n * u / z * dz;
    const cplx du_dl = zi2n - 2.0 * n * u / z * dl;
    s.sum += scale * clog1p(u);
    s.d_zeta += scale * inv * du_dz;
    s.d_lambda += scale * inv * du_dl;
    const cplx fp = deriv(p, z);
    dl = fp * dl + ipow(z, -n);
    dz = fp * dz;
    z = eval(p, z);
    scale /= n;
    if (is_infinite(z)) break;
  }
  return s;
}

std::optional<cplx> solve_ray_point_impl(const Params& p, cplx seed, double G, AngleOrbit& orbit, int min_iter,
                                         int maxiter) {
  const int n = p.n();
  auto residual = [&](cplx z, EscapeJet& jet) -> std::optional<cplx> {
    auto j = escape_jet(p, z, min_iter, maxiter);
    if (!j) return std::nullopt;
    jet = *j;
    const double nm = std::pow(double(n), jet.m);
    cplx E = jet.log_phi - cplx(nm * G, kTwoPi * orbit.at(jet.m));
    E.imag(wrap_pi(E.imag()));
    return E;
  };
  cplx z = seed;
  EscapeJet jet;
  auto E = residual(z, jet);
  if (!E) return std::nullopt;
  for (int it = 0; it < 60; ++it) {
    const double scale = std::max(1.0, std::abs(jet.log_phi.real()));
    if (std::abs(*E) < 1e-12 * scale) return z;
    if (std::abs(jet.d_z) == 0.0) return std::nullopt;
    cplx dz = -*E / jet.d_z;
    const double e0 = std::abs(*E) / std::pow(double(n), jet.m);
    bool moved = false;
    for (int h = 0; h < 12; ++h) {
      EscapeJet j2;
      const auto E2 = residual(z + dz, j2);
      if (E2 && std::abs(*E2) / std::pow(double(n), j2.m) < e0) {
        z += dz;
        jet = j2;
        E = E2;
        moved = true;
        break;
      }
      dz *= 0.5;
    }
    if (!moved) {
      // rounding in z alone moves the residual by about eps |z| |d_z|
      const double floor = 16 * std::numeric_limits<double>::epsilon() * std::abs(z) * std::abs(jet.d_z);
      return std::abs(*E) < std::max(1e-9 * scale, floor) ? std::optional<cplx>(z) : std::nullopt;
    }
  }
  return std::nullopt;
}

Angle negate(const Angle& t) {
  if (t.is_exact()) return Angle::exact(-t.rational());
  return Angle::approx(-t.to_double());
}

}  // namespace

const char* to_string(RayKind k) {
  switch (k) {
    case RayKind::external: return "external";
    case RayKind::internal: return "internal";
    case RayKind::parameter: return "parameter";
    case RayKind::cutray_boundary: return "cutray-boundary";
  }
  return "?";
}

LogPhiJet log_phi_direct(const Params& p, cplx zeta) {
  if (!(std::abs(zeta) > p.escape_radius()))
    throw std::domain_error("log_phi_direct: point outside the direct domain |z| > R");
  const Series s = phi_series(p, zeta);
  return {std::log(zeta) + s.sum, 1.0 / zeta + s.d_zeta, s.d_lambda};
}

std::optional<EscapeJet> escape_jet(const Params& p, cplx z, int min_iter, int maxiter, cplx dz_dlambda) {
  const double R = p.escape_radius();
  cplx w = z, dw = 1.0, dl = dz_dlambda;
  for (int m = 0; m <= maxiter; ++m) {
    if (m >= min_iter && std::abs(w) > R && !is_infinite(w)) {
      const LogPhiJet j = log_phi_direct(p, w);
      return EscapeJet{m, w, j.value, j.d_zeta * dw, j.d_lambda + j.d_zeta * dl};
    }
    if (w == 0.0 || is_infinite(w)) return std::nullopt;
    const cplx fp = deriv(p, w);
    dl = fp * dl + ipow(w, -p.n());
    dw = fp * dw;
    w = eval(p, w);
  }
  return std::nullopt;
}

std::optional<double> green(const Params& p, cplx z, int maxiter) {
  const double R = p.escape_radius();
  cplx w = z;
  for (int m = 0; m <= maxiter; ++m) {
    if (is_infinite(w)) return std::numeric_limits<double>::infinity();
    if (std::abs(w) > R) return log_phi_direct(p, w).value.real() / std::pow(double(p.n()), m);
    w = eval(p, w);
  }
  return std::nullopt;
}

cplx boettcher(const Params& p, cplx z) { return std::exp(log_phi_direct(p, z).value); }

cplx boettcher_correction(const Params& p, cplx z) {
  if (!(std::abs(z) > p.escape_radius())) throw std::domain_error("boettcher_correction: outside direct domain");
  return cexpm1(phi_series(p, z).sum);
}

std::vector<cplx> continue_log_phi(const Params& p, const std::vector<cplx>& path, cplx anchor, int shift,
                                   int maxiter) {
  if (path.empty()) return {};
  const int n = p.n();
  struct Rep {
    cplx L;
    double N;
  };
  auto rep = [&](cplx z) {
    const auto j = escape_jet(p, z, shift, maxiter);
    if (!j) throw BranchError("continue_log_phi: orbit does not escape on the path");
    return Rep{j->log_phi, std::pow(double(n), j->m - shift)};
  };
  auto nearest = [](const Rep& r, cplx ref) {
    const double j = std::round((r.N * ref.imag() - r.L.imag()) / kTwoPi);
    return (r.L + cplx(0, kTwoPi * j)) / r.N;
  };

  std::function<cplx(cplx, cplx, cplx, int)> segment = [&](cplx a, cplx La, cplx b, int depth) -> cplx {
    const Rep r = rep(b);
    const cplx Lb = nearest(r, La);
    if (std::abs(Lb.imag() - La.imag()) * r.N < kPi / 2) return Lb;
    if (depth > 48) throw BranchError("continue_log_phi: path too coarse to follow the branch");
    const cplx mid = 0.5 * (a + b);
    const cplx Lm = segment(a, La, mid, depth + 1);
    return segment(mid, Lm, b, depth + 1);
  };

  std::vector<cplx> out;
  out.push_back(nearest(rep(path.front()), anchor));
  for (size_t i = 1; i < path.size(); ++i) out.push_back(segment(path[i - 1], out.back(), path[i], 0));
  return out;
}

namespace {

// Follows the gradient of G o f^shift upwards until `done` holds. The flow ends at a pole
// preimage unless the start lies in the right basin component.
std::vector<cplx> ascend(const Params& p, cplx z, int shift, int maxiter, const std::function<bool(cplx)>& done) {
  const int n = p.n();
  auto velocity = [&](cplx w) -> std::optional<cplx> {
    const auto j = escape_jet(p, w, shift, maxiter);
    if (!j) return std::nullopt;
    const double N = std::pow(double(n), j->m - shift);
    const double G = j->log_phi.real() / N;
    const cplx D = j->d_z / N;
    if (!(std::abs(D) > 0) || !std::isfinite(std::abs(D))) return std::nullopt;
    return G / D;
  };
  std::vector<cplx> path{z};
  double h = 0.17;
  int stalled = 0;
  for (int guard = 0; !done(z); ++guard) {
    if (guard > 20000) throw BranchError("ascent: no progress");
    const auto k1 = velocity(z);
    if (!k1) throw BranchError("ascent: starting point does not escape");
    std::optional<cplx> k2, k3, k4;
    if ((k2 = velocity(z + 0.5 * h * *k1)) && (k3 = velocity(z + 0.5 * h * *k2)) && (k4 = velocity(z + h * *k3))) {
      const cplx step = h / 6 * (*k1 + 2.0 * *k2 + 2.0 * *k3 + *k4);
      stalled = std::abs(step) < 1e-9 * std::max(1.0, std::abs(z)) ? stalled + 1 : 0;
      if (stalled > 20)
        throw BranchError("ascent: the gradient line ends at a preimage of the pole (point outside the basin component)");
      z += step;
      path.push_back(z);
      h = std::min(0.17, h * 1.5);
    } else {
      h *= 0.5;
      if (h < 1e-12) throw BranchError("ascent: stalled at a critical point of the potential");
    }
  }
  return path;
}

}  // namespace

std::vector<cplx> ascent_path(const Params& p, cplx z, int maxiter) {
  const double target = 2 * p.escape_radius();
  return ascend(p, z, 0, maxiter, [target](cplx w) { return std::abs(w) > target; });
}

cplx log_boettcher_extended(const Params& p, cplx z, const std::vector<cplx>& path) {
  std::vector<cplx> pts = path;
  if (pts.empty()) {
    if (std::abs(z) > p.escape_radius()) return log_phi_direct(p, z).value;
    pts = ascent_path(p, z);
    std::reverse(pts.begin(), pts.end());
  }
  if (!(std::abs(pts.front()) > p.escape_radius()))
    throw std::invalid_argument("log_boettcher_extended: path must start in the direct domain");
  if (std::abs(pts.back() - z) > 1e-12 * std::max(1.0, std::abs(z))) pts.push_back(z);
  const cplx anchor = log_phi_direct(p, pts.front()).value;
  return continue_log_phi(p, pts, anchor).back();
}

cplx boettcher_extended(const Params& p, cplx z, const std::vector<cplx>& path) {
  return std::exp(log_boettcher_extended(p, z, path));
}

std::optional<cplx> solve_ray_point(const Params& p, cplx seed, double G, const Angle& t, int min_iter, int maxiter) {
  AngleOrbit orbit(p.n(), t);
  return solve_ray_point_impl(p, seed, G, orbit, min_iter, maxiter);
}

std::optional<cplx> aitken_limit(const std::vector<cplx>& pts) {
  if (pts.size() < 3) return std::nullopt;
  const cplx a = pts[pts.size() - 3], b = pts[pts.size() - 2], c = pts.back();
  const cplx d1 = b - a, d2 = c - b;
  if (std::abs(d1) == 0.0 || std::abs(d2) == 0.0) return c;
  const double ratio = std::abs(d2 / d1);
  if (ratio >= 0.99) return c;
  return c - d2 * d2 / (d2 - d1);
}

RayPolyline trace_external_ray(const Params& p, const Angle& t, const RayOptions& opts) {
  RayPolyline ray;
  ray.kind = RayKind::external;
  ray.angle = t;
  AngleOrbit orbit(p.n(), t);
  const double G0 = std::log(4 * p.escape_radius());
  const auto z0 = solve_ray_point_impl(p, std::polar(std::exp(G0), kTwoPi * t.to_double()), G0, orbit, 0, opts.maxiter);
  if (!z0) {
    ray.truncated = true;
    ray.failure = "could not start the ray in the direct domain";
    return ray;
  }
  descend(ray, *z0, G0, opts.g_min, opts, [](double g) { return g; },
          [&](cplx seed, double G) { return solve_ray_point_impl(p, seed, G, orbit, 0, opts.maxiter); });
  if (!ray.truncated) ray.landing_estimate = aitken_limit(ray.points);
  return ray;
}

cplx log_riemann_T(const Params& p, cplx w, const std::vector<cplx>& path) {
  if (w == 0.0) throw std::domain_error("log_riemann_T: log psi is singular at 0");
  const cplx c02 = p.c0() * p.c0();
  const double small = p.inner_radius() / 10;
  std::vector<cplx> pts = path;
  if (pts.empty()) {
    pts = ascend(p, w, 1, 2000, [small](cplx x) { return std::abs(x) <= small; });
    std::reverse(pts.begin(), pts.end());
  }
  if (std::abs(pts.front()) > small * (1 + 1e-3))
    throw std::invalid_argument("log_riemann_T: path must start in the disk |w| <= r/10");
  if (std::abs(pts.back() - w) > 1e-12 * std::max(1.0, std::abs(w))) pts.push_back(w);
  const double n = p.n();
  const cplx anchor = -n * std::log(pts.front() / c02);
  return -continue_log_phi(p, pts, anchor, 1).back() / n;
}

cplx riemann_T(const Params& p, cplx w, const std::vector<cplx>& path) {
  if (w == 0.0) return 0.0;
  return std::exp(log_riemann_T(p, w, path));
}

namespace {

// Internal ray of angle t from radius rho0 (tiny) up to radius 1 - g_end-ish.
RayPolyline internal_ray_between(const Params& p, const Angle& t, double g_end, const RayOptions& opts) {
  RayPolyline ray;
  ray.kind = RayKind::internal;
  ray.angle = t;
  const cplx c02 = p.c0() * p.c0();
  const double rho0 = p.inner_radius() / 10 / std::abs(c02);
  const double G0 = -std::log(rho0);
  AngleOrbit orbit(p.n(), negate(t));
  const cplx seed = c02 * std::polar(rho0, kTwoPi * t.to_double());
  const auto w0 = solve_ray_point_impl(p, seed, G0, orbit, 1, opts.maxiter);
  if (!w0) {
    ray.truncated = true;
    ray.failure = "could not start the internal ray near 0";
    return ray;
  }
  descend(ray, *w0, G0, g_end, opts, [](double g) { return std::exp(-g); },
          [&](cplx seed, double G) { return solve_ray_point_impl(p, seed, G, orbit, 1, opts.maxiter); });
  return ray;
}

// Newton for f^j(x) = y from x.
std::optional<cplx> solve_preimage(const Params& p, int j, cplx x, cplx y) {
  for (int it = 0; it < 60; ++it) {
    const IterateJet jet = iterate_jet(p, x, j);
    if (!jet.ok) return std::nullopt;
    const cplx g = jet.value - y;
    if (std::abs(g) < 1e-13 * std::max(1.0, std::abs(y))) return x;
    if (jet.dz == 0.0) return std::nullopt;
    x -= g / jet.dz;
  }
  return std::nullopt;
}

}  // namespace

RayPolyline trace_internal_ray(const Params& p, const Angle& t, const RayOptions& opts) {
  RayPolyline ray = internal_ray_between(p, t, opts.g_min, opts);
  if (!ray.truncated) ray.landing_estimate = aitken_limit(ray.points);
  return ray;
}

RayPolyline pullback_ray_to_U(const Params& p, int k, const Angle& t, const RayOptions& opts) {
  if (k < 3) throw std::invalid_argument("pullback_ray_to_U: level k must be >= 3");
  const int j = k - 2;
  const cplx v = critical_values(p).plus;
  cplx ystar = v;
  for (int i = 0; i < j; ++i) ystar = eval(p, ystar);
  if (is_infinite(ystar)) throw BranchError("pullback_ray_to_U: f^(k-2)(v+) is the pole");

  const RayPolyline tray = trace_internal_ray(p, t, opts);
  RayPolyline out;
  out.kind = RayKind::internal;
  out.angle = t;
  out.truncated = tray.truncated;
  out.failure = tray.failure;
  if (tray.points.empty()) return out;

  // Path inside T from f^(k-2)(v+) to the start of R_T(t).
  std::vector<cplx> connector;
  const double small = p.inner_radius() / 10;
  const cplx c02 = p.c0() * p.c0();
  auto segment = [&](cplx a, cplx b) {
    for (int i = 0; i <= 32; ++i) connector.push_back(a + (b - a) * (double(i) / 32));
  };
  if (std::abs(ystar) <= small) {
    segment(ystar, tray.points.front());
  } else {
    const cplx lpsi = log_riemann_T(p, ystar);
    const double rho_star = std::exp(lpsi.real());
    if (rho_star >= 1) throw BranchError("pullback_ray_to_U: f^(k-2)(v+) is not in T");
    const Angle s = Angle::approx(lpsi.imag() / kTwoPi);
    RayPolyline sray = internal_ray_between(p, s, -std::log(rho_star), opts);
    if (sray.truncated) throw BranchError("pullback_ray_to_U: cannot connect f^(k-2)(v+) to 0 inside T");
    connector.assign(sray.points.rbegin(), sray.points.rend());
    connector.front() = ystar;
    const double a0 = s.to_double(), a1 = t.to_double();
    double da = std::remainder(a1 - a0, 1.0);
    for (int i = 1; i <= 64; ++i) connector.push_back(c02 * std::polar(small / std::abs(c02), kTwoPi * (a0 + da * i / 64)));
    connector.push_back(tray.points.front());
  }

  cplx x = v;
  double last_step = -1;
  auto pull = [&](cplx y_from, cplx y_to) -> bool {
    // Adaptive subdivision of the y-segment.
    std::vector<std::pair<cplx, cplx>> stack{{y_from, y_to}};
    int budget = 4096;
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      const auto nx = solve_preimage(p, j, x, b);
      if (nx && (last_step < 0 || std::abs(*nx - x) <= 10 * last_step + 1e-12)) {
        last_step = std::max(std::abs(*nx - x), last_step * 0.5);
        x = *nx;
        stack.pop_back();
        continue;
      }
      if (--budget < 0) return false;
      stack.back() = {0.5 * (a + b), b};
      stack.push_back({a, 0.5 * (a + b)});
    }
    return true;
  };
  for (size_t i = 1; i < connector.size(); ++i) {
    if (!pull(connector[i - 1], connector[i])) throw BranchError("pullback_ray_to_U: lost the branch on the way to 0");
  }
  last_step = -1;
  for (size_t i = 0; i < tray.points.size(); ++i) {
    if (i > 0 && !pull(tray.points[i - 1], tray.points[i])) {
      out.truncated = true;
      out.failure = "pullback lost the branch";
      break;
    }
    out.points.push_back(x);
    out.potentials.push_back(tray.potentials[i]);
  }
  if (!out.truncated) out.landing_estimate = aitken_limit(out.points);
  return out;
}

namespace detail {

void descend(RayPolyline& ray, cplx z, double g_start, double g_end, const RayOptions& opts,
             const std::function<double(double)>& label, const RaySolver& solve) {
  ray.points.push_back(z);
  ray.potentials.push_back(label(g_start));
  double G = g_start;
  double last_step = -1.0;
  while (G > g_end && int(ray.points.size()) < opts.max_points) {
    double factor = opts.descent;
    std::optional<cplx> next;
    double Gn = G;
    for (int sub = 0; sub < 14; ++sub) {
      Gn = std::max(G * factor, g_end);
      next = solve(z, Gn);
      if (next && (last_step < 0 || std::abs(*next - z) <= 10 * last_step + 1e-13 * std::abs(z))) break;
      next.reset();
      factor = std::sqrt(factor);
    }
    if (!next) {
      ray.truncated = true;
      ray.failure = "continuation failed below potential " + std::to_string(G);
      return;
    }
    if (factor == opts.descent || last_step < 0) last_step = std::abs(*next - z);
    else last_step = std::max(last_step, std::abs(*next - z));
    z = *next;
    G = Gn;
    ray.points.push_back(z);
    ray.potentials.push_back(label(G));
  }
  if (G > g_end) {
    ray.truncated = true;
    ray.failure = "point budget exhausted";
  }
}

}  // namespace detail

}  // namespace mcm
