#include "mcmullen/core.hpp"

#include <algorithm>

namespace mcm {

Orbit iterate_orbit(const Params& p, cplx z0, int maxiter) {
  if (maxiter < 1) throw std::invalid_argument("iterate_orbit: maxiter must be >= 1");
  Orbit orbit;
  const double R = p.escape_radius();
  cplx z = z0;
  orbit.points.push_back(z);
  if (std::abs(z) > R) {
    orbit.escaped = true;
    orbit.escape_index = 0;
    return orbit;
  }
  for (int i = 1; i <= maxiter; ++i) {
    z = eval(p, z);
    orbit.points.push_back(z);
    if (is_infinite(z) || std::abs(z) > R) {
      orbit.escaped = true;
      orbit.escape_index = i;
      return orbit;
    }
  }
  return orbit;
}

IterateJet iterate_jet(const Params& p, cplx z, int period) {
  const int n = p.n();
  IterateJet j{z, 1.0, 0.0, 0.0, 0.0, true};
  for (int k = 0; k < period; ++k) {
    const cplx zk = j.value;
    if (zk == 0.0 || is_infinite(zk)) {
      j.ok = false;
      return j;
    }
    const cplx fp = deriv(p, zk);
    const cplx fpp = deriv2(p, zk);
    const cplx zmn = ipow(zk, -n);
    const cplx fl = zmn;
    const cplx flz = -double(n) * zmn / zk;
    const cplx d = j.dz, e = j.dzz, a = j.dlambda, b = j.dz_dlambda;
    j.value = eval(p, zk);
    j.dz = fp * d;
    j.dzz = fpp * d * d + fp * e;
    j.dlambda = fp * a + fl;
    j.dz_dlambda = (fpp * a + flz) * d + fp * b;
  }
  if (is_infinite(j.value)) j.ok = false;
  return j;
}

cplx cycle_multiplier(const Params& p, cplx z, int period, int sign) {
  cplx m = double(sign);
  for (int k = 0; k < period; ++k) {
    m *= deriv(p, z);
    z = eval(p, z);
  }
  return m;
}

std::optional<Cycle> find_cycle(const Params& p, cplx seed, int period, int sign,
                                const NewtonOptions& opts) {
  if (period < 1 || (sign != 1 && sign != -1)) throw std::invalid_argument("find_cycle: bad period/sign");
  const double s = sign;
  cplx z = seed;
  auto residual_at = [&](cplx w) -> std::optional<double> {
    const IterateJet j = iterate_jet(p, w, period);
    if (!j.ok) return std::nullopt;
    return std::abs(s * j.value - w);
  };
  bool converged = false;
  double res = 0.0;
  for (int step = 0; step < opts.max_steps; ++step) {
    const IterateJet j = iterate_jet(p, z, period);
    if (!j.ok) return std::nullopt;
    const cplx g = s * j.value - z;
    res = std::abs(g);
    if (res < opts.tolerance * std::max(1.0, std::abs(z))) {
      converged = true;
      break;
    }
    const cplx dg = s * j.dz - 1.0;
    if (std::abs(dg) == 0.0 || !std::isfinite(std::abs(dg))) return std::nullopt;
    cplx dz = -g / dg;
    // Halve the step while it overshoots.
    for (int h = 0; h < 30; ++h) {
      const auto r = residual_at(z + dz);
      if (r && *r < res) break;
      dz *= 0.5;
    }
    if (z + dz == z) {
      converged = res < 1e3 * opts.tolerance * std::max(1.0, std::abs(z));
      break;
    }
    z += dz;
  }
  if (!converged) return std::nullopt;

  Cycle c;
  c.period = period;
  c.sign = sign;
  c.residual = res;
  cplx w = z;
  for (int k = 0; k < period; ++k) {
    c.points.push_back(w);
    w = eval(p, w);
  }
  c.multiplier = cycle_multiplier(p, z, period, sign);
  return c;
}

namespace {

constexpr int kMaxDetectedPeriod = 64;
constexpr double kRecurrenceTol = 1e-9;

}  // namespace

CriticalOrbitResult attracting_cycle_from_critical_orbit(const Params& p, int maxiter) {
  CriticalOrbitResult out;
  const Orbit orbit = iterate_orbit(p, critical_values(p).plus, maxiter);
  if (orbit.escaped) {
    out.fate = CriticalOrbitFate::escaped;
    return out;
  }
  const auto& pts = orbit.points;
  const int last = int(pts.size()) - 1;
  int period = 0;
  for (int q = 1; q <= kMaxDetectedPeriod && q <= last; ++q) {
    if (std::abs(pts[last] - pts[last - q]) < kRecurrenceTol * std::max(1.0, std::abs(pts[last]))) {
      period = q;
      break;
    }
  }
  if (period == 0) return out;

  const auto full = find_cycle(p, pts[last], period, 1);
  if (!full || std::abs(full->multiplier) > 1.0) return out;

  int eps = 1, k = period;
  if (p.n() % 2 == 1 && period % 2 == 0) {
    const cplx z = full->points[0];
    const cplx half = full->points[period / 2];
    if (std::abs(half + z) < 1e-6 * std::max(1.0, std::abs(z))) {
      eps = -1;
      k = period / 2;
    }
  }
  auto reduced = find_cycle(p, full->points[0], k, eps);
  if (!reduced) return out;
  out.fate = CriticalOrbitFate::attracted;
  out.cycle = AttractingCycle{*reduced, period, full->multiplier};
  return out;
}

}  // namespace mcm
