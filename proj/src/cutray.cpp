#include "mcmullen/cutray.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace mcm {

namespace {

int slot_of(int n, int k) {
  if (k < -(n - 1) || k > n) throw std::invalid_argument("sector index out of range: " + std::to_string(k));
  return k >= 0 ? k : n - k;
}

int label_of(int n, int slot) { return slot <= n ? slot : -(slot - n); }

// S_k and -S_k; for k in {0, n} the opposite sector is n - k.
int opposite(int n, int k) { return label_of(n, (slot_of(n, k) + n) % (2 * n)); }

double arg_c0(const Params& p) { return arg_positive(p.lambda()) / (2 * p.n()); }

bool angle_in_sector(const Params& p, int k, double ang, double tol) {
  const int n = p.n();
  const double half = kPi / (2 * n);
  const double centre = arg_c0(p) + (slot_of(n, k) + 0.5) * kPi / n;
  return std::abs(std::remainder(ang - centre, kTwoPi)) <= half + tol;
}

bool is_real_positive(cplx lambda) { return lambda.imag() == 0.0 && lambda.real() > 0.0; }

void check_domain(const Params& p) {
  const double a = std::arg(p.lambda());
  const bool in_F = p.lambda().imag() > 0 && a < kTwoPi / (p.n() - 1);
  if (!in_F && !is_real_positive(p.lambda()))
    throw std::invalid_argument("cut rays need 0 < arg lambda < 2 pi/(n-1) or lambda > 0");
}

std::vector<cplx> pull_points(const Params& p, int eps, const std::vector<cplx>& pts, int& failures) {
  std::vector<cplx> out;
  out.reserve(pts.size());
  for (cplx w : pts) {
    try {
      out.push_back(inverse_branch(p, eps, w));
    } catch (const BranchError&) {
      ++failures;
    }
  }
  return out;
}

// Whether some segment of a polyline crosses one of the critical value rays {+-s sqrt(lambda), s >= 2}.
bool crosses_critical_value_ray(const Params& p, const std::vector<cplx>& pts) {
  const cplx unit = p.sqrt_lambda() / std::abs(p.sqrt_lambda());
  const double a = 2 * std::abs(p.sqrt_lambda());
  for (size_t i = 1; i < pts.size(); ++i) {
    const cplx u = pts[i - 1] / unit, v = pts[i] / unit;
    if ((u.imag() > 0) == (v.imag() > 0)) continue;
    const double s = u.imag() / (u.imag() - v.imag());
    const double x = u.real() + s * (v.real() - u.real());
    if (std::abs(x) >= a) return true;
  }
  return false;
}

bool zero_and_infinity_member(const Params& p, const CutRayApprox& c) {
  const int n = p.n();
  const double r = std::abs(p.c0());
  bool far = false, near = false;
  // Near infinity f(z) ~ z^n, near 0 f(z) ~ lambda z^-n lands near infinity in direction tau(theta).
  const double a_far = kTwoPi * c.theta.to_double();
  const double a_img = kTwoPi * tau(n, c.theta).to_double();
  for (int k = 0; k < 2 * n && !(far && near); ++k) {
    far = far || in_cut_region(p, c, std::polar(1e8 * r, a_far + k * kPi));
    for (int h = 0; h < 2 && !near; ++h) {
      const double b = (std::arg(p.lambda()) - a_img - h * kPi) / n + k * kPi / n;
      near = near || in_cut_region(p, c, std::polar(1e-8 * r, b));
    }
  }
  return far && near;
}

}  // namespace

int sector_of(const Params& p, cplx z) {
  if (z == 0.0 || is_infinite(z)) throw std::invalid_argument("sector_of: z must be finite and nonzero");
  const int n = p.n();
  const double a = arg_positive(z / p.c0());
  int slot = int(std::floor(a * n / kPi));
  slot = std::clamp(slot, 0, 2 * n - 1);
  return label_of(n, slot);
}

bool in_closed_sector(const Params& p, int k, cplx z, double tol) {
  if (z == 0.0 || is_infinite(z)) return true;
  return angle_in_sector(p, k, std::arg(z), tol);
}

cplx inverse_branch(const Params& p, int eps, cplx w) {
  const int n = p.n();
  const int slot = slot_of(n, eps);
  const cplx lam = p.lambda();
  const cplx disc = std::sqrt(w * w - 4.0 * lam);
  cplx x1 = 0.5 * (w + disc);
  if (std::abs(w - disc) > std::abs(w + disc)) x1 = 0.5 * (w - disc);
  const cplx x2 = lam / x1;
  const double centre = arg_c0(p) + (slot + 0.5) * kPi / n;
  const double half = kPi / (2 * n);
  int found = 0;
  bool on_edge = false;
  cplx z;
  for (cplx x : {x1, x2}) {
    const double rad = std::pow(std::abs(x), 1.0 / n);
    for (int m = 0; m < n; ++m) {
      const double ang = (std::arg(x) + kTwoPi * m) / n;
      const double rel = std::abs(std::remainder(ang - centre, kTwoPi));
      if (std::abs(rel - half) <= 1e-12) on_edge = true;
      else if (rel < half) {
        ++found;
        z = std::polar(rad, ang);
      }
    }
  }
  if (on_edge) throw BranchError("inverse_branch: w lies on a critical value ray");
  if (found != 1) throw BranchError("inverse_branch: no unique preimage in the sector");
  const cplx fp = deriv(p, z);
  if (std::abs(fp) > 0) {
    const cplx zn = z - (eval(p, z) - w) / fp;
    if (std::abs(eval(p, zn) - w) < std::abs(eval(p, z) - w)) z = zn;
  }
  return z;
}

std::vector<cplx> CutRayApprox::points() const {
  std::vector<cplx> out;
  for (const auto& b : boundary) out.insert(out.end(), b.points.begin(), b.points.end());
  out.insert(out.end(), julia_samples.begin(), julia_samples.end());
  return out;
}

bool in_cut_region(const Params& p, const CutRayApprox& c, cplx z, double tol) {
  const int n = p.n();
  cplx w = z;
  bool angle_mode = false, tiny = false;
  double ang = 0;
  for (int k = 0; k <= c.depth && k < int(c.symbols.size()); ++k) {
    const int s = c.symbols[k], o = opposite(n, s);
    if (!angle_mode) {
      if (w == 0.0 || is_infinite(w)) return false;
      if (std::abs(w) > 1e60 || std::abs(w) < 1e-60) {
        angle_mode = true;
        tiny = std::abs(w) < 1;
        ang = std::arg(w);
      }
    }
    if (angle_mode) {
      if (!angle_in_sector(p, s, ang, tol) && !angle_in_sector(p, o, ang, tol)) return false;
      // |w| huge: f(w) ~ w^n; |w| tiny: f(w) ~ lambda w^-n, which is huge again.
      if (tiny) {
        ang = std::arg(p.lambda()) - n * ang;
        tiny = false;
      } else {
        ang = n * ang;
      }
      ang = std::remainder(ang, kTwoPi);
      continue;
    }
    if (!in_closed_sector(p, s, w, tol) && !in_closed_sector(p, o, w, tol)) return false;
    if (c.real_variant && std::abs(w.imag()) <= 1e-14 * std::abs(w)) return false;
    w = eval(p, w);
  }
  return true;
}

CutRayApprox cut_ray(const Params& p, const Angle& theta, const CutRayOptions& opts) {
  check_domain(p);
  if (!theta.is_exact() || in_theta(p.n(), theta) != Membership::yes)
    throw std::invalid_argument("cut_ray: theta must be an exact angle of the Cantor set Theta");
  if (opts.depth < 0 || opts.samples_per_ray < 2) throw std::invalid_argument("cut_ray: bad options");
  const int n = p.n();
  CutRayApprox c;
  c.theta = theta;
  c.real_variant = is_real_positive(p.lambda());
  if (c.real_variant && !is_tau_periodic(n, theta))
    throw std::invalid_argument("cut_ray: real lambda needs a tau-periodic theta");
  c.symbols = itinerary(n, theta, opts.depth + 1).symbols;

  const int sd = c.symbols[opts.depth];
  const double r0 = std::abs(p.c0());
  const double ac0 = arg_c0(p);
  std::vector<RayPolyline> curves;
  for (int k : {sd, opposite(n, sd)}) {
    const int slot = slot_of(n, k);
    for (int edge = 0; edge < 2; ++edge) {
      double ang = ac0 + (slot + edge) * kPi / n;
      // On R* the sector edge is excluded; follow it from just inside the sector.
      if (c.real_variant && std::abs(std::sin(ang)) < 1e-15) ang += edge == 0 ? 1e-9 : -1e-9;
      RayPolyline ray;
      ray.kind = RayKind::cutray_boundary;
      ray.angle = theta;
      for (int i = 0; i < opts.samples_per_ray; ++i) {
        const double u = -1.0 + 2.0 * i / (opts.samples_per_ray - 1);
        const double t = std::pow(opts.span, u);
        ray.points.push_back(std::polar(r0 * t, ang));
        ray.potentials.push_back(t);
      }
      curves.push_back(std::move(ray));
    }
  }
  std::vector<cplx> samples;
  for (int k : {sd, opposite(n, sd)}) samples.push_back(std::polar(r0, ac0 + (slot_of(n, k) + 0.5) * kPi / n));

  int failures = 0;
  for (int j = opts.depth - 1; j >= 0; --j) {
    std::vector<RayPolyline> next;
    std::vector<cplx> next_samples;
    for (int eps : {c.symbols[j], opposite(n, c.symbols[j])}) {
      for (const auto& cv : curves) {
        RayPolyline pulled = cv;
        pulled.points.clear();
        pulled.potentials.clear();
        for (size_t i = 0; i < cv.points.size(); ++i) {
          try {
            pulled.points.push_back(inverse_branch(p, eps, cv.points[i]));
            pulled.potentials.push_back(cv.potentials[i]);
          } catch (const BranchError&) {
            ++failures;
          }
        }
        if (!pulled.points.empty()) next.push_back(std::move(pulled));
      }
      const auto ps = pull_points(p, eps, samples, failures);
      next_samples.insert(next_samples.end(), ps.begin(), ps.end());
    }
    curves = std::move(next);
    samples = std::move(next_samples);
  }
  c.depth = opts.depth;
  c.boundary = std::move(curves);
  c.julia_samples = std::move(samples);
  if (failures > 0) {
    std::ostringstream os;
    os << failures << " points dropped by inverse_branch";
    c.diagnostics = os.str();
  }
  c.contains_zero_and_infinity = zero_and_infinity_member(p, c);
  return c;
}

CutRayApprox cut_ray_preimage(const Params& p, const Angle& alpha, const CutRayApprox& base,
                              const RayOptions& ray_opts) {
  const int n = p.n();
  if (!alpha.is_exact()) throw std::invalid_argument("cut_ray_preimage: alpha must be exact");
  int N = -1;
  Angle a = alpha;
  for (int k = 0; k <= 64; ++k, a = tau(n, a)) {
    if (a == base.theta) {
      N = k;
      break;
    }
  }
  if (N < 0) throw std::invalid_argument("cut_ray_preimage: no iterate of alpha equals the base angle");
  if (N == 0) return base;

  // The critical orbit must avoid the base cut ray for iterates 1..N.
  cplx v = critical_values(p).plus;
  for (int k = 1; k <= N; ++k, v = eval(p, v)) {
    if (is_infinite(v) || v == 0.0) break;
    if (in_cut_region(p, base, v, 0.0))
      throw BranchError("cut_ray_preimage: critical orbit iterate f^" + std::to_string(k) +
                        "(c) meets the base cut ray");
  }

  CutRayApprox c = base;
  c.theta = alpha;
  c.diagnostics.clear();
  int failures = 0;
  for (int j = N - 1; j >= 0; --j) {
    const Angle beta = tau_iterate(n, alpha, j);
    for (const auto& b : c.boundary)
      if (crosses_critical_value_ray(p, b.points))
        throw BranchError("cut_ray_preimage: the cut ray of tau^" + std::to_string(j + 1) +
                          "(alpha) crosses a critical value ray");
    const RayPolyline ray = trace_external_ray(p, beta, ray_opts);
    if (ray.points.empty()) throw BranchError("cut_ray_preimage: could not trace R(" + beta.str() + ")");
    std::map<int, int> votes;
    for (cplx z : ray.points) ++votes[sector_of(p, z)];
    if (votes.size() != 1)
      throw BranchError("cut_ray_preimage: R(" + beta.str() + ") crosses a sector boundary");
    const int eps = votes.begin()->first;

    std::vector<RayPolyline> next;
    std::vector<cplx> samples;
    for (int e : {eps, opposite(n, eps)}) {
      for (const auto& cv : c.boundary) {
        RayPolyline pulled = cv;
        pulled.points.clear();
        pulled.potentials.clear();
        for (size_t i = 0; i < cv.points.size(); ++i) {
          try {
            pulled.points.push_back(inverse_branch(p, e, cv.points[i]));
            pulled.potentials.push_back(cv.potentials[i]);
          } catch (const BranchError&) {
            ++failures;
          }
        }
        if (!pulled.points.empty()) next.push_back(std::move(pulled));
      }
      const auto ps = pull_points(p, e, c.julia_samples, failures);
      samples.insert(samples.end(), ps.begin(), ps.end());
    }
    c.boundary = std::move(next);
    c.julia_samples = std::move(samples);
    c.symbols.insert(c.symbols.begin(), eps);
    ++c.depth;
  }
  if (failures > 0) c.diagnostics = std::to_string(failures) + " points dropped by inverse_branch";
  c.contains_zero_and_infinity = zero_and_infinity_member(p, c);
  return c;
}

}  // namespace mcm
