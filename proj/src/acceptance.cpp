#include "mcmullen/acceptance.hpp"

#include "mcmullen/cutray.hpp"
#include "mcmullen/kdtree.hpp"
#include "mcmullen/param.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace mcm {

namespace {

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

void note(AcceptanceRow& r, const std::string& s) {
  if (!r.detail.empty()) r.detail += "; ";
  r.detail += s;
}

// Fails the row unless ok, recording the measurement either way.
void expect(AcceptanceRow& r, bool ok, const std::string& what) {
  r.pass = r.pass && ok;
  note(r, what + (ok ? "" : " FAIL"));
}

void cusp_at_zero(AcceptanceRow& r) {
  const CuspResult c = find_cusp(3, Angle::exact(0, 1));
  const double dl = std::abs(c.lambda - 4.0 / 27), dz = std::abs(c.parabolic_point - std::sqrt(2.0 / 3));
  expect(r, dl < 1e-9, fmt("|lambda - 4/27| = %.2e", dl));
  expect(r, dz < 1e-9, fmt("|z - sqrt(2/3)| = %.2e", dz));
}

void multiplier_expansions(AcceptanceRow& r) {
  const double h = 1e-5;
  auto rho = [](double l) {
    const auto m = multiplier_kappa(Params(3, l));
    if (!m) throw std::runtime_error("no attracting cycle at " + std::to_string(l));
    return m->rho;
  };
  const cplx d1 = (rho(0.125 + h) - rho(0.125 - h)) / (2 * h);
  expect(r, std::abs(d1 / 24.0 - 1.0) < 1e-3, fmt("rho'(1/8) = %.6f", d1.real()));
  const cplx r0 = rho(-0.125), rp = rho(-0.125 + h), rm = rho(-0.125 - h);
  const cplx dm = (rp - rm) / (2 * h), d2 = (rp - 2.0 * r0 + rm) / (2 * h * h);
  expect(r, std::abs(dm) < 1e-2, fmt("|rho'(-1/8)| = %.2e", std::abs(dm)));
  expect(r, std::abs(d2 / 576.0 - 1.0) < 1e-2, fmt("rho''(-1/8)/2 = %.4f", d2.real()));
}

void hole_census(AcceptanceRow& r) {
  for (auto [n, k] : {std::pair{3, 3}, {3, 4}, {3, 5}, {4, 3}}) {
    const HoleCensus h = sierpinski_hole_centers(n, k);
    const long long want = hole_count(n, k);
    expect(r, (long long)h.centers.size() == want,
           fmt("(%g,%g): %g of %g", n, k, double(h.centers.size()), double(want)));
    if (n == 3 && k == 3) {
      double worst = 0;
      for (cplx c : h.centers) worst = std::max(worst, std::min(std::abs(c - cplx(0, 0.125)), std::abs(c + cplx(0, 0.125))));
      expect(r, h.centers.size() == 2 && worst < 1e-10, fmt("+-i/8 within %.1e", worst));
    }
  }
}

void capacity(AcceptanceRow& r) {
  for (double a : {0.0, kPi / 3}) {
    const auto c = capacity_check(3, {1e3, 1e4}, a);
    const double e3 = std::abs(c[0] - 1.0), e4 = std::abs(c[1] - 1.0);
    expect(r, e3 < 1e-3 && e4 < 1e-5, fmt("arg %.4f: %.2e at 1e3, %.2e at 1e4", a, e3, e4));
  }
}

void mcmullen_normalization(AcceptanceRow& r) {
  const cplx l = 1e-4;
  const double e = std::abs(l * phi2(Params(3, l)) - 1.0 / 64) * 64;
  expect(r, e < 1e-3, fmt("relative error %.2e", e));
}

void boettcher_suite(AcceptanceRow& r, int n) {
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> a(0, kTwoPi), u(-1, 1);
  const Params p(n, cplx(u(rng), u(rng)));
  double fe = 0, rot = 0;
  const cplx w = std::polar(1.0, kPi / n);
  for (int i = 0; i < 100; ++i) {
    const cplx z = std::polar(2 * p.escape_radius(), a(rng));
    const cplx phi = boettcher(p, z);
    fe = std::max(fe, std::abs(boettcher(p, eval(p, z)) - ipow(phi, n)) / std::pow(std::abs(phi), n));
    rot = std::max(rot, std::abs(boettcher(p, w * z) - w * phi) / std::abs(phi));
  }
  expect(r, fe < 1e-9, fmt("functional equation %.2e", fe));
  double a1 = 0;
  for (cplx l : {cplx(2, 0), cplx(0.2, 0.2), cplx(-0.05, 0.3)}) {
    const Params q(n, l);
    const cplx z = std::polar(1e6, 0.3);
    const cplx got = boettcher_correction(q, z) * ipow(z, 2 * n);
    a1 = std::max(a1, std::abs(got - l / double(n)) / std::abs(l / double(n)));
  }
  expect(r, a1 < 1e-4, fmt("a1 relative %.2e", a1));
  expect(r, rot < 1e-9, fmt("rotation %.2e", rot));
}

void cut_ray_suite(AcceptanceRow& r) {
  const Params p(3, cplx(0.2, 0.2));
  CutRayOptions o;
  o.depth = 12;
  const CutRayApprox half = cut_ray(p, Angle::exact(1, 2), o);
  const CutRayApprox quarter = cut_ray(p, Angle::exact(1, 4), o);
  const CutRayApprox three = cut_ray(p, Angle::exact(3, 4), o);
  auto neg = [](std::vector<cplx> v) {
    for (auto& z : v) z = -z;
    return v;
  };
  double sym = 0;
  size_t outside = 0, samples = 0, ray_out = 0, ray_pts = 0, bad_count = 0;
  for (const CutRayApprox* c : {&half, &quarter}) {
    const auto pts = c->points();
    double scale = 0;
    for (cplx z : pts) scale = std::max(scale, std::abs(z));
    sym = std::max(sym, hausdorff_distance(pts, neg(pts)) / scale);
    sym = std::max(sym, hausdorff_distance(c->julia_samples, neg(c->julia_samples)));
    for (cplx z : c->julia_samples) {
      ++samples;
      outside += !in_cut_region(p, *c, z);
    }
    const Angle opposite = c == &half ? Angle::exact(1, 1) : Angle::exact(3, 4);
    for (const Angle& a : {c->theta, opposite}) {
      const RayPolyline ray = trace_external_ray(p, a);
      if (ray.truncated) throw std::runtime_error("external ray truncated: " + ray.failure);
      for (int d = 0; d <= c->depth; ++d) {
        CutRayApprox shallow = *c;
        shallow.depth = d;
        for (cplx z : ray.points) {
          ++ray_pts;
          ray_out += !in_cut_region(p, shallow, z);
        }
      }
    }
    // tau(1/2) = 1/2 and tau(1/4) = 3/4 ~ 1/4: preimages of the cut ray of tau(theta)
    const CutRayApprox& image = c == &half ? half : three;
    for (int i = 0; i < 50; ++i) {
      const cplx wpt = image.julia_samples[i * image.julia_samples.size() / 50];
      int hits = 0;
      for (int e = -2; e <= 3; ++e) hits += in_cut_region(p, *c, inverse_branch(p, e, wpt));
      bad_count += hits != 2;
    }
  }
  expect(r, sym < 1e-9, fmt("central symmetry %.2e", sym));
  expect(r, outside == 0, fmt("%g of %g samples outside their region", double(outside), double(samples)));
  const double hd = hausdorff_distance(quarter.points(), three.points());
  expect(r, hd < 1e-6, fmt("Hausdorff(1/4, 3/4) = %.2e", hd));
  expect(r, ray_out == 0, fmt("%g of %g ray points outside", double(ray_out), double(ray_pts)));
  expect(r, bad_count == 0, fmt("%g of 100 samples without exactly two preimages", double(bad_count)));
}

void cusp_iff_periodic(AcceptanceRow& r) {
  for (auto [a, b] : {std::pair{0, 1}, {1, 4}}) {
    const CuspResult c = find_cusp(3, Angle::exact(a, b));
    expect(r, c.residual < 1e-9, fmt("cusp %g/%g residual %.1e", a, b, c.residual));
  }
  const LandingResult l = param_landing(3, Angle::exact(1, 12));
  const Params p(3, l.lambda);
  const auto o = iterate_orbit(p, critical_values(p).plus, 12);
  double best = 1e300, mult = 0;
  for (int pre = 1; pre <= 4; ++pre)
    for (int q = 1; q <= 4; ++q)
      for (int e : {1, -1}) {
        if (pre + q >= int(o.points.size())) continue;
        const double d = std::abs(o.points[pre + q] - double(e) * o.points[pre]);
        if (d < best) {
          best = d;
          mult = std::abs(cycle_multiplier(p, o.points[pre], q, e));
        }
      }
  expect(r, best < 1e-6 && mult > 1, fmt("nu(1/12) orbit lands within %.1e on a cycle with |multiplier| %.3f", best, mult));
  const auto par = parabolic_near(3, l.lambda, 1e-3, 4);
  expect(r, !par, par ? fmt("parabolic parameter at distance %.2e", std::abs(par->lambda - l.lambda)) : "no parabolic parameter within 1e-3");
}

void classifier_agreement(AcceptanceRow& r, int res) {
  const int N = 64;
  std::vector<ClassificationResult> fast(N * N), oracle(N * N);
  auto lam = [&](int i, int j) { return cplx(-0.3 + 0.6 * (i + 0.5) / N, -0.3 + 0.6 * (j + 0.5) / N); };
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      fast[i * N + j] = classify_fast(Params(3, lam(i, j)));
      oracle[i * N + j] = classify_oracle(Params(3, lam(i, j)), res);
    }
  auto same = [](const ClassificationResult& a, const ClassificationResult& b) { return a.kind == b.kind && a.level == b.level; };
  int agree = 0, compared = 0;
  for (int k = 0; k < N * N; ++k) {
    if (fast[k].kind == ClassKind::undetermined || oracle[k].kind == ClassKind::undetermined) continue;
    ++compared;
    agree += same(fast[k], oracle[k]);
  }
  const double frac = double(agree) / compared;
  expect(r, frac >= 0.95, fmt("agreement %.4f on %g determined pixels", frac, compared));
  // conj maps pixel (i, j) to (i, N-1-j); the rotation by e^(2 pi i/2) = -1 maps it to (N-1-i, N-1-j)
  for (const auto* v : {&fast, &oracle}) {
    int ok = 0, det = 0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const auto& a = (*v)[i * N + j];
        if (a.kind == ClassKind::undetermined) continue;
        const auto& c = (*v)[i * N + (N - 1 - j)];
        const auto& m = (*v)[(N - 1 - i) * N + (N - 1 - j)];
        if (c.kind == ClassKind::undetermined || m.kind == ClassKind::undetermined) continue;
        ++det;
        ok += same(a, c) && same(a, m);
      }
    const double s = double(ok) / det;
    expect(r, s >= 0.99, fmt(v == &fast ? "fast symmetry %.4f" : "oracle symmetry %.4f", s));
  }
}

void jordan_sanity(AcceptanceRow& r) {
  std::vector<cplx> l(64);
  for (int j = 0; j < 64; ++j) l[j] = nu(3, Angle::exact(j, 64));
  double sep = 1e300;
  for (int a = 0; a < 64; ++a)
    for (int b = a + 1; b < 64; ++b) sep = std::min(sep, std::abs(l[a] - l[b]));
  expect(r, sep > 1e-5, fmt("min separation %.2e", sep));
  double total = 0;
  bool monotone = true;
  for (int j = 0; j < 64; ++j) {
    const double d = std::arg(l[(j + 1) % 64] / l[j]);
    monotone = monotone && d > 0;
    total += d;
  }
  expect(r, monotone && std::abs(total - kTwoPi) < 1e-9, fmt("arguments increase, total turn %.6f", total / kTwoPi));
  const ComponentBoundary b = component_boundary(3, 0.125, 256);
  double cusp = 1e300;
  for (const auto& s : b.samples) cusp = std::min(cusp, std::abs(s.second - 4.0 / 27));
  expect(r, b.samples.size() == 256 && b.closure_defect < 1e-3, fmt("closure defect %.2e", b.closure_defect));
  expect(r, cusp < 1e-3, fmt("distance to 4/27 %.2e", cusp));
}

void measure_diagnostic(AcceptanceRow& r) {
  const cplx m = nu(3, Angle::exact(1, 12));
  for (cplx l : {cplx(100, 0), m}) {
    const auto a = julia_area_estimate(Params(3, l), {256, 512, 1024});
    const bool dec = a[1] < a[0] && a[2] < a[1];
    expect(r, dec, fmt(l == m ? "nu(1/12): %.4g, %.4g, %.4g" : "100: %.4g, %.4g, %.4g", a[0], a[1], a[2]));
  }
}

const char* const kNames[kAcceptanceCount] = {
    "cusp at theta = 0",          "multiplier expansions", "hole census",       "capacity expansion",
    "McMullen normalization",     "Boettcher suite",       "cut-ray suite",     "cusp iff periodic",
    "classifier agreement",       "Jordan-boundary sanity", "measure diagnostic"};

}  // namespace

AcceptanceRow run_criterion(int id, const AcceptanceOptions& opts) {
  if (id < 1 || id > kAcceptanceCount) throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
  AcceptanceRow r;
  r.id = id;
  r.name = kNames[id - 1];
  r.pass = true;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: cusp_at_zero(r); break;
      case 2: multiplier_expansions(r); break;
      case 3: hole_census(r); break;
      case 4: capacity(r); break;
      case 5: mcmullen_normalization(r); break;
      case 6: boettcher_suite(r, opts.n); break;
      case 7: cut_ray_suite(r); break;
      case 8: cusp_iff_periodic(r); break;
      case 9: classifier_agreement(r, opts.oracle_res); break;
      case 10: jordan_sanity(r); break;
      case 11: measure_diagnostic(r); break;
    }
  } catch (const std::exception& e) {
    r.pass = false;
    note(r, std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<AcceptanceRow> run_acceptance(const AcceptanceOptions& opts,
                                          const std::function<void(const AcceptanceRow&)>& on_row) {
  std::vector<AcceptanceRow> rows;
  for (int id = 1; id <= kAcceptanceCount; ++id) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
    rows.push_back(run_criterion(id, opts));
    if (on_row) on_row(rows.back());
  }
  return rows;
}

}  // namespace mcm
