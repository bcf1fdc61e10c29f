#include "doctest.h"
#include "mcmullen/cutray.hpp"

#include <random>

using namespace mcm;

namespace {
std::vector<cplx> negated(std::vector<cplx> v) {
  for (auto& z : v) z = -z;
  return v;
}
}

TEST_CASE("sectors") {
  Params p(3, 1.0);
  CHECK(sector_of(p, cplx(1, 1e-9)) == 0);
  CHECK(sector_of(p, critical_values(p).plus) == 0);
  CHECK(sector_of(p, cplx(-1, -1e-9)) == 3);
  CHECK(sector_of(p, critical_values(p).minus + cplx(0, -1e-9)) == 3);
  CHECK_THROWS_AS(sector_of(p, 0.0), std::invalid_argument);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int n : {3, 4, 5}) {
    Params q(n, std::polar(0.3, 0.5 / (n - 1)));
    for (int i = 0; i < 500; ++i) {
      const cplx z(u(rng), u(rng));
      const int s = sector_of(q, z);
      CHECK(in_closed_sector(q, s, z, 0.0));
      const int t = sector_of(q, -z);
      if (s != 0 && s != n) CHECK(t == -s);
    }
    // critical value in S_0 throughout the fundamental domain
    for (double a : {0.0, 0.3, 1.0, 1.9}) {
      Params r(n, std::polar(0.7, a * kPi / (n - 1)));
      CHECK(sector_of(r, critical_values(r).plus) == 0);
      CHECK(sector_of(r, critical_values(r).minus) == n);
    }
  }
}

TEST_CASE("inverse branches") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int n : {3, 4, 5}) {
    Params p(n, std::polar(0.2, 0.6 / (n - 1)));
    for (int i = 0; i < 1000; ++i) {
      const cplx w(u(rng), u(rng));
      const int eps = std::uniform_int_distribution<int>(1, n - 1)(rng) * (i % 2 ? 1 : -1);
      const cplx z = inverse_branch(p, eps, w);
      CHECK(std::abs(eval(p, z) - w) < 1e-10 * std::max(1.0, std::abs(w)));
      CHECK(sector_of(p, z) == eps);
      if (n % 2 == 1) CHECK(std::abs(inverse_branch(p, -eps, -w) + z) < 1e-10 * std::max(1.0, std::abs(z)));
      // exactly one algebraic preimage per open sector
      int hits = 0;
      for (int e = -(n - 1); e <= n; ++e) {
        const cplx ze = inverse_branch(p, e, w);
        hits += std::abs(ze - z) < 1e-9 * std::max(1.0, std::abs(z));
      }
      CHECK(hits == 1);
    }
    const cplx on_ray = 3.0 * p.sqrt_lambda();
    CHECK_THROWS_AS(inverse_branch(p, 1, on_ray), BranchError);
  }
}

TEST_CASE("hausdorff distance") {
  CHECK(hausdorff_distance({0.0, 1.0}, {0.0, 1.0}) == 0.0);
  CHECK(hausdorff_distance({0.0}, {cplx(3, 4)}) == doctest::Approx(5.0));
  CHECK_THROWS_AS(hausdorff_distance({}, {1.0}), std::invalid_argument);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<cplx> a, b;
  for (int i = 0; i < 300; ++i) a.emplace_back(u(rng), u(rng));
  for (int i = 0; i < 200; ++i) b.emplace_back(u(rng), u(rng));
  double brute = 0;
  for (cplx x : a) {
    double m = 1e9;
    for (cplx y : b) m = std::min(m, std::abs(x - y));
    brute = std::max(brute, m);
  }
  for (cplx y : b) {
    double m = 1e9;
    for (cplx x : a) m = std::min(m, std::abs(x - y));
    brute = std::max(brute, m);
  }
  CHECK(hausdorff_distance(a, b) == doctest::Approx(brute).epsilon(1e-14));
}

TEST_CASE("cut rays") {
  Params p(3, cplx(0.2, 0.2));
  CutRayOptions o;
  o.depth = 8;
  o.samples_per_ray = 24;
  const CutRayApprox c = cut_ray(p, Angle::exact(1, 2), o);
  CHECK(c.boundary.size() == 4u << 8);
  CHECK(c.julia_samples.size() == 2u << 8);
  CHECK(c.contains_zero_and_infinity);
  CHECK(c.diagnostics.empty());

  SUBCASE("contains the rays of angle 1/2 and 1") {
    for (const Angle& t : {Angle::exact(1, 2), Angle::exact(1, 1)}) {
      const RayPolyline ray = trace_external_ray(p, t);
      REQUIRE_FALSE(ray.truncated);
      for (cplx z : ray.points) CHECK(in_cut_region(p, c, z));
    }
  }
  SUBCASE("julia samples follow the itinerary") {
    for (cplx z : c.julia_samples) CHECK(in_cut_region(p, c, z));
    for (const auto& b : c.boundary)
      for (cplx z : b.points) CHECK(in_cut_region(p, c, z, 1e-6));
  }
  SUBCASE("central symmetry") {
    const auto pts = c.points();
    CHECK(hausdorff_distance(pts, negated(pts)) < 1e-9 * 1e4);
    CHECK(hausdorff_distance(c.julia_samples, negated(c.julia_samples)) < 1e-9);
  }
  SUBCASE("theta and theta + 1/2 give the same set") {
    const auto a = cut_ray(p, Angle::exact(1, 4), o), b = cut_ray(p, Angle::exact(3, 4), o);
    CHECK(hausdorff_distance(a.points(), b.points()) < 1e-6);
  }
  SUBCASE("nesting in depth") {
    CutRayOptions o2 = o;
    o2.depth = 9;
    const auto deeper = cut_ray(p, Angle::exact(1, 2), o2);
    for (cplx z : deeper.julia_samples) CHECK(in_cut_region(p, c, z));
  }
  SUBCASE("two-to-one") {
    const auto img = cut_ray(p, Angle::exact(1, 2), o);  // tau(1/2) = 1/2
    for (size_t i = 0; i < img.julia_samples.size(); i += 7) {
      const cplx w = img.julia_samples[i];
      int hits = 0;
      for (int e = -2; e <= 3; ++e) hits += in_cut_region(p, img, inverse_branch(p, e, w), 1e-9);
      CHECK(hits == 2);
    }
  }
  CHECK_THROWS_AS(cut_ray(p, Angle::exact(1, 8), o), std::invalid_argument);
  CHECK_THROWS_AS(cut_ray(Params(3, cplx(-0.2, -0.1)), Angle::exact(1, 2), o), std::invalid_argument);
}

TEST_CASE("julia samples converge with depth") {
  Params p(3, cplx(0.1, 0.15));
  std::vector<double> d;
  CutRayApprox prev;
  for (int depth = 4; depth <= 8; ++depth) {
    CutRayOptions o;
    o.depth = depth;
    o.samples_per_ray = 8;
    auto c = cut_ray(p, Angle::exact(1, 4), o);
    if (depth > 4) d.push_back(hausdorff_distance(prev.julia_samples, c.julia_samples));
    prev = std::move(c);
  }
  CHECK(d.back() < d.front());
}

TEST_CASE("continuity in lambda") {
  CutRayOptions o;
  o.depth = 8;
  o.samples_per_ray = 8;
  const Angle t = Angle::exact(1, 4);
  const cplx l0(0.1, 0.15);
  const auto c0 = cut_ray(Params(3, l0), t, o);
  const double d1 = hausdorff_distance(c0.julia_samples, cut_ray(Params(3, l0 + 1e-3), t, o).julia_samples);
  const double d2 = hausdorff_distance(c0.julia_samples, cut_ray(Params(3, l0 + 5e-4), t, o).julia_samples);
  CHECK(d1 < 0.1);
  CHECK(d2 < d1);
  CHECK(d2 / d1 == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("real parameters") {
  Params p(3, 0.05);
  CutRayOptions o;
  o.depth = 8;
  o.samples_per_ray = 16;
  const auto c = cut_ray(p, Angle::exact(1, 4), o);
  CHECK(c.real_variant);
  for (cplx z : c.julia_samples) {
    CHECK(std::abs(z.imag()) > 0);
    CHECK(in_cut_region(p, c, z));
  }
  CHECK_THROWS_AS(cut_ray(p, Angle::exact(1, 12) /* not in Theta */, o), std::invalid_argument);
  // convergence from the fundamental domain
  const auto near = cut_ray(Params(3, std::polar(0.05, 1e-4)), Angle::exact(1, 4), o);
  CHECK(hausdorff_distance(c.julia_samples, near.julia_samples) < 1e-2);
}

TEST_CASE("preimage cut rays") {
  Params p(3, cplx(0.2, 0.2));
  CutRayOptions o;
  o.depth = 8;
  o.samples_per_ray = 16;
  const auto base = cut_ray(p, Angle::exact(1, 4), o);
  const Angle alpha = Angle::exact(1, 12);
  const auto c = cut_ray_preimage(p, alpha, base);
  CHECK(c.depth == base.depth + 1);
  CHECK(c.contains_zero_and_infinity);
  const PointIndex idx(base.points());
  for (cplx z : c.points()) CHECK(idx.nearest(eval(p, z)).first < 1e-6 * std::max(1.0, std::abs(eval(p, z))));
  for (const Angle& t : {alpha, Angle::exact(7, 12)}) {
    const RayPolyline ray = trace_external_ray(p, t);
    for (cplx z : ray.points) CHECK(in_cut_region(p, c, z));
  }
  CHECK_THROWS_AS(cut_ray_preimage(p, Angle::exact(1, 5), base), std::invalid_argument);
}
