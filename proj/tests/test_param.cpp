#include "doctest.h"
#include "mcmullen/param.hpp"
#include "mcmullen/roots.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>
#include <tuple>

using namespace mcm;

namespace {
Angle A(long long p, long long q) { return Angle::exact(p, q); }
}  // namespace

TEST_CASE("aberth") {
  // (x - 1)(x + 2)(x - i)
  const cplx i(0, 1);
  const std::vector<cplx> c{2.0 * i, -2.0 - i, 1.0 - i, 1.0};
  const auto r = aberth(c);
  CHECK(r.converged);
  for (cplx want : {cplx(1), cplx(-2), i}) {
    double best = 1;
    for (cplx z : r.roots) best = std::min(best, std::abs(z - want));
    CHECK(best < 1e-12);
  }
  CHECK_THROWS_AS(aberth({1.0}), std::invalid_argument);
}

TEST_CASE("Phi_0") {
  const Params p(3, 1e3);
  CHECK(std::abs(phi0(p) / (4.0 * p.lambda()) - 1.0) < 1e-4);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 20; ++i) {
    const cplx l(u(rng), u(rng));
    if (classify_fast(Params(3, l)).level != 0) continue;
    const cplx a = phi0(Params(3, l));
    CHECK(std::abs(a) > 1);
    CHECK(std::abs(phi0(Params(3, std::conj(l))) - std::conj(a)) < 1e-9 * std::abs(a));
    const auto [v, d] = phi0_jet(Params(3, l));
    const double h = 1e-6;
    const cplx fd = (phi0(Params(3, l + h)) - phi0(Params(3, l - h))) / (2 * h);
    CHECK(std::abs(d - fd) < 1e-5 * std::abs(d));
  }
}

TEST_CASE("capacity") {
  const auto c = capacity_check(3, {1e2, 1e3, 1e4});
  CHECK(std::abs(c[1] - 1.0) < std::abs(c[0] - 1.0));
  CHECK(std::abs(c[2] - 1.0) < std::abs(c[1] - 1.0));
  CHECK(std::abs(c[1] - 1.0) < 1e-3);
}

TEST_CASE("Phi_2") {
  const cplx l = 1e-4;
  CHECK(std::abs(l * phi2(Params(3, l)) - 1.0 / 64) < 1e-3 / 64);
  for (int n : {3, 4, 5}) {
    const double target = std::pow(2.0, 2.0 * n / (2 - n));
    CHECK(std::abs(l * phi2(Params(n, l)) - target) < 1e-3 * target);
  }
  for (cplx z : {cplx(0.003, 0.002), cplx(-0.001, 0.004)})
    for (int n : {3, 4}) {
      const Params p(n, z);
      REQUIRE(classify_fast(p).level == 2);
      const cplx f = phi2(p);
      CHECK(std::abs(f) > 1);
      const auto g = green(p, eval(p, critical_values(p).plus));
      REQUIRE(g);
      CHECK(std::abs(std::pow(std::abs(f), n - 2) / std::exp(2 * *g) - 1) < 1e-8);
    }
}

TEST_CASE("Phi_H") {
  const cplx c(0, 0.125);
  CHECK(std::abs(phiH(Params(3, c))) < 1e-12);
  double turn = 0;
  cplx prev = phiH(Params(3, c + 0.003));
  for (int j = 1; j <= 64; ++j) {
    const cplx v = phiH(Params(3, c + std::polar(0.003, kTwoPi * j / 64)));
    CHECK(std::abs(v) < 1);
    turn += std::arg(v / prev);
    prev = v;
  }
  CHECK(turn / kTwoPi == doctest::Approx(1).epsilon(1e-9));
  CHECK_THROWS_AS(phiH(Params(3, 100.0)), std::domain_error);
  CHECK_THROWS_AS(phiH(Params(3, 0.1), 2), std::invalid_argument);
}

TEST_CASE("parameter rays") {
  const RayPolyline r = trace_param_ray(3, A(0, 1));
  REQUIRE_FALSE(r.truncated);
  for (cplx z : r.points) CHECK(std::abs(z.imag()) < 1e-8 * std::max(1.0, std::abs(z)));
  for (size_t i = 0; i < r.points.size(); i += 7) {
    const cplx a = phi0(Params(3, r.points[i]));
    CHECK(std::abs(std::log(std::abs(a)) - r.potentials[i]) < 1e-8);
  }
  CHECK(std::abs(nu(3, A(0, 1)) - 4.0 / 27) < 1e-6);
  // lambda -> -lambda conjugates f for n = 3 and turns rays by a half
  for (auto [p, q] : {std::pair{1, 4}, {1, 12}, {1, 5}}) {
    const cplx a = nu(3, A(p, q)), b = nu(3, A(2 * p + q, 2 * q));
    CHECK(std::abs(a + b) < 1e-6);
  }
  const cplx w = std::polar(1.0, kTwoPi / 3);
  for (auto [p, q] : {std::pair{0, 1}, {1, 5}}) {
    const cplx a = nu(4, A(p, q)), b = nu(4, A(3 * p + q, 3 * q));
    CHECK(std::abs(b - w * a) < 1e-6);
  }
}

TEST_CASE("cusps") {
  const CuspResult c = find_cusp(3, A(0, 1));
  CHECK(std::abs(c.lambda - 4.0 / 27) < 1e-12);
  CHECK(c.period == 1);
  CHECK(c.sign == 1);
  CHECK(std::abs(c.parabolic_point - std::sqrt(2.0 / 3)) < 1e-8);
  CHECK(std::abs(c.multiplier - 1.0) < 1e-9);
  CHECK(c.residual < 1e-9);
  const CuspResult d = find_cusp(3, A(1, 4));
  CHECK(d.residual < 1e-9);
  CHECK(std::abs(d.lambda - nu(3, A(1, 4))) < 1e-9);
  CHECK(param_landing(3, A(1, 4)).method == "cusp");
  CHECK_THROWS(find_cusp(3, A(1, 12)));
  // even degree: the sign predicted from theta/2 is the one that closes
  for (auto [p, q, e] : {std::tuple{0, 1, 1}, {1, 3, -1}, {2, 5, 1}, {1, 5, -1}}) {
    const CuspResult c = find_cusp(4, A(p, q));
    CHECK(c.residual < 1e-9);
    CHECK(c.sign == e);
    CHECK(std::abs(c.multiplier - 1.0) < 1e-8);
  }
}

TEST_CASE("preperiodic landing") {
  const Angle t = A(1, 12);
  const LandingResult l = param_landing(3, t);
  CHECK(l.method == "misiurewicz");
  REQUIRE(std::abs(l.lambda - l.ray.points.back()) < 0.05);
  // no parabolic parameter of low period near a Misiurewicz landing point
  CHECK_FALSE(parabolic_near(3, l.lambda, 1e-4, 4));
  // the critical orbit is strictly preperiodic onto a repelling cycle
  const Params p(3, l.lambda);
  const auto o = iterate_orbit(p, critical_values(p).plus, 8);
  bool found = false;
  for (int pre = 1; pre <= 3 && !found; ++pre)
    for (int q = 1; q <= 3 && !found; ++q)
      for (int e : {1, -1})
        if (std::abs(o.points[pre + q] - double(e) * o.points[pre]) < 1e-8) {
          CHECK(std::abs(cycle_multiplier(p, o.points[pre], q, e)) > 1);
          found = true;
          break;
        }
  CHECK(found);
}

TEST_CASE("hole centers") {
  const HoleCensus a = sierpinski_hole_centers(3, 3);
  REQUIRE(a.complete);
  std::vector<cplx> c = a.centers;
  std::sort(c.begin(), c.end(), [](cplx x, cplx y) { return x.imag() < y.imag(); });
  CHECK(std::abs(c[0] - cplx(0, -0.125)) < 1e-12);
  CHECK(std::abs(c[1] - cplx(0, 0.125)) < 1e-12);
  for (auto [n, k] : {std::pair{3, 4}, {3, 5}, {4, 3}, {4, 4}}) {
    const HoleCensus h = sierpinski_hole_centers(n, k);
    CHECK(h.complete);
    CHECK((long long)h.centers.size() == hole_count(n, k));
    for (cplx l : h.centers) {
      const Params p(n, l);
      CHECK(std::abs(iterate_jet(p, critical_values(p).plus, k - 2).value) < 1e-9);
    }
  }
  CHECK(hole_count(3, 4) == 12);
  CHECK(hole_count(4, 3) == 3);
  CHECK(hole_count(5, 5) == 400);
}

TEST_CASE("multiplier map") {
  const auto a = multiplier_kappa(Params(3, 0.125));
  REQUIRE(a);
  CHECK(std::abs(a->kappa) < 1e-12);
  CHECK(std::abs(a->rho) < 1e-12);
  const auto b = multiplier_kappa(Params(3, -0.125));
  REQUIRE(b);
  CHECK(b->eps == -1);
  CHECK(std::abs(b->rho - b->kappa * b->kappa) < 1e-12);
  const double h = 1e-5;
  auto rho = [](double l) { return multiplier_kappa(Params(3, l))->rho; };
  CHECK(std::abs((rho(0.125 + h) - rho(0.125 - h)) / (2 * h) - 24.0) < 1e-3);
  CHECK(std::abs((rho(-0.125 + h) - 2.0 * rho(-0.125) + rho(-0.125 - h)) / (2 * h * h) - 576.0) < 1e-2);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.02, 0.02);
  for (int i = 0; i < 20; ++i) {
    const auto m = multiplier_kappa(Params(3, cplx(0.125 + u(rng), u(rng))));
    REQUIRE(m);
    CHECK(std::abs(m->kappa) < 1);
  }
  CHECK_FALSE(multiplier_kappa(Params(3, 100.0)));
}

TEST_CASE("component boundaries") {
  const ComponentBoundary b = component_boundary(3, 0.125, 256);
  CHECK(b.diagnostics.empty());
  REQUIRE(b.samples.size() == 256);
  CHECK(b.closure_defect < 1e-3);
  CHECK(b.max_residual < 1e-8);
  double d = 1;
  for (const auto& [s, l] : b.samples) d = std::min(d, std::abs(l - 4.0 / 27));
  CHECK(d < 1e-3);
  for (size_t i = 0; i < b.samples.size(); i += 16) {
    const auto m = multiplier_kappa(Params(3, b.samples[i].second), 1000000);
    REQUIRE(m);
    CHECK(std::abs(m->kappa - 0.999 * std::polar(1.0, kTwoPi * b.samples[i].first)) < 1e-6);
  }

  const ComponentBoundary h = hole_boundary(3, cplx(0, 0.125), 64);
  CHECK(h.diagnostics.empty());
  REQUIRE(h.samples.size() == 64);
  CHECK(h.closure_defect < 1e-6);
  for (const auto& [s, l] : h.samples) {
    CHECK(classify_fast(Params(3, l)).level == 3);
    CHECK(std::abs(std::abs(phiH(Params(3, l))) - 0.99) < 1e-8);
  }
  // f(v+) sits about 1e-3 from the boundary of T, so the grid needs a fine pixel
  CHECK(classify_oracle(Params(3, h.samples[16].second), 4096).level == 3);
}

TEST_CASE("parameter plane render") {
  setenv("MCMULLEN_THREADS", "1", 1);
  const Image one = render_param_plane(3, square(0.0, 0.3), 33, 17);
  setenv("MCMULLEN_THREADS", "3", 1);
  const Image three = render_param_plane(3, square(0.0, 0.3), 33, 17);
  unsetenv("MCMULLEN_THREADS");
  CHECK(encode_ppm(one) == encode_ppm(three));

  const Image img = render_param_plane(3, square(0.0, 0.3), 40, 30);
  CHECK(img.width == 40);
  CHECK(img.height == 30);
  // lambda = 1/8 is in the main hyperbolic component, drawn black
  const int x = int((0.125 + 0.3) / 0.6 * 40), y = 15;
  const Rgb c = img.at(x, y);
  CHECK((c.r == 0 && c.g == 0 && c.b == 0));
}
