#include "doctest.h"
#include "mcmullen/core.hpp"

#include <random>

using namespace mcm;

namespace {
const double s2 = std::sqrt(2.0);
}

TEST_CASE("rejects degenerate parameters") {
  CHECK_THROWS_AS(Params(2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Params(3, 0.0), std::invalid_argument);
}

TEST_CASE("evaluation at simple points") {
  Params p(3, 0.125);
  CHECK(std::abs(eval(p, cplx(1 / s2)) - 1 / s2) < 1e-15);
  CHECK(is_infinite(eval(p, cplx(0))));
  CHECK(is_infinite(eval(p, complex_infinity())));
  CHECK_THROWS_AS(deriv(p, cplx(0)), std::domain_error);
}

TEST_CASE("derivatives agree with finite differences") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int n : {3, 4, 5}) {
    Params p(n, cplx(u(rng), u(rng)) * 0.1);
    for (int i = 0; i < 50; ++i) {
      cplx z(u(rng), u(rng));
      if (std::abs(z) < 0.3) continue;
      const double h = 1e-6;
      cplx fd = (eval(p, z + h) - eval(p, z - h)) / (2 * h);
      CHECK(std::abs(fd - deriv(p, z)) < 1e-6 * std::max(1.0, std::abs(fd)));
      cplx fdd = (deriv(p, z + h) - deriv(p, z - h)) / (2 * h);
      CHECK(std::abs(fdd - deriv2(p, z)) < 1e-5 * std::max(1.0, std::abs(fdd)));
    }
  }
}

TEST_CASE("critical points and values") {
  Params p(3, 0.125);
  const auto cs = critical_points(p);
  REQUIRE(cs.size() == 6);
  for (cplx c : cs) {
    CHECK(std::abs(std::abs(c) - 1 / s2) < 1e-15);
    CHECK(std::abs(deriv(p, c)) < 1e-13);
  }
  const auto v = critical_values(p);
  CHECK(std::abs(v.plus - 1 / s2) < 1e-15);
  CHECK(v.minus == -v.plus);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int n : {3, 4, 6}) {
    for (int i = 0; i < 20; ++i) {
      Params q(n, cplx(u(rng), u(rng)));
      const auto vq = critical_values(q);
      for (cplx c : critical_points(q)) {
        const cplx fc = eval(q, c);
        CHECK(std::min(std::abs(fc - vq.plus), std::abs(fc - vq.minus)) < 1e-12 * std::max(1.0, std::abs(fc)));
      }
    }
  }
}

TEST_CASE("critical value branch at negative lambda") {
  Params p(3, -0.125);
  CHECK(std::abs(critical_values(p).plus - cplx(0, 1 / s2)) < 1e-15);
}

TEST_CASE("escape radius property") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-30, 30), a(0, kTwoPi);
  for (int n : {3, 4, 5}) {
    for (int i = 0; i < 40; ++i) {
      Params p(n, cplx(u(rng), u(rng)));
      for (int j = 0; j < 20; ++j) {
        const cplx z = std::polar(p.escape_radius() * (1 + j * 0.3), a(rng));
        CHECK(std::abs(eval(p, z)) >= 2 * std::abs(z) * (1 - 1e-12));
      }
    }
  }
}

TEST_CASE("orbits") {
  SUBCASE("immediate escape") {
    Params p(3, 100.0);
    const Orbit o = iterate_orbit(p, critical_values(p).plus, 50);
    CHECK(o.escaped);
    CHECK(o.escape_index == 0);
  }
  SUBCASE("fixed critical value") {
    Params p(3, 0.125);
    const Orbit o = iterate_orbit(p, critical_values(p).plus, 200);
    CHECK_FALSE(o.escaped);
    CHECK(o.points.size() == 201);
  }
  SUBCASE("through the pole") {
    Params p(3, cplx(0, 0.125));
    const Orbit o = iterate_orbit(p, critical_values(p).plus, 50);
    REQUIRE(o.escaped);
    CHECK(std::abs(o.points[1]) < 1e-15);
    CHECK(*o.escape_index <= 2);
  }
  SUBCASE("escape index invariant") {
    Params p(4, cplx(0.3, 0.2));
    const Orbit o = iterate_orbit(p, cplx(0.9, 0.4), 500);
    if (o.escaped) {
      const int m = *o.escape_index;
      CHECK((is_infinite(o.points[m]) || std::abs(o.points[m]) > p.escape_radius()));
      for (int j = 0; j < m; ++j) CHECK(std::abs(o.points[j]) <= p.escape_radius());
    }
  }
}

TEST_CASE("jet derivatives in lambda") {
  Params p(3, cplx(0.05, 0.02));
  const cplx z(0.8, 0.3);
  const double h = 1e-7;
  for (int per : {1, 2, 3}) {
    const auto j = iterate_jet(p, z, per);
    const auto jp = iterate_jet(Params(3, p.lambda() + h), z, per);
    const auto jm = iterate_jet(Params(3, p.lambda() - h), z, per);
    CHECK(std::abs((jp.value - jm.value) / (2 * h) - j.dlambda) < 1e-5 * std::max(1.0, std::abs(j.dlambda)));
    CHECK(std::abs((jp.dz - jm.dz) / (2 * h) - j.dz_dlambda) < 1e-5 * std::max(1.0, std::abs(j.dz_dlambda)));
    const auto jz = iterate_jet(p, z + h, per), jzm = iterate_jet(p, z - h, per);
    CHECK(std::abs((jz.dz - jzm.dz) / (2 * h) - j.dzz) < 1e-5 * std::max(1.0, std::abs(j.dzz)));
  }
}

TEST_CASE("periodic points") {
  SUBCASE("superattracting fixed point") {
    const auto c = find_cycle(Params(3, 0.125), 0.7, 1, 1);
    REQUIRE(c);
    CHECK(std::abs(c->points[0] - 1 / s2) < 1e-12);
    CHECK(std::abs(c->multiplier) < 1e-10);
  }
  SUBCASE("parabolic fixed point at the cusp") {
    const auto c = find_cycle(Params(3, 4.0 / 27), 0.81, 1, 1);
    REQUIRE(c);
    // double root: plain Newton only reaches about sqrt(tolerance)
    CHECK(std::abs(c->points[0] - std::sqrt(2.0 / 3)) < 1e-5);
    CHECK(std::abs(c->multiplier - 1.0) < 1e-5);
  }
}

TEST_CASE("attracting cycle from the critical orbit") {
  SUBCASE("centre") {
    const auto r = attracting_cycle_from_critical_orbit(Params(3, 0.125));
    REQUIRE(r.fate == CriticalOrbitFate::attracted);
    CHECK(r.cycle->full_period == 1);
    CHECK(r.cycle->reduced.sign == 1);
    CHECK(std::abs(r.cycle->reduced.multiplier) < 1e-10);
  }
  SUBCASE("odd symmetric case") {
    const auto r = attracting_cycle_from_critical_orbit(Params(3, -0.125));
    REQUIRE(r.fate == CriticalOrbitFate::attracted);
    CHECK(r.cycle->reduced.sign == -1);
    CHECK(r.cycle->reduced.period == 1);
    CHECK(std::abs(r.cycle->reduced.multiplier) < 1e-10);
    CHECK(std::abs(r.cycle->rho) < 1e-10);
  }
  SUBCASE("escape") {
    CHECK(attracting_cycle_from_critical_orbit(Params(3, 100.0)).fate == CriticalOrbitFate::escaped);
  }
}
