#include "doctest.h"
#include "mcmullen/angles.hpp"

#include <random>
#include <set>

using namespace mcm;

namespace {
Angle A(long long p, long long q) { return Angle::exact(p, q); }
}

TEST_CASE("normalisation and parsing") {
  CHECK(A(0, 1) == A(1, 1));
  CHECK(A(5, 4) == A(1, 4));
  CHECK(A(-1, 4) == A(3, 4));
  CHECK(Angle::parse("2/8") == A(1, 4));
  CHECK(Angle::parse("3").str() == "1/1");
  CHECK_FALSE(Angle::parse("0.25").is_exact());
  CHECK_THROWS_AS(Angle::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Angle::parse("x"), std::invalid_argument);
  CHECK_THROWS_AS(Angle::approx(0.3).rational(), std::logic_error);
}

TEST_CASE("tau") {
  CHECK(tau(3, A(1, 4)) == A(3, 4));
  CHECK(tau(3, A(1, 1)) == A(1, 1));
  CHECK(tau_iterate(3, A(1, 12), 2) == A(3, 4));
}

TEST_CASE("partition index") {
  CHECK(partition_index(3, A(1, 2)) == 2);
  CHECK(partition_index(3, A(1, 1)) == -2);
  CHECK(partition_index(3, A(1, 4)) == 1);
  CHECK(partition_index(3, A(1, 6)) == 0);
  CHECK(partition_index(3, A(2, 3)) == 3);
  CHECK(partition_index(3, A(3, 4)) == -1);
  CHECK(partition_index(3, A(7, 12)) == 3);
}

TEST_CASE("partition is exact on random rationals") {
  std::mt19937_64 rng(5);
  for (int n : {3, 4, 5}) {
    for (int i = 0; i < 10000 / 3; ++i) {
      const long long q = 1 + rng() % 1000, p = 1 + rng() % q;
      const Rational t(p, q);
      int hits = 0;
      for (int k = 0; k <= n; ++k)
        if (Rational(k, 2 * n) < t && t <= Rational(k + 1, 2 * n)) ++hits;
      for (int k = 1; k <= n - 1; ++k)
        if (Rational(k, 2 * n) + Rational(1, 2) < t && t <= Rational(k + 1, 2 * n) + Rational(1, 2)) ++hits;
      CHECK(hits == 1);
      const int j = partition_index(n, Angle::exact(t));
      const Rational lo = j >= 0 ? Rational(j, 2 * n) : Rational(-j, 2 * n) + Rational(1, 2);
      CHECK(lo < t);
      CHECK(t <= lo + Rational(1, 2 * n));
    }
  }
}

TEST_CASE("itineraries") {
  auto it = itinerary(3, A(1, 2), 4);
  CHECK(it.symbols == std::vector<int>{2, 2, 2, 2});
  CHECK(it.period == 1);
  CHECK(itinerary(3, A(1, 1), 3).symbols == std::vector<int>{-2, -2, -2});
  it = itinerary(3, A(1, 4), 4);
  CHECK(it.symbols == std::vector<int>{1, -1, 1, -1});
  CHECK(it.period == 2);
  CHECK(it.preperiod == 0);
  it = itinerary(3, A(1, 12), 5);
  CHECK(it.preperiod == 1);
  CHECK(it.period == 2);
  CHECK(itinerary(3, Angle::approx(0.25), 3).symbols.size() == 3);
}

TEST_CASE("membership in the Cantor set") {
  CHECK(in_theta(3, A(1, 4)) == Membership::yes);
  CHECK(in_theta(3, A(1, 8)) == Membership::no);
  CHECK(in_theta(3, A(1, 2)) == Membership::yes);
  CHECK(in_theta(3, Angle::approx(0.1)) == Membership::no);
  CHECK(in_theta(3, Angle::approx(0.25), 20) == Membership::undetermined);
}

TEST_CASE("angle from itinerary") {
  CHECK(angle_from_itinerary(3, {2}) == A(1, 2));
  CHECK(angle_from_itinerary(3, {-2}) == A(1, 1));
  CHECK(angle_from_itinerary(3, {1, -1}) == A(1, 4));
  CHECK_THROWS_AS(angle_from_itinerary(3, {3}), std::invalid_argument);
  CHECK_THROWS_AS(angle_from_itinerary(3, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(angle_from_itinerary(3, {}), std::invalid_argument);
}

TEST_CASE("periodic angles in the Cantor set") {
  const auto two = enumerate_theta_per(3, 2);
  CHECK(std::find(two.begin(), two.end(), A(1, 4)) != two.end());
  CHECK(std::find(two.begin(), two.end(), A(3, 4)) != two.end());
  for (int n : {3, 4, 5}) {
    for (int p = 1; p <= (n == 3 ? 6 : 4); ++p) {
      const auto list = enumerate_theta_per(n, p);
      long long bound = 0, pw = 1;
      for (int q = 1; q <= p; ++q) bound += (pw *= 2 * (n - 1));
      CHECK(list.size() <= size_t(bound));
      for (const Angle& t : list) {
        CHECK_FALSE(t == A(1, 2));
        CHECK_FALSE(t == A(1, 1));
        CHECK(in_theta(n, t) == Membership::yes);
        const auto per = is_tau_periodic(n, t);
        REQUIRE(per);
        CHECK(*per <= p);
        CHECK(tau_iterate(n, t, *per) == t);
        // round trip through the itinerary
        const auto it = itinerary(n, t, *per);
        CHECK(angle_from_itinerary(n, it.symbols) == t);
        // shift equivariance
        const auto sh = itinerary(n, tau(n, t), *per + 3).symbols;
        const auto full = itinerary(n, t, *per + 4).symbols;
        CHECK(std::equal(sh.begin(), sh.end(), full.begin() + 1));
      }
      // brute-force oracle: all k / (n^q - 1) with q <= p
      std::set<Rational> brute;
      long long np = 1;
      for (int q = 1; q <= p; ++q) {
        np *= n;
        for (long long k = 1; k < np - 1; ++k) {
          const Angle a = Angle::exact(k, np - 1);
          if (!(a == A(1, 2)) && in_theta(n, a) == Membership::yes) brute.insert(a.rational());
        }
      }
      std::set<Rational> got;
      for (const Angle& t : list) got.insert(t.rational());
      CHECK(got == brute);
    }
  }
}

TEST_CASE("tau periodicity") {
  CHECK(is_tau_periodic(3, A(1, 4)) == 2);
  CHECK_FALSE(is_tau_periodic(3, A(1, 12)));
  CHECK(is_tau_periodic(3, A(1, 1)) == 1);
}

TEST_CASE("separating angles") {
  auto between = [](const Angle& a, double lo, double hi) { return lo < a.to_double() && a.to_double() < hi; };
  const Angle a = separating_angle(3, Angle::approx(0.10), Angle::approx(0.40));
  CHECK(between(a, 0.10, 0.40));
  const Angle b = separating_angle(3, Angle::approx(0.24), Angle::approx(0.26));
  CHECK(between(b, 0.24, 0.26));
  const Angle c = separating_angle(3, Angle::approx(0.95), Angle::approx(0.05));
  CHECK((c.to_double() > 0.95 || c.to_double() < 0.05));
  for (const Angle& x : {a, b, c}) {
    const auto it = itinerary(3, x, 1);
    REQUIRE(it.period);
    const Angle base = tau_iterate(3, x, *it.preperiod);
    CHECK(in_theta(3, base) == Membership::yes);
  }
  const Angle d = separating_angle(3, A(1, 5), A(2, 5), [](const Angle& t) { return !(t == A(1, 4)); });
  CHECK(between(d, 0.2, 0.4));
  CHECK_FALSE(tau_iterate(3, d, *itinerary(3, d, 1).preperiod) == A(1, 4));
  CHECK_THROWS(separating_angle(3, A(1, 3), A(1, 3)));
}
