// Symbolic dynamics of tau(t) = n t mod 1 on the circle (0, 1].
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mcm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A point of the circle R/Z identified with (0, 1]. Exact angles are reduced rationals;
/// inexact ones carry a binary64 value and only support finite-depth questions.
class Angle {
 public:
  Angle() : exact_(true), q_(1), x_(1.0) {}

  static Angle exact(const Rational& q);
  static Angle exact(long long num, long long den) { return exact(Rational(num, den)); }
  static Angle approx(double x);
  /// Parses "p/q", "p" or a decimal (the latter becomes inexact).
  static Angle parse(const std::string& text);

  bool is_exact() const { return exact_; }
  /// Throws std::logic_error for inexact angles.
  const Rational& rational() const;
  double to_double() const { return x_; }
  BigInt numerator() const;
  BigInt denominator() const;
  std::string str() const;

  friend bool operator==(const Angle& a, const Angle& b);
  friend bool operator<(const Angle& a, const Angle& b);

 private:
  bool exact_;
  Rational q_;
  double x_;
};

/// tau(t) = n t mod 1, mapped into (0, 1].
Angle tau(int n, const Angle& t);
/// tau^k(t).
Angle tau_iterate(int n, const Angle& t, int k);

/// The unique j in {0..n, -1..-(n-1)} with t in Theta_j (left-open, right-closed arcs).
int partition_index(int n, const Angle& t);

struct Itinerary {
  std::vector<int> symbols;
  std::optional<int> preperiod;
  std::optional<int> period;
};

/// Symbols s_0 .. s_{depth-1}; for exact angles also the (pre)period of the orbit.
Itinerary itinerary(int n, const Angle& t, int depth);

enum class Membership { yes, no, undetermined };

/// Whether the tau-orbit of t avoids Theta_0 and Theta_n.
Membership in_theta(int n, const Angle& t, int depth = 64);

/// The angle whose Theta-itinerary is the purely periodic repetition of `block`.
Angle angle_from_itinerary(int n, const std::vector<int>& block);

/// All tau-periodic angles of period <= max_period in the Cantor set Theta, except 1 and 1/2,
/// in increasing order.
std::vector<Angle> enumerate_theta_per(int n, int max_period);

/// Smallest p >= 1 with n^p t = t mod 1, or nothing for strictly preperiodic t.
std::optional<int> is_tau_periodic(int n, const Angle& t);

/// Finds alpha in the union of tau^-k(Theta_per) strictly inside the shorter arc between
/// t1 and t2. `allowed` filters the periodic base angle. Throws if the search depth runs out.
Angle separating_angle(int n, const Angle& t1, const Angle& t2,
                       const std::function<bool(const Angle&)>& allowed = {},
                       int max_depth = 16, int max_period = 4);

}  // namespace mcm
