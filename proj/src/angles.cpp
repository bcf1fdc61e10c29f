#include "mcmullen/angles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mcm {

namespace {

BigInt floor_div(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) q -= 1;
  return q;
}

BigInt floor_of(const Rational& q) {
  return floor_div(boost::multiprecision::numerator(q), boost::multiprecision::denominator(q));
}

BigInt ceil_of(const Rational& q) { return -floor_of(-q); }

// Reduce into (0, 1].
Rational to_unit_interval(const Rational& q) {
  Rational r = q - Rational(floor_of(q));
  if (r == 0) r = 1;
  return r;
}

double to_unit_interval(double x) {
  double r = x - std::floor(x);
  if (r == 0.0) r = 1.0;
  return r;
}

int symbol_from_slot(int n, long long slot) {
  // slot = ceil(2 n t) - 1 in [0, 2n - 1].
  return slot <= n ? int(slot) : -int(slot - n);
}

constexpr int kOrbitStepLimit = 200000;

}  // namespace

Angle Angle::exact(const Rational& q) {
  Angle a;
  a.exact_ = true;
  a.q_ = to_unit_interval(q);
  a.x_ = a.q_.convert_to<double>();
  return a;
}

Angle Angle::approx(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("Angle::approx: non-finite value");
  Angle a;
  a.exact_ = false;
  a.x_ = to_unit_interval(x);
  a.q_ = 0;
  return a;
}

Angle Angle::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt num(text.substr(0, slash));
      BigInt den(text.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator");
      return exact(Rational(num, den));
    }
    if (text.find_first_of(".eE") == std::string::npos) return exact(Rational(BigInt(text)));
    return approx(std::stod(text));
  } catch (const std::exception& e) {
    throw std::invalid_argument("cannot parse angle '" + text + "': " + e.what());
  }
}

const Rational& Angle::rational() const {
  if (!exact_) throw std::logic_error("Angle::rational on an inexact angle");
  return q_;
}

BigInt Angle::numerator() const { return boost::multiprecision::numerator(rational()); }
BigInt Angle::denominator() const { return boost::multiprecision::denominator(rational()); }

std::string Angle::str() const {
  if (!exact_) {
    std::ostringstream os;
    os.precision(17);
    os << x_;
    return os.str();
  }
  return numerator().str() + "/" + denominator().str();
}

bool operator==(const Angle& a, const Angle& b) {
  if (a.exact_ && b.exact_) return a.q_ == b.q_;
  return a.x_ == b.x_;
}

bool operator<(const Angle& a, const Angle& b) {
  if (a.exact_ && b.exact_) return a.q_ < b.q_;
  return a.x_ < b.x_;
}

Angle tau(int n, const Angle& t) {
  if (t.is_exact()) return Angle::exact(Rational(n) * t.rational());
  return Angle::approx(n * t.to_double());
}

Angle tau_iterate(int n, const Angle& t, int k) {
  if (t.is_exact()) {
    Rational f = t.rational() * Rational(boost::multiprecision::pow(BigInt(n), unsigned(k)));
    return Angle::exact(f);
  }
  Angle a = t;
  for (int i = 0; i < k; ++i) a = tau(n, a);
  return a;
}

int partition_index(int n, const Angle& t) {
  if (t.is_exact()) {
    const BigInt slot = ceil_of(Rational(2 * n) * t.rational()) - 1;
    return symbol_from_slot(n, slot.convert_to<long long>());
  }
  long long slot = static_cast<long long>(std::ceil(2.0 * n * t.to_double())) - 1;
  slot = std::clamp<long long>(slot, 0, 2 * n - 1);
  return symbol_from_slot(n, slot);
}

Itinerary itinerary(int n, const Angle& t, int depth) {
  Itinerary it;
  if (!t.is_exact()) {
    Angle a = t;
    for (int k = 0; k < depth; ++k) {
      it.symbols.push_back(partition_index(n, a));
      a = tau(n, a);
    }
    return it;
  }
  std::map<Rational, int> seen;
  std::vector<int> syms;
  Angle a = t;
  const int limit = std::max(depth, kOrbitStepLimit);
  for (int k = 0; k < limit; ++k) {
    auto [pos, fresh] = seen.emplace(a.rational(), k);
    if (!fresh) {
      it.preperiod = pos->second;
      it.period = k - pos->second;
      break;
    }
    syms.push_back(partition_index(n, a));
    a = tau(n, a);
  }
  for (int k = 0; k < depth; ++k) {
    if (k < int(syms.size())) {
      it.symbols.push_back(syms[k]);
    } else if (it.period) {
      const int pre = *it.preperiod, per = *it.period;
      it.symbols.push_back(syms[pre + (k - pre) % per]);
    } else {
      break;
    }
  }
  return it;
}

Membership in_theta(int n, const Angle& t, int depth) {
  auto forbidden = [n](int s) { return s == 0 || s == n; };
  if (!t.is_exact()) {
    Angle a = t;
    for (int k = 0; k <= depth; ++k) {
      if (forbidden(partition_index(n, a))) return Membership::no;
      a = tau(n, a);
    }
    return Membership::undetermined;
  }
  std::set<Rational> seen;
  Angle a = t;
  for (int k = 0; k < std::max(depth, kOrbitStepLimit); ++k) {
    if (!seen.insert(a.rational()).second) return Membership::yes;
    if (forbidden(partition_index(n, a))) return Membership::no;
    a = tau(n, a);
  }
  return Membership::undetermined;
}

Angle angle_from_itinerary(int n, const std::vector<int>& block) {
  if (block.empty()) throw std::invalid_argument("angle_from_itinerary: empty itinerary");
  for (int s : block)
    if (s == 0 || std::abs(s) > n - 1)
      throw std::invalid_argument("angle_from_itinerary: symbol " + std::to_string(s) +
                                  " outside {+-1..+-(n-1)}");
  // sum_{k>=0} |s_k| n^-(k+1) for the periodic sequence, summed as a geometric tail.
  const int p = int(block.size());
  Rational head = 0;
  Rational scale = Rational(1, n);
  for (int k = 0; k < p; ++k) {
    head += Rational(std::abs(block[k])) * scale;
    scale /= n;
  }
  const Rational np = Rational(boost::multiprecision::pow(BigInt(n), unsigned(p)));
  const Rational total = head * np / (np - 1);
  const int s0 = block[0];
  const int chi = s0 >= 0 ? s0 : n - s0;
  const Rational theta = Rational(1, 2) * (Rational(chi, n) + total - Rational(std::abs(s0), n));
  return Angle::exact(theta);
}

std::optional<int> is_tau_periodic(int n, const Angle& t) {
  const Rational& q = t.rational();
  const BigInt den = boost::multiprecision::denominator(q);
  if (boost::multiprecision::gcd(den, BigInt(n)) != 1) return std::nullopt;
  Angle a = tau(n, t);
  for (int p = 1; p <= kOrbitStepLimit; ++p) {
    if (a == t) return p;
    a = tau(n, a);
  }
  return std::nullopt;
}

std::vector<Angle> enumerate_theta_per(int n, int max_period) {
  if (max_period < 1) throw std::invalid_argument("enumerate_theta_per: max_period must be >= 1");
  std::vector<int> alphabet;
  for (int s = 1; s <= n - 1; ++s) {
    alphabet.push_back(s);
    alphabet.push_back(-s);
  }
  const Angle one = Angle::exact(1, 1), half = Angle::exact(1, 2);
  std::set<Rational> found;
  std::vector<Angle> out;
  for (int p = 1; p <= max_period; ++p) {
    std::vector<int> idx(p, 0);
    std::vector<int> block(p);
    while (true) {
      for (int k = 0; k < p; ++k) block[k] = alphabet[idx[k]];
      const Angle a = angle_from_itinerary(n, block);
      if (!(a == one) && !(a == half) && !found.count(a.rational())) {
        const auto per = is_tau_periodic(n, a);
        if (per && *per <= max_period && in_theta(n, a) == Membership::yes) {
          found.insert(a.rational());
          out.push_back(a);
        }
      }
      int k = p - 1;
      while (k >= 0 && ++idx[k] == int(alphabet.size())) idx[k--] = 0;
      if (k < 0) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Angle separating_angle(int n, const Angle& t1, const Angle& t2,
                       const std::function<bool(const Angle&)>& allowed, int max_depth, int max_period) {
  const double a1 = t1.to_double(), a2 = t2.to_double();
  double d = a2 - a1;
  d -= std::floor(d);
  if (d == 0.0) throw std::invalid_argument("separating_angle: t1 == t2");
  const double lo = d <= 0.5 ? a1 : a2;
  const double width = d <= 0.5 ? d : 1.0 - d;
  auto inside = [&](double x) {
    double u = x - lo;
    u -= std::floor(u);
    return u > 0.0 && u < width;
  };

  std::vector<Angle> bases;
  for (const Angle& b : enumerate_theta_per(n, max_period))
    if (!allowed || allowed(b)) bases.push_back(b);
  if (bases.empty()) throw std::runtime_error("separating_angle: every periodic base angle was rejected");

  BigInt scale = 1;
  for (int k = 0; k <= max_depth; ++k, scale *= n) {
    const double N = scale.convert_to<double>();
    for (const Angle& b : bases) {
      const double bd = b.to_double();
      for (int wrap = 0; wrap <= 1; ++wrap) {
        const double jlo = std::ceil(N * (lo + wrap) - bd) - 1;
        const double jhi = std::floor(N * (lo + width + wrap) - bd) + 1;
        for (double j = std::max(0.0, jlo); j <= std::min(N - 1, jhi); j += 1.0) {
          const Angle alpha = Angle::exact((b.rational() + Rational(BigInt(static_cast<long long>(j)))) /
                                           Rational(scale));
          if (inside(alpha.to_double())) return alpha;
        }
      }
    }
  }
  throw std::runtime_error("separating_angle: preimage search depth exhausted");
}

}  // namespace mcm
