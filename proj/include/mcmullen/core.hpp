// Arithmetic of the McMullen family f(z) = z^n + lambda z^-n.
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mcm {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

inline cplx complex_infinity() { return {std::numeric_limits<double>::infinity(), 0.0}; }

template <typename Scalar>
bool is_infinite(const std::complex<Scalar>& z) {
  return std::isinf(z.real()) || std::isinf(z.imag());
}

/// z^k for integer k by repeated squaring; std::pow on complex goes through log/exp.
template <typename Scalar>
std::complex<Scalar> ipow(std::complex<Scalar> z, int k) {
  if (k < 0) return Scalar(1) / ipow(z, -k);
  std::complex<Scalar> r(1);
  while (k) {
    if (k & 1) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

/// Argument in [0, 2 pi).
template <typename Scalar>
Scalar arg_positive(const std::complex<Scalar>& z) {
  Scalar a = std::arg(z);
  if (a < 0) a += Scalar(2 * kPi);
  return a;
}

/// The pair (n, lambda) plus the derived escape and inner radii.
///
/// The escape radius R satisfies |f(z)| >= 2|z| whenever |z| >= R. The inner radius
/// r = (|lambda| / 2R)^(1/n) gives |f(z)| >= R on |z| <= r when |lambda| is not too large,
/// which makes the disk |z| <= r a seed for the trap component T around the pole.
template <typename Scalar>
class MapParams {
 public:
  using Complex = std::complex<Scalar>;

  MapParams(int n, Complex lambda) : n_(n), lambda_(lambda) {
    if (n < 3) throw std::invalid_argument("McMullen degree n must be >= 3");
    if (lambda == Complex(0)) throw std::invalid_argument("lambda must be nonzero");
    const Scalar m = std::abs(lambda);
    escape_radius_ = std::max({Scalar(2), Scalar(2) * std::pow(Scalar(2) * m, Scalar(1) / (2 * n)),
                               Scalar(2) * std::pow(m, Scalar(1) / n)});
    inner_radius_ = std::pow(m / (Scalar(2) * escape_radius_), Scalar(1) / n);
  }

  int n() const { return n_; }
  Complex lambda() const { return lambda_; }
  Scalar escape_radius() const { return escape_radius_; }
  Scalar inner_radius() const { return inner_radius_; }

  /// The critical point c0 = lambda^(1/2n), taking arg lambda in [0, 2 pi).
  Complex c0() const {
    return std::polar(std::pow(std::abs(lambda_), Scalar(1) / (2 * n_)),
                      arg_positive(lambda_) / (2 * n_));
  }
  /// sqrt(lambda) = c0^n on the same branch.
  Complex sqrt_lambda() const {
    return std::polar(std::sqrt(std::abs(lambda_)), arg_positive(lambda_) / 2);
  }

 private:
  int n_;
  Complex lambda_;
  Scalar escape_radius_;
  Scalar inner_radius_;
};

using Params = MapParams<double>;

/// f(z) on the Riemann sphere: f(0) = f(inf) = inf.
template <typename Scalar>
std::complex<Scalar> eval(const MapParams<Scalar>& p, const std::complex<Scalar>& z) {
  if (is_infinite(z) || z == std::complex<Scalar>(0)) return complex_infinity();
  const auto zn = ipow(z, p.n());
  return zn + p.lambda() / zn;
}

/// f'(z) = n z^(n-1) - n lambda z^(-n-1).
template <typename Scalar>
std::complex<Scalar> deriv(const MapParams<Scalar>& p, const std::complex<Scalar>& z) {
  if (z == std::complex<Scalar>(0)) throw std::domain_error("f' is undefined at the pole z = 0");
  const int n = p.n();
  const auto zn1 = ipow(z, n - 1);
  return Scalar(n) * zn1 - Scalar(n) * p.lambda() / (zn1 * z * z);
}

/// f''(z) = n(n-1) z^(n-2) + n(n+1) lambda z^(-n-2).
template <typename Scalar>
std::complex<Scalar> deriv2(const MapParams<Scalar>& p, const std::complex<Scalar>& z) {
  if (z == std::complex<Scalar>(0)) throw std::domain_error("f'' is undefined at the pole z = 0");
  const int n = p.n();
  const auto zn2 = ipow(z, n - 2);
  return Scalar(n * (n - 1)) * zn2 + Scalar(n * (n + 1)) * p.lambda() / (zn2 * ipow(z, 4));
}

/// c_k = c0 e^(k pi i / n), k = 0 .. 2n-1.
template <typename Scalar>
std::vector<std::complex<Scalar>> critical_points(const MapParams<Scalar>& p) {
  std::vector<std::complex<Scalar>> out;
  const auto c0 = p.c0();
  for (int k = 0; k < 2 * p.n(); ++k) out.push_back(c0 * std::polar(Scalar(1), k * Scalar(kPi) / p.n()));
  return out;
}

struct CriticalValues {
  cplx plus;
  cplx minus;
};

/// v+ = 2 sqrt(lambda) = f(c0), v- = -v+.
inline CriticalValues critical_values(const Params& p) {
  const cplx v = 2.0 * p.sqrt_lambda();
  return {v, -v};
}

struct Orbit {
  std::vector<cplx> points;
  bool escaped = false;
  std::optional<int> escape_index;
};

/// Iterates from z0 until |z| > R (escape) or maxiter steps. Hitting the pole records
/// infinity as the next point and counts as escape.
Orbit iterate_orbit(const Params& p, cplx z0, int maxiter);

/// A periodic point of sign * f^period. `multiplier` is the derivative of sign * f^period
/// at points[0]; `points` lists z, f(z), ..., f^(period-1)(z).
struct Cycle {
  int period = 1;
  int sign = 1;
  std::vector<cplx> points;
  cplx multiplier;
  double residual = 0.0;
};

struct NewtonOptions {
  int max_steps = 100;
  double tolerance = 1e-12;
};

/// Values of f^p and its derivatives at z, plus partials in lambda.
struct IterateJet {
  cplx value;       // f^p(z)
  cplx dz;          // (f^p)'(z)
  cplx dzz;         // (f^p)''(z)
  cplx dlambda;     // d/dlambda f^p(z)
  cplx dz_dlambda;  // d/dlambda (f^p)'(z)
  bool ok = true;   // false if the orbit hit the pole
};
IterateJet iterate_jet(const Params& p, cplx z, int period);

/// Newton for sign * f^period(z) = z from `seed`.
std::optional<Cycle> find_cycle(const Params& p, cplx seed, int period, int sign,
                                const NewtonOptions& opts = {});

/// Multiplier of sign * f^period computed as the product of f' along the orbit.
cplx cycle_multiplier(const Params& p, cplx z, int period, int sign);

struct AttractingCycle {
  Cycle reduced;     // fixed point of eps * f^k with multiplier kappa
  int full_period;   // p, the period of the cycle under f
  cplx rho;          // (f^p)' along the cycle
};

enum class CriticalOrbitFate { attracted, escaped, undetermined };

struct CriticalOrbitResult {
  CriticalOrbitFate fate = CriticalOrbitFate::undetermined;
  std::optional<AttractingCycle> cycle;
};

/// Follows the orbit of v+ and, when it settles on a cycle, polishes the cycle and
/// decides whether -f^(p/2) is the natural return map (n odd, f^(p/2)(z) = -z).
CriticalOrbitResult attracting_cycle_from_critical_orbit(const Params& p, int maxiter = 10000);

}  // namespace mcm
