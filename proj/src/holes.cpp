#include "mcmullen/param.hpp"
#include "mcmullen/roots.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>

namespace mcm {

namespace {

using Poly = std::vector<BigInt>;  // coefficient of w^i at index i

Poly mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

Poly power(Poly a, int e) {
  Poly r{1};
  while (e) {
    if (e & 1) r = mul(r, a);
    e >>= 1;
    if (e) a = mul(a, a);
  }
  return r;
}

Poly add(const Poly& a, const Poly& b) {
  Poly c(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  while (c.size() > 1 && c.back() == 0) c.pop_back();
  return c;
}

size_t valuation(const Poly& a) {
  size_t v = 0;
  while (v < a.size() && a[v] == 0) ++v;
  return v;
}

void drop_low(Poly& a, size_t v) { a.erase(a.begin(), a.begin() + std::min(v, a.size())); }

// f^(k-2)(v+) = 0 as a polynomial in lambda. With w = sqrt(lambda), v+ = 2w and
// f(P/Q) = (P^2n + w^2 Q^2n) / (P^n Q^n); the numerator is even in w.
Poly center_polynomial(int n, int k) {
  Poly P{0, 2}, Q{1};
  for (int j = 0; j < k - 2; ++j) {
    const Poly Pn = power(P, n), Qn = power(Q, n);
    Poly w2Q2n = mul(Poly{0, 0, 1}, mul(Qn, Qn));
    Poly nP = add(mul(Pn, Pn), w2Q2n);
    Poly nQ = mul(Pn, Qn);
    const size_t v = std::min(valuation(nP), valuation(nQ));
    drop_low(nP, v);
    drop_low(nQ, v);
    P = std::move(nP);
    Q = std::move(nQ);
  }
  drop_low(P, valuation(P));
  Poly out;
  for (size_t i = 0; i < P.size(); ++i) {
    if (i % 2 == 1) {
      if (P[i] != 0) throw std::logic_error("center_polynomial: numerator is not even in sqrt(lambda)");
      continue;
    }
    out.push_back(P[i]);
  }
  return out;
}

// Newton on g(lambda) = f^(k-2)(v+).
std::optional<cplx> polish_center(int n, int k, cplx lam) {
  for (int it = 0; it < 60; ++it) {
    if (lam == 0.0) return std::nullopt;
    const Params p(n, lam);
    const cplx v = critical_values(p).plus;
    const IterateJet j = iterate_jet(p, v, k - 2);
    if (!j.ok) return std::nullopt;
    if (std::abs(j.value) < 1e-15) return lam;
    const cplx dg = j.dlambda + j.dz * v / (2.0 * lam);
    if (std::abs(dg) == 0.0) return std::nullopt;
    const cplx step = -j.value / dg;
    lam += step;
    if (std::abs(step) < 1e-17 * std::abs(lam)) break;
  }
  const Params p(n, lam);
  const IterateJet j = iterate_jet(p, critical_values(p).plus, k - 2);
  if (j.ok && std::abs(j.value) < 1e-9) return lam;
  return std::nullopt;
}

void add_center(HoleCensus& c, cplx lam) {
  for (cplx o : c.centers)
    if (std::abs(o - lam) <= 1e-6) return;
  c.centers.push_back(lam);
}

}  // namespace

long long hole_count(int n, int k) {
  if (k < 3) throw std::invalid_argument("hole_count: k must be >= 3");
  long long c = n - 1;
  for (int i = 3; i < k; ++i) c *= 2 * n;
  return c;
}

HoleCensus sierpinski_hole_centers(int n, int k) {
  if (n < 3) throw std::invalid_argument("sierpinski_hole_centers: n must be >= 3");
  HoleCensus c;
  c.n = n;
  c.k = k;
  c.expected_count = hole_count(n, k);
  int rejected = 0;
  if (k <= 5) {
    const Poly P = center_polynomial(n, k);
    std::vector<cplx> coeffs;
    for (const BigInt& b : P) coeffs.emplace_back(b.convert_to<double>(), 0.0);
    const RootsResult roots = aberth(coeffs);
    if (!roots.converged) c.diagnostics += "Aberth iteration did not converge; ";
    for (cplx r : roots.roots) {
      const auto lam = polish_center(n, k, r);
      if (lam) add_center(c, *lam);
      else ++rejected;
    }
  } else {
    // Multi-start Newton from a polar grid over the region holding the holes.
    const double rmax = 2 * std::pow(4.0, -double(n) / (n - 1));
    const int rings = 40, per_ring = int(8 * c.expected_count);
    for (int i = 1; i <= rings; ++i)
      for (int j = 0; j < per_ring; ++j) {
        const auto lam = polish_center(n, k, std::polar(rmax * i / rings, kTwoPi * (j + 0.5) / per_ring));
        if (lam) add_center(c, *lam);
      }
  }
  if (rejected) c.diagnostics += std::to_string(rejected) + " roots failed the residual test; ";
  c.complete = (long long)c.centers.size() == c.expected_count;
  if (!c.complete)
    c.diagnostics += "found " + std::to_string(c.centers.size()) + " of " + std::to_string(c.expected_count) + " centers";
  return c;
}

}  // namespace mcm
