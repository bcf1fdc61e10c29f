#include "mcmullen/roots.hpp"

#include <cmath>
#include <stdexcept>

namespace mcm {

RootsResult aberth(const std::vector<cplx>& coeffs, int max_iter, double tol) {
  using lcplx = std::complex<long double>;
  if (coeffs.size() < 2 || coeffs.back() == 0.0) throw std::invalid_argument("aberth: need degree >= 1");
  const int d = int(coeffs.size()) - 1;
  std::vector<lcplx> a(coeffs.begin(), coeffs.end());
  for (auto& c : a) c /= lcplx(coeffs.back());
  RootsResult res;
  // Start on the circle of the geometric mean root modulus.
  long double rad = 1;
  if (std::abs(a[0]) > 0) rad = std::pow(std::abs(a[0]), 1.0L / d);
  std::vector<lcplx> z(d);
  for (int k = 0; k < d; ++k) z[k] = std::polar(rad, (2.0L * 3.14159265358979323846L * k + 0.4L) / d);
  std::vector<bool> done(d, false);
  for (int it = 0; it < max_iter; ++it) {
    res.iterations = it + 1;
    bool all = true;
    for (int i = 0; i < d; ++i) {
      if (done[i]) continue;
      lcplx p = a[d], dp = 0;
      for (int k = d - 1; k >= 0; --k) {
        dp = dp * z[i] + p;
        p = p * z[i] + a[k];
      }
      if (p == 0.0L) {
        done[i] = true;
        continue;
      }
      const lcplx ratio = p / dp;
      lcplx sum = 0;
      for (int j = 0; j < d; ++j)
        if (j != i) sum += 1.0L / (z[i] - z[j]);
      const lcplx corr = ratio / (1.0L - ratio * sum);
      z[i] -= corr;
      if (std::abs(corr) <= tol * std::max(1.0L, std::abs(z[i]))) done[i] = true;
      else all = false;
    }
    if (all) {
      res.converged = true;
      break;
    }
  }
  for (const auto& r : z) res.roots.emplace_back(double(r.real()), double(r.imag()));
  return res;
}

}  // namespace mcm
