// Shared pieces of the dynamical and parameter ray tracers.
#pragma once

#include "mcmullen/boettcher.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace mcm::detail {

inline double wrap_pi(double x) { return std::remainder(x, kTwoPi); }

// tau^k(t) as doubles, computed exactly for rational t.
class AngleOrbit {
 public:
  AngleOrbit(int n, const Angle& t) : n_(n), cur_(t) {}
  double at(int k) {
    while (int(vals_.size()) <= k) {
      vals_.push_back(cur_.to_double());
      cur_ = tau(n_, cur_);
    }
    return vals_[k];
  }

 private:
  int n_;
  Angle cur_;
  std::vector<double> vals_;
};

using RaySolver = std::function<std::optional<cplx>(cplx seed, double G)>;

// Descends from a solved point at potential g_start to g_end; steps shrink when the solver
// fails or jumps.
void descend(RayPolyline& ray, cplx z, double g_start, double g_end, const RayOptions& opts,
             const std::function<double(double)>& label, const RaySolver& solve);

}  // namespace mcm::detail
