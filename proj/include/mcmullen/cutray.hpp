// Sectors, inverse branches and finite-depth approximations of cut rays.
#pragma once

#include "mcmullen/angles.hpp"
#include "mcmullen/boettcher.hpp"
#include "mcmullen/core.hpp"
#include "mcmullen/kdtree.hpp"

#include <string>
#include <vector>

namespace mcm {

/// Index of the sector S_k containing z (k in 0..n, -1..-(n-1)). The line l_k through c_k
/// belongs to S_k.
int sector_of(const Params& p, cplx z);

/// Whether z lies in the closed sector S_k, allowing an angular slack of `tol`.
bool in_closed_sector(const Params& p, int k, cplx z, double tol = 1e-9);

/// The preimage of w in the open sector S_eps. Every sector maps univalently onto the plane
/// minus the two critical value rays; w on one of those rays raises BranchError.
cplx inverse_branch(const Params& p, int eps, cplx w);

struct CutRayOptions {
  int depth = 12;
  int samples_per_ray = 48;
  /// Base rays are sampled for |z|/|c0| in [1/span, span], log-spaced.
  double span = 1e4;
};

/// The depth-d region  { z : f^k(z) in S_{a_k} u S_{-a_k}, k <= d }  where a_k are `symbols`
/// (the itinerary of theta, possibly preceded by sector choices of preimage levels).
struct CutRayApprox {
  Angle theta;
  int depth = 0;
  std::vector<int> symbols;           // a_0 .. a_depth
  std::vector<RayPolyline> boundary;  // pulled-back sector boundary rays
  std::vector<cplx> julia_samples;
  bool contains_zero_and_infinity = false;
  bool real_variant = false;          // lambda > 0: points on R* are excluded
  std::string diagnostics;

  /// All boundary points followed by the Julia samples.
  std::vector<cplx> points() const;
};

/// Membership in the depth-d region, with closed sectors up to angular slack `tol`.
bool in_cut_region(const Params& p, const CutRayApprox& c, cplx z, double tol = 1e-9);

/// Depth-d approximation of the cut ray for theta in Theta. Needs lambda in the open
/// fundamental domain 0 < arg lambda < 2 pi/(n-1), or lambda > 0 with theta periodic.
CutRayApprox cut_ray(const Params& p, const Angle& theta, const CutRayOptions& opts = {});

/// The cut ray of alpha, tau^N(alpha) = base.theta, pulled back N times along the sectors
/// that contain the external rays R(tau^k(alpha)).
CutRayApprox cut_ray_preimage(const Params& p, const Angle& alpha, const CutRayApprox& base,
                              const RayOptions& ray_opts = {});

}  // namespace mcm
