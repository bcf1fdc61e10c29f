// Green's function, Boettcher coordinate, the Riemann map of the trap door and rays.
#pragma once

#include "mcmullen/angles.hpp"
#include "mcmullen/core.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcm {

/// Thrown when a branch cannot be continued along a path (step too coarse, orbit does not
/// escape, critical point of the potential on the path).
struct BranchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RayKind { external, internal, parameter, cutray_boundary };

struct RayPolyline {
  RayKind kind = RayKind::external;
  Angle angle;
  std::vector<cplx> points;
  /// Green potential for external and parameter rays, radius for internal ones.
  std::vector<double> potentials;
  std::optional<cplx> landing_estimate;
  bool truncated = false;
  std::string failure;
};

const char* to_string(RayKind k);

/// log phi and its partials at a point of the direct domain |zeta| > R. The log of zeta is
/// principal; derivatives are branch free.
struct LogPhiJet {
  cplx value;
  cplx d_zeta;
  cplx d_lambda;  // partial at fixed zeta
};
LogPhiJet log_phi_direct(const Params& p, cplx zeta);

/// log phi(f^m(z)) for the first m >= min_iter with |f^m(z)| > R, with the total derivatives
/// in z and in lambda (the latter given dz/dlambda at the start).
struct EscapeJet {
  int m = 0;
  cplx zm;
  cplx log_phi;   // log phi(f^m(z)), principal branch
  cplx d_z;       // d/dz of log phi(f^m(z))
  cplx d_lambda;  // d/dlambda, following z(lambda)
};
std::optional<EscapeJet> escape_jet(const Params& p, cplx z, int min_iter = 0, int maxiter = 2000,
                                    cplx dz_dlambda = 0.0);

/// G(z) = lim n^-k log|f^k(z)|; +inf on preimages of the pole, none if the orbit stays bounded
/// for maxiter steps.
std::optional<double> green(const Params& p, cplx z, int maxiter = 2000);

/// phi(z) on the direct domain |z| > R. Throws std::domain_error otherwise.
cplx boettcher(const Params& p, cplx z);
/// phi(z)/z - 1, accurate when it is tiny.
cplx boettcher_correction(const Params& p, cplx z);

/// Continues log phi(f^shift(.)) along `path` (unwrapped imaginary part), starting from the
/// value `anchor` at path.front(); any representative within pi/n^m of the truth works.
/// Coarse segments are bisected. Returns the value at every path point.
std::vector<cplx> continue_log_phi(const Params& p, const std::vector<cplx>& path, cplx anchor,
                                   int shift = 0, int maxiter = 2000);

/// Increasing-potential path from z in the basin B to the region |z| > 2R, following the
/// gradient of G. Throws BranchError at critical points of G and for z outside B.
std::vector<cplx> ascent_path(const Params& p, cplx z, int maxiter = 2000);

/// log phi(z) with unwrapped argument, continued from the direct domain along `path`
/// (path.front() must satisfy |z| > R, path.back() == z); without a path, along ascent_path.
cplx log_boettcher_extended(const Params& p, cplx z, const std::vector<cplx>& path = {});
cplx boettcher_extended(const Params& p, cplx z, const std::vector<cplx>& path = {});

/// Solves log phi(f^m(z)) = n^m (G + 2 pi i t) mod 2 pi i by Newton from `seed`, with
/// m >= min_iter. Returns none when Newton fails.
std::optional<cplx> solve_ray_point(const Params& p, cplx seed, double G, const Angle& t, int min_iter = 0,
                                    int maxiter = 2000);

struct RayOptions {
  double g_min = 1e-6;
  double descent = 0.8408964152537145;  // 2^-1/4
  int max_points = 4000;
  int maxiter = 2000;
};

/// Aitken extrapolation of a geometrically converging tail.
std::optional<cplx> aitken_limit(const std::vector<cplx>& pts);

/// R(t) = phi^-1((1, inf) e^(2 pi i t)), descending from the direct domain to G = g_min.
RayPolyline trace_external_ray(const Params& p, const Angle& t, const RayOptions& opts = {});

/// psi(w) with psi^-n = phi o f and psi(w) ~ w / c0^2 at 0, continued from the disk |w| <= r/10
/// along the gradient line of G o f (or along `path`, which must start in that disk).
cplx riemann_T(const Params& p, cplx w, const std::vector<cplx>& path = {});
cplx log_riemann_T(const Params& p, cplx w, const std::vector<cplx>& path = {});

/// R_T(t) = psi^-1((0, 1) e^(2 pi i t)); potentials are the radii.
RayPolyline trace_internal_ray(const Params& p, const Angle& t, const RayOptions& opts = {});

/// Pulls R_T(t) back by the branch of f^-(k-2) onto the component U containing v+ (which needs
/// f^(k-2)(v+) in T).
RayPolyline pullback_ray_to_U(const Params& p, int k, const Angle& t, const RayOptions& opts = {});

}  // namespace mcm
