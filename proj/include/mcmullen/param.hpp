// The parameter plane: Phi_0, Phi_2, Phi_H, parameter rays, cusps, hole centers, the
// multiplier map and component boundaries.
#pragma once

#include "mcmullen/angles.hpp"
#include "mcmullen/boettcher.hpp"
#include "mcmullen/classify.hpp"
#include "mcmullen/core.hpp"
#include "mcmullen/image.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mcm {

/// Phi_0(lambda) = phi(v+)^2 for lambda in H_0. phi(v+)^2 does not depend on the choice of
/// sqrt(lambda), so no argument continuation is needed.
cplx phi0(const Params& p);
/// Phi_0 and its derivative in lambda.
std::pair<cplx, cplx> phi0_jet(const Params& p);

/// Phi_2 for lambda in H_2, with the (n-2)-th root continued radially from |lambda| = 1e-6,
/// where lambda Phi_2 is close to 2^(2n/(2-n)).
cplx phi2(const Params& p);

/// Phi_H(lambda) = psi(f^(k-2)(v+)) for lambda in a level-k hole, k >= 3. Without k, the level
/// comes from classify_fast.
cplx phiH(const Params& p, int k);
cplx phiH(const Params& p);

struct ParamRayOptions {
  double g_min = 1e-6;  // lower bound for log|Phi_0|
  double descent = 0.8408964152537145;
  int max_points = 4000;
  int maxiter = 2000;
  double anchor = 1e6;  // |lambda| where the trace starts, Phi_0 ~ 4 lambda
};

/// R_0(t) = Phi_0^-1((1, inf) e^(2 pi i t)); potentials are log|Phi_0|.
RayPolyline trace_param_ray(int n, const Angle& t, const ParamRayOptions& opts = {});

struct LandingResult {
  cplx lambda;
  /// "cusp", "misiurewicz" or "extrapolated"
  std::string method;
  RayPolyline ray;
};

/// Landing point of R_0(theta): extrapolated from the ray, then polished by find_cusp for
/// tau-periodic theta and by Newton on the critical orbit relation for strictly preperiodic theta.
LandingResult param_landing(int n, const Angle& theta, const ParamRayOptions& opts = {});
cplx nu(int n, const Angle& theta);

struct CuspResult {
  Angle theta;
  cplx lambda;
  int period = 1;  // q
  int sign = 1;    // eps
  cplx parabolic_point;
  cplx multiplier;
  double residual = 0;
};

/// (eps, q) for the parabolic cycle of the cusp at the landing point of R_0(theta).
std::pair<int, int> cusp_signature(int n, const Angle& theta);

/// Newton in (lambda, z) on eps f^q(z) = z, (eps f^q)'(z) = mu. None unless both residuals
/// fall below tol.
struct MultiplierSolution {
  cplx lambda, z;
  double residual = 0;
};
std::optional<MultiplierSolution> solve_multiplier_system(int n, int eps, int q, cplx mu, cplx lambda_seed,
                                                          cplx z_seed, double tol = 1e-11, int max_steps = 60);

/// Cusp for tau-periodic theta. Seeds come from the parameter ray unless given. For even n both
/// signs are tried; `sign` is the one that closed.
CuspResult find_cusp(int n, const Angle& theta, std::optional<cplx> lambda_seed = std::nullopt);

/// Whether some parabolic cycle of eps f^q (q <= qmax, both signs) has its parameter within
/// `radius` of `center`, searched by Newton from a grid of seeds.
std::optional<MultiplierSolution> parabolic_near(int n, cplx center, double radius, int qmax, int z_grid = 24);

struct HoleCensus {
  int n = 3, k = 3;
  std::vector<cplx> centers;
  long long expected_count = 0;
  bool complete = false;
  std::string diagnostics;
};

/// All lambda != 0 with f^(k-2)(v+) = 0.
HoleCensus sierpinski_hole_centers(int n, int k);
long long hole_count(int n, int k);

struct MultiplierResult {
  cplx kappa;  // (eps f^k)'(z)
  cplx rho;    // (f^p)'(z)
  int eps = 1;
  int k = 1;
  int p = 1;
  cplx z;
};
std::optional<MultiplierResult> multiplier_kappa(const Params& p, int maxiter = 10000);

struct ComponentBoundary {
  cplx seed;
  double varrho = 0.999;
  /// (s, lambda) with kappa(lambda), or Phi_H(lambda), = varrho e^(2 pi i s)
  std::vector<std::pair<double, cplx>> samples;
  double closure_defect = 0;
  double max_step = 0;
  double max_residual = 0;
  std::string diagnostics;
};

ComponentBoundary component_boundary(int n, cplx seed, int samples, double varrho = 0.999);
ComponentBoundary hole_boundary(int n, cplx center, int samples, double varrho = 0.99);

Image render_param_plane(int n, const BBox& bbox, int width, int height, int maxiter = 500);

/// Phi_0(lambda)/(4 lambda) at lambda = r e^(i arg) for each radius.
std::vector<cplx> capacity_check(int n, const std::vector<double>& radii, double arg = 0.0);

}  // namespace mcm
