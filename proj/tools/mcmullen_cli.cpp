// mcmullen: command-line front end.
#include "serialize.hpp"

#include "mcmullen/acceptance.hpp"
#include "mcmullen/boettcher.hpp"
#include "mcmullen/classify.hpp"
#include "mcmullen/cutray.hpp"
#include "mcmullen/image.hpp"
#include "mcmullen/param.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>

using namespace mcm;
using io::json;

namespace {

constexpr int kOk = 0, kUsage = 1, kNumeric = 2;

// A failure the numerics reported; printed as JSON with exit code 2.
struct NumericFailure : std::runtime_error {
  json payload;
  NumericFailure(const std::string& what, json p = {}) : std::runtime_error(what), payload(std::move(p)) {}
};

void emit(const std::string& out, const json& j) { io::write_text(out, j.dump(2) + "\n"); }

CLI::Option* add_n(CLI::App* sub, int& n) {
  return sub->add_option("--n", n, "degree n >= 3")->check(CLI::Range(3, 64))->capture_default_str();
}

CLI::Option* add_res(CLI::App* sub, const std::string& name, int& v, const std::string& help) {
  return sub->add_option(name, v, help)->check(CLI::Range(2, 1 << 16))->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"McMullen maps z^n + lambda/z^n: renders, rays, cut rays, cusps, holes and checks"};
  app.set_config("--config", "", "read options from a TOML file written by --dump-config");
  bool dump = false;
  app.add_flag("--dump-config", dump, "print the effective configuration and exit")->configurable(false);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: MCMULLEN_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.require_subcommand(1, 1);

  std::map<CLI::App*, std::function<void()>> run;

  // common values, each subcommand binds the ones it uses
  int n = 3, width = 512, height = 512, maxiter = 500, res = 256, depth = 12, samples = 256, k = 3;
  std::string lambda = "0.1+0.1i", bbox, out, angle = "0", type = "external", mode = "fast", seed;
  double radius = 0, g_min = 1e-6, varrho = 0.999, arg = 0;
  int level = 0, samples_per_ray = 48, oracle_res = 128;
  bool hole = false;
  std::vector<double> radii{1e2, 1e3, 1e4};
  std::vector<int> only;
  std::string format = "csv";

  {
    auto* s = app.add_subcommand("render-param", "render the lambda plane coloured by escape level");
    s->configurable();
    add_n(s, n);
    s->add_option("--bbox", bbox, "re0,im0,re1,im1 (default: square of half side 0.6 at 0)");
    add_res(s, "--width", width, "image width");
    add_res(s, "--height", height, "image height");
    s->add_option("--maxiter", maxiter)->check(CLI::PositiveNumber)->capture_default_str();
    s->add_option("--out", out, "PPM file")->required();
    run[s] = [&] {
      const BBox b = bbox.empty() ? square(0.0, 0.6) : io::parse_bbox(bbox);
      write_ppm(render_param_plane(n, b, width, height, maxiter), out);
    };
  }
  {
    auto* s = app.add_subcommand("render-julia", "render the dynamical plane of f_lambda");
    s->configurable();
    add_n(s, n);
    s->add_option("--lambda", lambda, "parameter, e.g. 0+0.125i")->capture_default_str();
    s->add_option("--bbox", bbox, "re0,im0,re1,im1 (default: square of half side --radius)");
    s->add_option("--radius", radius, "half side of the default box (default: the escape radius)");
    add_res(s, "--width", width, "image width");
    add_res(s, "--height", height, "image height");
    s->add_option("--maxiter", maxiter)->check(CLI::PositiveNumber)->capture_default_str();
    s->add_option("--out", out, "PPM file")->required();
    run[s] = [&] {
      const Params p(n, io::parse_complex(lambda));
      const BBox b = !bbox.empty() ? io::parse_bbox(bbox) : square(0.0, radius > 0 ? radius : p.escape_radius());
      write_ppm(render_julia(p, b, width, height, maxiter), out);
    };
  }
  {
    auto* s = app.add_subcommand("classify", "escape level of the critical orbit");
    s->configurable();
    add_n(s, n);
    s->add_option("--lambda", lambda)->capture_default_str();
    s->add_option("--mode", mode, "fast or oracle")->check(CLI::IsMember({"fast", "oracle"}))->capture_default_str();
    add_res(s, "--res", res, "oracle grid resolution");
    s->add_option("--out", out, "JSON file (default stdout)");
    run[s] = [&] {
      const Params p(n, io::parse_complex(lambda));
      const auto c = mode == "fast" ? classify_fast(p) : classify_oracle(p, res);
      json j = io::to_json(c);
      if (c.kind == ClassKind::non_escape)
        if (const auto m = multiplier_kappa(p)) j["multiplier"] = io::to_json(*m);
      emit(out, j);
    };
  }
  {
    auto* s = app.add_subcommand("ray", "external, internal or parameter ray");
    s->configurable();
    add_n(s, n);
    s->add_option("--type", type)->check(CLI::IsMember({"external", "internal", "parameter"}))->capture_default_str();
    s->add_option("--lambda", lambda, "parameter (external and internal rays)")->capture_default_str();
    s->add_option("--angle", angle, "exact angle p/q")->capture_default_str();
    s->add_option("--level", level, "internal rays: pull back to U_lambda in a level-k hole (k >= 3)")->capture_default_str();
    s->add_option("--gmin", g_min, "lowest potential")->check(CLI::PositiveNumber)->capture_default_str();
    s->add_option("--out", out, "JSON file (default stdout)");
    run[s] = [&] {
      const Angle t = io::parse_angle(angle);
      json j;
      bool truncated = false;
      if (type == "parameter") {
        ParamRayOptions o;
        o.g_min = g_min;
        const LandingResult l = param_landing(n, t, o);
        j = io::to_json(l.ray);
        j["landing"] = {{"lambda", io::to_json(l.lambda)}, {"method", l.method}};
        truncated = l.ray.truncated;
      } else {
        const Params p(n, io::parse_complex(lambda));
        RayOptions o;
        o.g_min = g_min;
        RayPolyline r = type == "external" ? trace_external_ray(p, t, o)
                        : level > 0        ? pullback_ray_to_U(p, level, t, o)
                                           : trace_internal_ray(p, t, o);
        j = io::to_json(r);
        truncated = r.truncated;
      }
      if (truncated) throw NumericFailure("ray truncated", j);
      emit(out, j);
    };
  }
  {
    auto* s = app.add_subcommand("cutray", "finite-depth approximation of a cut ray");
    s->configurable();
    add_n(s, n);
    s->add_option("--lambda", lambda)->capture_default_str();
    s->add_option("--angle", angle, "theta in the Cantor set, exact p/q")->capture_default_str();
    s->add_option("--depth", depth)->check(CLI::Range(0, 20))->capture_default_str();
    add_res(s, "--samples-per-ray", samples_per_ray, "points per boundary ray");
    s->add_option("--out", out, "JSON file (default stdout)");
    run[s] = [&] {
      CutRayOptions o;
      o.depth = depth;
      o.samples_per_ray = samples_per_ray;
      const CutRayApprox c = cut_ray(Params(n, io::parse_complex(lambda)), io::parse_angle(angle), o);
      emit(out, io::to_json(c));
    };
  }
  {
    auto* s = app.add_subcommand("cusp", "parabolic parameter at the landing point of R_0(theta)");
    s->configurable();
    add_n(s, n);
    s->add_option("--theta", angle, "tau-periodic angle p/q")->capture_default_str();
    s->add_option("--out", out, "JSON file (default stdout)");
    run[s] = [&] { emit(out, io::to_json(find_cusp(n, io::parse_angle(angle)))); };
  }
  {
    auto* s = app.add_subcommand("holes", "centers of the Sierpinski holes of level k");
    s->configurable();
    add_n(s, n);
    s->add_option("--k", k, "level >= 3")->check(CLI::Range(3, 12))->capture_default_str();
    s->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    s->add_option("--out", out, "output file (default stdout)");
    run[s] = [&] {
      const HoleCensus h = sierpinski_hole_centers(n, k);
      if (format == "json") emit(out, io::to_json(h));
      else {
        std::vector<std::vector<double>> rows;
        for (cplx c : h.centers) rows.push_back({c.real(), c.imag()});
        io::write_text(out, io::csv({"re", "im"}, rows));
      }
      if (!h.complete) throw NumericFailure("incomplete census", io::to_json(h));
    };
  }
  {
    auto* s = app.add_subcommand("component", "boundary of a hyperbolic component or of a hole");
    s->configurable();
    add_n(s, n);
    s->add_option("--seed", seed, "a parameter in the component (or the hole center)")->required();
    s->add_flag("--hole", hole, "trace the hole containing --seed through Phi_H");
    add_res(s, "--samples", samples, "boundary samples");
    s->add_option("--varrho", varrho, "radius in the multiplier disk")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    s->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    s->add_option("--out", out, "output file (default stdout)");
    run[s] = [&] {
      const cplx c = io::parse_complex(seed);
      const ComponentBoundary b = hole ? hole_boundary(n, c, samples, varrho) : component_boundary(n, c, samples, varrho);
      if (format == "json") emit(out, io::to_json(b));
      else {
        std::vector<std::vector<double>> rows;
        for (const auto& [t, l] : b.samples) rows.push_back({t, l.real(), l.imag()});
        io::write_text(out, io::csv({"s", "re", "im"}, rows));
      }
      if (!b.diagnostics.empty()) throw NumericFailure(b.diagnostics, io::to_json(b));
    };
  }
  {
    auto* s = app.add_subcommand("capacity", "Phi_0(lambda) / 4 lambda along a ray to infinity");
    s->configurable();
    add_n(s, n);
    s->add_option("--radii", radii)->capture_default_str();
    s->add_option("--arg", arg, "arg lambda")->capture_default_str();
    s->add_option("--out", out, "CSV file (default stdout)");
    run[s] = [&] {
      const auto r = capacity_check(n, radii, arg);
      std::vector<std::vector<double>> rows;
      for (size_t i = 0; i < r.size(); ++i) rows.push_back({radii[i], r[i].real(), r[i].imag(), std::abs(r[i] - 1.0)});
      io::write_text(out, io::csv({"radius", "re", "im", "abs_error"}, rows));
    };
  }
  {
    auto* s = app.add_subcommand("verify", "run the acceptance suite and print a pass/fail table");
    s->configurable();
    add_n(s, n);
    s->add_option("--only", only, "criterion ids")->check(CLI::Range(1, kAcceptanceCount));
    add_res(s, "--oracle-res", oracle_res, "grid oracle resolution for the classifier row");
    run[s] = [&] {
      AcceptanceOptions o;
      o.n = n;
      o.only = only;
      o.oracle_res = oracle_res;
      int failed = 0;
      run_acceptance(o, [&](const AcceptanceRow& r) {
        std::printf("%-4s %2d  %-24s %7.1fs  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                    r.detail.c_str());
        std::fflush(stdout);
        failed += !r.pass;
      });
      if (failed) throw NumericFailure(std::to_string(failed) + " acceptance criteria failed");
    };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (dump) {
    std::cout << "threads=" << threads << "\n[" << sub->get_name() << "]\n" << sub->config_to_str(true, false);
    return kOk;
  }
  if (threads > 0) setenv("MCMULLEN_THREADS", std::to_string(threads).c_str(), 1);

  try {
    run.at(sub)();
  } catch (const NumericFailure& e) {
    json j{{"error", e.what()}, {"command", sub->get_name()}};
    if (!e.payload.is_null()) j["result"] = e.payload;
    std::cerr << j.dump(2) << "\n";
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n\n" << sub->help();
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"command", sub->get_name()}}.dump(2) << "\n";
    return kNumeric;
  }
  return kOk;
}
