#include "mcmullen/classify.hpp"

#include "mcmullen/parallel.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace mcm {

const char* to_string(PixelLabel l) {
  switch (l) {
    case PixelLabel::B: return "B";
    case PixelLabel::T: return "T";
    case PixelLabel::other_basin: return "other-basin";
    case PixelLabel::non_escaping: return "non-escaping";
  }
  return "?";
}

const char* to_string(ClassKind k) {
  switch (k) {
    case ClassKind::escape: return "escape";
    case ClassKind::non_escape: return "non_escape";
    case ClassKind::undetermined: return "undetermined";
  }
  return "?";
}

cplx DynGrid::center(int x, int y) const {
  return {bbox.lo.real() + (x + 0.5) * dx(), bbox.hi.imag() - (y + 0.5) * dy()};
}

std::optional<std::pair<int, int>> DynGrid::pixel_of(cplx z) const {
  const double u = (z.real() - bbox.lo.real()) / dx();
  const double v = (bbox.hi.imag() - z.imag()) / dy();
  if (!(u >= 0 && v >= 0 && u < width && v < height)) return std::nullopt;
  return std::make_pair(int(u), int(v));
}

namespace {

constexpr double kBand = 0.02;

struct PixelOrbit {
  int escape_time = -1;
  bool near_julia = false;
};

// Escape time with radius R, then a distance estimate |w| log|w| / |(f^k)'| carried in logs
// out to |w| > 1e8.
PixelOrbit pixel_orbit(const Params& p, cplx z, int maxiter, double pixel) {
  PixelOrbit out;
  const double R = p.escape_radius();
  if (std::abs(z) > R) {
    out.escape_time = 0;
    return out;
  }
  cplx w = z;
  double log_dw = 0;
  int k = 0, extra = 0;
  while (true) {
    if (w == 0.0) {
      if (out.escape_time < 0) out.escape_time = k + 1;
      return out;  // through the pole: interior of a preimage of B
    }
    log_dw += std::log(std::abs(deriv(p, w)));
    w = eval(p, w);
    ++k;
    if (is_infinite(w)) {
      if (out.escape_time < 0) out.escape_time = k;
      return out;
    }
    const double aw = std::abs(w);
    if (out.escape_time < 0) {
      if (aw > R) out.escape_time = k;
      else if (k >= maxiter) return out;
    }
    if (out.escape_time >= 0 && (aw > 1e8 || ++extra > 64)) {
      const double log_de = std::log(aw) + std::log(std::log(aw)) - log_dw;
      out.near_julia = log_de < std::log(pixel);
      return out;
    }
  }
}

bool neighbourhood_uniform(const DynGrid& g, int x, int y) {
  const PixelLabel l = g.label[g.index(x, y)];
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      const int u = x + dx, v = y + dy;
      if (u < 0 || v < 0 || u >= g.width || v >= g.height) continue;
      if (g.label[g.index(u, v)] != l) return false;
    }
  return true;
}

template <class Accept>
void flood(DynGrid& g, std::deque<size_t>& queue, PixelLabel to, Accept&& accept) {
  static const int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!queue.empty()) {
    const size_t i = queue.front();
    queue.pop_front();
    const int x = int(i % g.width), y = int(i / g.width);
    for (const auto& o : off) {
      const int u = x + o[0], v = y + o[1];
      if (u < 0 || v < 0 || u >= g.width || v >= g.height) continue;
      const size_t j = g.index(u, v);
      if (g.label[j] == to || !accept(j)) continue;
      g.label[j] = to;
      queue.push_back(j);
    }
  }
}

}  // namespace

DynGrid escape_time_grid(const Params& p, const BBox& bbox, int width, int height, int maxiter) {
  if (width < 2 || height < 2) throw std::invalid_argument("escape_time_grid: resolution must be at least 2x2");
  if (!(bbox.width() > 0 && bbox.height() > 0)) throw std::invalid_argument("escape_time_grid: empty box");
  DynGrid g;
  g.bbox = bbox;
  g.width = width;
  g.height = height;
  const size_t N = size_t(width) * height;
  g.escape_time.assign(N, -1);
  g.label.assign(N, PixelLabel::non_escaping);
  g.near_julia.assign(N, 0);
  const double pixel = std::max(g.dx(), g.dy());
  const double R = p.escape_radius();
  parallel_for(height, [&](long y) {
    for (int x = 0; x < width; ++x) {
      const size_t i = g.index(x, int(y));
      const cplx z = g.center(x, int(y));
      const PixelOrbit o = pixel_orbit(p, z, maxiter, pixel);
      g.escape_time[i] = o.escape_time;
      g.near_julia[i] = o.near_julia;
      if (std::abs(z) > R) g.label[i] = PixelLabel::B;
      else if (o.escape_time >= 0) g.label[i] = PixelLabel::other_basin;
    }
  });
  return g;
}

void basin_components(DynGrid& g, const Params& p) {
  const double R = p.escape_radius(), r = p.inner_radius();
  const size_t N = g.label.size();
  for (size_t i = 0; i < N; ++i)
    if (g.label[i] == PixelLabel::B || g.label[i] == PixelLabel::T)
      g.label[i] = g.escapes(i) ? PixelLabel::other_basin : PixelLabel::non_escaping;

  auto open = [&](size_t j) { return g.escapes(j) && !g.near_julia[j]; };
  std::deque<size_t> queue;
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x)
      if (std::abs(g.center(x, y)) > R) {
        g.label[g.index(x, y)] = PixelLabel::B;
        queue.push_back(g.index(x, y));
      }
  if (queue.empty()) {
    // The box misses |z| > R: seed from the escaping frame pixels instead.
    for (int y = 0; y < g.height; ++y)
      for (int x = 0; x < g.width; ++x) {
        const size_t i = g.index(x, y);
        if ((x == 0 || y == 0 || x == g.width - 1 || y == g.height - 1) && open(i)) {
          g.label[i] = PixelLabel::B;
          queue.push_back(i);
        }
      }
  }
  flood(g, queue, PixelLabel::B, [&](size_t j) { return open(j) && g.label[j] != PixelLabel::B; });

  g.labelled = true;
  g.b_equals_t = false;
  const bool disk_in_box = g.pixel_of(0.0).has_value();
  if (!disk_in_box) return;
  if (r < std::max(g.dx(), g.dy()))
    throw std::invalid_argument("basin_components: the disk |z| <= r is smaller than a pixel; use a finer grid");

  auto image_in_B = [&](size_t j) {
    const cplx w = eval(p, g.center(int(j % g.width), int(j / g.width)));
    if (is_infinite(w) || std::abs(w) > R) return true;
    const auto px = g.pixel_of(w);
    return px && g.label[g.index(px->first, px->second)] == PixelLabel::B;
  };
  bool merged = false;
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x) {
      const size_t i = g.index(x, y);
      if (std::abs(g.center(x, y)) > r) continue;
      if (g.label[i] == PixelLabel::B) {
        merged = true;
      } else {
        g.label[i] = PixelLabel::T;
        queue.push_back(i);
      }
    }
  flood(g, queue, PixelLabel::T, [&](size_t j) {
    if (g.label[j] == PixelLabel::B) {
      merged = true;
      return false;
    }
    return g.label[j] == PixelLabel::other_basin && open(j) && image_in_B(j);
  });
  if (!merged) return;
  g.b_equals_t = true;
  for (size_t i = 0; i < N; ++i)
    if (g.label[i] == PixelLabel::T) {
      g.label[i] = PixelLabel::B;
      queue.push_back(i);
    }
  flood(g, queue, PixelLabel::B, [&](size_t j) { return open(j) && g.label[j] != PixelLabel::B; });
}

ClassificationResult classify_fast(const Params& p, int maxiter) {
  ClassificationResult res;
  const Orbit o = iterate_orbit(p, critical_values(p).plus, maxiter);
  if (!o.escaped) {
    res.kind = ClassKind::non_escape;
    return res;
  }
  const int m = *o.escape_index;
  res.escape_index = m;
  // z -> c0^2/z commutes with f and swaps B and T when they differ; the critical circle
  // |z| = |c0| separates them near the orbit in practice. Walk back from the escape.
  const double rho = std::abs(p.c0());
  res.kind = ClassKind::escape;
  res.level = 0;
  for (int j = m - 1; j >= 0; --j) {
    const double s = std::abs(o.points[j]) / rho;
    if (s < 1 - kBand) {
      res.level = j + 2;
      break;
    }
    if (s <= 1 + kBand && j < m - 1) {
      res.kind = ClassKind::undetermined;
      res.level = -1;
      res.diagnostics = "f^" + std::to_string(j) + "(v+) is close to the critical circle";
      break;
    }
  }
  return res;
}

ClassificationResult classify_oracle(const Params& p, int res, int maxiter) {
  ClassificationResult out;
  const Orbit o = iterate_orbit(p, critical_values(p).plus, maxiter);
  if (!o.escaped) {
    out.kind = ClassKind::non_escape;
    return out;
  }
  const int m = *o.escape_index;
  out.escape_index = m;
  if (m == 0) {
    out.kind = ClassKind::escape;
    out.level = 0;
    return out;
  }
  const double R = p.escape_radius(), r = p.inner_radius();
  // The two components of f^-1(|w| > R) are separated by the critical circle |z| = |c0|.
  const double rho = std::abs(p.c0());
  if (m == 1 && std::abs(o.points[0]) > rho) {
    out.kind = ClassKind::escape;
    out.level = 0;
    return out;
  }
  // Survivor pixels only cost time; their label does not depend on the last few thousand steps.
  DynGrid g = escape_time_grid(p, square(0.0, 1.05 * R), res, res, std::min(maxiter, 1000));
  try {
    basin_components(g, p);
  } catch (const std::invalid_argument& e) {
    out.diagnostics = e.what();
    return out;
  }
  auto label_at = [&](cplx z, PixelLabel& l) {
    const auto px = g.pixel_of(z);
    if (!px || !neighbourhood_uniform(g, px->first, px->second)) return false;
    l = g.label[g.index(px->first, px->second)];
    return true;
  };
  PixelLabel l;
  // With B = T, f^-1(B) = B, so the escaping orbit of v+ lies in B.
  if (g.b_equals_t) {
    out.kind = ClassKind::escape;
    out.level = 0;
    return out;
  }
  for (int j = 0; j < m; ++j) {
    const cplx z = o.points[j];
    if (std::abs(z) <= r || (j == m - 1 && std::abs(z) < rho)) {
      out.kind = ClassKind::escape;
      out.level = j + 2;
      return out;
    }
    if (j == m - 1) {
      out.diagnostics = "f^" + std::to_string(j) + "(v+) lies in B although the fills did not merge";
      return out;
    }
    if (!label_at(z, l)) {
      out.diagnostics = "f^" + std::to_string(j) + "(v+) is within a pixel of a label change";
      return out;
    }
    if (l == PixelLabel::T) {
      out.kind = ClassKind::escape;
      out.level = j + 2;
      return out;
    }
    if (l == PixelLabel::B) {
      out.diagnostics = "f^" + std::to_string(j) + "(v+) lies in B although the fills did not merge";
      return out;
    }
  }
  out.diagnostics = "the orbit of v+ never resolved into T";
  return out;
}

std::vector<double> julia_area_estimate(const Params& p, const std::vector<int>& resolutions, int maxiter) {
  std::vector<double> out;
  const double R = p.escape_radius();
  for (int res : resolutions) {
    const DynGrid g = escape_time_grid(p, square(0.0, R), res, res, maxiter);
    size_t count = 0;
    for (size_t i = 0; i < g.label.size(); ++i) count += !g.escapes(i) || g.near_julia[i];
    out.push_back(double(count) * g.dx() * g.dy());
  }
  return out;
}

Image render_julia(const Params& p, const BBox& bbox, int width, int height, int maxiter) {
  DynGrid g = escape_time_grid(p, bbox, width, height, maxiter);
  try {
    basin_components(g, p);
  } catch (const std::invalid_argument&) {
    // too coarse for the trap door; colour by escape time only
  }
  Image img(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const size_t i = g.index(x, y);
      const double t = 0.06 * g.escape_time[i];
      Rgb c;
      if (!g.escapes(i)) c = {0, 0, 0};
      else if (g.near_julia[i]) c = {24, 24, 32};
      else if (g.label[i] == PixelLabel::B) c = palette(t, 0.55);
      else if (g.label[i] == PixelLabel::T) c = palette(t + 0.5, 0.9);
      else c = palette(t + 0.25, 0.35);
      img.at(x, y) = c;
    }
  return img;
}

}  // namespace mcm
