// Dynamical-plane grids, basin labels, escape-level classification and Julia renders.
#pragma once

#include "mcmullen/core.hpp"
#include "mcmullen/image.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mcm {

struct BBox {
  cplx lo;  // lower left
  cplx hi;  // upper right
  double width() const { return hi.real() - lo.real(); }
  double height() const { return hi.imag() - lo.imag(); }
};

/// Square box centred at c with half side h.
inline BBox square(cplx c, double h) { return {c - cplx(h, h), c + cplx(h, h)}; }

enum class PixelLabel : std::uint8_t { B, T, other_basin, non_escaping };
const char* to_string(PixelLabel l);

struct DynGrid {
  BBox bbox;
  int width = 0, height = 0;
  /// First k with |f^k(center)| > R, -1 if the orbit survived maxiter.
  std::vector<int> escape_time;
  std::vector<PixelLabel> label;
  /// Escaping pixels whose distance estimate to the Julia set is below one pixel. Fills do not
  /// cross them.
  std::vector<std::uint8_t> near_julia;
  bool labelled = false;
  bool b_equals_t = false;

  size_t index(int x, int y) const { return size_t(y) * width + x; }
  double dx() const { return bbox.width() / width; }
  double dy() const { return bbox.height() / height; }
  /// Row 0 is the top edge.
  cplx center(int x, int y) const;
  /// Pixel containing z, none outside the box.
  std::optional<std::pair<int, int>> pixel_of(cplx z) const;
  bool escapes(size_t i) const { return escape_time[i] >= 0; }
};

DynGrid escape_time_grid(const Params& p, const BBox& bbox, int width, int height, int maxiter = 500);

/// Flood fills B from the pixels outside the escape radius and T from the disk |z| <= r.
/// Throws std::invalid_argument if the disk is inside the box but smaller than a pixel.
void basin_components(DynGrid& grid, const Params& p);

enum class ClassKind { escape, non_escape, undetermined };
const char* to_string(ClassKind k);

struct ClassificationResult {
  ClassKind kind = ClassKind::undetermined;
  int level = -1;                   // for escape: 0 or k >= 2
  std::optional<int> escape_index;  // first m with |f^m(v+)| > R
  std::string diagnostics;
};

/// Grid-based classification on the box |Re z|, |Im z| <= 1.05 R at res x res.
ClassificationResult classify_oracle(const Params& p, int res = 256, int maxiter = 10000);

/// From the orbit of v+ alone.
ClassificationResult classify_fast(const Params& p, int maxiter = 10000);

/// Area of the pixels not certified to lie in the Fatou set (survivors and pixels within a
/// pixel of the Julia set) on the box of half side R, one value per resolution.
std::vector<double> julia_area_estimate(const Params& p, const std::vector<int>& resolutions, int maxiter = 500);

Image render_julia(const Params& p, const BBox& bbox, int width, int height, int maxiter = 500);

}  // namespace mcm
