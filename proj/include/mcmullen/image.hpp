// RGB raster images and binary PPM output.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mcm {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

struct Image {
  int width = 0, height = 0;
  std::vector<Rgb> pixels;  // row-major, row 0 at the top

  Image() = default;
  Image(int w, int h) : width(w), height(h), pixels(size_t(w) * h) {}
  Rgb& at(int x, int y) { return pixels[size_t(y) * width + x]; }
  const Rgb& at(int x, int y) const { return pixels[size_t(y) * width + x]; }
};

/// Smooth cyclic palette indexed by a real parameter.
Rgb palette(double t, double saturation = 1.0);

void write_ppm(const Image& img, const std::string& path);
std::string encode_ppm(const Image& img);

}  // namespace mcm
