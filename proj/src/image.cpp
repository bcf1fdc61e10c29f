#include "mcmullen/image.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace mcm {

Rgb palette(double t, double saturation) {
  auto ch = [&](double phase) {
    const double v = 0.5 + 0.5 * std::cos(6.283185307179586 * (t + phase));
    return std::uint8_t(std::lround(255 * (1 - saturation + saturation * v)));
  };
  return {ch(0.0), ch(0.33), ch(0.67)};
}

std::string encode_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.pixels.size() * 3);
  for (const Rgb& c : img.pixels) {
    out.push_back(char(c.r));
    out.push_back(char(c.g));
    out.push_back(char(c.b));
  }
  return out;
}

void write_ppm(const Image& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  const std::string data = encode_ppm(img);
  f.write(data.data(), std::streamsize(data.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace mcm
