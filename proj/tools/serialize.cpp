#include "serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace mcm::io {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + num(r[i]);
    out += '\n';
  }
  return out;
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

namespace {

json big(const BigInt& b) {
  if (b <= BigInt(std::numeric_limits<long long>::max()) && b >= BigInt(std::numeric_limits<long long>::min()))
    return b.convert_to<long long>();
  return b.str();
}

json points(const std::vector<cplx>& v) {
  json a = json::array();
  for (cplx z : v) a.push_back(to_json(z));
  return a;
}

}  // namespace

json to_json(const Angle& t) {
  if (t.is_exact()) return {{"num", big(t.numerator())}, {"den", big(t.denominator())}};
  return {{"value", t.to_double()}};
}

json to_json(const RayPolyline& r) {
  json j{{"kind", to_string(r.kind)}, {"angle", to_json(r.angle)}, {"points", points(r.points)},
         {"potentials", r.potentials}};
  j["landing_estimate"] = r.landing_estimate ? to_json(*r.landing_estimate) : json(nullptr);
  j["truncated"] = r.truncated;
  if (!r.failure.empty()) j["failure"] = r.failure;
  return j;
}

json to_json(const ClassificationResult& c) {
  json j{{"kind", to_string(c.kind)}};
  if (c.kind == ClassKind::escape) j["level"] = c.level;
  j["escape_index"] = c.escape_index ? json(*c.escape_index) : json(nullptr);
  if (!c.diagnostics.empty()) j["diagnostics"] = c.diagnostics;
  return j;
}

json to_json(const CuspResult& c) {
  return {{"theta", to_json(c.theta)},     {"lambda", to_json(c.lambda)},
          {"period", c.period},            {"sign", c.sign},
          {"parabolic_point", to_json(c.parabolic_point)}, {"multiplier", to_json(c.multiplier)},
          {"residual", c.residual}};
}

json to_json(const LandingResult& l) {
  return {{"lambda", to_json(l.lambda)}, {"method", l.method}, {"ray", to_json(l.ray)}};
}

json to_json(const CutRayApprox& c) {
  json rays = json::array();
  for (const auto& r : c.boundary) rays.push_back(to_json(r));
  json j{{"theta", to_json(c.theta)},
         {"depth", c.depth},
         {"symbols", c.symbols},
         {"contains_zero_and_infinity", c.contains_zero_and_infinity},
         {"real_variant", c.real_variant},
         {"julia_samples", points(c.julia_samples)},
         {"boundary", rays}};
  if (!c.diagnostics.empty()) j["diagnostics"] = c.diagnostics;
  return j;
}

json to_json(const HoleCensus& h) {
  json j{{"n", h.n}, {"k", h.k}, {"expected_count", h.expected_count}, {"found", h.centers.size()},
         {"complete", h.complete}, {"centers", points(h.centers)}};
  if (!h.diagnostics.empty()) j["diagnostics"] = h.diagnostics;
  return j;
}

json to_json(const ComponentBoundary& b) {
  json s = json::array();
  for (const auto& [t, l] : b.samples) s.push_back(json::array({t, l.real(), l.imag()}));
  json j{{"seed", to_json(b.seed)}, {"varrho", b.varrho}, {"closure_defect", b.closure_defect},
         {"max_step", b.max_step},  {"max_residual", b.max_residual}, {"samples", s}};
  if (!b.diagnostics.empty()) j["diagnostics"] = b.diagnostics;
  return j;
}

json to_json(const MultiplierResult& m) {
  return {{"kappa", to_json(m.kappa)}, {"rho", to_json(m.rho)}, {"eps", m.eps},
          {"k", m.k},                  {"p", m.p},              {"z", to_json(m.z)}};
}

cplx parse_complex(const std::string& in) {
  std::string s;
  for (char c : in)
    if (c != ' ') s += c;
  auto bad = [&] { return std::invalid_argument("not a complex number: '" + in + "'"); };
  if (s.empty()) throw bad();
  if (s.back() != 'i') {
    char* end = nullptr;
    const double re = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end) throw bad();
    return re;
  }
  s.pop_back();
  // split at the last sign that is not an exponent sign
  size_t split = std::string::npos;
  for (size_t i = s.size(); i-- > 1;)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  auto coeff = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end) throw bad();
    return v;
  };
  if (split == std::string::npos) return {0.0, coeff(s)};
  const std::string re = s.substr(0, split);
  char* end = nullptr;
  const double r = std::strtod(re.c_str(), &end);
  if (end == re.c_str() || *end) throw bad();
  return {r, coeff(s.substr(split))};
}

Angle parse_angle(const std::string& s) {
  const Angle t = Angle::parse(s);
  if (!t.is_exact()) throw std::invalid_argument("angles must be exact fractions p/q, got '" + s + "'");
  return t;
}

BBox parse_bbox(const std::string& s) {
  std::stringstream ss(s);
  std::string item;
  std::vector<double> v;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    v.push_back(std::strtod(item.c_str(), &end));
    if (end == item.c_str() || *end) throw std::invalid_argument("bad bbox '" + s + "'");
  }
  if (v.size() != 4 || !(v[2] > v[0]) || !(v[3] > v[1]))
    throw std::invalid_argument("bbox must be re0,im0,re1,im1 with re1 > re0 and im1 > im0");
  return {cplx(v[0], v[1]), cplx(v[2], v[3])};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << text;
}

}  // namespace mcm::io
