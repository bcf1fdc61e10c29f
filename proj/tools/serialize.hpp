// JSON / CSV forms of the library results, and parsers for CLI values.
#pragma once

#include "mcmullen/classify.hpp"
#include "mcmullen/cutray.hpp"
#include "mcmullen/param.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace mcm::io {

using json = nlohmann::ordered_json;

/// %.17g
std::string num(double x);
std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

json to_json(cplx z);  // [re, im]
json to_json(const Angle& t);
json to_json(const RayPolyline& r);
json to_json(const ClassificationResult& c);
json to_json(const CuspResult& c);
json to_json(const LandingResult& l);
json to_json(const CutRayApprox& c);
json to_json(const HoleCensus& h);
json to_json(const ComponentBoundary& b);
json to_json(const MultiplierResult& m);

/// "a", "a+bi", "a-bi", "bi", "i"; throws std::invalid_argument.
cplx parse_complex(const std::string& s);
/// Exact fraction "p/q" or integer.
Angle parse_angle(const std::string& s);
/// "re0,im0,re1,im1"
BBox parse_bbox(const std::string& s);

/// Writes to `path`, or to stdout for "" and "-".
void write_text(const std::string& path, const std::string& text);

}  // namespace mcm::io
