#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "magvol/convex_bodies.hpp"
#include "magvol/errors.hpp"
#include "magvol/finite_metric.hpp"
#include "magvol/generating_measures.hpp"

namespace magvol {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  try {
    Json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("malformed JSON in " + path + ": " + e.what());
  }
}

namespace detail {

inline Vec json_to_vec(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) fail(ErrorKind::InvalidArgument, what + " must be a nonempty array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(ErrorKind::InvalidArgument, what + " entries must be numbers");
    v[static_cast<int>(i)] = j[i].get<double>();
  }
  return v;
}

inline std::vector<Vec> json_to_vecs(const Json& j, const std::string& what) {
  if (!j.is_array()) fail(ErrorKind::InvalidArgument, what + " must be an array of vectors");
  std::vector<Vec> out;
  out.reserve(j.size());
  for (const auto& row : j) out.push_back(json_to_vec(row, what));
  return out;
}

inline Json vec_to_json(const Vec& v) {
  Json j = Json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

inline Json vecs_to_json(const std::vector<Vec>& vs) {
  Json j = Json::array();
  for (const Vec& v : vs) j.push_back(vec_to_json(v));
  return j;
}

}  // namespace detail

// Body schema:
//   {"type": "vpolytope", "vertices": [[...], ...]}
//   {"type": "zonotope", "generators": [[...], ...]}
//   {"type": "box", "lows": [...], "highs": [...]}
inline ConvexBody body_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    fail(ErrorKind::InvalidArgument, "body JSON must be an object with a \"type\" field");
  const std::string type = j["type"].get<std::string>();
  if (type == "vpolytope") {
    if (!j.contains("vertices")) fail(ErrorKind::InvalidArgument, "vpolytope needs \"vertices\"");
    return ConvexBody::polytope(detail::json_to_vecs(j["vertices"], "vertices"));
  }
  if (type == "zonotope") {
    if (!j.contains("generators")) fail(ErrorKind::InvalidArgument, "zonotope needs \"generators\"");
    return ConvexBody::zonotope(detail::json_to_vecs(j["generators"], "generators"));
  }
  if (type == "box") {
    if (!j.contains("lows") || !j.contains("highs"))
      fail(ErrorKind::InvalidArgument, "box needs \"lows\" and \"highs\"");
    return ConvexBody::box(detail::json_to_vec(j["lows"], "lows"),
                           detail::json_to_vec(j["highs"], "highs"));
  }
  fail(ErrorKind::InvalidArgument, "unknown body type: " + type);
}

inline Json body_to_json(const ConvexBody& body) {
  Json j;
  if (body.is_polytope()) {
    j["type"] = "vpolytope";
    j["vertices"] = detail::vecs_to_json(body.as_polytope().vertices);
  } else if (body.is_zonotope()) {
    j["type"] = "zonotope";
    j["generators"] = detail::vecs_to_json(body.as_zonotope().generators);
  } else {
    j["type"] = "box";
    j["lows"] = detail::vec_to_json(body.as_box().lows);
    j["highs"] = detail::vec_to_json(body.as_box().highs);
  }
  return j;
}

inline ConvexBody load_body(const std::string& path) { return body_from_json(load_json_file(path)); }

// Measure schema: {"atoms": [{"dir": [...], "w": r}, ...]}
inline GeneratingMeasure measure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array() || j["atoms"].empty())
    fail(ErrorKind::InvalidArgument, "measure JSON needs a nonempty \"atoms\" array");
  std::vector<MeasureAtom> atoms;
  int dim = -1;
  for (const auto& a : j["atoms"]) {
    if (!a.is_object() || !a.contains("dir") || !a.contains("w"))
      fail(ErrorKind::InvalidArgument, "measure atoms need \"dir\" and \"w\"");
    Vec dir = detail::json_to_vec(a["dir"], "atom dir");
    if (dim < 0) dim = static_cast<int>(dir.size());
    atoms.push_back({std::move(dir), a["w"].get<double>()});
  }
  return GeneratingMeasure(std::move(atoms), dim);
}

inline Json measure_to_json(const GeneratingMeasure& m) {
  Json atoms = Json::array();
  for (const MeasureAtom& a : m.atoms()) {
    Json atom;
    atom["dir"] = detail::vec_to_json(a.dir);
    atom["w"] = a.weight;
    atoms.push_back(std::move(atom));
  }
  Json j;
  j["atoms"] = std::move(atoms);
  return j;
}

// Point set schema: {"points": [[...], ...]}
inline std::vector<Vec> load_points(const std::string& path) {
  const Json j = load_json_file(path);
  if (!j.is_object() || !j.contains("points"))
    fail(ErrorKind::InvalidArgument, "points JSON needs a \"points\" array");
  return detail::json_to_vecs(j["points"], "points");
}

// Measure specs accepted on the command line:
//   l1 | l2:N | random:N:seed | file:PATH
inline GeneratingMeasure parse_measure_spec(const std::string& spec, int dim) {
  if (spec == "l1") return l1_measure(dim);
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    return parts;
  };
  const auto parts = split(spec);
  auto parse_int = [&](const std::string& s, const char* what) {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(s, &pos);
      require(pos == s.size(), ErrorKind::InvalidArgument, "");
      return v;
    } catch (...) {
      fail(ErrorKind::InvalidArgument,
           std::string("--measure ") + spec + ": malformed " + what + " \"" + s + "\"");
    }
  };
  if (!parts.empty() && parts[0] == "l2") {
    require(parts.size() == 2, ErrorKind::InvalidArgument,
            "--measure l2:N requires an atom count, got \"" + spec + "\"");
    return euclidean_measure(dim, static_cast<int>(parse_int(parts[1], "atom count")));
  }
  if (!parts.empty() && parts[0] == "random") {
    require(parts.size() == 3, ErrorKind::InvalidArgument,
            "--measure random:N:seed requires two fields, got \"" + spec + "\"");
    return random_measure(dim, static_cast<int>(parse_int(parts[1], "atom count")),
                          static_cast<std::uint64_t>(parse_int(parts[2], "seed")));
  }
  if (!parts.empty() && parts[0] == "file") {
    require(parts.size() == 2, ErrorKind::InvalidArgument,
            "--measure file:PATH requires a path, got \"" + spec + "\"");
    GeneratingMeasure m = measure_from_json(load_json_file(parts[1]));
    require(m.dim() == dim, ErrorKind::InvalidArgument,
            "measure file dimension does not match the input dimension");
    return m;
  }
  fail(ErrorKind::InvalidArgument, "unknown measure spec \"" + spec + "\"");
}

// Distance norms for point-set commands: every measure spec, plus lp:P with
// p in [1,2].
inline NormSpec parse_norm_spec(const std::string& spec, int dim) {
  if (spec.rfind("lp:", 0) == 0) {
    try {
      std::size_t pos = 0;
      const double p = std::stod(spec.substr(3), &pos);
      require(pos == spec.size() - 3, ErrorKind::InvalidArgument, "");
      return NormSpec::lp(p);
    } catch (const DomainError&) {
      throw;
    } catch (...) {
      fail(ErrorKind::InvalidArgument, "malformed lp spec \"" + spec + "\"");
    }
  }
  return NormSpec::from_measure(parse_measure_spec(spec, dim));
}

}  // namespace magvol
