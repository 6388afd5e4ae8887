#pragma once

// JSON documents:
//   PointSet   {"q":3,"n":3,"points":[[0,0,0],[1,1,0],...]}
//   CubeArray  {"q":3,"n":2,"m":3,"values":[...]}        (row-major)
//   Bitrade    {"q":2,"n":2,"k":1,"values":[1,-1,-1,1]}
//   Partial    {"q":3,"n":2,"m":3,"points":[[1,1],...],"values":[2,...]}
//   Matrix     {"n":7,"rows":["0001111",...]}

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "freqcube/bitrades.hpp"
#include "freqcube/core.hpp"
#include "freqcube/cubes.hpp"
#include "freqcube/lincodes.hpp"
#include "freqcube/testsets.hpp"

namespace freqcube::io {

using json = nlohmann::ordered_json;

namespace detail {

inline int get_int(const json& j, const char* key) {
  freqcube::detail::require(j.is_object() && j.contains(key) && j.at(key).is_number_integer(),
                            std::string("missing integer field \"") + key + "\"");
  return j.at(key).get<int>();
}

inline Point parse_point(const json& j, const GridSig& sig) {
  freqcube::detail::require(j.is_array(), "a point is an array of symbols");
  std::vector<Symbol> c;
  for (const auto& v : j) {
    freqcube::detail::require(v.is_number_integer(), "point coordinates are integers");
    const int s = v.get<int>();
    freqcube::detail::require(s >= 0 && s < sig.q(), "point coordinate outside [q]");
    c.push_back(static_cast<Symbol>(s));
  }
  freqcube::detail::require(static_cast<int>(c.size()) == sig.n(), "point length differs from n");
  return Point(std::move(c));
}

inline json point_json(const Point& p) {
  json a = json::array();
  for (Symbol s : p.coords) a.push_back(static_cast<int>(s));
  return a;
}

}  // namespace detail

inline json to_json(const PointSet& t) {
  json j;
  j["q"] = t.sig().q();
  j["n"] = t.sig().n();
  json pts = json::array();
  for (const auto& p : t.points()) pts.push_back(detail::point_json(p));
  j["points"] = std::move(pts);
  return j;
}

inline PointSet point_set_from_json(const json& j) {
  const GridSig sig(detail::get_int(j, "q"), detail::get_int(j, "n"));
  freqcube::detail::require(j.contains("points") && j.at("points").is_array(), "missing \"points\" array");
  std::vector<Point> pts;
  for (const auto& p : j.at("points")) pts.push_back(detail::parse_point(p, sig));
  return PointSet::from_points(sig, pts);
}

inline json to_json(const CubeArray& f, int m) {
  json j;
  j["q"] = f.sig().q();
  j["n"] = f.sig().n();
  j["m"] = m;
  j["values"] = f.values();
  return j;
}

inline json bitrade_to_json(const CubeArray& beta, int k) {
  json j;
  j["q"] = beta.sig().q();
  j["n"] = beta.sig().n();
  j["k"] = k;
  j["values"] = beta.values();
  return j;
}

inline CubeArray cube_from_json(const json& j) {
  const GridSig sig(detail::get_int(j, "q"), detail::get_int(j, "n"));
  freqcube::detail::require(j.contains("values") && j.at("values").is_array(), "missing \"values\" array");
  std::vector<Value> v;
  for (const auto& x : j.at("values")) {
    freqcube::detail::require(x.is_number_integer(), "array values are integers");
    v.push_back(x.get<Value>());
  }
  return CubeArray(sig, std::move(v));
}

inline json to_json(const PartialCube& pc) {
  json j;
  j["q"] = pc.sig.q();
  j["n"] = pc.sig.n();
  j["m"] = pc.m;
  json pts = json::array();
  json vals = json::array();
  for (const auto& [i, v] : pc.assignments) {
    pts.push_back(detail::point_json(pc.sig.point_at(i)));
    vals.push_back(v);
  }
  j["points"] = std::move(pts);
  j["values"] = std::move(vals);
  return j;
}

inline PartialCube partial_from_json(const json& j) {
  const GridSig sig(detail::get_int(j, "q"), detail::get_int(j, "n"));
  PartialCube pc{sig, detail::get_int(j, "m"), {}};
  freqcube::detail::require(j.contains("points") && j.contains("values"), "partial cube needs \"points\" and \"values\"");
  const auto& pts = j.at("points");
  const auto& vals = j.at("values");
  freqcube::detail::require(pts.is_array() && vals.is_array() && pts.size() == vals.size(),
                            "\"points\" and \"values\" must be arrays of equal length");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    freqcube::detail::require(vals[i].is_number_integer(), "values are integers");
    const Index idx = sig.index_of(detail::parse_point(pts[i], sig));
    freqcube::detail::require(!pc.assignments.contains(idx), "a point is assigned twice");
    pc.assignments[idx] = vals[i].get<Value>();
  }
  return pc;
}

inline json to_json(const BinMatrix& m) {
  json j;
  j["n"] = m.n;
  j["rows"] = m.to_strings();
  return j;
}

inline BinMatrix matrix_from_json(const json& j) {
  freqcube::detail::require(j.contains("rows") && j.at("rows").is_array(), "missing \"rows\" array");
  return BinMatrix::from_strings(j.at("rows").get<std::vector<std::string>>());
}

inline json to_json(const Certificate& c) {
  json j;
  j["kind"] = c.kind;
  j["params"] = c.params;
  j["verdict"] = to_string(c.verdict);
  j["set"] = to_json(c.set);
  json ev = json::object();
  for (const auto& [k, v] : c.evidence) ev[k] = v;
  j["evidence"] = std::move(ev);
  j["warnings"] = c.warnings;
  if (!c.counterexample.empty()) {
    json ce = json::array();
    for (const auto& f : c.counterexample) ce.push_back(f.values());
    j["counterexample"] = std::move(ce);
  }
  j["tool_version"] = kToolVersion;
  return j;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

}  // namespace freqcube::io
