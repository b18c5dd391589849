#pragma once

#include <vector>

#include "json.hpp"
#include "logsweep/cadlag_path.hpp"
#include "logsweep/m1_metric.hpp"

namespace logsweep {

inline nlohmann::json to_json(const M1Bracket& b) { return {{"lower", b.lower}, {"upper", b.upper}}; }

/// Polyline as [[t, x], ...].
inline nlohmann::json to_json(const std::vector<Point2>& pts) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& p : pts) j.push_back({p.t, p.x});
  return j;
}

inline nlohmann::json to_json(const ExtendedGraph& g) { return {{"vertices", to_json(g.pts)}}; }

/// Knots as [[t, left, right], ...].
inline nlohmann::json to_json(const CadlagPath& f) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& k : f.knots()) j.push_back({k.t, k.left, k.right});
  return j;
}

inline CadlagPath cadlag_from_json(const nlohmann::json& j) {
  std::vector<Knot> k;
  for (const auto& e : j) k.push_back({e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<double>()});
  return CadlagPath(std::move(k));
}

}  // namespace logsweep
