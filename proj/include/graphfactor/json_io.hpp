#pragma once

#include <string>

#include "json.hpp"

#include "graphfactor/generators.hpp"
#include "graphfactor/matching.hpp"

namespace graphfactor {

nlohmann::json graph_to_json(const BipartiteMultigraph& g);
GraphPtr graph_from_json(const nlohmann::json& j);

// Matching files carry the graph plus denominator/k/weights.
nlohmann::json matching_to_json(const FractionalMatching& f);
FractionalMatching matching_from_json(const nlohmann::json& j);

nlohmann::json factor_to_json(const FactorSubgraph& h);
FactorSubgraph factor_from_json(const nlohmann::json& j, GraphPtr g);

nlohmann::json forest_to_json(const BoundariedForest& f);
BoundariedForest forest_from_json(const nlohmann::json& j);

nlohmann::json window_to_json(const Window& w);

std::string to_dot(const BipartiteMultigraph& g, const FractionalMatching* f = nullptr);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace graphfactor
