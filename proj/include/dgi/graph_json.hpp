#pragma once

#include <json.hpp>

#include "dgi/causal_graph.hpp"

namespace dgi {

// Structured form: {"nodes": [{"id","content","state","previous"}...],
// "provenance": <string or null>}.
nlohmann::json graph_to_json(const CausalGraph& graph);
CausalGraph graph_from_json(const nlohmann::json& j);

}  // namespace dgi
