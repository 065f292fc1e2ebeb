#include "dgi/graph_json.hpp"

namespace dgi {

using nlohmann::json;

json graph_to_json(const CausalGraph& graph) {
    json nodes = json::array();
    for (const auto& n : graph.nodes()) {
        json previous = json::array();
        for (const auto& p : n.previous) previous.push_back(p.render());
        json nj = {{"id", n.id.render()},
                   {"content", n.content},
                   {"state", node_state_token(n.state)},
                   {"previous", previous}};
        if (n.any_of) nj["any_of"] = true;
        nodes.push_back(std::move(nj));
    }
    json out = {{"nodes", nodes}};
    if (graph.provenance()) {
        out["provenance"] = *graph.provenance();
    } else {
        out["provenance"] = nullptr;
    }
    return out;
}

CausalGraph graph_from_json(const json& j) {
    if (!j.is_object() || !j.contains("nodes") || !j["nodes"].is_array()) {
        throw DgiError(Errc::MalformedBlock, "graph json must be an object with a nodes array");
    }
    std::vector<GraphNode> nodes;
    for (const auto& nj : j["nodes"]) {
        GraphNode n;
        n.id = parse_node_id(nj.at("id").get<std::string>());
        n.content = nj.at("content").get<std::string>();
        auto state = try_parse_node_state(nj.at("state").get<std::string>());
        if (!state) {
            throw DgiError(Errc::UnknownState, "node " + n.id.render() + " has unknown state '" +
                                                   nj.at("state").get<std::string>() + "'");
        }
        n.state = *state;
        for (const auto& pj : nj.at("previous")) {
            n.previous.push_back(parse_node_id(pj.get<std::string>()));
        }
        n.any_of = nj.value("any_of", false);
        nodes.push_back(std::move(n));
    }
    std::optional<std::string> provenance;
    if (j.contains("provenance") && !j["provenance"].is_null()) {
        provenance = j["provenance"].get<std::string>();
    }
    return CausalGraph::from_nodes(std::move(nodes), std::move(provenance));
}

}  // namespace dgi
