#include "dgi/intervention.hpp"

#include <algorithm>

#include "dgi/graph_text.hpp"
#include "dgi/hashing.hpp"

namespace dgi {

using nlohmann::json;

InterventionGraph InterventionGraph::make(CausalGraph graph, NodeId first_intervention,
                                          NodeId target_final, std::string origin) {
    if (!graph.contains(first_intervention)) {
        throw DgiError(Errc::UnknownNode,
                       "first intervention " + first_intervention.render() + " not in graph");
    }
    if (!first_intervention.starred) {
        throw DgiError(Errc::NoStarredNode,
                       "first intervention " + first_intervention.render() + " is not starred");
    }
    if (!graph.contains(target_final)) {
        throw DgiError(Errc::UnknownNode,
                       "target final " + target_final.render() + " not in graph");
    }
    if (graph.node(target_final).state != NodeState::ResultFinal) {
        throw DgiError(Errc::NotAFinalResult,
                       "target " + target_final.render() + " is not a Result(final) node");
    }
    // Vx* replaces Vx: a starred node may not coexist with its unstarred twin.
    for (const auto& n : graph.nodes()) {
        if (n.id.starred && graph.contains(NodeId{n.id.base, false})) {
            throw DgiError(Errc::IdCollision, n.id.render() + " coexists with unstarred " +
                                                  NodeId{n.id.base, false}.render());
        }
    }
    return InterventionGraph{std::move(graph), first_intervention, target_final,
                             std::move(origin)};
}

json entry_point_to_json(const EntryPoint& ep) {
    return json{{"i2", ep.i2.render()}, {"rm", ep.rm.render()}, {"rf", ep.rf.render()}};
}

EntryPoint entry_point_from_json(const json& j) {
    return EntryPoint{parse_node_id(j.at("i2").get<std::string>()),
                      parse_node_id(j.at("rm").get<std::string>()),
                      parse_node_id(j.at("rf").get<std::string>())};
}

InterventionGraph mark_intervention(const CausalGraph& static_graph, const NodeId& node,
                                    const std::string& new_content,
                                    const std::vector<GraphNode>& added_nodes,
                                    std::optional<NodeId> target_final) {
    const GraphNode& original = static_graph.node(node);  // throws UnknownNode
    if (original.state != NodeState::Condition) {
        throw DgiError(Errc::NotACondition,
                       node.render() + " is a " + node_state_token(original.state) +
                           " node; only Condition nodes can be intervened on");
    }

    NodeId starred = node.star();
    std::vector<GraphNode> nodes;
    nodes.reserve(static_graph.nodes().size() + added_nodes.size());
    for (const auto& n : static_graph.nodes()) {
        GraphNode copy = n;
        if (n.id == node) {
            copy.id = starred;
            copy.content = new_content;
        }
        for (auto& p : copy.previous) {
            if (p == node) p = starred;
        }
        nodes.push_back(std::move(copy));
    }
    for (const auto& added : added_nodes) {
        for (const auto& existing : nodes) {
            if (existing.id.base == added.id.base) {
                throw DgiError(Errc::IdCollision,
                               "added node " + added.id.render() + " reuses index " +
                                   std::to_string(added.id.base));
            }
        }
        nodes.push_back(added);
    }

    // from_nodes re-runs the full validation, including CycleDetected after
    // the additions.
    CausalGraph graph = CausalGraph::from_nodes(std::move(nodes), static_graph.provenance());

    NodeId target;
    if (target_final) {
        target = *target_final;
    } else {
        auto finals = graph.nodes_with_state(NodeState::ResultFinal);
        if (finals.size() != 1) {
            throw DgiError(Errc::AmbiguousTargetFinal,
                           "graph has " + std::to_string(finals.size()) +
                               " Result(final) nodes; pass an explicit target");
        }
        target = finals.front();
    }

    std::string origin = hex64(fnv1a64(serialize_graph(static_graph)));
    return InterventionGraph::make(std::move(graph), starred, target, std::move(origin));
}

InterventionGraph parse_intervention_graph(const std::string& text,
                                           std::optional<NodeId> first_intervention_hint,
                                           const NodeId& target_final) {
    CausalGraph graph = parse_graph(text);

    std::vector<NodeId> starred;
    for (const auto& n : graph.nodes()) {
        if (n.id.starred) starred.push_back(n.id);
    }
    if (starred.empty()) {
        throw DgiError(Errc::NoStarredNode, "intervention graph has no starred node");
    }

    NodeId first;
    if (first_intervention_hint) {
        first = *first_intervention_hint;
    } else if (starred.size() == 1) {
        first = starred.front();
    } else {
        throw DgiError(Errc::AmbiguousFirstIntervention,
                       std::to_string(starred.size()) +
                           " starred nodes and no first-intervention hint");
    }
    return InterventionGraph::make(std::move(graph), first, target_final);
}

ValidityMap propagate_validity(const CausalGraph& graph, const AssumptionSet& assumptions) {
    for (const auto& [id, holds] : assumptions) {
        (void)holds;
        if (graph.node(id).state != NodeState::Condition) {
            throw DgiError(Errc::NonConditionAssumption,
                           id.render() + " is not a Condition node");
        }
    }

    ValidityMap validity;
    for (const NodeId& id : graph.topological_order()) {
        const GraphNode& n = graph.node(id);
        bool holds = true;
        switch (n.state) {
            case NodeState::Condition: {
                auto it = assumptions.find(id);
                holds = it == assumptions.end() ? true : it->second;
                break;
            }
            case NodeState::Others:
                holds = true;
                break;
            case NodeState::ResultMiddle:
            case NodeState::ResultFinal:
                for (const NodeId& p : n.previous) {
                    if (!validity.at(p)) {
                        holds = false;
                        break;
                    }
                }
                break;
        }
        validity[id] = holds;
    }
    return validity;
}

std::vector<EntryPoint> enumerate_entry_points(const InterventionGraph& ig, bool transitive) {
    const CausalGraph& g = ig.graph;

    auto linked = [&](const NodeId& from, const NodeId& to) {
        if (!transitive) {
            const auto& prev = g.node(to).previous;
            return std::find(prev.begin(), prev.end(), from) != prev.end();
        }
        return g.ancestors(to).count(from) > 0;
    };

    std::vector<EntryPoint> out;
    for (const auto& m : g.nodes()) {
        if (m.state != NodeState::ResultMiddle) continue;
        if (!linked(m.id, ig.target_final)) continue;
        for (const auto& c : g.nodes()) {
            if (c.state != NodeState::Condition) continue;
            if (c.id == ig.first_intervention) continue;
            if (!linked(c.id, m.id)) continue;
            out.push_back(EntryPoint{c.id, m.id, ig.target_final});
        }
    }
    std::sort(out.begin(), out.end(), [](const EntryPoint& a, const EntryPoint& b) {
        if (a.rm != b.rm) return a.rm < b.rm;
        return a.i2 < b.i2;
    });
    return out;
}

std::optional<GoldLabel> try_parse_gold_label(const std::string& token) {
    if (token == "Y") return GoldLabel::Y;
    if (token == "N") return GoldLabel::N;
    return std::nullopt;
}

GoldLabel derive_gold_label(const InterventionGraph& ig, const SecondaryChoice& secondary) {
    // Conjunctive propagation cannot certify labels over graphs whose
    // results are reachable through alternative parents; refuse instead of
    // guessing.
    for (const auto& n : ig.graph.nodes()) {
        if (n.any_of) {
            throw DgiError(Errc::UnsoundGraph,
                           n.id.render() + " is flagged any_of; labels would be unsound");
        }
    }

    AssumptionSet assumptions;

    if (const auto* inv = std::get_if<Invalidate>(&secondary)) {
        auto legal = enumerate_entry_points(ig);
        if (std::find(legal.begin(), legal.end(), inv->entry) == legal.end()) {
            throw DgiError(Errc::IllegalEntryPoint,
                           "(" + inv->entry.i2.render() + ", " + inv->entry.rm.render() + ", " +
                               inv->entry.rf.render() + ") is not a legal entry point");
        }
        assumptions[inv->entry.i2] = false;
    } else if (const auto* red = std::get_if<Redundant>(&secondary)) {
        if (!ig.graph.contains(red->cond) ||
            ig.graph.node(red->cond).state != NodeState::Condition ||
            red->cond == ig.first_intervention) {
            throw DgiError(Errc::IllegalRedundantNode,
                           red->cond.render() +
                               " is not a Condition node distinct from the first intervention");
        }
        // all Conditions hold, the redundant assumption changes nothing
    } else if (std::holds_alternative<SwapFirstAssumption>(secondary)) {
        assumptions[ig.first_intervention] = false;
    }
    // NoSecondary: all Conditions hold

    ValidityMap validity = propagate_validity(ig.graph, assumptions);
    return validity.at(ig.target_final) ? GoldLabel::Y : GoldLabel::N;
}

bool verify_item_label(const InterventionGraph& ig, const SecondaryChoice& secondary,
                       GoldLabel claimed) {
    return derive_gold_label(ig, secondary) == claimed;
}

}  // namespace dgi
