#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dgi/causal_graph.hpp"

namespace dgi {

/// Causal graph after the first intervention: the intervened Condition is
/// starred (Vx* replaces Vx) and the graph carries the designated target
/// final-result node of the originating counterfactual question.
struct InterventionGraph {
    CausalGraph graph;
    NodeId first_intervention;  // starred
    NodeId target_final;        // state Result(final)
    std::string origin;         // id/hash of the static graph it came from

    // Checks the invariants above plus all causal-graph rules. Throws on the
    // first violation.
    static InterventionGraph make(CausalGraph graph, NodeId first_intervention,
                                  NodeId target_final, std::string origin = {});
};

/// Legal secondary-intervention site: intervening on Condition i2 invalidates
/// intermediate result rm, which invalidates final result rf.
struct EntryPoint {
    NodeId i2;
    NodeId rm;
    NodeId rf;

    friend bool operator==(const EntryPoint& a, const EntryPoint& b) {
        return a.i2 == b.i2 && a.rm == b.rm && a.rf == b.rf;
    }
};

nlohmann::json entry_point_to_json(const EntryPoint& ep);
EntryPoint entry_point_from_json(const nlohmann::json& j);

/// Truth assignment for Condition nodes; unlisted Conditions default to
/// Holds. Others nodes always hold: interventions toggle input conditions,
/// never rules or background knowledge.
using AssumptionSet = std::map<NodeId, bool>;

/// Holds/Fails per node, true = Holds.
using ValidityMap = std::map<NodeId, bool>;

/// Replaces a Condition node of the static graph with its starred twin
/// carrying new_content; every other original node is preserved (references
/// to the replaced id are re-pointed at the starred twin); added nodes are
/// appended and must use fresh indices.
InterventionGraph mark_intervention(const CausalGraph& static_graph, const NodeId& node,
                                    const std::string& new_content,
                                    const std::vector<GraphNode>& added_nodes = {},
                                    std::optional<NodeId> target_final = std::nullopt);

/// Parses generator output in the node-block format into an intervention
/// graph. first_intervention is the hint when given, otherwise the unique
/// starred node.
InterventionGraph parse_intervention_graph(const std::string& text,
                                           std::optional<NodeId> first_intervention_hint,
                                           const NodeId& target_final);

/// Conjunctive validity propagation: Condition nodes take their assumed
/// value, Others nodes always hold, Result nodes hold iff every direct
/// predecessor holds. Evaluated in topological order, so the result is
/// unique.
ValidityMap propagate_validity(const CausalGraph& graph, const AssumptionSet& assumptions);

/// All triplets (c, m, target_final) with state(c) = Condition,
/// c != first_intervention, c a direct predecessor of m, and m a
/// Result(middle) direct predecessor of target_final. Sorted by
/// (m base index, c base index) ascending. `transitive` widens "predecessor"
/// to ancestor at both links; off by default to match the one-hop reading.
std::vector<EntryPoint> enumerate_entry_points(const InterventionGraph& ig,
                                               bool transitive = false);

// Secondary-intervention choice for gold-label derivation.
struct Invalidate {
    EntryPoint entry;
};
struct Redundant {
    NodeId cond;
};
// L1_N: the original counterfactual assumption is swapped for a factual
// static condition, i.e. the first intervention no longer holds.
struct SwapFirstAssumption {};
struct NoSecondary {};

using SecondaryChoice = std::variant<Invalidate, Redundant, SwapFirstAssumption, NoSecondary>;

enum class GoldLabel { Y, N };

inline const char* gold_label_token(GoldLabel g) { return g == GoldLabel::Y ? "Y" : "N"; }
std::optional<GoldLabel> try_parse_gold_label(const std::string& token);

/// Deterministic gold label: builds the assumption set implied by the choice,
/// propagates validity, and returns Y iff target_final holds. By construction
/// Invalidate -> N, Redundant -> Y, NoSecondary -> Y.
GoldLabel derive_gold_label(const InterventionGraph& ig, const SecondaryChoice& secondary);

/// Consistency gate: does re-derivation reproduce the claimed label?
bool verify_item_label(const InterventionGraph& ig, const SecondaryChoice& secondary,
                       GoldLabel claimed);

}  // namespace dgi
