#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "dgi/errors.hpp"

namespace dgi {

/// Identifier of a causal-event node. Renders as "V<k>" or, for an
/// intervened node, "V<k>*".
struct NodeId {
    int base = 0;
    bool starred = false;

    std::string render() const;
    NodeId star() const { return NodeId{base, true}; }

    // Orders by index, starred after unstarred of the same index.
    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

// Parses "V3" / "V3*". Returns nullopt when the text is not a node id.
std::optional<NodeId> try_parse_node_id(const std::string& text);
// Throwing variant (Errc::MalformedBlock).
NodeId parse_node_id(const std::string& text);

enum class NodeState {
    Condition,
    Others,
    ResultMiddle,
    ResultFinal,
};

const char* node_state_token(NodeState state);
// Accepts the surface tokens Condition / Rule / Others / Result(middle) /
// Result(final), case-insensitively. "Rule" normalizes to Others.
std::optional<NodeState> try_parse_node_state(const std::string& token);

inline bool is_result(NodeState s) {
    return s == NodeState::ResultMiddle || s == NodeState::ResultFinal;
}

struct GraphNode {
    NodeId id;
    std::string content;
    NodeState state = NodeState::Condition;
    std::vector<NodeId> previous;  // empty encodes "None"
    // Optional annotation: this result is reachable through alternative
    // parents. Conjunctive propagation cannot derive sound labels for such
    // graphs, so generation refuses them.
    bool any_of = false;

    friend bool operator==(const GraphNode& a, const GraphNode& b) {
        return a.id == b.id && a.content == b.content && a.state == b.state &&
               a.previous == b.previous;
    }
};

struct Violation {
    std::string node;  // rendered id, empty for graph-level rules
    Errc code;
    std::string rule;

    std::string describe() const;
};

/// Typed DAG of causal-event nodes. Immutable after construction; node order
/// is insertion order.
class CausalGraph {
public:
    CausalGraph() = default;

    // Builds and validates. Throws DgiError on duplicate ids or any
    // invariant violation (first violation in validation order wins).
    static CausalGraph from_nodes(std::vector<GraphNode> nodes,
                                  std::optional<std::string> provenance = std::nullopt);

    // Builds without validating (duplicate ids still throw). For feeding
    // validate() with graphs that break the other invariants.
    static CausalGraph from_nodes_unchecked(std::vector<GraphNode> nodes,
                                            std::optional<std::string> provenance = std::nullopt);

    const std::vector<GraphNode>& nodes() const { return nodes_; }
    const std::optional<std::string>& provenance() const { return provenance_; }

    bool contains(const NodeId& id) const;
    const GraphNode& node(const NodeId& id) const;  // throws UnknownNode

    std::vector<NodeId> direct_predecessors(const NodeId& id) const;
    std::set<NodeId> ancestors(const NodeId& id) const;
    std::set<NodeId> descendants(const NodeId& id) const;
    // Deterministic: ties broken by ascending base index, starred after
    // unstarred of the same index.
    std::vector<NodeId> topological_order() const;

    std::vector<NodeId> nodes_with_state(NodeState state) const;

    // Structural equality over (id, content, state, previous) in stored
    // order. Provenance is excluded on purpose: round-tripping through the
    // text form does not carry it.
    friend bool operator==(const CausalGraph& a, const CausalGraph& b) {
        return a.nodes_ == b.nodes_;
    }

private:
    std::vector<GraphNode> nodes_;
    std::unordered_map<std::string, std::size_t> index_;  // rendered id -> position
    std::optional<std::string> provenance_;

    std::size_t position(const NodeId& id) const;

    friend std::vector<Violation> validate(const CausalGraph& graph);
};

/// Returns every broken invariant; empty list iff the graph is valid.
std::vector<Violation> validate(const CausalGraph& graph);

// Cycle check over an adjacency list (edge u -> v means v depends on u).
// Exposed so tests can compare it against an independent oracle on raw
// edge sets that never become CausalGraph values.
bool has_cycle(const std::vector<std::vector<std::size_t>>& adjacency);

}  // namespace dgi
