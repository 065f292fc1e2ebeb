#include "dgi/causal_graph.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <queue>

namespace dgi {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::MalformedBlock: return "MalformedBlock";
        case Errc::UnknownState: return "UnknownState";
        case Errc::DuplicateId: return "DuplicateId";
        case Errc::DanglingPredecessor: return "DanglingPredecessor";
        case Errc::CycleDetected: return "CycleDetected";
        case Errc::NoFinalResult: return "NoFinalResult";
        case Errc::UnknownNode: return "UnknownNode";
        case Errc::InvalidPrevious: return "InvalidPrevious";
        case Errc::NotACondition: return "NotACondition";
        case Errc::IdCollision: return "IdCollision";
        case Errc::NoStarredNode: return "NoStarredNode";
        case Errc::AmbiguousFirstIntervention: return "AmbiguousFirstIntervention";
        case Errc::AmbiguousTargetFinal: return "AmbiguousTargetFinal";
        case Errc::NotAFinalResult: return "NotAFinalResult";
        case Errc::NonConditionAssumption: return "NonConditionAssumption";
        case Errc::IllegalEntryPoint: return "IllegalEntryPoint";
        case Errc::IllegalRedundantNode: return "IllegalRedundantNode";
        case Errc::UnsoundGraph: return "UnsoundGraph";
        case Errc::NoEntryPoint: return "NoEntryPoint";
        case Errc::DgmFailure: return "DgmFailure";
        case Errc::EmptyQuestion: return "EmptyQuestion";
        case Errc::NoEligibleCondition: return "NoEligibleCondition";
        case Errc::NoCondition: return "NoCondition";
        case Errc::MissingPlaceholder: return "MissingPlaceholder";
        case Errc::UnknownPlaceholder: return "UnknownPlaceholder";
        case Errc::UnknownTemplate: return "UnknownTemplate";
        case Errc::Timeout: return "Timeout";
        case Errc::AuthFailure: return "AuthFailure";
        case Errc::RateLimited: return "RateLimited";
        case Errc::MalformedResponse: return "MalformedResponse";
        case Errc::NonPositiveDuration: return "NonPositiveDuration";
        case Errc::CoverageMismatch: return "CoverageMismatch";
        case Errc::SchemaMismatch: return "SchemaMismatch";
        case Errc::MalformedLine: return "MalformedLine";
        case Errc::EmptyDataset: return "EmptyDataset";
        case Errc::ConfigError: return "ConfigError";
        case Errc::Io: return "Io";
    }
    return "UnknownError";
}

std::string NodeId::render() const {
    std::string out = "V" + std::to_string(base);
    if (starred) out += "*";
    return out;
}

std::optional<NodeId> try_parse_node_id(const std::string& text) {
    if (text.size() < 2 || text[0] != 'V') return std::nullopt;
    std::size_t i = 1;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == 1) return std::nullopt;
    bool starred = false;
    if (i < text.size() && text[i] == '*') {
        starred = true;
        ++i;
    }
    if (i != text.size()) return std::nullopt;
    std::size_t digits_end = starred ? i - 1 : i;
    int base = 0;
    try {
        base = std::stoi(text.substr(1, digits_end - 1));
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (base <= 0) return std::nullopt;
    return NodeId{base, starred};
}

NodeId parse_node_id(const std::string& text) {
    auto id = try_parse_node_id(text);
    if (!id) throw DgiError(Errc::MalformedBlock, "not a node id: '" + text + "'");
    return *id;
}

const char* node_state_token(NodeState state) {
    switch (state) {
        case NodeState::Condition: return "Condition";
        case NodeState::Others: return "Others";
        case NodeState::ResultMiddle: return "Result(middle)";
        case NodeState::ResultFinal: return "Result(final)";
    }
    return "?";
}

static std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::optional<NodeState> try_parse_node_state(const std::string& token) {
    std::string t = lower(token);
    if (t == "condition") return NodeState::Condition;
    // The surface format labels rule/background-knowledge nodes either
    // "Rule" or "Others"; both normalize to one internal state.
    if (t == "rule" || t == "others") return NodeState::Others;
    if (t == "result(middle)") return NodeState::ResultMiddle;
    if (t == "result(final)") return NodeState::ResultFinal;
    return std::nullopt;
}

std::string Violation::describe() const {
    std::string out;
    if (!node.empty()) out += node + ": ";
    out += rule;
    return out;
}

CausalGraph CausalGraph::from_nodes_unchecked(std::vector<GraphNode> nodes,
                                              std::optional<std::string> provenance) {
    CausalGraph g;
    g.provenance_ = std::move(provenance);
    for (auto& n : nodes) {
        std::string key = n.id.render();
        if (g.index_.count(key)) {
            throw DgiError(Errc::DuplicateId, "duplicate node id " + key);
        }
        g.index_.emplace(std::move(key), g.nodes_.size());
        g.nodes_.push_back(std::move(n));
    }
    return g;
}

CausalGraph CausalGraph::from_nodes(std::vector<GraphNode> nodes,
                                    std::optional<std::string> provenance) {
    CausalGraph g = from_nodes_unchecked(std::move(nodes), std::move(provenance));
    auto violations = validate(g);
    if (!violations.empty()) {
        throw DgiError(violations.front().code, violations.front().describe());
    }
    return g;
}

bool CausalGraph::contains(const NodeId& id) const {
    return index_.count(id.render()) > 0;
}

std::size_t CausalGraph::position(const NodeId& id) const {
    auto it = index_.find(id.render());
    if (it == index_.end()) {
        throw DgiError(Errc::UnknownNode, "no node " + id.render());
    }
    return it->second;
}

const GraphNode& CausalGraph::node(const NodeId& id) const { return nodes_[position(id)]; }

std::vector<NodeId> CausalGraph::direct_predecessors(const NodeId& id) const {
    return node(id).previous;
}

std::set<NodeId> CausalGraph::ancestors(const NodeId& id) const {
    std::set<NodeId> seen;
    std::deque<NodeId> frontier(node(id).previous.begin(), node(id).previous.end());
    while (!frontier.empty()) {
        NodeId cur = frontier.front();
        frontier.pop_front();
        if (!seen.insert(cur).second) continue;
        for (const NodeId& p : node(cur).previous) frontier.push_back(p);
    }
    return seen;
}

std::set<NodeId> CausalGraph::descendants(const NodeId& id) const {
    position(id);  // existence check
    std::set<NodeId> out;
    bool grew = true;
    std::set<NodeId> reach{id};
    while (grew) {
        grew = false;
        for (const auto& n : nodes_) {
            if (reach.count(n.id)) continue;
            for (const NodeId& p : n.previous) {
                if (reach.count(p)) {
                    reach.insert(n.id);
                    out.insert(n.id);
                    grew = true;
                    break;
                }
            }
        }
    }
    return out;
}

std::vector<NodeId> CausalGraph::topological_order() const {
    std::unordered_map<std::string, std::size_t> indegree;
    for (const auto& n : nodes_) indegree[n.id.render()] = n.previous.size();

    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<NodeId>> ready;
    for (const auto& n : nodes_) {
        if (n.previous.empty()) ready.push(n.id);
    }

    std::vector<NodeId> order;
    order.reserve(nodes_.size());
    while (!ready.empty()) {
        NodeId cur = ready.top();
        ready.pop();
        order.push_back(cur);
        for (const auto& n : nodes_) {
            if (std::find(n.previous.begin(), n.previous.end(), cur) == n.previous.end()) continue;
            if (--indegree[n.id.render()] == 0) ready.push(n.id);
        }
    }
    if (order.size() != nodes_.size()) {
        throw DgiError(Errc::CycleDetected, "graph contains a cycle");
    }
    return order;
}

std::vector<NodeId> CausalGraph::nodes_with_state(NodeState state) const {
    std::vector<NodeId> out;
    for (const auto& n : nodes_) {
        if (n.state == state) out.push_back(n.id);
    }
    return out;
}

bool has_cycle(const std::vector<std::vector<std::size_t>>& adjacency) {
    std::size_t n = adjacency.size();
    std::vector<std::size_t> indegree(n, 0);
    for (const auto& outs : adjacency) {
        for (std::size_t v : outs) ++indegree[v];
    }
    std::deque<std::size_t> ready;
    for (std::size_t v = 0; v < n; ++v) {
        if (indegree[v] == 0) ready.push_back(v);
    }
    std::size_t emitted = 0;
    while (!ready.empty()) {
        std::size_t u = ready.front();
        ready.pop_front();
        ++emitted;
        for (std::size_t v : adjacency[u]) {
            if (--indegree[v] == 0) ready.push_back(v);
        }
    }
    return emitted != n;
}

std::vector<Violation> validate(const CausalGraph& graph) {
    std::vector<Violation> out;
    const auto& nodes = graph.nodes();

    // dangling / self / duplicate references first: the cycle check assumes
    // edges resolve cleanly
    bool dangling = false;
    for (const auto& n : nodes) {
        std::set<NodeId> seen;
        for (const NodeId& p : n.previous) {
            if (!graph.contains(p)) {
                out.push_back({n.id.render(), Errc::DanglingPredecessor,
                               "previous node " + p.render() + " does not exist"});
                dangling = true;
            } else if (p == n.id) {
                out.push_back({n.id.render(), Errc::CycleDetected,
                               "node lists itself as predecessor"});
                dangling = true;
            }
            if (!seen.insert(p).second) {
                out.push_back({n.id.render(), Errc::InvalidPrevious,
                               "previous node " + p.render() + " listed more than once"});
                dangling = true;
            }
        }
    }

    if (!dangling) {
        std::vector<std::vector<std::size_t>> adjacency(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (const NodeId& p : nodes[i].previous) {
                adjacency[graph.position(p)].push_back(i);
            }
        }
        if (has_cycle(adjacency)) {
            out.push_back({"", Errc::CycleDetected, "predecessor relation contains a cycle"});
        }
    }

    bool has_final = false;
    for (const auto& n : nodes) {
        if (n.state == NodeState::ResultFinal) has_final = true;
        if (n.content.empty()) {
            out.push_back({n.id.render(), Errc::MalformedBlock, "content is empty"});
        } else if (n.content.find('\n') != std::string::npos) {
            out.push_back({n.id.render(), Errc::MalformedBlock, "content spans multiple lines"});
        }
        if (!is_result(n.state) && !n.previous.empty()) {
            out.push_back({n.id.render(), Errc::InvalidPrevious,
                           std::string(node_state_token(n.state)) +
                               " node must have empty previous"});
        }
        if (is_result(n.state) && n.previous.empty()) {
            out.push_back({n.id.render(), Errc::InvalidPrevious,
                           std::string(node_state_token(n.state)) +
                               " node must have at least one predecessor"});
        }
    }
    if (!has_final) {
        out.push_back({"", Errc::NoFinalResult, "graph has no Result(final) node"});
    }
    return out;
}

}  // namespace dgi
