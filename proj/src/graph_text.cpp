#include "dgi/graph_text.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dgi {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Field values carry a terminating period in the surface form; strip exactly
// one so serialization can put it back.
std::string strip_terminator(std::string value) {
    if (!value.empty() && value.back() == '.') value.pop_back();
    return value;
}

// "V3:" header, possibly with trailing whitespace already trimmed away.
std::optional<NodeId> header_id(const std::string& line) {
    if (line.empty() || line.back() != ':') return std::nullopt;
    return try_parse_node_id(trim(line.substr(0, line.size() - 1)));
}

struct RawBlock {
    NodeId id;
    std::optional<std::string> content;
    std::optional<std::string> previous;
    std::optional<std::string> state;
};

GraphNode finish_block(const RawBlock& block) {
    const std::string where = "node " + block.id.render();
    if (!block.content) throw DgiError(Errc::MalformedBlock, where + " is missing content");
    if (!block.previous) {
        throw DgiError(Errc::MalformedBlock, where + " is missing previous_condition");
    }
    if (!block.state) throw DgiError(Errc::MalformedBlock, where + " is missing state");

    GraphNode node;
    node.id = block.id;
    node.content = strip_terminator(*block.content);
    if (node.content.empty()) {
        throw DgiError(Errc::MalformedBlock, where + " has empty content");
    }

    std::string prev = strip_terminator(*block.previous);
    if (lower(trim(prev)) != "none") {
        std::stringstream ss(prev);
        std::string part;
        while (std::getline(ss, part, ',')) {
            part = trim(part);
            auto pid = try_parse_node_id(part);
            if (!pid) {
                throw DgiError(Errc::MalformedBlock,
                               where + " has malformed previous_condition entry '" + part + "'");
            }
            node.previous.push_back(*pid);
        }
        if (node.previous.empty()) {
            throw DgiError(Errc::MalformedBlock, where + " has empty previous_condition");
        }
    }

    std::string state_token = strip_terminator(*block.state);
    auto state = try_parse_node_state(trim(state_token));
    if (!state) {
        throw DgiError(Errc::UnknownState,
                       where + " has unknown state token '" + trim(state_token) + "'");
    }
    node.state = *state;
    return node;
}

}  // namespace

CausalGraph parse_graph(const std::string& text) {
    std::vector<GraphNode> nodes;
    std::optional<RawBlock> current;

    auto flush = [&]() {
        if (current) {
            nodes.push_back(finish_block(*current));
            current.reset();
        }
    };

    std::stringstream ss(text);
    std::string raw_line;
    while (std::getline(ss, raw_line)) {
        std::string line = trim(raw_line);
        if (line.empty()) continue;

        if (auto id = header_id(line)) {
            flush();
            current = RawBlock{*id, {}, {}, {}};
            continue;
        }

        auto colon = line.find(':');
        if (colon == std::string::npos) {
            throw DgiError(Errc::MalformedBlock, "unparseable line '" + line + "'");
        }
        std::string field = lower(trim(line.substr(0, colon)));
        std::string value = trim(line.substr(colon + 1));
        if (!current) {
            throw DgiError(Errc::MalformedBlock,
                           "field '" + field + "' appears before any node header");
        }
        if (field == "content") {
            current->content = value;
        } else if (field == "previous_condition") {
            current->previous = value;
        } else if (field == "state") {
            current->state = value;
        } else {
            // Unknown fields are rejected so generator drift surfaces loudly.
            throw DgiError(Errc::MalformedBlock, "node " + current->id.render() +
                                                     " has unknown field '" + field + "'");
        }
    }
    flush();

    if (nodes.empty()) {
        throw DgiError(Errc::MalformedBlock, "text contains no node blocks");
    }
    return CausalGraph::from_nodes(std::move(nodes));
}

std::string serialize_graph(const CausalGraph& graph) {
    std::string out;
    for (const auto& node : graph.nodes()) {
        out += node.id.render() + ":\n";
        out += "content: " + node.content + ".\n";
        out += "previous_condition: ";
        if (node.previous.empty()) {
            out += "None";
        } else {
            for (std::size_t i = 0; i < node.previous.size(); ++i) {
                if (i) out += ", ";
                out += node.previous[i].render();
            }
        }
        out += ".\n";
        out += "state: " + std::string(node_state_token(node.state)) + ".\n";
    }
    return out;
}

}  // namespace dgi
