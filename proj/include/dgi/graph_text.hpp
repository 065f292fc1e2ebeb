#pragma once

#include <string>

#include "dgi/causal_graph.hpp"

namespace dgi {

/// Parses the node-block text form:
///
///   V1:
///   content: The block has an initial velocity to the right.
///   previous_condition: None.
///   state: Condition.
///
/// Field names are case-insensitive; trailing periods after field values are
/// stripped; "Rule" normalizes to Others. Blocks are separated by blank lines
/// or the next V header. All graph invariants are checked before returning.
CausalGraph parse_graph(const std::string& text);

/// Emits node blocks in stored order. parse_graph(serialize_graph(g))
/// reproduces g field-for-field.
std::string serialize_graph(const CausalGraph& graph);

}  // namespace dgi
