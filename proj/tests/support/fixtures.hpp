#pragma once

#include <string>
#include <vector>

#include "dgi/graph_text.hpp"
#include "dgi/intervention.hpp"
#include "dgi/qa_items.hpp"

namespace dgi::testing {

// Five-node block-on-board graph: two Conditions, one rule, one intermediate
// and one final result.
inline const char* kBlockOnBoardText =
    R"(V1:
content: The block has an initial velocity to the right.
previous_condition: None.
state: Condition.
V2:
content: The rough wooden board exerts a frictional force on the block opposite to its direction of motion.
previous_condition: None.
state: Rule.
V3:
content: Under the action of friction, the block slows down and slides to the right on the wooden board.
previous_condition: V1, V2.
state: Result(middle).
V4:
content: The wooden board is long enough.
previous_condition: None.
state: Condition.
V5:
content: The block slows down, slides to the right on the wooden board, and eventually stops on the board.
previous_condition: V3, V4.
state: Result(final).
)";

// Intervention graph after replacing V1 with "at rest" and pushing the block:
// V1* is the first intervention, V11 the target final, and (V4, V10, V11)
// the only legal entry point.
inline const char* kPushedBlockText =
    R"(V1*:
content: The block is initially at rest on the wooden board.
previous_condition: None.
state: Condition.
V2:
content: The rough wooden board exerts a frictional force on the block opposite to its direction of motion.
previous_condition: None.
state: Others.
V4:
content: The wooden board is long enough.
previous_condition: None.
state: Condition.
V6:
content: The man gives the block a push to the right.
previous_condition: None.
state: Condition.
V7:
content: A pushed object at rest gains velocity in the direction of the push.
previous_condition: None.
state: Others.
V8:
content: The block starts moving to the right on the wooden board.
previous_condition: V1*, V6, V7.
state: Result(middle).
V9:
content: Under the action of friction, the block slows down while sliding to the right.
previous_condition: V8, V2.
state: Result(middle).
V10:
content: The block remains on the wooden board while it decelerates.
previous_condition: V9, V4.
state: Result(middle).
V11:
content: The block eventually stops on the wooden board.
previous_condition: V10.
state: Result(final).
)";

inline CausalGraph block_on_board() { return parse_graph(kBlockOnBoardText); }

inline InterventionGraph pushed_block() {
    return parse_intervention_graph(kPushedBlockText, std::nullopt, NodeId{11, false});
}

inline StaticQAItem fixture_item(const std::string& id) {
    StaticQAItem item;
    item.item_id = id;
    item.video = VideoRef{"clip-" + id, 3.0, 11.87};
    item.static_graph = block_on_board();
    item.intervention_graph = pushed_block();
    item.question =
        "If the block were initially at rest and the man pushed it to the right, would it still "
        "eventually stop on the wooden board?";
    item.metadata.counterfactual_assumption = "The block is initially at rest on the wooden board.";
    item.metadata.reasoning_process =
        "With the block at rest, a push sets it moving; friction then decelerates it until it "
        "stops on the board.";
    item.metadata.related_causal_events = "Causal Event 1";
    item.metadata.manifestation = "In the video the block already moves to the right.";
    item.category = Category::Physical;
    item.difficulty = DifficultyClass::Standard;
    return item;
}

inline std::vector<StaticQAItem> fixture_items(int count) {
    std::vector<StaticQAItem> out;
    for (int i = 1; i <= count; ++i) out.push_back(fixture_item("fix-" + std::to_string(i)));
    return out;
}

}  // namespace dgi::testing
