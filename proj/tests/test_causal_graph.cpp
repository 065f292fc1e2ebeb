#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dgi/graph_json.hpp"
#include "dgi/graph_text.hpp"
#include "support/fixtures.hpp"
#include "support/random_graphs.hpp"

using namespace dgi;
using namespace dgi::testing;

TEST_CASE("node ids render and parse") {
    CHECK(NodeId{3, false}.render() == "V3");
    CHECK(NodeId{12, true}.render() == "V12*");
    CHECK(*try_parse_node_id("V3") == NodeId{3, false});
    CHECK(*try_parse_node_id("V12*") == NodeId{12, true});
    CHECK(!try_parse_node_id("V"));
    CHECK(!try_parse_node_id("V0"));
    CHECK(!try_parse_node_id("V3**"));
    CHECK(!try_parse_node_id("W3"));
    CHECK(!try_parse_node_id("V3x"));
}

TEST_CASE("block-on-board parses with expected node taxonomy") {
    CausalGraph g = block_on_board();
    REQUIRE(g.nodes().size() == 5);
    CHECK(g.nodes_with_state(NodeState::Condition).size() == 2);
    CHECK(g.nodes_with_state(NodeState::Others).size() == 1);  // "Rule" normalizes
    CHECK(g.nodes_with_state(NodeState::ResultMiddle).size() == 1);
    CHECK(g.nodes_with_state(NodeState::ResultFinal).size() == 1);
    CHECK(g.node(NodeId{1, false}).content == "The block has an initial velocity to the right");
    CHECK(g.node(NodeId{2, false}).state == NodeState::Others);
}

TEST_CASE("single condition block has no final result") {
    CHECK_THROWS_WITH_AS(parse_graph("V1:\ncontent: X.\nprevious_condition: None.\nstate: "
                                     "Condition.\n"),
                         doctest::Contains("NoFinalResult"), DgiError);
}

TEST_CASE("self-loop is reported as a cycle") {
    std::string text =
        "V1:\ncontent: A.\nprevious_condition: None.\nstate: Condition.\n"
        "V3:\ncontent: B.\nprevious_condition: V3.\nstate: Result(final).\n";
    try {
        parse_graph(text);
        FAIL("expected CycleDetected");
    } catch (const DgiError& e) {
        CHECK(e.code() == Errc::CycleDetected);
    }
}

TEST_CASE("longer cycles are detected") {
    std::string text =
        "V1:\ncontent: A.\nprevious_condition: V3.\nstate: Result(middle).\n"
        "V2:\ncontent: B.\nprevious_condition: V1.\nstate: Result(middle).\n"
        "V3:\ncontent: C.\nprevious_condition: V2.\nstate: Result(final).\n";
    try {
        parse_graph(text);
        FAIL("expected CycleDetected");
    } catch (const DgiError& e) {
        CHECK(e.code() == Errc::CycleDetected);
    }
}

TEST_CASE("parser rejects malformed blocks") {
    CHECK_THROWS_AS(parse_graph("V1:\ncontent: X.\nstate: Condition.\n"), DgiError);  // missing field
    CHECK_THROWS_AS(parse_graph(""), DgiError);

    try {
        parse_graph("V1:\ncontent: X.\nprevious_condition: None.\nstate: Wat.\n");
        FAIL("expected UnknownState");
    } catch (const DgiError& e) {
        CHECK(e.code() == Errc::UnknownState);
    }

    try {
        parse_graph(
            "V1:\ncontent: X.\nprevious_condition: None.\nstate: Condition.\n"
            "V1:\ncontent: Y.\nprevious_condition: None.\nstate: Result(final).\n");
        FAIL("expected DuplicateId");
    } catch (const DgiError& e) {
        CHECK(e.code() == Errc::DuplicateId);
    }

    try {
        parse_graph("V1:\ncontent: X.\nprevious_condition: V9.\nstate: Result(final).\n");
        FAIL("expected DanglingPredecessor");
    } catch (const DgiError& e) {
        CHECK(e.code() == Errc::DanglingPredecessor);
    }

    // unknown extra fields are rejected, not ignored
    try {
        parse_graph(
            "V1:\ncontent: X.\nprevious_condition: None.\nconfidence: 0.9.\nstate: Condition.\n");
        FAIL("expected MalformedBlock");
    } catch (const DgiError& e) {
        CHECK(e.code() == Errc::MalformedBlock);
        CHECK(std::string(e.what()).find("confidence") != std::string::npos);
    }
}

TEST_CASE("serialize emits the canonical block layout") {
    CausalGraph g = block_on_board();
    std::string text = serialize_graph(g);
    CHECK(text.find("V1:\ncontent: The block has an initial velocity to the right.\n"
                    "previous_condition: None.\nstate: Condition.\n") != std::string::npos);
    CHECK(text.find("previous_condition: V3, V4.\n") != std::string::npos);
    CHECK(text.find("state: Others.\n") != std::string::npos);  // Rule canonicalized
}

TEST_CASE("round trip reproduces the graph field-for-field") {
    CausalGraph g = block_on_board();
    CHECK(parse_graph(serialize_graph(g)) == g);
}

TEST_CASE("starred header renders as V1*:") {
    std::string text = serialize_graph(pushed_block().graph);
    CHECK(text.rfind("V1*:\n", 0) == 0);
    CHECK(parse_graph(text) == pushed_block().graph);
}

TEST_CASE("validate reports per-node rule breaks") {
    // Condition node with a predecessor
    auto bad = CausalGraph::from_nodes_unchecked(
        {GraphNode{{1, false}, "a", NodeState::Condition, {}},
         GraphNode{{2, false}, "b", NodeState::Condition, {{1, false}}},
         GraphNode{{3, false}, "c", NodeState::ResultFinal, {{1, false}}}});
    auto violations = validate(bad);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].node == "V2");
    CHECK(violations[0].code == Errc::InvalidPrevious);
    CHECK(violations[0].rule.find("Condition") != std::string::npos);

    // Result(middle) node with empty previous
    auto bad2 = CausalGraph::from_nodes_unchecked(
        {GraphNode{{1, false}, "a", NodeState::ResultMiddle, {}},
         GraphNode{{2, false}, "b", NodeState::ResultFinal, {{1, false}}}});
    auto violations2 = validate(bad2);
    REQUIRE(violations2.size() == 1);
    CHECK(violations2[0].node == "V1");

    // known-valid fixture
    CHECK(validate(block_on_board()).empty());
}

TEST_CASE("duplicate predecessor entries are rejected") {
    try {
        parse_graph(
            "V1:\ncontent: A.\nprevious_condition: None.\nstate: Condition.\n"
            "V2:\ncontent: B.\nprevious_condition: V1, V1.\nstate: Result(final).\n");
        FAIL("expected InvalidPrevious");
    } catch (const DgiError& e) {
        CHECK(e.code() == Errc::InvalidPrevious);
        CHECK(std::string(e.what()).find("more than once") != std::string::npos);
    }
}

TEST_CASE("dag queries on the block-on-board fixture") {
    CausalGraph g = block_on_board();
    NodeId v1{1, false}, v5{5, false};

    auto direct = g.direct_predecessors(v5);
    REQUIRE(direct.size() == 2);
    CHECK(direct[0] == NodeId{3, false});
    CHECK(direct[1] == NodeId{4, false});

    // expected sets fixed from the reverse/forward BFS oracle
    std::set<NodeId> expected_anc{{1, false}, {2, false}, {3, false}, {4, false}};
    CHECK(g.ancestors(v5) == expected_anc);
    CHECK(g.ancestors(v5) == oracle_ancestors(g, v5));

    std::set<NodeId> expected_desc{{3, false}, {5, false}};
    CHECK(g.descendants(v1) == expected_desc);
    CHECK(g.descendants(v1) == oracle_descendants(g, v1));

    CHECK_THROWS_AS(g.direct_predecessors(NodeId{99, false}), DgiError);
}

TEST_CASE("topological order is deterministic and respects predecessors") {
    CausalGraph g = block_on_board();
    auto order = g.topological_order();
    std::vector<NodeId> expected{{1, false}, {2, false}, {3, false}, {4, false}, {5, false}};
    CHECK(order == expected);
}

TEST_CASE("acyclicity check agrees with a DFS-coloring oracle on random edge sets") {
    std::mt19937 rng(20240811);
    for (int round = 0; round < 1000; ++round) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
        std::vector<std::vector<std::size_t>> adj(n);
        int edges = std::uniform_int_distribution<int>(0, 20)(rng);
        for (int e = 0; e < edges; ++e) {
            std::size_t u = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
            std::size_t v = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
            adj[u].push_back(v);
        }
        CHECK(has_cycle(adj) == oracle_has_cycle_dfs(adj));
    }
}

TEST_CASE("random valid graphs: reachability symmetry, topo order, round trip") {
    std::mt19937 rng(7);
    for (int round = 0; round < 200; ++round) {
        CausalGraph g = random_valid_graph(rng);

        CHECK(parse_graph(serialize_graph(g)) == g);

        auto order = g.topological_order();
        REQUIRE(order.size() == g.nodes().size());
        std::map<NodeId, std::size_t> rank;
        for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
        for (const auto& n : g.nodes()) {
            for (const auto& p : n.previous) {
                CHECK(rank.at(p) < rank.at(n.id));
            }
        }

        for (const auto& a : g.nodes()) {
            for (const auto& b : g.nodes()) {
                bool a_anc_of_b = g.ancestors(b.id).count(a.id) > 0;
                bool b_desc_of_a = g.descendants(a.id).count(b.id) > 0;
                CHECK(a_anc_of_b == b_desc_of_a);
            }
        }
    }
}

TEST_CASE("json graph form round-trips") {
    CausalGraph g = block_on_board();
    CHECK(graph_from_json(graph_to_json(g)) == g);

    CausalGraph ig = pushed_block().graph;
    CHECK(graph_from_json(graph_to_json(ig)) == ig);
}
