#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dgi/intervention.hpp"
#include "dgi/taxonomy.hpp"

namespace dgi {

struct VideoRef {
    std::string clip_id;
    double start_s = 0.0;
    double end_s = 0.0;

    double duration_s() const { return end_s - start_s; }
};

/// A human-annotated static counterfactual question (subset L1_Y, answer
/// always Y), together with the graphs the dynamic subsets are derived from.
/// Graphs may be absent on freshly ingested items; generation materializes
/// them through the DGM extraction prompts.
struct StaticQAItem {
    std::string item_id;
    VideoRef video;
    std::optional<CausalGraph> static_graph;
    std::optional<InterventionGraph> intervention_graph;
    std::string question;
    // answer is Y by definition of the subset
    struct Metadata {
        std::string counterfactual_assumption;
        std::string reasoning_process;
        std::string related_causal_events;
        std::string manifestation;
        // causal-event annotation text, kept so graphs can be extracted
        // through the DGM prompts without going back to the source record
        std::string causal_event_description;
        std::string causal_event_action;
        std::string causal_event_result;
        std::string causal_event_reason;
    } metadata;
    Category category = Category::Unknown;
    DifficultyClass difficulty = DifficultyClass::Standard;

    bool has_graphs() const { return static_graph && intervention_graph; }
};

/// Everything needed to re-derive the gold label without re-calling any
/// model.
struct GenerationProvenance {
    std::string dgm_backend;
    std::string template_id;   // empty for the deterministic L1_N template
    std::string prompt_hash;   // fnv1a64 hex of the rendered prompt
    std::uint64_t seed = 0;
    std::optional<EntryPoint> entry_point;   // L2_N
    std::optional<NodeId> condition_node;    // L2_Y / L1_N chosen condition
    std::string timestamp;                   // config-provided, never wall clock
};

struct GeneratedQAItem {
    std::string item_id;
    std::string parent_id;
    Subset subset = Subset::L2_N;  // one of L1_N, L2_N, L2_Y
    std::string question;
    GoldLabel gold = GoldLabel::N;
    GenerationProvenance provenance;
    // carried over from the parent so a generated-only file is self-contained
    VideoRef video;
    Category category = Category::Unknown;
    DifficultyClass difficulty = DifficultyClass::Standard;
};

using BenchmarkItem = std::variant<StaticQAItem, GeneratedQAItem>;

const std::string& item_id(const BenchmarkItem& item);
Subset item_subset(const BenchmarkItem& item);
GoldLabel item_gold(const BenchmarkItem& item);
const std::string& item_question(const BenchmarkItem& item);
const VideoRef& item_video(const BenchmarkItem& item);
Category item_category(const BenchmarkItem& item);
DifficultyClass item_difficulty(const BenchmarkItem& item);

inline constexpr const char* kBenchmarkSchema = "dmc-cf/1";

// Line shapes for the JSON-lines benchmark format. Unknown top-level fields
// are rejected so drift surfaces as an error instead of silent loss.
nlohmann::json item_to_json(const BenchmarkItem& item);
BenchmarkItem item_from_json(const nlohmann::json& j);

}  // namespace dgi
