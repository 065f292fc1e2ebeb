#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dgi/annotations.hpp"
#include "dgi/benchmark_io.hpp"
#include "dgi/dgm.hpp"
#include "dgi/qa_items.hpp"

namespace dgi {

struct GenerationConfig {
    std::vector<Subset> subsets = {Subset::L1_N, Subset::L2_N, Subset::L2_Y};
    std::uint64_t seed = 0;
    bool l2n_per_entry_point = false;  // default: one seeded uniform pick
    bool l1n_use_dgm = false;          // default: deterministic template
    bool use_shortcut_filter = false;  // optional judge stage
    std::size_t max_question_chars = 2000;
    std::string timestamp;  // stamped into provenance; config-provided so
                            // identical runs emit identical bytes
    int parallelism = 1;
};

/// Original counterfactual question info rendered for the L2 prompts
/// ({previous_CF_inf_str} binding).
std::string compose_previous_cf_info(const StaticQAItem& item);

/// L2_N: a second intervention on entry.i2 invalidates entry.rm and hence
/// entry.rf; the DGM composes the question; gold is N.
GeneratedQAItem generate_l2n(const StaticQAItem& item, const EntryPoint& entry, DgmBackend& dgm,
                             std::uint64_t seed, const GenerationConfig& config = {});

/// L2_Y: a redundant assumption drawn from a seeded uniform pick among
/// Condition nodes of the intervention graph (first intervention excluded);
/// gold is Y.
GeneratedQAItem generate_l2y(const StaticQAItem& item, DgmBackend& dgm, std::uint64_t seed,
                             const GenerationConfig& config = {});

/// L1_N: the original counterfactual assumption is swapped for a seeded
/// uniform pick among the static graph's Condition nodes; the question asks
/// whether the original counterfactual outcome still holds; gold is N.
/// Without a DGM a fixed template composes the question.
GeneratedQAItem generate_l1n(const StaticQAItem& item, std::uint64_t seed,
                             DgmBackend* dgm = nullptr, const GenerationConfig& config = {});

struct FilterResult {
    bool pass = true;
    std::string reason;
};

/// Asks a judge backend whether the question is answerable without the
/// video; rejects when it says yes. Optional stage, off by default.
FilterResult shortcut_filter(const std::string& question, DgmBackend& judge);

struct BatchResult {
    BenchmarkFile benchmark;
    std::vector<GenerationFailure> failures;
};

/// Generates every requested subset for every item, re-derives each gold
/// label through the graph oracle, and drops (never emits) items whose
/// claimed label cannot be reproduced. Per-item failures land in the report;
/// the batch itself never aborts on one item.
BatchResult run_generation_batch(const std::vector<StaticQAItem>& items,
                                 const GenerationConfig& config, DgmBackend& dgm);

// --- DGM graph-extraction orchestration -----------------------------------

struct ExtractionInputs {
    std::string description;  // causal-event description text
    std::string action;
    std::string result;
    std::string reason;
};

/// Runs the static-extraction prompt and parses the reply. A parse failure
/// is retried once with an appended "output only node blocks" reminder.
CausalGraph extract_static_graph(const ExtractionInputs& inputs,
                                 const std::vector<MediaRef>& media, DgmBackend& dgm);

/// Runs the intervention-extraction prompt; the first intervention is the
/// unique starred node of the reply and the target the unique final result.
InterventionGraph extract_intervention_graph(const ExtractionInputs& inputs,
                                             const StaticQAItem& item,
                                             const std::vector<MediaRef>& media,
                                             DgmBackend& dgm);

/// The causal-event text an item carries for graph extraction.
ExtractionInputs extraction_inputs(const StaticQAItem& item);

/// Expands an annotation record into one StaticQAItem per counterfactual
/// question. Graphs are left empty; extract_* fills them when a DGM is
/// available.
std::vector<StaticQAItem> make_static_items(const VideoRecord& record,
                                            const std::string& record_id);

}  // namespace dgi
