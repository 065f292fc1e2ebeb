#include "dgi/qa_generate.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <thread>

#include "dgi/eval.hpp"
#include "dgi/graph_text.hpp"
#include "dgi/hashing.hpp"
#include "dgi/prompt_templates.hpp"

namespace dgi {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

const InterventionGraph& require_intervention_graph(const StaticQAItem& item) {
    if (!item.intervention_graph) {
        throw DgiError(Errc::ConfigError,
                       "item " + item.item_id + " has no intervention graph");
    }
    for (const auto& n : item.intervention_graph->graph.nodes()) {
        if (n.any_of) {
            throw DgiError(Errc::UnsoundGraph, "item " + item.item_id + " node " +
                                                   n.id.render() + " is flagged any_of");
        }
    }
    return *item.intervention_graph;
}

const CausalGraph& require_static_graph(const StaticQAItem& item) {
    if (!item.static_graph) {
        throw DgiError(Errc::ConfigError, "item " + item.item_id + " has no static graph");
    }
    return *item.static_graph;
}

std::string checked_question(const std::string& raw, const GenerationConfig& config) {
    std::string q = trim(raw);
    if (q.empty()) throw DgiError(Errc::EmptyQuestion, "generator returned empty text");
    if (q.size() > config.max_question_chars) {
        throw DgiError(Errc::DgmFailure, "generated question exceeds " +
                                             std::to_string(config.max_question_chars) +
                                             " characters");
    }
    return q;
}

GeneratedQAItem stamp(const StaticQAItem& parent, Subset subset, std::string question,
                      GoldLabel gold, GenerationProvenance provenance, int index) {
    std::string token = subset == Subset::L1_N ? "l1n" : subset == Subset::L2_N ? "l2n" : "l2y";
    GeneratedQAItem out;
    out.item_id = parent.item_id + "-" + token + "-" + std::to_string(index);
    out.parent_id = parent.item_id;
    out.subset = subset;
    out.question = std::move(question);
    out.gold = gold;
    out.provenance = std::move(provenance);
    out.video = parent.video;
    out.category = parent.category;
    out.difficulty = parent.difficulty;
    return out;
}

std::vector<MediaRef> clip_media(const StaticQAItem& item, const DgmBackend& dgm) {
    return plan_media(item.video, dgm);
}

}  // namespace

std::string compose_previous_cf_info(const StaticQAItem& item) {
    std::string out;
    out += "Q: " + item.question + "\n";
    out += "A: Y\n";
    out += "Reasoning_process: " + item.metadata.reasoning_process + "\n";
    out += "Related_causal_events: " + item.metadata.related_causal_events + "\n";
    out += "Counterfactual_assumption: " + item.metadata.counterfactual_assumption;
    return out;
}

GeneratedQAItem generate_l2n(const StaticQAItem& item, const EntryPoint& entry, DgmBackend& dgm,
                             std::uint64_t seed, const GenerationConfig& config) {
    const InterventionGraph& ig = require_intervention_graph(item);
    auto legal = enumerate_entry_points(ig);
    if (legal.empty()) {
        throw DgiError(Errc::NoEntryPoint, "item " + item.item_id + " has no entry points");
    }
    if (std::find(legal.begin(), legal.end(), entry) == legal.end()) {
        throw DgiError(Errc::IllegalEntryPoint,
                       "entry point is not legal for item " + item.item_id);
    }

    std::string prompt = render_prompt(
        TemplateId::L2N, {{"node_str", serialize_graph(ig.graph)},
                          {"previous_CF_inf_str", compose_previous_cf_info(item)},
                          {"condition_node", ig.graph.node(entry.i2).content},
                          {"middle_node", ig.graph.node(entry.rm).content},
                          {"res_node", ig.graph.node(entry.rf).content}});
    Completion reply = dgm.complete(GenerationRequest{prompt, clip_media(item, dgm), {}, dgm.id()});
    std::string question = checked_question(reply.text, config);

    GenerationProvenance prov;
    prov.dgm_backend = dgm.id();
    prov.template_id = template_name(TemplateId::L2N);
    prov.prompt_hash = hex64(fnv1a64(prompt));
    prov.seed = seed;
    prov.entry_point = entry;
    prov.timestamp = config.timestamp;
    return stamp(item, Subset::L2_N, std::move(question), GoldLabel::N, std::move(prov), 0);
}

GeneratedQAItem generate_l2y(const StaticQAItem& item, DgmBackend& dgm, std::uint64_t seed,
                             const GenerationConfig& config) {
    const InterventionGraph& ig = require_intervention_graph(item);

    std::vector<NodeId> eligible;
    for (const NodeId& c : ig.graph.nodes_with_state(NodeState::Condition)) {
        if (c != ig.first_intervention) eligible.push_back(c);
    }
    if (eligible.empty()) {
        throw DgiError(Errc::NoEligibleCondition,
                       "item " + item.item_id + " has no Condition besides the intervention");
    }
    SplitMix64 rng = item_rng(seed, item.item_id + "/L2_Y");
    NodeId chosen = eligible[rng.pick(eligible.size())];

    std::string prompt = render_prompt(
        TemplateId::L2Y, {{"node_str", serialize_graph(ig.graph)},
                          {"previous_CF_inf_str", compose_previous_cf_info(item)},
                          {"L1_ori_condition", ig.graph.node(chosen).content},
                          {"res_node", ig.graph.node(ig.target_final).content}});
    Completion reply = dgm.complete(GenerationRequest{prompt, clip_media(item, dgm), {}, dgm.id()});
    std::string question = checked_question(reply.text, config);

    GenerationProvenance prov;
    prov.dgm_backend = dgm.id();
    prov.template_id = template_name(TemplateId::L2Y);
    prov.prompt_hash = hex64(fnv1a64(prompt));
    prov.seed = seed;
    prov.condition_node = chosen;
    prov.timestamp = config.timestamp;
    return stamp(item, Subset::L2_Y, std::move(question), GoldLabel::Y, std::move(prov), 0);
}

GeneratedQAItem generate_l1n(const StaticQAItem& item, std::uint64_t seed, DgmBackend* dgm,
                             const GenerationConfig& config) {
    const CausalGraph& sg = require_static_graph(item);
    const InterventionGraph& ig = require_intervention_graph(item);

    auto conditions = sg.nodes_with_state(NodeState::Condition);
    if (conditions.empty()) {
        throw DgiError(Errc::NoCondition,
                       "static graph of " + item.item_id + " has no Condition node");
    }
    SplitMix64 rng = item_rng(seed, item.item_id + "/L1_N");
    NodeId chosen = conditions[rng.pick(conditions.size())];

    const std::string& condition = sg.node(chosen).content;
    const std::string& outcome = ig.graph.node(ig.target_final).content;
    std::string question =
        "If " + condition + ", would it be true that " + outcome + "? Answer Y or N.";

    GenerationProvenance prov;
    prov.seed = seed;
    prov.condition_node = chosen;
    prov.timestamp = config.timestamp;

    if (dgm) {
        std::string prompt =
            "Rephrase the following Yes/No question so it reads naturally, without changing "
            "its meaning or its answer. Output only the question.\n" +
            question;
        Completion reply =
            dgm->complete(GenerationRequest{prompt, clip_media(item, *dgm), {}, dgm->id()});
        question = checked_question(reply.text, config);
        prov.dgm_backend = dgm->id();
        prov.prompt_hash = hex64(fnv1a64(prompt));
    } else {
        prov.dgm_backend = "template";
        prov.prompt_hash = hex64(fnv1a64(question));
        question = checked_question(question, config);
    }
    return stamp(item, Subset::L1_N, std::move(question), GoldLabel::N, std::move(prov), 0);
}

FilterResult shortcut_filter(const std::string& question, DgmBackend& judge) {
    std::string prompt =
        "Can the following Yes/No question be answered correctly without watching the video it "
        "refers to, using only the text of the question itself? Reply with exactly YES or NO.\n"
        "Question: " +
        question;
    Completion reply = judge.complete(GenerationRequest{prompt, {}, {}, judge.id()});
    std::string verdict = trim(reply.text);
    std::transform(verdict.begin(), verdict.end(), verdict.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (verdict.rfind("YES", 0) == 0) {
        return FilterResult{false, "judge found the question answerable without the video"};
    }
    if (verdict.rfind("NO", 0) == 0) {
        return FilterResult{true, {}};
    }
    throw DgiError(Errc::DgmFailure, "judge returned neither YES nor NO: '" + reply.text + "'");
}

namespace {

// Work for one (item, subset) slot; results keep batch output deterministic
// regardless of worker scheduling.
struct Slot {
    std::size_t item_index;
    Subset subset;
    std::vector<GeneratedQAItem> produced;
    std::vector<GenerationFailure> failures;
};

SecondaryChoice secondary_for(const GeneratedQAItem& g) {
    switch (g.subset) {
        case Subset::L2_N: return Invalidate{*g.provenance.entry_point};
        case Subset::L2_Y: return Redundant{*g.provenance.condition_node};
        case Subset::L1_N: return SwapFirstAssumption{};
        default: return NoSecondary{};
    }
}

void run_slot(Slot& slot, const std::vector<StaticQAItem>& items,
              const GenerationConfig& config, DgmBackend& dgm) {
    const StaticQAItem& item = items[slot.item_index];
    auto record_failure = [&](const std::string& error) {
        slot.failures.push_back({item.item_id, subset_token(slot.subset), error});
    };

    std::vector<GeneratedQAItem> candidates;
    try {
        switch (slot.subset) {
            case Subset::L2_N: {
                const InterventionGraph& ig = require_intervention_graph(item);
                auto entry_points = enumerate_entry_points(ig);
                if (entry_points.empty()) {
                    throw DgiError(Errc::NoEntryPoint,
                                   "item " + item.item_id + " has no entry points");
                }
                if (config.l2n_per_entry_point) {
                    for (std::size_t k = 0; k < entry_points.size(); ++k) {
                        auto g = generate_l2n(item, entry_points[k], dgm, config.seed, config);
                        g.item_id = item.item_id + "-l2n-" + std::to_string(k);
                        candidates.push_back(std::move(g));
                    }
                } else {
                    SplitMix64 rng = item_rng(config.seed, item.item_id + "/L2_N");
                    const EntryPoint& pick = entry_points[rng.pick(entry_points.size())];
                    candidates.push_back(generate_l2n(item, pick, dgm, config.seed, config));
                }
                break;
            }
            case Subset::L2_Y:
                candidates.push_back(generate_l2y(item, dgm, config.seed, config));
                break;
            case Subset::L1_N:
                candidates.push_back(generate_l1n(item, config.seed,
                                                  config.l1n_use_dgm ? &dgm : nullptr, config));
                break;
            case Subset::L1_Y:
                break;  // human-annotated input, never generated
        }
    } catch (const DgiError& e) {
        record_failure(e.what());
        return;
    }

    for (auto& g : candidates) {
        try {
            if (!verify_item_label(require_intervention_graph(item), secondary_for(g), g.gold)) {
                record_failure("label verification failed for " + g.item_id);
                continue;
            }
            if (config.use_shortcut_filter) {
                FilterResult f = shortcut_filter(g.question, dgm);
                if (!f.pass) {
                    record_failure("shortcut filter rejected " + g.item_id + ": " + f.reason);
                    continue;
                }
            }
        } catch (const DgiError& e) {
            record_failure(e.what());
            continue;
        }
        slot.produced.push_back(std::move(g));
    }
}

}  // namespace

BatchResult run_generation_batch(const std::vector<StaticQAItem>& items,
                                 const GenerationConfig& config, DgmBackend& dgm) {
    std::vector<Slot> slots;
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (Subset s : config.subsets) {
            if (s == Subset::L1_Y) continue;
            slots.push_back(Slot{i, s, {}, {}});
        }
    }

    int workers = std::max(1, config.parallelism);
    if (workers == 1 || slots.size() <= 1) {
        for (auto& slot : slots) run_slot(slot, items, config, dgm);
    } else {
        std::atomic<std::size_t> next{0};
        auto work = [&]() {
            while (true) {
                std::size_t k = next.fetch_add(1);
                if (k >= slots.size()) break;
                run_slot(slots[k], items, config, dgm);
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // assemble grouped by subset (config order), then by item order
    BatchResult out;
    for (Subset s : config.subsets) {
        for (const auto& slot : slots) {
            if (slot.subset != s) continue;
            for (const auto& g : slot.produced) out.benchmark.items.push_back(g);
        }
    }
    for (const auto& slot : slots) {
        for (const auto& f : slot.failures) out.failures.push_back(f);
    }
    return out;
}

namespace {

CausalGraph parse_with_retry(const std::string& prompt, const std::vector<MediaRef>& media,
                             DgmBackend& dgm) {
    Completion first = dgm.complete(GenerationRequest{prompt, media, {}, dgm.id()});
    try {
        return parse_graph(first.text);
    } catch (const DgiError&) {
        // one retry with a format reminder, then the item fails
        std::string retry_prompt = prompt + "\nOutput only node blocks.";
        Completion second = dgm.complete(GenerationRequest{retry_prompt, media, {}, dgm.id()});
        try {
            return parse_graph(second.text);
        } catch (const DgiError& e) {
            throw DgiError(Errc::DgmFailure,
                           std::string("generator output failed to parse twice: ") + e.what());
        }
    }
}

}  // namespace

CausalGraph extract_static_graph(const ExtractionInputs& inputs,
                                 const std::vector<MediaRef>& media, DgmBackend& dgm) {
    std::string prompt =
        render_prompt(TemplateId::StaticExtract, {{"causal_event_description", inputs.description},
                                                  {"causal_event_action", inputs.action},
                                                  {"causal_event_result", inputs.result},
                                                  {"causal_event_reason", inputs.reason}});
    return parse_with_retry(prompt, media, dgm);
}

InterventionGraph extract_intervention_graph(const ExtractionInputs& inputs,
                                             const StaticQAItem& item,
                                             const std::vector<MediaRef>& media,
                                             DgmBackend& dgm) {
    std::string prompt = render_prompt(
        TemplateId::InterventionExtract,
        {{"causal_event_description", inputs.description},
         {"causal_event_action", inputs.action},
         {"causal_event_result", inputs.result},
         {"causal_event_reason", inputs.reason},
         {"CF_Q", item.question},
         {"CF_A", "Y"},
         {"reason_process", item.metadata.reasoning_process},
         {"related_causal_event", item.metadata.related_causal_events},
         {"CF_content", item.metadata.counterfactual_assumption},
         {"counterfactual_reason", item.metadata.manifestation}});
    CausalGraph graph = parse_with_retry(prompt, media, dgm);

    auto finals = graph.nodes_with_state(NodeState::ResultFinal);
    if (finals.size() != 1) {
        throw DgiError(Errc::AmbiguousTargetFinal,
                       "extracted graph has " + std::to_string(finals.size()) +
                           " Result(final) nodes");
    }
    std::vector<NodeId> starred;
    for (const auto& n : graph.nodes()) {
        if (n.id.starred) starred.push_back(n.id);
    }
    if (starred.empty()) {
        throw DgiError(Errc::NoStarredNode, "extracted intervention graph has no starred node");
    }
    if (starred.size() > 1) {
        throw DgiError(Errc::AmbiguousFirstIntervention,
                       "extracted graph has " + std::to_string(starred.size()) +
                           " starred nodes");
    }
    return InterventionGraph::make(std::move(graph), starred.front(), finals.front());
}

ExtractionInputs extraction_inputs(const StaticQAItem& item) {
    return ExtractionInputs{item.metadata.causal_event_description,
                            item.metadata.causal_event_action,
                            item.metadata.causal_event_result,
                            item.metadata.causal_event_reason};
}

namespace {

std::string join_fields(const std::vector<CausalEventAnnotation>& events,
                        std::string CausalEventAnnotation::*field) {
    std::string out;
    for (const auto& e : events) {
        if (!out.empty()) out += "\n";
        out += e.*field;
    }
    return out;
}

}  // namespace

std::vector<StaticQAItem> make_static_items(const VideoRecord& record,
                                            const std::string& record_id) {
    std::vector<StaticQAItem> out;
    for (std::size_t k = 0; k < record.counterfactual_questions.size(); ++k) {
        const CFQuestionAnnotation& q = record.counterfactual_questions[k];
        StaticQAItem item;
        item.item_id = record_id + "-q" + std::to_string(k);
        item.video = VideoRef{record.url, record.start_s, record.end_s};
        item.question = q.question;
        item.metadata.counterfactual_assumption = q.counterfactual_assumption;
        item.metadata.reasoning_process = q.reasoning_process;
        item.metadata.related_causal_events = q.related_causal_events;
        item.metadata.manifestation = q.manifestation;
        item.metadata.causal_event_description = record.video_description;
        item.metadata.causal_event_action =
            join_fields(record.causal_events, &CausalEventAnnotation::action);
        item.metadata.causal_event_result =
            join_fields(record.causal_events, &CausalEventAnnotation::result);
        item.metadata.causal_event_reason =
            join_fields(record.causal_events, &CausalEventAnnotation::causal_relationship);
        item.category = record.video_type;
        item.difficulty = record.difficulty();
        out.push_back(std::move(item));
    }
    return out;
}

}  // namespace dgi
