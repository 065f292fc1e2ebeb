#include "dgi/qa_items.hpp"

#include "dgi/graph_json.hpp"

namespace dgi {

using nlohmann::json;

const std::string& item_id(const BenchmarkItem& item) {
    return std::visit([](const auto& i) -> const std::string& { return i.item_id; }, item);
}

Subset item_subset(const BenchmarkItem& item) {
    if (std::holds_alternative<StaticQAItem>(item)) return Subset::L1_Y;
    return std::get<GeneratedQAItem>(item).subset;
}

GoldLabel item_gold(const BenchmarkItem& item) {
    if (std::holds_alternative<StaticQAItem>(item)) return GoldLabel::Y;
    return std::get<GeneratedQAItem>(item).gold;
}

const std::string& item_question(const BenchmarkItem& item) {
    return std::visit([](const auto& i) -> const std::string& { return i.question; }, item);
}

const VideoRef& item_video(const BenchmarkItem& item) {
    return std::visit([](const auto& i) -> const VideoRef& { return i.video; }, item);
}

Category item_category(const BenchmarkItem& item) {
    return std::visit([](const auto& i) { return i.category; }, item);
}

DifficultyClass item_difficulty(const BenchmarkItem& item) {
    return std::visit([](const auto& i) { return i.difficulty; }, item);
}

namespace {

void check_known_keys(const json& j, std::initializer_list<const char*> known,
                      const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known) {
            if (key == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw DgiError(Errc::MalformedLine, where + " has unknown field '" + key + "'");
        }
    }
}

json video_to_json(const VideoRef& v) {
    return json{{"clip_id", v.clip_id}, {"start_s", v.start_s}, {"end_s", v.end_s}};
}

VideoRef video_from_json(const json& j) {
    check_known_keys(j, {"clip_id", "start_s", "end_s"}, "video");
    return VideoRef{j.at("clip_id").get<std::string>(), j.at("start_s").get<double>(),
                    j.at("end_s").get<double>()};
}

json intervention_graph_to_json(const InterventionGraph& ig) {
    return json{{"graph", graph_to_json(ig.graph)},
                {"first_intervention", ig.first_intervention.render()},
                {"target_final", ig.target_final.render()},
                {"origin", ig.origin}};
}

InterventionGraph intervention_graph_from_json(const json& j) {
    check_known_keys(j, {"graph", "first_intervention", "target_final", "origin"},
                     "intervention_graph");
    return InterventionGraph::make(
        graph_from_json(j.at("graph")),
        parse_node_id(j.at("first_intervention").get<std::string>()),
        parse_node_id(j.at("target_final").get<std::string>()),
        j.value("origin", std::string{}));
}

json provenance_to_json(const GenerationProvenance& p) {
    json out = {{"dgm_backend", p.dgm_backend},
                {"template_id", p.template_id},
                {"prompt_hash", p.prompt_hash},
                {"seed", p.seed},
                {"timestamp", p.timestamp}};
    out["entry_point"] = p.entry_point ? entry_point_to_json(*p.entry_point) : json(nullptr);
    out["condition_node"] = p.condition_node ? json(p.condition_node->render()) : json(nullptr);
    return out;
}

GenerationProvenance provenance_from_json(const json& j) {
    check_known_keys(j,
                     {"dgm_backend", "template_id", "prompt_hash", "seed", "timestamp",
                      "entry_point", "condition_node"},
                     "provenance");
    GenerationProvenance p;
    p.dgm_backend = j.at("dgm_backend").get<std::string>();
    p.template_id = j.at("template_id").get<std::string>();
    p.prompt_hash = j.at("prompt_hash").get<std::string>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.timestamp = j.at("timestamp").get<std::string>();
    if (j.contains("entry_point") && !j["entry_point"].is_null()) {
        p.entry_point = entry_point_from_json(j["entry_point"]);
    }
    if (j.contains("condition_node") && !j["condition_node"].is_null()) {
        p.condition_node = parse_node_id(j["condition_node"].get<std::string>());
    }
    return p;
}

}  // namespace

json item_to_json(const BenchmarkItem& item) {
    if (const auto* s = std::get_if<StaticQAItem>(&item)) {
        json out = {{"schema", kBenchmarkSchema},
                    {"kind", "static"},
                    {"item_id", s->item_id},
                    {"video", video_to_json(s->video)},
                    {"question", s->question},
                    {"answer", "Y"},
                    {"category", category_token(s->category)},
                    {"difficulty", difficulty_token(s->difficulty)},
                    {"metadata",
                     {{"counterfactual_assumption", s->metadata.counterfactual_assumption},
                      {"reasoning_process", s->metadata.reasoning_process},
                      {"related_causal_events", s->metadata.related_causal_events},
                      {"manifestation", s->metadata.manifestation},
                      {"causal_event_description", s->metadata.causal_event_description},
                      {"causal_event_action", s->metadata.causal_event_action},
                      {"causal_event_result", s->metadata.causal_event_result},
                      {"causal_event_reason", s->metadata.causal_event_reason}}}};
        out["static_graph"] = s->static_graph ? graph_to_json(*s->static_graph) : json(nullptr);
        out["intervention_graph"] = s->intervention_graph
                                        ? intervention_graph_to_json(*s->intervention_graph)
                                        : json(nullptr);
        return out;
    }
    const auto& g = std::get<GeneratedQAItem>(item);
    return json{{"schema", kBenchmarkSchema},
                {"kind", "generated"},
                {"item_id", g.item_id},
                {"parent_id", g.parent_id},
                {"subset", subset_token(g.subset)},
                {"question", g.question},
                {"gold", gold_label_token(g.gold)},
                {"video", video_to_json(g.video)},
                {"category", category_token(g.category)},
                {"difficulty", difficulty_token(g.difficulty)},
                {"provenance", provenance_to_json(g.provenance)}};
}

BenchmarkItem item_from_json(const json& j) {
    if (!j.is_object()) throw DgiError(Errc::MalformedLine, "benchmark line is not an object");
    std::string schema = j.value("schema", std::string{});
    if (schema != kBenchmarkSchema) {
        throw DgiError(Errc::SchemaMismatch, "expected schema '" + std::string(kBenchmarkSchema) +
                                                 "', got '" + schema + "'");
    }
    std::string kind = j.value("kind", std::string{});
    if (kind == "static") {
        check_known_keys(j,
                         {"schema", "kind", "item_id", "video", "question", "answer", "category",
                          "difficulty", "metadata", "static_graph", "intervention_graph"},
                         "static item");
        StaticQAItem s;
        s.item_id = j.at("item_id").get<std::string>();
        s.video = video_from_json(j.at("video"));
        s.question = j.at("question").get<std::string>();
        if (j.value("answer", std::string{"Y"}) != "Y") {
            throw DgiError(Errc::MalformedLine,
                           "static item " + s.item_id + " must have answer Y");
        }
        s.category = parse_category(j.value("category", std::string{}));
        if (auto d = try_parse_difficulty(j.value("difficulty", std::string{"Standard"}))) {
            s.difficulty = *d;
        }
        if (j.contains("metadata") && j["metadata"].is_object()) {
            const json& m = j["metadata"];
            check_known_keys(m,
                             {"counterfactual_assumption", "reasoning_process",
                              "related_causal_events", "manifestation",
                              "causal_event_description", "causal_event_action",
                              "causal_event_result", "causal_event_reason"},
                             "metadata");
            s.metadata.counterfactual_assumption =
                m.value("counterfactual_assumption", std::string{});
            s.metadata.reasoning_process = m.value("reasoning_process", std::string{});
            s.metadata.related_causal_events = m.value("related_causal_events", std::string{});
            s.metadata.manifestation = m.value("manifestation", std::string{});
            s.metadata.causal_event_description =
                m.value("causal_event_description", std::string{});
            s.metadata.causal_event_action = m.value("causal_event_action", std::string{});
            s.metadata.causal_event_result = m.value("causal_event_result", std::string{});
            s.metadata.causal_event_reason = m.value("causal_event_reason", std::string{});
        }
        if (j.contains("static_graph") && !j["static_graph"].is_null()) {
            s.static_graph = graph_from_json(j["static_graph"]);
        }
        if (j.contains("intervention_graph") && !j["intervention_graph"].is_null()) {
            s.intervention_graph = intervention_graph_from_json(j["intervention_graph"]);
        }
        return s;
    }
    if (kind == "generated") {
        check_known_keys(j,
                         {"schema", "kind", "item_id", "parent_id", "subset", "question", "gold",
                          "video", "category", "difficulty", "provenance"},
                         "generated item");
        GeneratedQAItem g;
        g.item_id = j.at("item_id").get<std::string>();
        g.parent_id = j.at("parent_id").get<std::string>();
        auto subset = try_parse_subset(j.at("subset").get<std::string>());
        if (!subset || *subset == Subset::L1_Y) {
            throw DgiError(Errc::MalformedLine, "generated item " + g.item_id +
                                                    " has bad subset '" +
                                                    j.at("subset").get<std::string>() + "'");
        }
        g.subset = *subset;
        g.question = j.at("question").get<std::string>();
        auto gold = try_parse_gold_label(j.at("gold").get<std::string>());
        if (!gold) {
            throw DgiError(Errc::MalformedLine, "generated item " + g.item_id + " has bad gold");
        }
        g.gold = *gold;
        // the subset-label mapping is total and fixed
        GoldLabel expected = g.subset == Subset::L2_Y ? GoldLabel::Y : GoldLabel::N;
        if (g.gold != expected) {
            throw DgiError(Errc::MalformedLine,
                           "item " + g.item_id + " claims gold " + gold_label_token(g.gold) +
                               " for subset " + subset_token(g.subset));
        }
        g.video = video_from_json(j.at("video"));
        g.category = parse_category(j.value("category", std::string{}));
        if (auto d = try_parse_difficulty(j.value("difficulty", std::string{"Standard"}))) {
            g.difficulty = *d;
        }
        g.provenance = provenance_from_json(j.at("provenance"));
        return g;
    }
    throw DgiError(Errc::MalformedLine, "unknown item kind '" + kind + "'");
}

}  // namespace dgi
