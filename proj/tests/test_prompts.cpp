#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "dgi/prompt_templates.hpp"

using namespace dgi;

namespace {

std::string read_resource(const std::string& name) {
    std::string path = std::string(DGI_RESOURCE_DIR) + "/prompts/" + name;
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing resource " << path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> sentinel_bindings(TemplateId id) {
    std::map<std::string, std::string> bindings;
    int k = 0;
    for (const auto& name : template_placeholders(id)) {
        bindings[name] = "<<SENTINEL-" + std::to_string(k++) + ">>";
    }
    return bindings;
}

// Rendered output must equal the template's literal segments with binding
// values spliced in at the placeholder sites and nowhere else.
void check_differs_only_at_placeholders(TemplateId id,
                                        const std::map<std::string, std::string>& bindings) {
    const std::string& body = template_body(id);
    std::string rendered = render_prompt(id, bindings);

    std::size_t bpos = 0, rpos = 0;
    while (bpos < body.size()) {
        if (body[bpos] == '{') {
            std::size_t close = body.find('}', bpos);
            REQUIRE(close != std::string::npos);
            std::string name = body.substr(bpos + 1, close - bpos - 1);
            const std::string& value = bindings.at(name);
            REQUIRE(rendered.compare(rpos, value.size(), value) == 0);
            rpos += value.size();
            bpos = close + 1;
        } else {
            REQUIRE(rendered[rpos] == body[bpos]);
            ++rpos;
            ++bpos;
        }
    }
    CHECK(rpos == rendered.size());
}

}  // namespace

TEST_CASE("embedded templates are byte-identical to the resource files") {
    CHECK(template_body(TemplateId::StaticExtract) == read_resource("static_extract.txt"));
    CHECK(template_body(TemplateId::InterventionExtract) ==
          read_resource("intervention_extract.txt"));
    CHECK(template_body(TemplateId::L2N) == read_resource("l2n.txt"));
    CHECK(template_body(TemplateId::L2Y) == read_resource("l2y.txt"));
}

TEST_CASE("templates expose the expected placeholders") {
    CHECK(template_placeholders(TemplateId::StaticExtract) ==
          std::vector<std::string>{"causal_event_description", "causal_event_action",
                                   "causal_event_result", "causal_event_reason"});
    CHECK(template_placeholders(TemplateId::InterventionExtract) ==
          std::vector<std::string>{"causal_event_description", "causal_event_action",
                                   "causal_event_result", "causal_event_reason", "CF_Q", "CF_A",
                                   "reason_process", "related_causal_event", "CF_content",
                                   "counterfactual_reason"});
    CHECK(template_placeholders(TemplateId::L2N) ==
          std::vector<std::string>{"node_str", "previous_CF_inf_str", "condition_node",
                                   "middle_node", "res_node"});
    CHECK(template_placeholders(TemplateId::L2Y) ==
          std::vector<std::string>{"node_str", "previous_CF_inf_str", "L1_ori_condition",
                                   "res_node"});
}

TEST_CASE("the example node structure survives in the static template verbatim") {
    const std::string& body = template_body(TemplateId::StaticExtract);
    CHECK(body.find("content: The block has an initial velocity to the right.") !=
          std::string::npos);
    CHECK(body.find("state: Rule.") != std::string::npos);
    CHECK(body.find("previous_condition: V3, V4.") != std::string::npos);
}

TEST_CASE("l2n rendering substitutes the intervention requirement") {
    std::string rendered = render_prompt(TemplateId::L2N, {{"node_str", "GRAPH"},
                                                           {"previous_CF_inf_str", "CF-INFO"},
                                                           {"condition_node", "V4 content"},
                                                           {"middle_node", "V10 content"},
                                                           {"res_node", "V11 content"}});
    CHECK(rendered.find("intervene on V4 content so that the original V10 content no longer "
                        "holds") != std::string::npos);
    CHECK(rendered.find("whether \"V11 content\" still holds") != std::string::npos);
    CHECK(rendered.find("Causal graph: GRAPH") != std::string::npos);
    CHECK(rendered.find('{') == std::string::npos);  // nothing left unbound
}

TEST_CASE("l2y rendering binds the redundant condition") {
    std::string rendered =
        render_prompt(TemplateId::L2Y, {{"node_str", "GRAPH"},
                                        {"previous_CF_inf_str", "CF-INFO"},
                                        {"L1_ori_condition", "the board is long"},
                                        {"res_node", "it stops"}});
    CHECK(rendered.find("additionally assume that the condition in the board is long holds") !=
          std::string::npos);
    CHECK(rendered.find("do not use phrases such as \"as in the video\"") != std::string::npos);
}

TEST_CASE("binding errors") {
    try {
        render_prompt(TemplateId::L2Y,
                      {{"node_str", "G"}, {"previous_CF_inf_str", "I"}, {"res_node", "R"}});
        FAIL("expected MissingPlaceholder");
    } catch (const DgiError& e) {
        CHECK(e.code() == Errc::MissingPlaceholder);
        CHECK(std::string(e.what()).find("L1_ori_condition") != std::string::npos);
    }
    try {
        render_prompt(TemplateId::L2Y, {{"node_str", "G"},
                                        {"previous_CF_inf_str", "I"},
                                        {"L1_ori_condition", "C"},
                                        {"res_node", "R"},
                                        {"foo", "x"}});
        FAIL("expected UnknownPlaceholder");
    } catch (const DgiError& e) {
        CHECK(e.code() == Errc::UnknownPlaceholder);
    }
    CHECK_THROWS_AS(template_from_name("L9Z"), DgiError);
}

TEST_CASE("rendered prompts differ from the templates only at placeholder sites") {
    for (TemplateId id : {TemplateId::StaticExtract, TemplateId::InterventionExtract,
                          TemplateId::L2N, TemplateId::L2Y}) {
        check_differs_only_at_placeholders(id, sentinel_bindings(id));
    }
}

TEST_CASE("template names round-trip") {
    for (TemplateId id : {TemplateId::StaticExtract, TemplateId::InterventionExtract,
                          TemplateId::L2N, TemplateId::L2Y}) {
        CHECK(template_from_name(template_name(id)) == id);
    }
}
