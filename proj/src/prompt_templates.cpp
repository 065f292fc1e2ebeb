#include "dgi/prompt_templates.hpp"

#include <algorithm>
#include <cctype>

namespace dgi {

namespace {

// Embedded copies of the resource files under resources/prompts/; a golden
// test pins them byte-for-byte against those files.

const std::string kStaticExtract =
    R"PROMPT(Below is a series of generated node information. Please generate the corresponding node information for video causal reasoning according to the given node information structure.Here is an example of the generated node information structure:
V1:
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
The new input information is as follows:
The video is the given input video,
and the corresponding causal event annotations are as follows:
{causal_event_description}
causal_event_action:{causal_event_action}
causal_event_result:{causal_event_result}
causal_event_reason:{causal_event_reason}
)PROMPT";

const std::string kInterventionExtract =
    R"PROMPT(Below is the generated causal reasoning node graph. Please modify the corresponding reasoning graph according to the counterfactual question information. Use Vx* to denote the intervention node applied to node Vx, and use new numbering for any new nodes generated by the intervention. If an original node still remains valid, retain it:

The corresponding video is the input video,
The corresponding causal event information and counterfactual question information are as follows:
Causal events:
{causal_event_description}
causal_event_action:{causal_event_action}
causal_event_result:{causal_event_result}
causal_event_reason:{causal_event_reason}
......

Counterfactual question information:
Q: {CF_Q}
A: {CF_A}
Reason_process: {reason_process}
Related_causal_events: {related_causal_event}
Counterfactual_content: {CF_content}
Counterfactual_reason: {counterfactual_reason}
......

Please output the corresponding modified causal graph according to the required node format above:
)PROMPT";

const std::string kL2N =
    R"PROMPT(We conducted a counterfactual intervention experiment based on the video.
Here, we provide the video clip and the corresponding causal graph extracted after the intervention. Please perform the required intervention experiment and generate a counterfactual question according to the instructions.
Video: the corresponding input video.
Causal graph: {node_str}
Original counterfactual question information: {previous_CF_inf_str}
Intervention experiment requirement: intervene on {condition_node} so that the original {middle_node} no longer holds. The new intervention content must not conflict with the previous counterfactual assumptions.
New Counterfactual question requirement: generate a question asking whether "{res_node}" still holds under both the previous intervention assumptions and the new intervention assumptions. The answer should only require Y/N.
The counterfactual assumptions used in the intervention experiment must not create shortcuts; that is, the model should not be able to determine whether the related event holds solely based on the intervention assumptions, but instead must combine the video information with reasoning to make the judgment.
Please output only the generated counterfactual question. Do not include node numbering information in the question.
)PROMPT";

const std::string kL2Y =
    R"PROMPT(We conducted a counterfactual intervention experiment based on the video.
Here, we provide the video clip and the corresponding causal graph extracted after the intervention. Please perform the required intervention experiment and generate a counterfactual question according to the instructions.
Video: the corresponding input video.
Causal graph: {node_str}
Original counterfactual question information: {previous_CF_inf_str}
Intervention experiment requirement: assuming the original counterfactual assumptions hold, additionally assume that the condition in {L1_ori_condition} holds. The new intervention content must not conflict with the previous counterfactual assumptions.
Counterfactual question requirement: generate a question asking whether "{res_node}" holds under both the previous intervention assumptions and the new intervention assumptions. The answer should only require Y/N.
The counterfactual assumptions used in the intervention experiment must not create shortcuts; that is, the model should not be able to determine whether the related event holds solely based on the intervention assumptions, but instead must combine the video information with reasoning to make the judgment.
Please output only the generated counterfactual question. Do not include node numbering information in the question, and do not use phrases such as "as in the video".
)PROMPT";

bool placeholder_at(const std::string& body, std::size_t pos, std::string& name,
                    std::size_t& end) {
    if (body[pos] != '{') return false;
    std::size_t close = body.find('}', pos + 1);
    if (close == std::string::npos || close == pos + 1) return false;
    for (std::size_t i = pos + 1; i < close; ++i) {
        unsigned char c = static_cast<unsigned char>(body[i]);
        if (!std::isalnum(c) && c != '_') return false;
    }
    name = body.substr(pos + 1, close - pos - 1);
    end = close + 1;
    return true;
}

}  // namespace

const char* template_name(TemplateId id) {
    switch (id) {
        case TemplateId::StaticExtract: return "StaticExtract";
        case TemplateId::InterventionExtract: return "InterventionExtract";
        case TemplateId::L2N: return "L2N";
        case TemplateId::L2Y: return "L2Y";
    }
    return "?";
}

TemplateId template_from_name(const std::string& name) {
    if (name == "StaticExtract") return TemplateId::StaticExtract;
    if (name == "InterventionExtract") return TemplateId::InterventionExtract;
    if (name == "L2N") return TemplateId::L2N;
    if (name == "L2Y") return TemplateId::L2Y;
    throw DgiError(Errc::UnknownTemplate, "no template named '" + name + "'");
}

const std::string& template_body(TemplateId id) {
    switch (id) {
        case TemplateId::StaticExtract: return kStaticExtract;
        case TemplateId::InterventionExtract: return kInterventionExtract;
        case TemplateId::L2N: return kL2N;
        case TemplateId::L2Y: return kL2Y;
    }
    throw DgiError(Errc::UnknownTemplate, "bad template id");
}

std::vector<std::string> scan_placeholders(const std::string& body) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::string name;
        std::size_t end;
        if (placeholder_at(body, pos, name, end)) {
            if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
            pos = end;
        } else {
            ++pos;
        }
    }
    return out;
}

std::vector<std::string> template_placeholders(TemplateId id) {
    return scan_placeholders(template_body(id));
}

std::string render_prompt(TemplateId id, const std::map<std::string, std::string>& bindings) {
    const std::string& body = template_body(id);
    auto names = scan_placeholders(body);

    for (const auto& [key, value] : bindings) {
        (void)value;
        if (std::find(names.begin(), names.end(), key) == names.end()) {
            throw DgiError(Errc::UnknownPlaceholder, "binding '" + key + "' not in template " +
                                                         template_name(id));
        }
    }
    for (const auto& name : names) {
        if (!bindings.count(name)) {
            throw DgiError(Errc::MissingPlaceholder, "template " + std::string(template_name(id)) +
                                                         " needs '" + name + "'");
        }
    }

    std::string out;
    out.reserve(body.size());
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::string name;
        std::size_t end;
        if (placeholder_at(body, pos, name, end)) {
            out += bindings.at(name);
            pos = end;
        } else {
            out += body[pos];
            ++pos;
        }
    }
    return out;
}

}  // namespace dgi
