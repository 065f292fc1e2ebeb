#pragma once

#include <map>
#include <string>
#include <vector>

#include "dgi/errors.hpp"

namespace dgi {

enum class TemplateId {
    StaticExtract,
    InterventionExtract,
    L2N,
    L2Y,
};

const char* template_name(TemplateId id);
TemplateId template_from_name(const std::string& name);  // throws UnknownTemplate

/// Template body, byte-identical to the resource file under
/// resources/prompts/.
const std::string& template_body(TemplateId id);

/// Placeholder names in order of first appearance.
std::vector<std::string> template_placeholders(TemplateId id);

// Placeholder names occurring in an arbitrary template body, order of first
// appearance, de-duplicated.
std::vector<std::string> scan_placeholders(const std::string& body);

/// Byte-exact substitution of {name} sites; no other transformation.
/// Bindings must cover exactly the template's placeholders.
std::string render_prompt(TemplateId id, const std::map<std::string, std::string>& bindings);

}  // namespace dgi
