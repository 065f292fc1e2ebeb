#include "dgi/taxonomy.hpp"

#include <algorithm>
#include <cctype>

namespace dgi {

namespace {
std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}
}  // namespace

const char* subset_token(Subset s) {
    switch (s) {
        case Subset::L1_N: return "L1_N";
        case Subset::L1_Y: return "L1_Y";
        case Subset::L2_N: return "L2_N";
        case Subset::L2_Y: return "L2_Y";
    }
    return "?";
}

std::optional<Subset> try_parse_subset(const std::string& token) {
    std::string t = lower(token);
    t.erase(std::remove(t.begin(), t.end(), '_'), t.end());
    if (t == "l1n") return Subset::L1_N;
    if (t == "l1y") return Subset::L1_Y;
    if (t == "l2n") return Subset::L2_N;
    if (t == "l2y") return Subset::L2_Y;
    return std::nullopt;
}

const char* category_token(Category c) {
    switch (c) {
        case Category::Reasoning: return "Reasoning";
        case Category::Physical: return "Physical";
        case Category::Social: return "Social";
        case Category::Temporal: return "Temporal";
        case Category::Intentional: return "Intentional";
        case Category::Others: return "Others";
        case Category::Unknown: return "Unknown";
    }
    return "?";
}

Category parse_category(const std::string& token) {
    std::string t = lower(token);
    // strip a trailing " causality" qualifier
    const std::string suffix = " causality";
    if (t.size() > suffix.size() && t.compare(t.size() - suffix.size(), suffix.size(), suffix) == 0) {
        t = t.substr(0, t.size() - suffix.size());
    }
    if (t == "reasoning") return Category::Reasoning;
    if (t == "physical") return Category::Physical;
    if (t == "social") return Category::Social;
    if (t == "temporal") return Category::Temporal;
    if (t == "intentional") return Category::Intentional;
    if (t == "others") return Category::Others;
    return Category::Unknown;
}

const char* difficulty_token(DifficultyClass d) {
    switch (d) {
        case DifficultyClass::Standard: return "Standard";
        case DifficultyClass::MultiObject: return "MultiObject";
        case DifficultyClass::LongChain: return "LongChain";
    }
    return "?";
}

std::optional<DifficultyClass> try_parse_difficulty(const std::string& token) {
    std::string t = lower(token);
    if (t == "standard") return DifficultyClass::Standard;
    if (t == "multiobject" || t == "multi-object") return DifficultyClass::MultiObject;
    if (t == "longchain" || t == "long-chain") return DifficultyClass::LongChain;
    return std::nullopt;
}

DifficultyClass classify_difficulty(int primary_object_count, int chain_length) {
    if (primary_object_count > 4 && chain_length < 4) return DifficultyClass::MultiObject;
    if (primary_object_count < 5 && chain_length > 3) return DifficultyClass::LongChain;
    return DifficultyClass::Standard;
}

}  // namespace dgi
