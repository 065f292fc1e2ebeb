#pragma once

#include <optional>
#include <string>

namespace dgi {

/// Benchmark subsets. L1_Y items are the human-annotated static
/// counterfactuals; the other three are generated.
enum class Subset { L1_N, L1_Y, L2_N, L2_Y };

const char* subset_token(Subset s);
std::optional<Subset> try_parse_subset(const std::string& token);  // accepts "L2_N" / "l2n"

/// The six causality categories, plus Unknown for items without one.
enum class Category { Reasoning, Physical, Social, Temporal, Intentional, Others, Unknown };

const char* category_token(Category c);
// Accepts "Physical" or "Physical Causality", case-insensitively.
Category parse_category(const std::string& token);

enum class DifficultyClass { Standard, MultiObject, LongChain };

const char* difficulty_token(DifficultyClass d);
std::optional<DifficultyClass> try_parse_difficulty(const std::string& token);

/// Difficulty thresholds: more than four primary objects with fewer than
/// four causal reaction chains is multi-object; fewer than five objects with
/// chains longer than three is long-chain; everything else (including the
/// unspecified corner with both counts high) is standard.
DifficultyClass classify_difficulty(int primary_object_count, int chain_length);

}  // namespace dgi
