#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgi/taxonomy.hpp"

namespace dgi {

struct CausalEventAnnotation {
    std::string action;
    std::string result;
    std::string causal_relationship;
};

struct CFQuestionAnnotation {
    std::string question;
    std::string answer;
    std::string reasoning_process;
    std::string related_causal_events;
    std::string counterfactual_assumption;
    std::string manifestation;
};

/// One annotated video entry, field names mirroring the annotation guideline
/// in lowercase snake case.
struct VideoRecord {
    Category video_type = Category::Unknown;
    std::string url;
    std::string account;
    std::vector<std::string> hashtags;
    std::string description;
    std::string introduction;
    double start_s = 0.0;
    double end_s = 0.0;
    std::string video_description;
    std::vector<CausalEventAnnotation> causal_events;
    std::vector<CFQuestionAnnotation> counterfactual_questions;
    // difficulty inputs, taken as provided integers when present
    std::optional<int> primary_object_count;
    std::optional<int> chain_length;

    double clip_length_s() const { return end_s - start_s; }
    DifficultyClass difficulty() const;
};

/// Accepts "m:ss" (e.g. "0:15", "2:30"), "h:mm:ss", or plain seconds
/// ("12", "8.87", or a JSON number).
double parse_timestamp(const nlohmann::json& value);

VideoRecord record_from_json(const nlohmann::json& j);
// A JSON array of records, or JSON-lines with one record per line.
std::vector<VideoRecord> load_records(const std::string& path);

struct DatasetStats {
    std::size_t video_count = 0;
    std::size_t qa_count = 0;
    double avg_clip_length_s = 0.0;
    double avg_question_words = 0.0;
    double avg_qa_per_video = 0.0;
};

std::size_t word_count(const std::string& text);  // whitespace tokenization
DatasetStats compute_stats(const std::vector<VideoRecord>& records);  // throws EmptyDataset

// Report emission rounds averages to 2 decimals.
nlohmann::json stats_to_json(const DatasetStats& stats);
std::string stats_to_csv(const DatasetStats& stats);

}  // namespace dgi
