#include "dgi/annotations.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dgi/benchmark_io.hpp"

namespace dgi {

using nlohmann::json;

DifficultyClass VideoRecord::difficulty() const {
    if (!primary_object_count || !chain_length) return DifficultyClass::Standard;
    return classify_difficulty(*primary_object_count, *chain_length);
}

double parse_timestamp(const json& value) {
    if (value.is_number()) return value.get<double>();
    if (!value.is_string()) {
        throw DgiError(Errc::MalformedLine, "timestamp must be a number or string");
    }
    const std::string s = value.get<std::string>();
    if (s.find(':') == std::string::npos) {
        try {
            std::size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw DgiError(Errc::MalformedLine, "bad timestamp '" + s + "'");
        }
    }
    // m:ss or h:mm:ss
    std::stringstream ss(s);
    std::string part;
    std::vector<double> parts;
    while (std::getline(ss, part, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw DgiError(Errc::MalformedLine, "bad timestamp '" + s + "'");
        }
    }
    if (parts.size() < 2 || parts.size() > 3) {
        throw DgiError(Errc::MalformedLine, "bad timestamp '" + s + "'");
    }
    double seconds = 0.0;
    for (double p : parts) seconds = seconds * 60.0 + p;
    return seconds;
}

VideoRecord record_from_json(const json& j) {
    if (!j.is_object()) throw DgiError(Errc::MalformedLine, "record is not an object");
    VideoRecord r;
    r.video_type = parse_category(j.value("video_type", std::string{}));
    r.url = j.value("url", std::string{});
    r.account = j.value("account", std::string{});
    if (j.contains("hashtags")) {
        for (const auto& h : j["hashtags"]) r.hashtags.push_back(h.get<std::string>());
    }
    r.description = j.value("description", std::string{});
    r.introduction = j.value("introduction", std::string{});
    r.start_s = parse_timestamp(j.at("start_time"));
    r.end_s = parse_timestamp(j.at("end_time"));
    if (r.end_s <= r.start_s) {
        throw DgiError(Errc::MalformedLine, "end_time must be after start_time");
    }
    r.video_description = j.value("video_description", std::string{});

    if (!j.contains("causal_events") || !j["causal_events"].is_array() ||
        j["causal_events"].empty()) {
        throw DgiError(Errc::MalformedLine, "record needs at least one causal event");
    }
    for (const auto& ej : j["causal_events"]) {
        CausalEventAnnotation e;
        e.action = ej.at("action").get<std::string>();
        e.result = ej.at("result").get<std::string>();
        e.causal_relationship = ej.at("causal_relationship").get<std::string>();
        if (e.action.empty() || e.result.empty() || e.causal_relationship.empty()) {
            throw DgiError(Errc::MalformedLine, "causal event fields must be non-empty");
        }
        r.causal_events.push_back(std::move(e));
    }
    if (j.contains("counterfactual_questions")) {
        for (const auto& qj : j["counterfactual_questions"]) {
            CFQuestionAnnotation q;
            q.question = qj.at("question").get<std::string>();
            q.answer = qj.value("answer", std::string{"Y"});
            q.reasoning_process = qj.value("reasoning_process", std::string{});
            q.related_causal_events = qj.value("related_causal_events", std::string{});
            q.counterfactual_assumption = qj.value("counterfactual_assumption", std::string{});
            q.manifestation = qj.value("manifestation", std::string{});
            r.counterfactual_questions.push_back(std::move(q));
        }
    }
    if (j.contains("primary_object_count")) {
        r.primary_object_count = j["primary_object_count"].get<int>();
    }
    if (j.contains("chain_length")) r.chain_length = j["chain_length"].get<int>();
    return r;
}

std::vector<VideoRecord> load_records(const std::string& path) {
    std::string text = read_text_file(path);
    std::vector<VideoRecord> records;

    json parsed = json::parse(text, nullptr, false);
    if (!parsed.is_discarded()) {
        try {
            if (parsed.is_array()) {
                for (const auto& rj : parsed) records.push_back(record_from_json(rj));
                return records;
            }
            if (parsed.is_object()) {
                records.push_back(record_from_json(parsed));
                return records;
            }
        } catch (const DgiError&) {
            throw;
        } catch (const std::exception& e) {
            throw DgiError(Errc::MalformedLine, path + ": " + e.what());
        }
        throw DgiError(Errc::MalformedLine, path + ": expected record object(s)");
    }

    // JSON-lines fallback
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw DgiError(Errc::MalformedLine,
                           path + ": line " + std::to_string(line_no) + " is not valid JSON");
        }
        try {
            records.push_back(record_from_json(j));
        } catch (const DgiError&) {
            throw;
        } catch (const std::exception& e) {
            throw DgiError(Errc::MalformedLine,
                           path + ": line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

std::size_t word_count(const std::string& text) {
    std::size_t count = 0;
    bool in_word = false;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++count;
        }
    }
    return count;
}

DatasetStats compute_stats(const std::vector<VideoRecord>& records) {
    if (records.empty()) throw DgiError(Errc::EmptyDataset, "no records");
    DatasetStats s;
    s.video_count = records.size();
    double length_sum = 0.0;
    double word_sum = 0.0;
    for (const auto& r : records) {
        length_sum += r.clip_length_s();
        for (const auto& q : r.counterfactual_questions) {
            ++s.qa_count;
            word_sum += static_cast<double>(word_count(q.question));
        }
    }
    s.avg_clip_length_s = length_sum / static_cast<double>(s.video_count);
    s.avg_question_words =
        s.qa_count == 0 ? 0.0 : word_sum / static_cast<double>(s.qa_count);
    s.avg_qa_per_video =
        static_cast<double>(s.qa_count) / static_cast<double>(s.video_count);
    return s;
}

namespace {
double round2(double v) { return std::round(v * 100.0) / 100.0; }
std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}
}  // namespace

json stats_to_json(const DatasetStats& stats) {
    return json{{"video_count", stats.video_count},
                {"qa_count", stats.qa_count},
                {"avg_clip_length_s", round2(stats.avg_clip_length_s)},
                {"avg_question_words", round2(stats.avg_question_words)},
                {"avg_qa_per_video", round2(stats.avg_qa_per_video)}};
}

std::string stats_to_csv(const DatasetStats& stats) {
    std::string out = "statistic,value\n";
    out += "video_count," + std::to_string(stats.video_count) + "\n";
    out += "qa_count," + std::to_string(stats.qa_count) + "\n";
    out += "avg_clip_length_s," + fmt2(stats.avg_clip_length_s) + "\n";
    out += "avg_question_words," + fmt2(stats.avg_question_words) + "\n";
    out += "avg_qa_per_video," + fmt2(stats.avg_qa_per_video) + "\n";
    return out;
}

}  // namespace dgi
