#include "dgi/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>
#include <thread>

namespace dgi {

using nlohmann::json;

static constexpr const char* kErrorMarker = "[error]";

std::vector<double> sample_frames(double duration_s, double interval_s, int max_frames) {
    if (duration_s <= 0.0) {
        throw DgiError(Errc::NonPositiveDuration,
                       "duration " + std::to_string(duration_s) + " s");
    }
    if (interval_s <= 0.0 || max_frames < 1) {
        throw DgiError(Errc::ConfigError, "interval must be > 0 and max frames >= 1");
    }

    std::vector<double> timestamps;
    double interval_count = std::floor(duration_s / interval_s) + 1.0;
    if (interval_count <= static_cast<double>(max_frames)) {
        for (long i = 0; i < static_cast<long>(interval_count); ++i) {
            timestamps.push_back(static_cast<double>(i) * interval_s);
        }
    } else {
        // longer clips: bin midpoints, uniformly across the entire clip
        for (int i = 0; i < max_frames; ++i) {
            timestamps.push_back((i + 0.5) * duration_s / max_frames);
        }
    }
    return timestamps;
}

bool run_frame_extractor(const std::string& command_pattern, const std::string& video_path,
                         double timestamp_s, const std::string& out_path) {
    char stamp[32];
    std::snprintf(stamp, sizeof(stamp), "%.3f", timestamp_s);
    std::string cmd = command_pattern;
    auto substitute = [&cmd](const std::string& key, const std::string& value) {
        std::size_t pos;
        while ((pos = cmd.find(key)) != std::string::npos) {
            cmd.replace(pos, key.size(), value);
        }
    };
    substitute("{video}", video_path);
    substitute("{time}", stamp);
    substitute("{out}", out_path);
    return std::system(cmd.c_str()) == 0;
}

const char* parsed_answer_token(ParsedAnswer a) {
    switch (a) {
        case ParsedAnswer::Y: return "Y";
        case ParsedAnswer::N: return "N";
        case ParsedAnswer::Unparseable: return "Unparseable";
    }
    return "?";
}

ParsedAnswer parse_yn(const std::string& raw_text) {
    if (raw_text.rfind(kErrorMarker, 0) == 0) return ParsedAnswer::Unparseable;

    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : raw_text) {
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    if (tokens.empty()) return ParsedAnswer::Unparseable;

    if (tokens[0] == "y" || tokens[0] == "yes") return ParsedAnswer::Y;
    if (tokens[0] == "n" || tokens[0] == "no") return ParsedAnswer::N;
    for (const auto& t : tokens) {
        if (t == "yes") return ParsedAnswer::Y;
        if (t == "no") return ParsedAnswer::N;
    }
    return ParsedAnswer::Unparseable;
}

std::vector<MediaRef> plan_media(const VideoRef& video, const DgmBackend& backend,
                                 double interval_s, int max_frames) {
    std::vector<MediaRef> media;
    if (video.clip_id.empty() || video.duration_s() <= 0.0) return media;
    if (backend.native_video()) {
        media.push_back(MediaRef{MediaRef::Kind::Video, video.clip_id, std::nullopt});
        return media;
    }
    for (double t : sample_frames(video.duration_s(), interval_s, max_frames)) {
        media.push_back(MediaRef{MediaRef::Kind::Frame, video.clip_id, t});
    }
    return media;
}

namespace {

Prediction predict_one(const BenchmarkItem& item, DgmBackend& model,
                       const EvalOptions& options) {
    Prediction p;
    p.item_id = item_id(item);
    try {
        GenerationRequest request;
        request.prompt = item_question(item);
        request.backend_id = model.id();
        request.media = plan_media(item_video(item), model, options.frames_interval_s,
                                   options.max_frames);
        Completion reply = model.complete(request);
        p.raw_text = reply.text;
        p.parsed = parse_yn(reply.text);
        p.latency_ms = reply.usage.latency_ms;
    } catch (const DgiError& e) {
        p.raw_text = std::string(kErrorMarker) + " " + e.what();
        p.parsed = ParsedAnswer::Unparseable;
    }
    return p;
}

}  // namespace

std::vector<Prediction> run_eval(const BenchmarkFile& benchmark, DgmBackend& model,
                                 const EvalOptions& options) {
    std::vector<Prediction> predictions(benchmark.items.size());
    int workers = std::max(1, options.parallelism);
    if (workers == 1 || benchmark.items.size() <= 1) {
        for (std::size_t i = 0; i < benchmark.items.size(); ++i) {
            predictions[i] = predict_one(benchmark.items[i], model, options);
        }
        return predictions;
    }
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= benchmark.items.size()) break;
            predictions[i] = predict_one(benchmark.items[i], model, options);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return predictions;
}

namespace {

struct Tally {
    std::size_t total = 0;
    std::size_t correct = 0;
    // confusion counts per class, with unparseable scored as the negation of
    // the gold label
    std::size_t tp_y = 0, fp_y = 0, fn_y = 0;
    std::size_t tp_n = 0, fp_n = 0, fn_n = 0;

    void add(GoldLabel gold, ParsedAnswer pred) {
        ++total;
        GoldLabel effective;
        if (pred == ParsedAnswer::Y) {
            effective = GoldLabel::Y;
        } else if (pred == ParsedAnswer::N) {
            effective = GoldLabel::N;
        } else {
            effective = gold == GoldLabel::Y ? GoldLabel::N : GoldLabel::Y;
        }
        if (pred != ParsedAnswer::Unparseable && effective == gold) ++correct;

        if (gold == GoldLabel::Y && effective == GoldLabel::Y) ++tp_y;
        if (gold == GoldLabel::N && effective == GoldLabel::Y) ++fp_y;
        if (gold == GoldLabel::Y && effective == GoldLabel::N) ++fn_y;
        if (gold == GoldLabel::N && effective == GoldLabel::N) ++tp_n;
        if (gold == GoldLabel::Y && effective == GoldLabel::N) ++fp_n;
        if (gold == GoldLabel::N && effective == GoldLabel::Y) ++fn_n;
    }

    double accuracy() const {
        return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
    }

    static double f1(std::size_t tp, std::size_t fp, std::size_t fn) {
        double p = (tp + fp) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
        double r = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
        return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
    }

    double macro_f1() const { return (f1(tp_y, fp_y, fn_y) + f1(tp_n, fp_n, fn_n)) / 2.0; }
};

}  // namespace

MetricsReport compute_metrics(const std::vector<Prediction>& predictions,
                              const BenchmarkFile& benchmark) {
    if (predictions.size() != benchmark.items.size()) {
        throw DgiError(Errc::CoverageMismatch,
                       std::to_string(predictions.size()) + " predictions for " +
                           std::to_string(benchmark.items.size()) + " items");
    }
    std::map<std::string, const Prediction*> by_id;
    for (const auto& p : predictions) {
        if (!by_id.emplace(p.item_id, &p).second) {
            throw DgiError(Errc::CoverageMismatch, "duplicate prediction for " + p.item_id);
        }
    }
    std::set<std::string> consumed;

    std::map<std::string, Tally> tallies;  // subset tags and groups
    MetricsReport report;
    for (const auto& item : benchmark.items) {
        auto it = by_id.find(item_id(item));
        if (it == by_id.end()) {
            throw DgiError(Errc::CoverageMismatch, "no prediction for " + item_id(item));
        }
        if (!consumed.insert(item_id(item)).second) {
            throw DgiError(Errc::CoverageMismatch,
                           "benchmark lists " + item_id(item) + " more than once");
        }
        const Prediction& pred = *it->second;
        GoldLabel gold = item_gold(item);
        Subset subset = item_subset(item);

        tallies[subset_token(subset)].add(gold, pred.parsed);
        bool is_l1 = subset == Subset::L1_N || subset == Subset::L1_Y;
        tallies[is_l1 ? "L1" : "L2"].add(gold, pred.parsed);
        tallies["All"].add(gold, pred.parsed);

        ++report.total;
        if (pred.parsed == ParsedAnswer::Unparseable) ++report.unparseable;
    }

    for (const auto& [key, tally] : tallies) {
        report.accuracy[key] = tally.accuracy();
        report.counts[key] = tally.total;
    }
    for (const char* group : {"L1", "L2", "All"}) {
        auto it = tallies.find(group);
        if (it != tallies.end()) report.macro_f1[group] = it->second.macro_f1();
    }
    category_breakdown(predictions, benchmark, report.category_accuracy,
                       report.difficulty_accuracy);
    return report;
}

void category_breakdown(const std::vector<Prediction>& predictions,
                        const BenchmarkFile& benchmark,
                        std::map<std::string, double>& by_category,
                        std::map<std::string, double>& by_difficulty) {
    std::map<std::string, const Prediction*> by_id;
    for (const auto& p : predictions) by_id[p.item_id] = &p;

    std::map<std::string, Tally> categories;
    std::map<std::string, Tally> difficulties;
    for (const auto& item : benchmark.items) {
        auto it = by_id.find(item_id(item));
        if (it == by_id.end()) continue;
        GoldLabel gold = item_gold(item);
        ParsedAnswer pred = it->second->parsed;
        categories[category_token(item_category(item))].add(gold, pred);
        difficulties[difficulty_token(item_difficulty(item))].add(gold, pred);
    }
    by_category.clear();
    by_difficulty.clear();
    for (const auto& [key, tally] : categories) by_category[key] = tally.accuracy();
    for (const auto& [key, tally] : difficulties) by_difficulty[key] = tally.accuracy();
}

std::string predictions_to_lines(const std::vector<Prediction>& predictions) {
    std::string out;
    for (const auto& p : predictions) {
        out += json{{"item_id", p.item_id},
                    {"raw_text", p.raw_text},
                    {"parsed", parsed_answer_token(p.parsed)},
                    {"latency_ms", p.latency_ms}}
                   .dump();
        out += '\n';
    }
    return out;
}

std::vector<Prediction> parse_prediction_lines(const std::string& text) {
    std::vector<Prediction> out;
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw DgiError(Errc::MalformedLine,
                           "prediction line " + std::to_string(line_no) + " is not valid JSON");
        }
        try {
            Prediction p;
            p.item_id = j.at("item_id").get<std::string>();
            p.raw_text = j.at("raw_text").get<std::string>();
            std::string parsed = j.at("parsed").get<std::string>();
            if (parsed == "Y") {
                p.parsed = ParsedAnswer::Y;
            } else if (parsed == "N") {
                p.parsed = ParsedAnswer::N;
            } else if (parsed == "Unparseable") {
                p.parsed = ParsedAnswer::Unparseable;
            } else {
                throw DgiError(Errc::MalformedLine, "prediction line " +
                                                        std::to_string(line_no) +
                                                        " has bad parsed value '" + parsed + "'");
            }
            p.latency_ms = j.value("latency_ms", static_cast<std::int64_t>(0));
            out.push_back(std::move(p));
        } catch (const DgiError&) {
            throw;
        } catch (const std::exception& e) {
            throw DgiError(Errc::MalformedLine,
                           "prediction line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void save_predictions(const std::vector<Prediction>& predictions, const std::string& path) {
    write_text_file(path, predictions_to_lines(predictions));
}

std::vector<Prediction> load_predictions(const std::string& path) {
    return parse_prediction_lines(read_text_file(path));
}

namespace {

std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

const std::vector<std::string>& acc_columns() {
    static const std::vector<std::string> cols = {"L1_N", "L1_Y", "L2_N", "L2_Y",
                                                  "L1",   "L2",   "All"};
    return cols;
}

const std::vector<std::string>& f1_columns() {
    static const std::vector<std::string> cols = {"L1", "L2", "All"};
    return cols;
}

}  // namespace

json report_to_json(const MetricsReport& report) {
    json out;
    out["accuracy"] = report.accuracy;
    out["macro_f1"] = report.macro_f1;
    out["counts"] = report.counts;
    out["total"] = report.total;
    out["unparseable"] = report.unparseable;
    out["category_accuracy"] = report.category_accuracy;
    out["difficulty_accuracy"] = report.difficulty_accuracy;
    return out;
}

std::string report_to_csv(const MetricsReport& report) {
    std::string out = "table,cell,value\n";
    for (const auto& col : acc_columns()) {
        auto it = report.accuracy.find(col);
        out += "acc," + col + "," + (it == report.accuracy.end() ? "-" : fmt4(it->second)) + "\n";
    }
    for (const auto& col : f1_columns()) {
        auto it = report.macro_f1.find(col);
        out += "f1," + col + "," + (it == report.macro_f1.end() ? "-" : fmt4(it->second)) + "\n";
    }
    for (const auto& [key, value] : report.category_accuracy) {
        out += "category," + key + "," + fmt4(value) + "\n";
    }
    for (const auto& [key, value] : report.difficulty_accuracy) {
        out += "difficulty," + key + "," + fmt4(value) + "\n";
    }
    return out;
}

std::string report_to_table(const MetricsReport& report) {
    auto cell = [](const std::map<std::string, double>& table, const std::string& key) {
        auto it = table.find(key);
        return it == table.end() ? std::string("-") : fmt4(it->second);
    };
    auto pad = [](const std::string& s) {
        std::string out = s;
        while (out.size() < 8) out.insert(out.begin(), ' ');
        return out + "  ";
    };
    std::ostringstream out;
    for (const auto& col : acc_columns()) out << pad(col);
    for (const auto& col : f1_columns()) out << pad("F1:" + col);
    out << "\n";
    for (const auto& col : acc_columns()) out << pad(cell(report.accuracy, col));
    for (const auto& col : f1_columns()) out << pad(cell(report.macro_f1, col));
    out << "\n";
    return out.str();
}

}  // namespace dgi
