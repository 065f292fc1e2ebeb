#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgi/benchmark_io.hpp"
#include "dgi/dgm.hpp"

namespace dgi {

/// Frame-sampling timestamps for a clip: one frame every interval_s seconds
/// when that stays within max_frames; otherwise max_frames timestamps at bin
/// midpoints (i + 0.5) * duration / max_frames, uniformly across the clip.
std::vector<double> sample_frames(double duration_s, double interval_s = 2.0,
                                  int max_frames = 16);

/// Substitutes {video}, {time} and {out} in the command pattern and runs it
/// through the shell. Returns true on exit status 0.
bool run_frame_extractor(const std::string& command_pattern, const std::string& video_path,
                         double timestamp_s, const std::string& out_path);

/// Media for one backend call: the clip reference for native-video backends,
/// sampled-frame references for everything else. Empty when the item has no
/// usable clip.
std::vector<MediaRef> plan_media(const VideoRef& video, const DgmBackend& backend,
                                 double interval_s = 2.0, int max_frames = 16);

enum class ParsedAnswer { Y, N, Unparseable };

const char* parsed_answer_token(ParsedAnswer a);

/// Case-insensitive YNQA normalization: a leading Y/Yes or N/No token
/// decides; otherwise the first standalone "yes"/"no" token; otherwise
/// Unparseable. Texts carrying the "[error]" failure marker are Unparseable
/// by definition, so error notes can never scan as answers.
ParsedAnswer parse_yn(const std::string& raw_text);

struct Prediction {
    std::string item_id;
    std::string raw_text;
    ParsedAnswer parsed = ParsedAnswer::Unparseable;
    std::int64_t latency_ms = 0;
};

struct EvalOptions {
    int parallelism = 1;
    double frames_interval_s = 2.0;
    int max_frames = 16;
};

/// One prediction per benchmark item, order preserved. Native-video backends
/// receive the clip reference; frame backends receive sampled-frame
/// references. Per-item failures are recorded as Unparseable with an error
/// note; parallelism never changes the result.
std::vector<Prediction> run_eval(const BenchmarkFile& benchmark, DgmBackend& model,
                                 const EvalOptions& options = {});

struct MetricsReport {
    // keys: L1_N, L1_Y, L2_N, L2_Y, L1, L2, All; empty cells are absent
    std::map<std::string, double> accuracy;
    // keys: L1, L2, All
    std::map<std::string, double> macro_f1;
    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;
    std::size_t unparseable = 0;
    std::map<std::string, double> category_accuracy;
    std::map<std::string, double> difficulty_accuracy;
};

/// Accuracy per subset and group plus macro-F1 over classes {Y, N} per
/// group. Unparseable predictions count as incorrect for accuracy and score
/// as the negation of the gold label for F1. Throws CoverageMismatch unless
/// predictions cover the benchmark exactly once.
MetricsReport compute_metrics(const std::vector<Prediction>& predictions,
                              const BenchmarkFile& benchmark);

/// Accuracy per causality category and per difficulty class; empty cells are
/// absent, items without a category land under "Unknown".
void category_breakdown(const std::vector<Prediction>& predictions,
                        const BenchmarkFile& benchmark,
                        std::map<std::string, double>& by_category,
                        std::map<std::string, double>& by_difficulty);

std::string predictions_to_lines(const std::vector<Prediction>& predictions);
std::vector<Prediction> parse_prediction_lines(const std::string& text);
void save_predictions(const std::vector<Prediction>& predictions, const std::string& path);
std::vector<Prediction> load_predictions(const std::string& path);

nlohmann::json report_to_json(const MetricsReport& report);
std::string report_to_csv(const MetricsReport& report);
/// Console table with the column layout ACC: L1_N L1_Y L2_N L2_Y L1 L2 All,
/// F1: L1 L2 All. Cell values match the CSV exactly.
std::string report_to_table(const MetricsReport& report);

}  // namespace dgi
