// dgi: validate causal graphs, generate dynamic counterfactual QA subsets,
// evaluate models over a benchmark, and report subset metrics.
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dgi/annotations.hpp"
#include "dgi/benchmark_io.hpp"
#include "dgi/dgm.hpp"
#include "dgi/eval.hpp"
#include "dgi/graph_json.hpp"
#include "dgi/graph_text.hpp"
#include "dgi/qa_generate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

int exit_code_for(const dgi::DgiError& e) {
    switch (e.code()) {
        case dgi::Errc::Io:
        case dgi::Errc::ConfigError:
            return kExitUsage;
        default:
            return kExitDomain;
    }
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    json j = json::parse(dgi::read_text_file(path), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw dgi::DgiError(dgi::Errc::ConfigError, "config " + path + " is not a JSON object");
    }
    return j;
}

// Config values take precedence over flags.
template <typename T>
void override_from(const json& config, const char* key, T& value) {
    if (config.contains(key)) value = config.at(key).get<T>();
}

std::vector<dgi::Subset> parse_subsets(const std::string& csv) {
    std::vector<dgi::Subset> out;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        auto subset = dgi::try_parse_subset(token);
        if (!subset) {
            throw dgi::DgiError(dgi::Errc::ConfigError, "unknown subset '" + token + "'");
        }
        if (std::find(out.begin(), out.end(), *subset) == out.end()) out.push_back(*subset);
    }
    if (out.empty()) throw dgi::DgiError(dgi::Errc::ConfigError, "no subsets selected");
    return out;
}

// Backend ids: "mock" (canned question fallback), "mock-yes" / "mock-no"
// (fixed answers), "mock:<path>" (scripted from a JSON file), anything else
// is looked up under "backends" in the config file.
std::unique_ptr<dgi::DgmBackend> resolve_backend(const std::string& id, const json& config) {
    if (id == "mock") return dgi::make_mock_backend({});
    if (id == "mock-yes") return dgi::make_mock_backend({}, "Y");
    if (id == "mock-no") return dgi::make_mock_backend({}, "N");
    if (id.rfind("mock:", 0) == 0) {
        json spec = json::parse(dgi::read_text_file(id.substr(5)), nullptr, false);
        if (spec.is_discarded() || !spec.is_object()) {
            throw dgi::DgiError(dgi::Errc::ConfigError, "mock script file is not a JSON object");
        }
        std::vector<std::pair<std::string, std::string>> script;
        if (spec.contains("script")) {
            for (const auto& entry : spec["script"]) {
                script.emplace_back(entry.at(0).get<std::string>(),
                                    entry.at(1).get<std::string>());
            }
        }
        std::string fallback = spec.value("fallback", std::string{"Y"});
        return dgi::make_mock_backend(std::move(script), std::move(fallback));
    }

    if (!config.contains("backends") || !config["backends"].contains(id)) {
        throw dgi::DgiError(dgi::Errc::ConfigError,
                            "backend '" + id + "' is not configured (add it under \"backends\")");
    }
    dgi::BackendConfig bc = dgi::backend_config_from_json(id, config["backends"][id]);
    if (!bc.credential_env.empty() &&
        (std::getenv(bc.credential_env.c_str()) == nullptr ||
         *std::getenv(bc.credential_env.c_str()) == '\0')) {
        throw dgi::DgiError(dgi::Errc::ConfigError, "credential env var " + bc.credential_env +
                                                        " is not set for backend " + id);
    }
    return dgi::make_remote_backend(std::move(bc));
}

// --- validate ---------------------------------------------------------------

// Unreadable files abort with an I/O error; content problems count as
// violations.
void validate_path(const fs::path& path, int& violations) {
    std::string ext = path.extension().string();
    if (ext != ".txt" && ext != ".vgraph" && ext != ".json" && ext != ".jsonl") return;
    std::string text = dgi::read_text_file(path.string());
    try {
        if (ext == ".json") {
            json j = json::parse(text, nullptr, false);
            if (j.is_discarded()) {
                throw dgi::DgiError(dgi::Errc::MalformedLine, "not valid JSON");
            }
            dgi::graph_from_json(j);
        } else if (ext == ".jsonl") {
            dgi::parse_benchmark_lines(text);
        } else {
            dgi::parse_graph(text);
        }
    } catch (const std::exception& e) {
        std::cout << path.string() << ": " << e.what() << "\n";
        ++violations;
    }
}

int cmd_validate(const std::vector<std::string>& paths) {
    int violations = 0;
    for (const auto& p : paths) {
        fs::path path(p);
        if (!fs::exists(path)) {
            std::cerr << "dgi: no such path: " << p << "\n";
            return kExitUsage;
        }
        if (fs::is_directory(path)) {
            for (const auto& entry : fs::recursive_directory_iterator(path)) {
                if (entry.is_regular_file()) validate_path(entry.path(), violations);
            }
        } else {
            validate_path(path, violations);
        }
    }
    if (violations > 0) {
        std::cout << violations << " violation(s)\n";
        return kExitDomain;
    }
    std::cout << "ok\n";
    return kExitOk;
}

// --- generate ---------------------------------------------------------------

struct GenerateArgs {
    std::string items_path;
    std::string out_path;
    std::string failures_path;
    std::string subsets_csv = "l1n,l2n,l2y";
    std::uint64_t seed = 0;
    std::string dgm_id = "mock";
    std::string config_path;
    std::string timestamp;
    int parallelism = 1;
    bool per_entry_point = false;
    bool include_static = false;
    bool l1n_dgm = false;
    bool shortcut = false;
};

int cmd_generate(GenerateArgs args) {
    json config = load_config(args.config_path);
    override_from(config, "seed", args.seed);
    override_from(config, "subsets", args.subsets_csv);
    override_from(config, "dgm", args.dgm_id);
    override_from(config, "out", args.out_path);
    override_from(config, "parallelism", args.parallelism);
    override_from(config, "timestamp", args.timestamp);

    auto dgm = resolve_backend(args.dgm_id, config);

    dgi::BenchmarkFile input = dgi::load_benchmark(args.items_path);
    std::vector<dgi::StaticQAItem> items;
    for (auto& item : input.items) {
        if (auto* s = std::get_if<dgi::StaticQAItem>(&item)) items.push_back(std::move(*s));
    }
    if (items.empty()) {
        std::cerr << "dgi: no static items in " << args.items_path << "\n";
        return kExitDomain;
    }

    dgi::GenerationConfig gen;
    gen.subsets = parse_subsets(args.subsets_csv);
    gen.seed = args.seed;
    gen.l2n_per_entry_point = args.per_entry_point;
    gen.l1n_use_dgm = args.l1n_dgm;
    gen.use_shortcut_filter = args.shortcut;
    gen.timestamp = args.timestamp;
    gen.parallelism = args.parallelism;

    // materialize graphs through the DGM where they are missing
    std::vector<dgi::StaticQAItem> ready;
    std::vector<dgi::GenerationFailure> failures;
    for (auto& item : items) {
        if (!item.has_graphs()) {
            try {
                auto inputs = dgi::extraction_inputs(item);
                std::vector<dgi::MediaRef> media;
                if (!item.video.clip_id.empty()) {
                    media.push_back(
                        dgi::MediaRef{dgi::MediaRef::Kind::Video, item.video.clip_id, {}});
                }
                if (!item.static_graph) {
                    item.static_graph = dgi::extract_static_graph(inputs, media, *dgm);
                }
                if (!item.intervention_graph) {
                    item.intervention_graph =
                        dgi::extract_intervention_graph(inputs, item, media, *dgm);
                }
            } catch (const dgi::DgiError& e) {
                failures.push_back({item.item_id, "extraction", e.what()});
                continue;
            }
        }
        ready.push_back(std::move(item));
    }

    dgi::BatchResult result = dgi::run_generation_batch(ready, gen, *dgm);
    result.failures.insert(result.failures.begin(), failures.begin(), failures.end());

    if (args.include_static) {
        dgi::BenchmarkFile merged;
        for (const auto& item : ready) merged.items.push_back(item);
        for (const auto& item : result.benchmark.items) merged.items.push_back(item);
        result.benchmark = std::move(merged);
    }

    dgi::save_benchmark(result.benchmark, args.out_path);
    if (!args.failures_path.empty()) {
        dgi::save_failures(result.failures, args.failures_path);
    }

    std::map<std::string, int> counts;
    for (const auto& item : result.benchmark.items) {
        counts[dgi::subset_token(dgi::item_subset(item))]++;
    }
    for (const auto& [subset, count] : counts) {
        std::cout << subset << ": " << count << "\n";
    }
    std::cout << "failures: " << result.failures.size() << "\n";
    return result.benchmark.items.empty() ? kExitDomain : kExitOk;
}

// --- eval / report ----------------------------------------------------------

struct EvalArgs {
    std::string benchmark_path;
    std::string out_path;
    std::string model_id = "mock-yes";
    std::string config_path;
    int parallelism = 1;
    double frames_interval = 2.0;
    int max_frames = 16;
};

int cmd_eval(EvalArgs args) {
    json config = load_config(args.config_path);
    override_from(config, "model", args.model_id);
    override_from(config, "parallelism", args.parallelism);
    override_from(config, "frames_interval", args.frames_interval);
    override_from(config, "max_frames", args.max_frames);
    override_from(config, "out", args.out_path);

    auto model = resolve_backend(args.model_id, config);
    dgi::BenchmarkFile benchmark = dgi::load_benchmark(args.benchmark_path);

    dgi::EvalOptions options;
    options.parallelism = args.parallelism;
    options.frames_interval_s = args.frames_interval;
    options.max_frames = args.max_frames;

    auto predictions = dgi::run_eval(benchmark, *model, options);
    dgi::save_predictions(predictions, args.out_path);
    std::cout << predictions.size() << " predictions -> " << args.out_path << "\n";
    return kExitOk;
}

struct ReportArgs {
    std::string benchmark_path;
    std::string predictions_path;
    std::string out_path;
    std::string csv_path;
};

int cmd_report(const ReportArgs& args) {
    dgi::BenchmarkFile benchmark = dgi::load_benchmark(args.benchmark_path);
    auto predictions = dgi::load_predictions(args.predictions_path);
    dgi::MetricsReport report = dgi::compute_metrics(predictions, benchmark);

    std::cout << dgi::report_to_table(report);
    std::cout << "items: " << report.total << ", unparseable: " << report.unparseable << "\n";
    if (!args.out_path.empty()) {
        dgi::write_text_file(args.out_path, dgi::report_to_json(report).dump(2) + "\n");
    }
    if (!args.csv_path.empty()) {
        dgi::write_text_file(args.csv_path, dgi::report_to_csv(report));
    }
    return kExitOk;
}

// --- stats / ingest ---------------------------------------------------------

int cmd_stats(const std::string& records_path, const std::string& out_path,
              const std::string& csv_path) {
    auto records = dgi::load_records(records_path);
    dgi::DatasetStats stats = dgi::compute_stats(records);
    std::string rendered = dgi::stats_to_json(stats).dump(2) + "\n";
    std::cout << rendered;
    if (!out_path.empty()) dgi::write_text_file(out_path, rendered);
    if (!csv_path.empty()) dgi::write_text_file(csv_path, dgi::stats_to_csv(stats));
    return kExitOk;
}

int cmd_ingest(const std::string& records_path, const std::string& out_path) {
    auto records = dgi::load_records(records_path);
    dgi::BenchmarkFile file;
    for (std::size_t i = 0; i < records.size(); ++i) {
        for (auto& item : dgi::make_static_items(records[i], "rec-" + std::to_string(i))) {
            file.items.push_back(std::move(item));
        }
    }
    dgi::save_benchmark(file, out_path);
    std::cout << file.items.size() << " static items -> " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic graph intervention benchmark toolkit"};
    app.require_subcommand(1);

    // validate
    auto* validate = app.add_subcommand("validate", "Validate causal graph files");
    std::vector<std::string> validate_paths;
    validate->add_option("paths", validate_paths, "Graph or benchmark files/directories")
        ->required();

    // generate
    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Generate dynamic QA subsets");
    generate->add_option("--items", gen.items_path, "Static items (JSON-lines)")->required();
    generate->add_option("--out", gen.out_path, "Output benchmark path")->required();
    generate->add_option("--failures", gen.failures_path, "Failure report path");
    generate->add_option("--subsets", gen.subsets_csv, "Comma list: l1n,l2n,l2y");
    generate->add_option("--seed", gen.seed, "Generation seed")->required();
    generate->add_option("--dgm", gen.dgm_id, "Generator backend id");
    generate->add_option("--config", gen.config_path, "Config file (overrides flags)");
    generate->add_option("--timestamp", gen.timestamp, "Provenance timestamp");
    generate->add_option("--parallelism", gen.parallelism, "Concurrent generation slots");
    generate->add_flag("--per-entry-point", gen.per_entry_point,
                       "Emit one L2_N item per entry point");
    generate->add_flag("--include-static", gen.include_static,
                       "Also emit the static parent items");
    generate->add_flag("--l1n-dgm", gen.l1n_dgm, "Let the DGM rephrase L1_N questions");
    generate->add_flag("--shortcut-filter", gen.shortcut, "Judge-filter generated questions");

    // eval
    EvalArgs ev;
    auto* eval = app.add_subcommand("eval", "Run a model over a benchmark");
    eval->add_option("--benchmark", ev.benchmark_path, "Benchmark (JSON-lines)")->required();
    eval->add_option("--out", ev.out_path, "Predictions output path")->required();
    eval->add_option("--model", ev.model_id, "Model backend id");
    eval->add_option("--config", ev.config_path, "Config file (overrides flags)");
    eval->add_option("--parallelism", ev.parallelism, "Concurrent model calls");
    eval->add_option("--frames-interval", ev.frames_interval, "Seconds between frames");
    eval->add_option("--max-frames", ev.max_frames, "Frame cap per clip");

    // report
    ReportArgs rep;
    auto* report = app.add_subcommand("report", "Compute metrics from predictions");
    report->add_option("--benchmark", rep.benchmark_path, "Benchmark (JSON-lines)")->required();
    report->add_option("--predictions", rep.predictions_path, "Predictions (JSON-lines)")
        ->required();
    report->add_option("--out", rep.out_path, "Report JSON path");
    report->add_option("--csv", rep.csv_path, "Report CSV path");

    // stats
    std::string stats_records, stats_out, stats_csv;
    auto* stats = app.add_subcommand("stats", "Dataset statistics over annotation records");
    stats->add_option("--records", stats_records, "Annotation records (JSON or JSON-lines)")
        ->required();
    stats->add_option("--out", stats_out, "Stats JSON path");
    stats->add_option("--csv", stats_csv, "Stats CSV path");

    // ingest
    std::string ingest_records, ingest_out;
    auto* ingest = app.add_subcommand("ingest", "Convert annotation records to static items");
    ingest->add_option("--records", ingest_records, "Annotation records")->required();
    ingest->add_option("--out", ingest_out, "Static items output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(validate_paths);
        if (generate->parsed()) return cmd_generate(gen);
        if (eval->parsed()) return cmd_eval(ev);
        if (report->parsed()) return cmd_report(rep);
        if (stats->parsed()) return cmd_stats(stats_records, stats_out, stats_csv);
        if (ingest->parsed()) return cmd_ingest(ingest_records, ingest_out);
    } catch (const dgi::DgiError& e) {
        std::cerr << "dgi: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "dgi: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
