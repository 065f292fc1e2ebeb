#pragma once

#include <string>
#include <vector>

#include "dgi/qa_items.hpp"

namespace dgi {

struct BenchmarkFile {
    std::vector<BenchmarkItem> items;
};

// JSON-lines, one item per line, every line self-describing via the schema
// field. Round trip is loss-free; keys are emitted in canonical (sorted)
// order so identical content yields identical bytes.
BenchmarkFile parse_benchmark_lines(const std::string& text);
std::string benchmark_to_lines(const BenchmarkFile& file);

BenchmarkFile load_benchmark(const std::string& path);
void save_benchmark(const BenchmarkFile& file, const std::string& path);

struct GenerationFailure {
    std::string item_id;
    std::string subset;
    std::string error;
};

std::string failures_to_lines(const std::vector<GenerationFailure>& failures);
void save_failures(const std::vector<GenerationFailure>& failures, const std::string& path);

std::string read_text_file(const std::string& path);   // throws Errc::Io
void write_text_file(const std::string& path, const std::string& content);

}  // namespace dgi
