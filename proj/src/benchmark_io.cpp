#include "dgi/benchmark_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace dgi {

using nlohmann::json;

BenchmarkFile parse_benchmark_lines(const std::string& text) {
    BenchmarkFile file;
    std::set<std::string> ids;
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw DgiError(Errc::MalformedLine,
                           "line " + std::to_string(line_no) + " is not valid JSON");
        }
        try {
            file.items.push_back(item_from_json(j));
        } catch (const DgiError& e) {
            if (e.code() == Errc::SchemaMismatch) throw;
            throw DgiError(Errc::MalformedLine,
                           "line " + std::to_string(line_no) + ": " + e.what());
        } catch (const std::exception& e) {
            throw DgiError(Errc::MalformedLine,
                           "line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!ids.insert(item_id(file.items.back())).second) {
            throw DgiError(Errc::MalformedLine, "line " + std::to_string(line_no) +
                                                    ": duplicate item id " +
                                                    item_id(file.items.back()));
        }
    }
    return file;
}

std::string benchmark_to_lines(const BenchmarkFile& file) {
    std::string out;
    for (const auto& item : file.items) {
        out += item_to_json(item).dump();
        out += '\n';
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DgiError(Errc::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DgiError(Errc::Io, "cannot write " + path);
    out << content;
    if (!out) throw DgiError(Errc::Io, "write to " + path + " failed");
}

BenchmarkFile load_benchmark(const std::string& path) {
    return parse_benchmark_lines(read_text_file(path));
}

void save_benchmark(const BenchmarkFile& file, const std::string& path) {
    write_text_file(path, benchmark_to_lines(file));
}

std::string failures_to_lines(const std::vector<GenerationFailure>& failures) {
    std::string out;
    for (const auto& f : failures) {
        out += json{{"item_id", f.item_id}, {"subset", f.subset}, {"error", f.error}}.dump();
        out += '\n';
    }
    return out;
}

void save_failures(const std::vector<GenerationFailure>& failures, const std::string& path) {
    write_text_file(path, failures_to_lines(failures));
}

}  // namespace dgi
