#pragma once
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace percotool {

inline constexpr const char* TOOL_VERSION = "0.1.0";

// Fixed formatting so payloads are byte-stable across runs and worker counts.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::uint64_t fnv64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

class Csv {
public:
    explicit Csv(std::vector<std::string> header) : cols_(header.size()) {
        append_row(header);
    }
    void row(const std::vector<std::string>& cells) { append_row(cells); }
    const std::string& str() const { return body_; }

private:
    void append_row(const std::vector<std::string>& cells) {
        if (cells.size() != cols_) throw std::logic_error("csv row arity mismatch");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) body_ += ',';
            body_ += cells[i];
        }
        body_ += '\n';
    }
    std::size_t cols_;
    std::string body_;
};

struct RunOutput {
    nlohmann::json records = nlohmann::json::array();
    std::string csv;
    nlohmann::json flags = nlohmann::json::object();  // completeness / provenance
};

struct Manifest {
    std::vector<std::string> command;
    int workers = 1;
    double wallclock_seconds = 0;
    RunOutput out;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["tool"] = "perco-iso";
        j["version"] = TOOL_VERSION;
        j["command"] = command;
        j["workers"] = workers;
        j["wallclock_seconds"] = wallclock_seconds;
        j["flags"] = out.flags;
        j["csv"] = out.csv;
        j["csv_fnv64"] = fnv64(out.csv);
        j["records"] = out.records;
        return j;
    }
};

inline std::filesystem::path output_dir(const std::string& cli_out) {
    if (!cli_out.empty()) return cli_out;
    if (const char* env = std::getenv("PERCO_ISO_OUT")) return env;
    return "out";
}

inline void write_outputs(const Manifest& m, const std::filesystem::path& dir,
                          const std::string& name) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / (name + ".json"));
        f << m.to_json().dump(2) << "\n";
    }
    if (!m.out.csv.empty()) {
        std::ofstream f(dir / (name + ".csv"));
        f << m.out.csv;
    }
}

}  // namespace percotool
