#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "repelcircle/errors.hpp"
#include "repelcircle/experiments.hpp"

namespace repelcircle {

using json = nlohmann::ordered_json;

/// Shortest decimal representation that parses back to the same bits.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// {experiment}-{n}-{beta}-{seed}, the stem every output file shares.
inline std::string file_stem(const std::string& experiment, int n, double beta,
                             std::uint64_t seed) {
    return experiment + "-" + std::to_string(n) + "-" + format_double(beta) + "-" +
           std::to_string(seed);
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

/// Rows joined by ',' and '\n'; cells are expected to be plain tokens
/// (numbers, identifiers), so no quoting is applied.
class CsvBuilder {
public:
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) buf_ += ',';
            buf_ += cells[i];
        }
        buf_ += '\n';
    }
    const std::string& str() const { return buf_; }

private:
    std::string buf_;
};

inline json report_to_json(const ExperimentReport& rep) {
    json j;
    j["name"] = rep.name;
    j["n"] = rep.n;
    j["beta"] = rep.beta;
    j["replicas"] = rep.replicas;
    json stats = json::object();
    for (const auto& c : rep.checks) {
        stats[c.name] = c.value;
        stats[c.name + "_target"] = c.target;
        stats[c.name + "_tolerance"] = c.tolerance;
    }
    for (const auto& [k, v] : rep.extras) {
        stats[k] = v;
    }
    j["statistics"] = stats;
    j["pass"] = rep.pass;
    return j;
}

/// Inverse of report_to_json: keys carrying a _target/_tolerance pair
/// are checks, everything else lands in extras. Check/extra names are
/// chosen so the two namespaces never collide.
inline ExperimentReport report_from_json(const json& j) {
    ExperimentReport rep;
    rep.name = j.at("name").get<std::string>();
    rep.n = j.at("n").get<int>();
    rep.beta = j.at("beta").get<double>();
    rep.replicas = j.at("replicas").get<long long>();
    const auto& stats = j.at("statistics");
    for (auto it = stats.begin(); it != stats.end(); ++it) {
        const std::string& key = it.key();
        if (key.ends_with("_target") || key.ends_with("_tolerance")) {
            continue;
        }
        if (stats.contains(key + "_target") && stats.contains(key + "_tolerance")) {
            rep.checks.push_back({key, it.value().get<double>(),
                                  stats.at(key + "_target").get<double>(),
                                  stats.at(key + "_tolerance").get<double>()});
        } else {
            rep.extras[key] = it.value().get<double>();
        }
    }
    rep.pass = j.at("pass").get<bool>();
    return rep;
}

}  // namespace repelcircle
