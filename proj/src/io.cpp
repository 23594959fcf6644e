#include "qleak/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qleak::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message, std::size_t line) {
    throw ParseError("line " + std::to_string(line) + ": " + message);
}

// nlohmann reports byte offsets; convert to a line number for error anchoring.
std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(e.what(), line_of_offset(text, e.byte));
    }
}

// Accepts a plain number or an exact fraction "a/b".
double parse_probability(const json& value) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) {
        const std::string s = value.get<std::string>();
        auto slash = s.find('/');
        if (slash == std::string::npos || slash == 0 || slash + 1 == s.size()) {
            throw ParseError("malformed fraction \"" + s + "\"");
        }
        std::size_t used_num = 0, used_den = 0;
        long long num = std::stoll(s.substr(0, slash), &used_num);
        long long den = std::stoll(s.substr(slash + 1), &used_den);
        if (used_num != slash || used_den != s.size() - slash - 1 || den == 0) {
            throw ParseError("malformed fraction \"" + s + "\"");
        }
        return static_cast<double>(num) / static_cast<double>(den);
    }
    throw ParseError("probability entry must be a number or fraction string");
}

std::vector<std::string> parse_alphabet(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_array()) {
        throw ParseError(std::string("missing or non-array \"") + key + "\"");
    }
    std::vector<std::string> out;
    for (const auto& entry : doc[key]) {
        if (!entry.is_string()) {
            throw ParseError(std::string("\"") + key + "\" entries must be strings");
        }
        out.push_back(entry.get<std::string>());
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

JointDistribution load_distribution(const std::string& text) {
    json doc = parse_document(text);
    if (!doc.is_object()) throw ParseError("distribution document must be an object");
    auto xs = parse_alphabet(doc, "x_alphabet");
    auto ys = parse_alphabet(doc, "y_alphabet");
    if (!doc.contains("probs") || !doc["probs"].is_array()) {
        throw ParseError("missing or non-array \"probs\"");
    }
    const auto& rows = doc["probs"];
    if (rows.size() != xs.size()) {
        throw ParseError("\"probs\" has " + std::to_string(rows.size()) + " rows, expected " +
                         std::to_string(xs.size()));
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array() || rows[i].size() != ys.size()) {
            throw ParseError("row " + std::to_string(i) + " has wrong length");
        }
        for (std::size_t j = 0; j < ys.size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                parse_probability(rows[i][j]);
        }
    }
    try {
        return JointDistribution(std::move(xs), std::move(ys), std::move(m));
    } catch (const NonDistribution& e) {
        throw ParseError(std::string("invalid distribution: ") + e.what());
    }
}

JointDistribution load_distribution_file(const std::string& path) {
    return load_distribution(read_file(path));
}

PhaseFunction load_phases(const std::string& text, const JointDistribution& d) {
    json doc = parse_document(text);
    if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
        throw ParseError("phase document must be an object with an \"entries\" array");
    }
    std::map<std::string, Eigen::Index> x_index, y_index;
    for (Eigen::Index i = 0; i < d.x_size(); ++i) x_index[d.x_alphabet()[static_cast<std::size_t>(i)]] = i;
    for (Eigen::Index j = 0; j < d.y_size(); ++j) y_index[d.y_alphabet()[static_cast<std::size_t>(j)]] = j;

    PhaseFunction theta = PhaseFunction::canonical(d);
    for (const auto& entry : doc["entries"]) {
        if (!entry.is_object() || !entry.contains("x") || !entry.contains("y") ||
            !entry.contains("theta") || !entry["theta"].is_number()) {
            throw ParseError("phase entry must be {\"x\", \"y\", \"theta\"}");
        }
        std::string xs = entry["x"].get<std::string>();
        std::string ys = entry["y"].get<std::string>();
        auto xi = x_index.find(xs);
        auto yi = y_index.find(ys);
        if (xi == x_index.end() || yi == y_index.end() ||
            d.prob(xi->second, yi->second) <= 0.0) {
            throw ParseError("phase entry (" + xs + ", " + ys + ") is outside the support");
        }
        theta.set(xi->second, yi->second, entry["theta"].get<double>());
    }
    return theta;
}

PhaseFunction load_phases_file(const std::string& path, const JointDistribution& d) {
    return load_phases(read_file(path), d);
}

std::string save_distribution(const JointDistribution& d) {
    json doc;
    doc["x_alphabet"] = d.x_alphabet();
    doc["y_alphabet"] = d.y_alphabet();
    json rows = json::array();
    for (Eigen::Index x = 0; x < d.x_size(); ++x) {
        json row = json::array();
        for (Eigen::Index y = 0; y < d.y_size(); ++y) row.push_back(d.prob(x, y));
        rows.push_back(std::move(row));
    }
    doc["probs"] = std::move(rows);
    return doc.dump(2);
}

} // namespace qleak::io
