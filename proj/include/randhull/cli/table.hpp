#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace randhull::cli {

using Cell = std::variant<std::monostate, std::string, double, std::int64_t, std::uint64_t, bool>;

/// Result table with a fixed column order. An empty cell is written as an
/// empty CSV field and as null in JSON.
struct Table {
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::optional<bool> verdict;
    std::vector<std::string> notes;

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

inline std::string format_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>) return "";
            else if constexpr (std::is_same_v<V, std::string>) return v;
            else if constexpr (std::is_same_v<V, double>) return format_double(v);
            else if constexpr (std::is_same_v<V, bool>) return v ? "true" : "false";
            else return std::to_string(v);
        },
        c);
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

/// CSV with '#' comment lines: the first line is the timestamp (excluded from
/// replay comparisons), then the title, the table, notes and the verdict.
inline void write_csv(const Table& t, std::ostream& os, const std::string& timestamp) {
    os << "# timestamp: " << timestamp << "\n";
    if (!t.title.empty()) os << "# " << t.title << "\n";
    for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << csv_escape(t.columns[j]);
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << csv_escape(format_cell(row[j]));
        os << "\n";
    }
    for (const auto& n : t.notes) os << "# note: " << n << "\n";
    if (t.verdict) os << "# verdict: " << (*t.verdict ? "pass" : "fail") << "\n";
}

inline nlohmann::json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> nlohmann::json {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>) return nullptr;
            else if constexpr (std::is_same_v<V, double>) {
                if (std::isfinite(v)) return v;
                return format_double(v);
            } else return v;
        },
        c);
}

inline void write_json(const Table& t, std::ostream& os, const std::string& timestamp) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::object();
        for (std::size_t j = 0; j < row.size() && j < t.columns.size(); ++j) r[t.columns[j]] = cell_json(row[j]);
        rows.push_back(std::move(r));
    }
    nlohmann::json j = {{"timestamp", timestamp}, {"title", t.title}, {"columns", t.columns}, {"rows", rows},
                        {"notes", t.notes}};
    if (t.verdict) j["verdict"] = *t.verdict ? "pass" : "fail";
    // Timestamp on its own first line so replay comparisons can skip it.
    os << "{\"timestamp\": " << nlohmann::json(timestamp).dump() << ",\n";
    j.erase("timestamp");
    const std::string body = j.dump(1);
    os << body.substr(1) << "\n";
}

/// Column-aligned plain text for terminals.
inline void write_text(const Table& t, std::ostream& os) {
    std::vector<std::size_t> width(t.columns.size(), 0);
    std::vector<std::vector<std::string>> cells;
    for (std::size_t j = 0; j < t.columns.size(); ++j) width[j] = t.columns[j].size();
    for (const auto& row : t.rows) {
        std::vector<std::string> r;
        for (std::size_t j = 0; j < row.size(); ++j) {
            r.push_back(format_cell(row[j]));
            if (j < width.size()) width[j] = std::max(width[j], r.back().size());
        }
        cells.push_back(std::move(r));
    }
    if (!t.title.empty()) os << t.title << "\n";
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t j = 0; j < r.size(); ++j) {
            os << (j ? "  " : "") << r[j];
            if (j + 1 < r.size() && j < width.size()) os << std::string(width[j] - r[j].size(), ' ');
        }
        os << "\n";
    };
    line(t.columns);
    for (const auto& r : cells) line(r);
    for (const auto& n : t.notes) os << "note: " << n << "\n";
    if (t.verdict) os << "verdict: " << (*t.verdict ? "pass" : "fail") << "\n";
}

}  // namespace randhull::cli
