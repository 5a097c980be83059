#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace randhull::bounds {

enum class BoundKind { upper, lower, exact };

inline const char* to_string(BoundKind k) {
    switch (k) {
        case BoundKind::upper: return "upper";
        case BoundKind::lower: return "lower";
        case BoundKind::exact: return "exact";
    }
    return "?";
}

struct BoundEntry {
    std::string name;
    double value = 0.0;  // may be +infinity
    BoundKind kind = BoundKind::upper;
    std::string source;  // the result the entry implements
    std::string note;
};

struct BoundReport {
    std::vector<BoundEntry> entries;

    void add(std::string name, double value, BoundKind kind, std::string source, std::string note = {}) {
        entries.push_back({std::move(name), value, kind, std::move(source), std::move(note)});
    }

    std::optional<double> get(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return e.value;
        return std::nullopt;
    }

    const BoundEntry* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }
};

inline constexpr double infinity = std::numeric_limits<double>::infinity();

}  // namespace randhull::bounds
