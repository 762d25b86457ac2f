#pragma once

/// Report entries shared by every theorem-check, and their serialization.
/// A report is a JSON-lines document: header, one entry per line (sorted by
/// check name then inputs), summary. Identical config + seed must produce a
/// byte-identical document.

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

namespace sdspace {

struct CheckResult {
    std::string check;
    std::string inputs;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool pass = false;
};

inline CheckResult make_check(std::string check, std::string inputs, double lhs, double rhs,
                              double slack, bool pass) {
    return {std::move(check), std::move(inputs), lhs, rhs, slack, pass};
}

struct Report {
    std::string tool_version;
    nlohmann::json config;
    std::vector<CheckResult> entries;

    int passed() const {
        int n = 0;
        for (const auto& e : entries) n += e.pass ? 1 : 0;
        return n;
    }
    int failed() const { return static_cast<int>(entries.size()) - passed(); }
    bool all_passed() const { return failed() == 0; }
};

inline std::string to_jsonl(const Report& r) {
    std::vector<CheckResult> entries = r.entries;
    std::stable_sort(entries.begin(), entries.end(), [](const CheckResult& a, const CheckResult& b) {
        if (a.check != b.check) return a.check < b.check;
        return a.inputs < b.inputs;
    });
    nlohmann::json header = {{"tool", "sdspace"}, {"version", r.tool_version}, {"config", r.config}};
    std::string out = header.dump() + "\n";
    for (const auto& e : entries) {
        nlohmann::json j = {{"check", e.check},   {"inputs", e.inputs}, {"lhs", e.lhs},
                            {"rhs", e.rhs},       {"slack", e.slack},
                            {"verdict", e.pass ? "pass" : "fail"}};
        out += j.dump() + "\n";
    }
    nlohmann::json summary = {{"passed", r.passed()}, {"failed", r.failed()}};
    out += summary.dump() + "\n";
    return out;
}

}  // namespace sdspace
