#pragma once

// Acceptance suite: one measured pass/fail result per criterion 1..11.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lpoint/tightbinding.hpp"

namespace lpoint {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string measured;  // deterministic, goes into the report files
    double seconds = 0.0;
    double budget_seconds = 0.0;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0 = hardware concurrency
    TBParams params{};
};

inline constexpr int kCriteria = 11;

std::string criterion_name(int id);

// Runs one of criteria 1..10. Files produced by the criterion (event logs,
// statistics) are added to `files` keyed by file name. A criterion also
// fails when it exceeds its runtime budget.
CriterionResult run_criterion(int id, const VerifyOptions& opts, std::map<std::string, std::string>* files = nullptr);

struct VerifyReport {
    std::vector<CriterionResult> results;
    std::map<std::string, std::string> files;  // report.json, report.csv and artifacts

    bool all_pass() const;
};

// Criteria 1..10, then 11: the seeded and threaded outputs are regenerated
// with a different worker count and compared byte for byte.
VerifyReport run_verify_all(const VerifyOptions& opts);

// "PASS C5 band topology: ... (0.12 s)"
std::string format_result_line(const CriterionResult& r);

}  // namespace lpoint
