#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "suitesmith/validator.hpp"

namespace suitesmith {

/// Names the class under test so import-oriented rules know what to add.
struct RepairContext {
    std::string class_name;
    std::string module_name;  // sandbox module exporting the class under test
};

struct RepairApplication {
    int rule = 0;              // 1..9
    std::string scope;         // "file" or the affected case name
    std::string before_digest; // candidate digest before this application
    std::string after_digest;
};

struct RepairLog {
    std::string problem_id;
    std::vector<RepairApplication> applied;
    int passes = 0;
};

/// The rule numbers whose triggers hold for this candidate+report.
std::set<int> diagnose(const std::string& candidate, const ValidationReport& report,
                       const RepairContext& ctx);

struct RepairResult {
    std::string text;
    RepairLog log;
    ValidationReport final_report;  // phase Repaired (or the original when untouched)
};

/// Applies triggered rules in ascending order, re-validating after each pass,
/// stopping at a clean pass or max_passes. A candidate with zero surviving
/// cases comes back empty with the log explaining why.
RepairResult apply_repairs(const std::string& candidate, const Sandbox& sandbox,
                           const RepairContext& ctx, const std::string& problem_id,
                           bool truncated, int max_passes = 2);

struct RepairStats {
    std::map<int, int> counts;            // rule → applications
    std::map<int, double> percentages;    // of total applications
    int total = 0;
};

RepairStats repair_stats(const std::vector<RepairLog>& logs);

}  // namespace suitesmith
