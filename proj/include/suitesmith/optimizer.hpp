#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "suitesmith/corpus.hpp"
#include "suitesmith/validator.hpp"

namespace suitesmith {

/// Line/branch coverage state of a suite over one or more source modules.
struct CoverageSnapshot {
    std::map<std::string, std::set<int>> lines;                        // file → covered lines
    std::map<std::string, std::set<std::pair<int, bool>>> arms;       // file → covered arms
    std::map<std::string, int> executable_lines;                      // file → denominator
    std::map<std::string, int> total_arms;
    double line_pct = 0.0;
    double branch_pct = 0.0;

    void recompute_percentages();
    int covered_line_count() const;
    int covered_arm_count() const;
};

enum class Verdict { Kept, Removed, Skipped, Faulty };

std::string to_string(Verdict v);

struct OptimizationDecision {
    std::string case_id;
    Verdict verdict = Verdict::Removed;
    int delta_lines = 0;
    int delta_branch_arms = 0;
};

/// Union coverage of all passing cases in the suite; failing cases contribute
/// nothing.
CoverageSnapshot measure_coverage(const std::vector<TestFile>& suite, const Sandbox& sandbox);

/// Classifies one candidate against the current snapshot: faulty when it does
/// not pass, skipped when the module is already fully covered, else kept iff
/// it reaches at least one new line or branch arm.
OptimizationDecision evaluate_candidate(const TestCase& test, const std::string& preamble,
                                        const CoverageSnapshot& current, const Sandbox& sandbox);

struct OptimizationResult {
    std::vector<TestCase> kept;
    std::vector<OptimizationDecision> decisions;
    CoverageSnapshot before;
    CoverageSnapshot after;
};

/// Greedy left-to-right admission: the snapshot is updated after every kept
/// candidate, so later duplicates are removed.
OptimizationResult optimize_suite(const std::vector<TestFile>& initial,
                                  const std::vector<TestCase>& candidates,
                                  const std::string& candidate_preamble, const Sandbox& sandbox);

}  // namespace suitesmith
