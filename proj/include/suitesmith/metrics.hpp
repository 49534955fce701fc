#pragma once

#include <string>
#include <vector>

#include "suitesmith/corpus.hpp"
#include "suitesmith/optimizer.hpp"

namespace suitesmith {

enum class SmellKind {
    AssertionFree,
    DuplicatedBody,
    Oversized,         // > 30 statements: the excessive-setup proxy
    ConditionalLogic,  // any branch inside a test
    MagicNumbers,      // > 10 distinct numeric literals
};

std::string to_string(SmellKind k);

/// Fixed remediation cost per smell, in minutes.
int smell_cost_minutes(SmellKind k);

struct SmellHit {
    std::string case_id;
    SmellKind kind;

    bool operator==(const SmellHit&) const = default;
};

struct QualityReport {
    std::string suite_id;
    int total_tests = 0;
    int cyclomatic_total = 0;
    int cognitive_total = 0;
    std::vector<SmellHit> smells;
    double avg_smells = 0.0;
    double avg_debt_minutes = 0.0;
    double line_pct = 0.0;
    double branch_pct = 0.0;
};

/// McCabe count: 1 + decision points (conditionals, loops, boolean
/// short-circuits, conditional expressions, exception handlers).
int cyclomatic(const TestCase& test);

/// Readability-oriented complexity with nesting penalties; straight-line
/// code scores 0.
int cognitive(const TestCase& test);

std::vector<SmellHit> detect_smells(const TestFile& file);

/// Average remediation minutes per case given its detected smells.
double technical_debt(const std::vector<SmellHit>& smells, int total_cases);

QualityReport build_report(const std::string& suite_id, const std::vector<TestFile>& suite,
                           const Sandbox& sandbox);

}  // namespace suitesmith
