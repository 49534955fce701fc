#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "suitesmith/corpus.hpp"
#include "suitesmith/dialect/interp.hpp"

namespace suitesmith {

struct StageResult {
    bool pass = false;
    std::string diagnostic;
};

enum class CaseOutcome { Pass, Fail, Error, Timeout, Skip };

std::string to_string(CaseOutcome o);

struct CaseResult {
    std::string name;
    CaseOutcome outcome = CaseOutcome::Error;
    std::string diagnostic;
};

enum class ValidationPhase { Original, Repaired };

struct ValidationReport {
    std::string problem_id;
    ValidationPhase phase = ValidationPhase::Original;
    std::optional<StageResult> syntax;
    std::optional<StageResult> compile;   // present only when syntax passed
    std::vector<CaseResult> execute;      // present only when compile passed
    bool truncated = false;               // propagated from the model response
    bool no_executable_code = false;      // empty/comment-only candidate

    bool all_executed_pass() const {
        for (const auto& c : execute)
            if (c.outcome != CaseOutcome::Pass) return false;
        return true;
    }
};

/// Execution context for one candidate: the class under test installed as an
/// importable module, plus the per-case wall-clock budget.
struct Sandbox {
    std::string module_name = "solution";
    std::string solution_source;
    std::vector<std::string> aux_sources;
    std::chrono::milliseconds timeout_per_case{120000};
};

/// Pass iff the candidate parses; diagnostic carries line/column on failure.
StageResult check_syntax(const std::string& candidate);

/// Pass iff the candidate loads as a module with the sandbox sources
/// importable: imports resolve and top-level code raises nothing.
StageResult check_compile(const std::string& candidate, const Sandbox& sandbox);

/// Runs each test_* case in a fresh interpreter; outcomes pass/fail/error/
/// timeout/skip. A case exceeding the budget is terminated and marked timeout.
std::vector<CaseResult> execute_tests(const std::string& candidate, const Sandbox& sandbox);

/// Runs one case and also reports line/branch coverage of the sandbox module.
struct CoverageRun {
    CaseResult result;
    dialect::FileCoverage coverage;  // of sandbox.module_name
};
CoverageRun run_case_with_coverage(const std::string& preamble, const TestCase& test,
                                   const Sandbox& sandbox);

/// Full staged validation honoring the monotonicity contract: compile runs
/// only after syntax passes, execute only after compile passes.
ValidationReport validate(const std::string& candidate, const Sandbox& sandbox,
                          const std::string& problem_id, ValidationPhase phase,
                          bool truncated = false);

}  // namespace suitesmith
