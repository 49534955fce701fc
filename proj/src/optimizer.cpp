#include "suitesmith/optimizer.hpp"

#include "suitesmith/dialect/ast.hpp"
#include "suitesmith/dialect/token.hpp"
#include "suitesmith/errors.hpp"

namespace suitesmith {

namespace dl = dialect;

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Kept: return "kept";
        case Verdict::Removed: return "removed";
        case Verdict::Skipped: return "skipped";
        case Verdict::Faulty: return "faulty";
    }
    return "removed";
}

void CoverageSnapshot::recompute_percentages() {
    int lines_total = 0, lines_hit = 0, arms_total = 0, arms_hit = 0;
    for (const auto& [file, n] : executable_lines) {
        lines_total += n;
        auto it = lines.find(file);
        if (it != lines.end()) lines_hit += static_cast<int>(it->second.size());
    }
    for (const auto& [file, n] : total_arms) {
        arms_total += n;
        auto it = arms.find(file);
        if (it != arms.end()) arms_hit += static_cast<int>(it->second.size());
    }
    line_pct = lines_total ? 100.0 * lines_hit / lines_total : 0.0;
    branch_pct = arms_total ? 100.0 * arms_hit / arms_total : 0.0;
}

int CoverageSnapshot::covered_line_count() const {
    int n = 0;
    for (const auto& [file, set] : lines) n += static_cast<int>(set.size());
    return n;
}

int CoverageSnapshot::covered_arm_count() const {
    int n = 0;
    for (const auto& [file, set] : arms) n += static_cast<int>(set.size());
    return n;
}

namespace {

/// Denominators come from static analysis of the solution module.
void install_denominators(CoverageSnapshot& snap, const Sandbox& sandbox) {
    try {
        auto mod = dl::parse(sandbox.solution_source);
        snap.executable_lines[sandbox.module_name] =
            static_cast<int>(dl::executable_lines(*mod).size());
        snap.total_arms[sandbox.module_name] = mod->branch_count * 2;
    } catch (const dl::SyntaxError& e) {
        throw MetricError("solution source does not parse: " + std::string(e.message));
    }
    snap.lines[sandbox.module_name];  // ensure keys exist even at zero coverage
    snap.arms[sandbox.module_name];
}

void merge_case_coverage(CoverageSnapshot& snap, const Sandbox& sandbox,
                         const dl::FileCoverage& cov) {
    auto& lines = snap.lines[sandbox.module_name];
    lines.insert(cov.lines.begin(), cov.lines.end());
    auto& arms = snap.arms[sandbox.module_name];
    arms.insert(cov.arms.begin(), cov.arms.end());
}

}  // namespace

CoverageSnapshot measure_coverage(const std::vector<TestFile>& suite, const Sandbox& sandbox) {
    CoverageSnapshot snap;
    install_denominators(snap, sandbox);
    for (const auto& file : suite)
        for (const auto& c : file.cases) {
            CoverageRun run = run_case_with_coverage(file.preamble, c, sandbox);
            if (run.result.outcome == CaseOutcome::Pass)
                merge_case_coverage(snap, sandbox, run.coverage);
        }
    snap.recompute_percentages();
    return snap;
}

OptimizationDecision evaluate_candidate(const TestCase& test, const std::string& preamble,
                                        const CoverageSnapshot& current, const Sandbox& sandbox) {
    OptimizationDecision d;
    d.case_id = test.id;

    // fast path: nothing left to improve for this module
    auto exec_it = current.executable_lines.find(sandbox.module_name);
    auto arm_it = current.total_arms.find(sandbox.module_name);
    auto lines_it = current.lines.find(sandbox.module_name);
    auto arms_it = current.arms.find(sandbox.module_name);
    int lines_hit = lines_it == current.lines.end() ? 0 : static_cast<int>(lines_it->second.size());
    int arms_hit = arms_it == current.arms.end() ? 0 : static_cast<int>(arms_it->second.size());
    if (exec_it != current.executable_lines.end() && arm_it != current.total_arms.end() &&
        lines_hit >= exec_it->second && arms_hit >= arm_it->second) {
        d.verdict = Verdict::Skipped;
        return d;
    }

    CoverageRun run = run_case_with_coverage(preamble, test, sandbox);
    if (run.result.outcome != CaseOutcome::Pass) {
        d.verdict = Verdict::Faulty;
        return d;
    }
    const std::set<int> empty_lines;
    const std::set<std::pair<int, bool>> empty_arms;
    const auto& have_lines = lines_it == current.lines.end() ? empty_lines : lines_it->second;
    const auto& have_arms = arms_it == current.arms.end() ? empty_arms : arms_it->second;
    for (int ln : run.coverage.lines)
        if (!have_lines.count(ln)) ++d.delta_lines;
    for (const auto& arm : run.coverage.arms)
        if (!have_arms.count(arm)) ++d.delta_branch_arms;
    d.verdict = d.delta_lines + d.delta_branch_arms >= 1 ? Verdict::Kept : Verdict::Removed;
    return d;
}

OptimizationResult optimize_suite(const std::vector<TestFile>& initial,
                                  const std::vector<TestCase>& candidates,
                                  const std::string& candidate_preamble, const Sandbox& sandbox) {
    OptimizationResult result;
    result.before = measure_coverage(initial, sandbox);
    CoverageSnapshot current = result.before;
    for (const auto& test : candidates) {
        OptimizationDecision d = evaluate_candidate(test, candidate_preamble, current, sandbox);
        if (d.verdict == Verdict::Kept) {
            CoverageRun run = run_case_with_coverage(candidate_preamble, test, sandbox);
            merge_case_coverage(current, sandbox, run.coverage);
            current.recompute_percentages();
            result.kept.push_back(test);
        }
        result.decisions.push_back(std::move(d));
    }
    result.after = current;
    result.after.recompute_percentages();
    return result;
}

}  // namespace suitesmith
