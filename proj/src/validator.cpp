#include "suitesmith/validator.hpp"

#include "suitesmith/dialect/token.hpp"
#include "suitesmith/errors.hpp"

namespace suitesmith {

namespace dl = dialect;

std::string to_string(CaseOutcome o) {
    switch (o) {
        case CaseOutcome::Pass: return "pass";
        case CaseOutcome::Fail: return "fail";
        case CaseOutcome::Error: return "error";
        case CaseOutcome::Timeout: return "timeout";
        case CaseOutcome::Skip: return "skip";
    }
    return "error";
}

namespace {

bool comment_only(const std::string& text) {
    try {
        for (const auto& tok : dl::lex(text))
            if (tok.kind != dl::TokKind::Newline && tok.kind != dl::TokKind::EndOfFile)
                return false;
    } catch (const dl::SyntaxError&) {
        return false;
    }
    return true;
}

dl::Interpreter::SourceResolver make_resolver(const Sandbox& sandbox) {
    return [&sandbox](const std::string& name) -> std::optional<std::string> {
        if (name == sandbox.module_name) return sandbox.solution_source;
        return std::nullopt;
    };
}

/// Runs module text then the named test function under one deadline.
CaseResult run_one_case(dl::Interpreter& interp, const std::string& module_text,
                        const std::string& case_name, const Sandbox& sandbox) {
    CaseResult r;
    r.name = case_name;
    interp.set_deadline(std::chrono::steady_clock::now() + sandbox.timeout_per_case);
    try {
        interp.exec_module("candidate", module_text);
        auto fn = interp.module_attr("candidate", case_name);
        if (!fn) {
            r.outcome = CaseOutcome::Error;
            r.diagnostic = "test function '" + case_name + "' not defined after module load";
            return r;
        }
        interp.call(*fn, {});
        r.outcome = CaseOutcome::Pass;
    } catch (const dl::PyError& e) {
        r.outcome = (e.type == "AssertionError" || e.type == "Failed") ? CaseOutcome::Fail
                                                                       : CaseOutcome::Error;
        r.diagnostic = e.type + ": " + e.message +
                       (e.line > 0 ? " (line " + std::to_string(e.line) + ")" : "");
    } catch (const dl::TimeoutSignal&) {
        r.outcome = CaseOutcome::Timeout;
        r.diagnostic = "case exceeded the per-case time budget";
    } catch (const dl::SkipSignal& s) {
        r.outcome = CaseOutcome::Skip;
        r.diagnostic = s.reason;
    } catch (const dl::SyntaxError& e) {
        r.outcome = CaseOutcome::Error;
        r.diagnostic = "SyntaxError: " + e.message + " (line " + std::to_string(e.line) + ")";
    }
    return r;
}

}  // namespace

StageResult check_syntax(const std::string& candidate) {
    try {
        dl::parse(candidate);
        return {true, ""};
    } catch (const dl::SyntaxError& e) {
        return {false, e.message + " (line " + std::to_string(e.line) + ", col " +
                           std::to_string(e.col) + ")"};
    }
}

StageResult check_compile(const std::string& candidate, const Sandbox& sandbox) {
    dl::Interpreter interp(make_resolver(sandbox));
    interp.set_deadline(std::chrono::steady_clock::now() + sandbox.timeout_per_case);
    try {
        interp.exec_module("candidate", candidate);
        return {true, ""};
    } catch (const dl::PyError& e) {
        return {false, e.type + ": " + e.message +
                           (e.line > 0 ? " (line " + std::to_string(e.line) + ")" : "")};
    } catch (const dl::TimeoutSignal&) {
        return {false, "Timeout: module load exceeded the time budget"};
    } catch (const dl::SkipSignal&) {
        return {false, "Skip: module-level skip during load"};
    } catch (const dl::SyntaxError& e) {
        return {false, "SyntaxError: " + e.message};
    }
}

std::vector<CaseResult> execute_tests(const std::string& candidate, const Sandbox& sandbox) {
    TestFile file = split_test_source(candidate);
    std::vector<CaseResult> results;
    for (const auto& c : file.cases) {
        std::string module_text = file.preamble.empty() ? c.body : file.preamble + "\n\n" + c.body;
        dl::Interpreter interp(make_resolver(sandbox));
        results.push_back(run_one_case(interp, module_text, c.name, sandbox));
    }
    return results;
}

CoverageRun run_case_with_coverage(const std::string& preamble, const TestCase& test,
                                   const Sandbox& sandbox) {
    std::string module_text =
        preamble.empty() ? test.body : preamble + "\n\n" + test.body;
    dl::Interpreter interp(make_resolver(sandbox));
    interp.instrument(sandbox.module_name);
    CoverageRun run;
    run.result = run_one_case(interp, module_text, test.name, sandbox);
    auto it = interp.coverage().find(sandbox.module_name);
    if (it != interp.coverage().end()) run.coverage = it->second;
    return run;
}

ValidationReport validate(const std::string& candidate, const Sandbox& sandbox,
                          const std::string& problem_id, ValidationPhase phase, bool truncated) {
    ValidationReport report;
    report.problem_id = problem_id;
    report.phase = phase;
    report.truncated = truncated;
    report.no_executable_code = comment_only(candidate);
    report.syntax = check_syntax(candidate);
    if (!report.syntax->pass) return report;
    report.compile = check_compile(candidate, sandbox);
    if (!report.compile->pass) return report;
    report.execute = execute_tests(candidate, sandbox);
    return report;
}

}  // namespace suitesmith
