#include "suitesmith/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "suitesmith/dialect/ast.hpp"
#include "suitesmith/dialect/token.hpp"
#include "suitesmith/errors.hpp"

namespace suitesmith {

namespace dl = dialect;

std::string to_string(SmellKind k) {
    switch (k) {
        case SmellKind::AssertionFree: return "assertion-free";
        case SmellKind::DuplicatedBody: return "duplicated-body";
        case SmellKind::Oversized: return "oversized";
        case SmellKind::ConditionalLogic: return "conditional-logic";
        case SmellKind::MagicNumbers: return "magic-numbers";
    }
    return "assertion-free";
}

int smell_cost_minutes(SmellKind k) {
    switch (k) {
        case SmellKind::AssertionFree: return 5;
        case SmellKind::DuplicatedBody: return 10;
        case SmellKind::Oversized: return 10;
        case SmellKind::ConditionalLogic: return 5;
        case SmellKind::MagicNumbers: return 2;
    }
    return 0;
}

namespace {

dl::ModulePtr parse_case(const TestCase& test) {
    try {
        return dl::parse(test.body);
    } catch (const dl::SyntaxError& e) {
        throw MetricError("case " + test.name + " does not parse: " + e.message);
    }
}

// ---- cyclomatic ----

void cyclo_expr(const dl::Expr& e, int& decisions);

void cyclo_walk_expr_children(const dl::Expr& e, int& decisions) {
    for (const auto* child : {e.a.get(), e.b.get(), e.c.get()})
        if (child) cyclo_expr(*child, decisions);
    for (const auto& el : e.elems)
        if (el) cyclo_expr(*el, decisions);
    for (const auto& k : e.keys)
        if (k) cyclo_expr(*k, decisions);
    for (const auto& kw : e.keywords)
        if (kw.value) cyclo_expr(*kw.value, decisions);
}

void cyclo_expr(const dl::Expr& e, int& decisions) {
    if (e.kind == dl::ExprKind::IfExp) ++decisions;
    if (e.kind == dl::ExprKind::BoolOp && e.elems.size() >= 2)
        decisions += static_cast<int>(e.elems.size()) - 1;
    cyclo_walk_expr_children(e, decisions);
}

void cyclo_stmt(const dl::Stmt& s, int& decisions) {
    switch (s.kind) {
        case dl::StmtKind::If:
        case dl::StmtKind::While:
        case dl::StmtKind::For:
            ++decisions;
            break;
        case dl::StmtKind::Try:
            decisions += static_cast<int>(s.handlers.size());
            break;
        default:
            break;
    }
    for (const auto* e : {s.expr.get(), s.target.get(), s.value.get()})
        if (e) cyclo_expr(*e, decisions);
    for (const auto& t : s.targets)
        if (t) cyclo_expr(*t, decisions);
    for (const auto& block : {&s.body, &s.orelse, &s.final_body})
        for (const auto& child : *block) cyclo_stmt(*child, decisions);
    for (const auto& h : s.handlers)
        for (const auto& child : h.body) cyclo_stmt(*child, decisions);
}

// ---- cognitive ----

void cog_expr(const dl::Expr& e, int nesting, int& score);

void cog_expr(const dl::Expr& e, int nesting, int& score) {
    if (e.kind == dl::ExprKind::IfExp) score += 1 + nesting;
    if (e.kind == dl::ExprKind::BoolOp) ++score;  // one +1 per operator sequence
    for (const auto* child : {e.a.get(), e.b.get(), e.c.get()})
        if (child) cog_expr(*child, nesting, score);
    for (const auto& el : e.elems)
        if (el) cog_expr(*el, nesting, score);
    for (const auto& k : e.keys)
        if (k) cog_expr(*k, nesting, score);
    for (const auto& kw : e.keywords)
        if (kw.value) cog_expr(*kw.value, nesting, score);
}

void cog_stmt(const dl::Stmt& s, int nesting, int& score) {
    auto exprs = [&](int at_nesting) {
        for (const auto* e : {s.expr.get(), s.target.get(), s.value.get()})
            if (e) cog_expr(*e, at_nesting, score);
        for (const auto& t : s.targets)
            if (t) cog_expr(*t, at_nesting, score);
    };
    switch (s.kind) {
        case dl::StmtKind::If:
        case dl::StmtKind::While:
        case dl::StmtKind::For: {
            score += 1 + nesting;
            exprs(nesting);
            for (const auto& child : s.body) cog_stmt(*child, nesting + 1, score);
            if (!s.orelse.empty()) {
                ++score;  // else / elif continuation
                for (const auto& child : s.orelse) cog_stmt(*child, nesting + 1, score);
            }
            for (const auto& child : s.final_body) cog_stmt(*child, nesting + 1, score);
            return;
        }
        case dl::StmtKind::Try: {
            exprs(nesting);
            for (const auto& child : s.body) cog_stmt(*child, nesting, score);
            for (const auto& h : s.handlers) {
                score += 1 + nesting;
                for (const auto& child : h.body) cog_stmt(*child, nesting + 1, score);
            }
            for (const auto& child : s.final_body) cog_stmt(*child, nesting, score);
            return;
        }
        default:
            exprs(nesting);
            for (const auto& block : {&s.body, &s.orelse, &s.final_body})
                for (const auto& child : *block) cog_stmt(*child, nesting, score);
            for (const auto& h : s.handlers)
                for (const auto& child : h.body) cog_stmt(*child, nesting, score);
            return;
    }
}

// ---- smell helpers ----

void count_stmts(const dl::Stmt& s, int& n) {
    ++n;
    for (const auto& block : {&s.body, &s.orelse, &s.final_body})
        for (const auto& child : *block) count_stmts(*child, n);
    for (const auto& h : s.handlers)
        for (const auto& child : h.body) count_stmts(*child, n);
}

bool stmt_has_branch(const dl::Stmt& s) {
    if (s.kind == dl::StmtKind::If || s.kind == dl::StmtKind::While ||
        s.kind == dl::StmtKind::For)
        return true;
    for (const auto& block : {&s.body, &s.orelse, &s.final_body})
        for (const auto& child : *block)
            if (stmt_has_branch(*child)) return true;
    for (const auto& h : s.handlers)
        for (const auto& child : h.body)
            if (stmt_has_branch(*child)) return true;
    return false;
}

bool stmt_has_assert(const dl::Stmt& s) {
    if (s.kind == dl::StmtKind::Assert) return true;
    // pytest.raises used as a context manager is an assertion too
    if (s.kind == dl::StmtKind::With && s.expr && s.expr->kind == dl::ExprKind::Call &&
        s.expr->a && s.expr->a->kind == dl::ExprKind::Attribute &&
        s.expr->a->str_val == "raises")
        return true;
    for (const auto& block : {&s.body, &s.orelse, &s.final_body})
        for (const auto& child : *block)
            if (stmt_has_assert(*child)) return true;
    for (const auto& h : s.handlers)
        for (const auto& child : h.body)
            if (stmt_has_assert(*child)) return true;
    return false;
}

void collect_numbers(const dl::Expr& e, std::set<std::string>& values) {
    if (e.kind == dl::ExprKind::IntLit) values.insert(std::to_string(e.int_val));
    if (e.kind == dl::ExprKind::FloatLit) values.insert("f" + std::to_string(e.float_val));
    for (const auto* child : {e.a.get(), e.b.get(), e.c.get()})
        if (child) collect_numbers(*child, values);
    for (const auto& el : e.elems)
        if (el) collect_numbers(*el, values);
    for (const auto& k : e.keys)
        if (k) collect_numbers(*k, values);
    for (const auto& kw : e.keywords)
        if (kw.value) collect_numbers(*kw.value, values);
}

void collect_numbers_stmt(const dl::Stmt& s, std::set<std::string>& values) {
    for (const auto* e : {s.expr.get(), s.target.get(), s.value.get()})
        if (e) collect_numbers(*e, values);
    for (const auto& t : s.targets)
        if (t) collect_numbers(*t, values);
    for (const auto& block : {&s.body, &s.orelse, &s.final_body})
        for (const auto& child : *block) collect_numbers_stmt(*child, values);
    for (const auto& h : s.handlers)
        for (const auto& child : h.body) collect_numbers_stmt(*child, values);
}

/// Body with the case name and all whitespace removed, for duplicate matching.
std::string normalized_body(const TestCase& c) {
    std::string out;
    for (char ch : c.body)
        if (!std::isspace(static_cast<unsigned char>(ch))) out += ch;
    size_t p = out.find(c.name);
    if (p != std::string::npos) out.replace(p, c.name.size(), "<case>");
    return out;
}

const dl::Stmt* case_def(const dl::Module& mod) {
    for (const auto& s : mod.stmts)
        if (s->kind == dl::StmtKind::FuncDef) return s.get();
    return nullptr;
}

}  // namespace

int cyclomatic(const TestCase& test) {
    auto mod = parse_case(test);
    const dl::Stmt* def = case_def(*mod);
    int decisions = 0;
    if (def)
        for (const auto& s : def->body) cyclo_stmt(*s, decisions);
    else
        for (const auto& s : mod->stmts) cyclo_stmt(*s, decisions);
    return 1 + decisions;
}

int cognitive(const TestCase& test) {
    auto mod = parse_case(test);
    const dl::Stmt* def = case_def(*mod);
    int score = 0;
    if (def)
        for (const auto& s : def->body) cog_stmt(*s, 0, score);
    else
        for (const auto& s : mod->stmts) cog_stmt(*s, 0, score);
    return score;
}

std::vector<SmellHit> detect_smells(const TestFile& file) {
    std::vector<SmellHit> hits;
    std::map<std::string, std::vector<size_t>> bodies;
    for (size_t i = 0; i < file.cases.size(); ++i)
        bodies[normalized_body(file.cases[i])].push_back(i);

    for (size_t i = 0; i < file.cases.size(); ++i) {
        const TestCase& c = file.cases[i];
        dl::ModulePtr mod;
        try {
            mod = dl::parse(c.body);
        } catch (const dl::SyntaxError&) {
            continue;  // unparseable cases are the repairer's business
        }
        const dl::Stmt* def = case_def(*mod);
        if (!def) continue;

        bool any_assert = false;
        bool any_branch = false;
        int stmt_count = 0;
        std::set<std::string> numbers;
        for (const auto& s : def->body) {
            if (stmt_has_assert(*s)) any_assert = true;
            if (stmt_has_branch(*s)) any_branch = true;
            count_stmts(*s, stmt_count);
            collect_numbers_stmt(*s, numbers);
        }
        if (!any_assert) hits.push_back({c.id, SmellKind::AssertionFree});
        if (bodies[normalized_body(c)].size() > 1)
            hits.push_back({c.id, SmellKind::DuplicatedBody});
        if (stmt_count > 30) hits.push_back({c.id, SmellKind::Oversized});
        if (any_branch) hits.push_back({c.id, SmellKind::ConditionalLogic});
        if (numbers.size() > 10) hits.push_back({c.id, SmellKind::MagicNumbers});
    }
    return hits;
}

double technical_debt(const std::vector<SmellHit>& smells, int total_cases) {
    if (total_cases <= 0) return 0.0;
    int minutes = 0;
    for (const auto& h : smells) minutes += smell_cost_minutes(h.kind);
    return static_cast<double>(minutes) / total_cases;
}

QualityReport build_report(const std::string& suite_id, const std::vector<TestFile>& suite,
                           const Sandbox& sandbox) {
    QualityReport report;
    report.suite_id = suite_id;
    for (const auto& file : suite) {
        report.total_tests += static_cast<int>(file.cases.size());
        for (const auto& c : file.cases) {
            report.cyclomatic_total += cyclomatic(c);
            report.cognitive_total += cognitive(c);
        }
        auto hits = detect_smells(file);
        report.smells.insert(report.smells.end(), hits.begin(), hits.end());
    }
    report.avg_smells =
        report.total_tests ? static_cast<double>(report.smells.size()) / report.total_tests : 0.0;
    report.avg_debt_minutes = technical_debt(report.smells, report.total_tests);
    CoverageSnapshot cov = measure_coverage(suite, sandbox);
    report.line_pct = cov.line_pct;
    report.branch_pct = cov.branch_pct;
    return report;
}

}  // namespace suitesmith
