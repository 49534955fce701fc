#include "suitesmith/corpus.hpp"

#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "suitesmith/dialect/ast.hpp"
#include "suitesmith/dialect/token.hpp"
#include "suitesmith/errors.hpp"

namespace suitesmith {

using nlohmann::json;

std::string to_string(TestSource s) {
    switch (s) {
        case TestSource::Human: return "human";
        case TestSource::Sbst: return "sbst";
        case TestSource::Llm: return "llm";
    }
    return "human";
}

TestSource test_source_from_string(const std::string& s) {
    if (s == "human") return TestSource::Human;
    if (s == "sbst") return TestSource::Sbst;
    if (s == "llm") return TestSource::Llm;
    throw IngestError("unknown test source '" + s + "'");
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else
            cur += c;
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
    return out;
}

bool is_blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

void strip_edge_blanks(std::vector<std::string>& lines) {
    while (!lines.empty() && is_blank(lines.front())) lines.erase(lines.begin());
    while (!lines.empty() && is_blank(lines.back())) lines.pop_back();
}

/// First source line of a statement including any decorators above it.
int stmt_start_line(const dialect::Stmt& s) {
    int start = s.line;
    for (const auto& d : s.decorators)
        if (d && d->line > 0) start = std::min(start, d->line);
    return start;
}

/// Splits "a, b(c, d), e" into top-level comma-separated pieces.
std::vector<std::string> split_top_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    char in_str = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_str) {
            cur += c;
            if (c == '\\' && i + 1 < s.size()) { cur += s[++i]; continue; }
            if (c == in_str) in_str = 0;
            continue;
        }
        if (c == '\'' || c == '"') { in_str = c; cur += c; continue; }
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
            continue;
        }
        cur += c;
    }
    if (!cur.empty() || !parts.empty()) parts.push_back(cur);
    for (auto& p : parts) {
        size_t b = p.find_first_not_of(" \t");
        size_t e = p.find_last_not_of(" \t");
        p = b == std::string::npos ? "" : p.substr(b, e - b + 1);
    }
    return parts;
}

/// Statement text with physical continuation lines joined into one line.
std::string joined_stmt_text(const std::vector<std::string>& lines, int first, int last) {
    std::string out;
    for (int ln = first; ln <= last && ln <= static_cast<int>(lines.size()); ++ln) {
        std::string piece = lines[ln - 1];
        if (ln > first) {
            size_t b = piece.find_first_not_of(" \t");
            piece = b == std::string::npos ? "" : piece.substr(b);
            if (!out.empty() && !piece.empty()) out += ' ';
        }
        while (!piece.empty() && (piece.back() == '\\' || piece.back() == '\r')) piece.pop_back();
        out += piece;
    }
    return out;
}

/// Rewrites one unittest-style "self.assertX(...)" statement line to a plain
/// assert; returns the input unchanged when no mapping applies.
std::string rewrite_assert_call(const std::string& stmt) {
    size_t b = stmt.find_first_not_of(" \t");
    if (b == std::string::npos) return stmt;
    std::string indent = stmt.substr(0, b);
    std::string s = stmt.substr(b);
    const std::string prefix = "self.assert";
    if (s.rfind(prefix, 0) != 0) {
        // with self.assertRaises(X): appears inside with-statements
        std::string out = stmt;
        size_t p = out.find("self.assertRaises");
        if (p != std::string::npos) out.replace(p, 17, "pytest.raises");
        return out;
    }
    size_t open = s.find('(');
    if (open == std::string::npos || s.back() != ')') return stmt;
    std::string method = s.substr(prefix.size() - 6, open - (prefix.size() - 6));  // "assertX"
    std::string inner = s.substr(open + 1, s.size() - open - 2);
    auto args = split_top_commas(inner);
    auto two = [&](const char* op) {
        return args.size() >= 2 ? indent + "assert " + args[0] + " " + op + " " + args[1] : stmt;
    };
    auto one = [&](const std::string& fmt_prefix, const std::string& fmt_suffix) {
        return args.size() >= 1 ? indent + "assert " + fmt_prefix + args[0] + fmt_suffix : stmt;
    };
    if (method == "assertEqual" || method == "assertEquals") return two("==");
    if (method == "assertNotEqual") return two("!=");
    if (method == "assertTrue") return one("", "");
    if (method == "assertFalse") return one("not (", ")");
    if (method == "assertIs") return two("is");
    if (method == "assertIsNot") return two("is not");
    if (method == "assertIsNone") return one("", " is None");
    if (method == "assertIsNotNone") return one("", " is not None");
    if (method == "assertIn") return two("in");
    if (method == "assertNotIn") return two("not in");
    if (method == "assertGreater") return two(">");
    if (method == "assertGreaterEqual") return two(">=");
    if (method == "assertLess") return two("<");
    if (method == "assertLessEqual") return two("<=");
    if (method == "assertAlmostEqual" && args.size() >= 2)
        return indent + "assert " + args[0] + " == pytest.approx(" + args[1] + ")";
    if (method == "assertRaises") {
        std::string out = indent + "pytest.raises(";
        for (size_t i = 0; i < args.size(); ++i) out += (i ? ", " : "") + args[i];
        return out + ")";
    }
    return stmt;
}

bool needs_pytest_import(const std::string& text) {
    return text.find("pytest.") != std::string::npos;
}
bool has_pytest_import(const std::string& preamble) {
    return preamble.find("import pytest") != std::string::npos;
}

std::string make_case_id(const std::string& pid, TestSource src, const std::string& name,
                         size_t ordinal) {
    return pid + "/" + to_string(src) + "/" + name + "/" + std::to_string(ordinal);
}

}  // namespace

std::string TestFile::render() const {
    std::string out = preamble;
    for (const auto& c : cases) {
        if (!out.empty()) out += "\n\n";
        out += c.body;
    }
    if (!out.empty() && out.back() != '\n') out += '\n';
    return out;
}

std::string extract_header_comment(const std::string& solution_source) {
    auto lines = split_lines(solution_source);
    std::vector<std::string> comment;
    size_t i = 0;
    while (i < lines.size() && is_blank(lines[i])) ++i;
    // run of '#' comment lines
    while (i < lines.size()) {
        size_t b = lines[i].find_first_not_of(" \t");
        if (b == std::string::npos || lines[i][b] != '#') break;
        comment.push_back(lines[i].substr(b));
        ++i;
    }
    if (!comment.empty()) return join_lines(comment);
    // else a module-level docstring
    if (i < lines.size()) {
        size_t b = lines[i].find_first_not_of(" \t");
        if (b != std::string::npos &&
            (lines[i].compare(b, 3, "'''") == 0 || lines[i].compare(b, 3, "\"\"\"") == 0)) {
            std::string q = lines[i].substr(b, 3);
            std::string text = lines[i].substr(b + 3);
            size_t endq = text.find(q);
            if (endq != std::string::npos) return text.substr(0, endq);
            std::vector<std::string> doc;
            if (!text.empty()) doc.push_back(text);
            for (++i; i < lines.size(); ++i) {
                endq = lines[i].find(q);
                if (endq != std::string::npos) {
                    if (endq > 0) doc.push_back(lines[i].substr(0, endq));
                    return join_lines(doc);
                }
                doc.push_back(lines[i]);
            }
        }
    }
    return "";
}

TestFile split_test_source(const std::string& text) {
    dialect::ModulePtr mod;
    try {
        mod = dialect::parse(text);
    } catch (const dialect::SyntaxError& e) {
        throw NormalizationError("test text does not parse: " + e.message + " (line " +
                                 std::to_string(e.line) + ")");
    }
    auto lines = split_lines(text);
    std::vector<bool> in_case(lines.size(), false);
    TestFile out;
    for (const auto& s : mod->stmts) {
        if (s->kind != dialect::StmtKind::FuncDef || s->name.rfind("test", 0) != 0) continue;
        int first = stmt_start_line(*s);
        int last = s->end_line;
        std::vector<std::string> body(lines.begin() + (first - 1),
                                      lines.begin() + std::min<size_t>(last, lines.size()));
        strip_edge_blanks(body);
        TestCase c;
        c.name = s->name;
        c.body = join_lines(body);
        out.cases.push_back(std::move(c));
        for (int ln = first; ln <= last && ln <= static_cast<int>(lines.size()); ++ln)
            in_case[ln - 1] = true;
    }
    std::vector<std::string> pre;
    bool prev_blank = false;
    for (size_t i = 0; i < lines.size(); ++i) {
        if (in_case[i]) continue;
        bool blank = is_blank(lines[i]);
        if (blank && prev_blank) continue;  // collapse blank runs
        pre.push_back(lines[i]);
        prev_blank = blank;
    }
    strip_edge_blanks(pre);
    out.preamble = join_lines(pre);
    return out;
}

namespace {

TestFile normalize_assert_block(const std::string& raw) {
    dialect::ModulePtr mod;
    try {
        mod = dialect::parse(raw);
    } catch (const dialect::SyntaxError& e) {
        throw NormalizationError("assert-block input does not parse: " + e.message + " (line " +
                                 std::to_string(e.line) + ")");
    }
    auto lines = split_lines(raw);
    TestFile out;
    std::vector<std::string> pre;
    std::vector<std::string> pending;  // contiguous bare statements to wrap
    int wrapped = 0;
    auto flush_pending = [&]() {
        if (pending.empty()) return;
        TestCase c;
        c.name = "test_block_" + std::to_string(++wrapped);
        std::string body = "def " + c.name + "():";
        for (const auto& ln : pending) body += "\n    " + ln;
        c.body = body;
        out.cases.push_back(std::move(c));
        pending.clear();
    };
    for (const auto& s : mod->stmts) {
        int first = stmt_start_line(*s);
        int last = std::min<int>(s->end_line, static_cast<int>(lines.size()));
        if (s->kind == dialect::StmtKind::Import || s->kind == dialect::StmtKind::ImportFrom) {
            flush_pending();
            for (int ln = first; ln <= last; ++ln) pre.push_back(lines[ln - 1]);
            continue;
        }
        if (s->kind == dialect::StmtKind::FuncDef || s->kind == dialect::StmtKind::ClassDef) {
            flush_pending();
            std::vector<std::string> body(lines.begin() + (first - 1), lines.begin() + last);
            strip_edge_blanks(body);
            if (s->kind == dialect::StmtKind::FuncDef && s->name.rfind("test", 0) == 0) {
                TestCase c;
                c.name = s->name;
                c.body = join_lines(body);
                out.cases.push_back(std::move(c));
            } else {
                for (auto& ln : body) pre.push_back(std::move(ln));
            }
            continue;
        }
        for (int ln = first; ln <= last; ++ln)
            if (!is_blank(lines[ln - 1])) pending.push_back(lines[ln - 1]);
    }
    flush_pending();
    strip_edge_blanks(pre);
    out.preamble = join_lines(pre);
    return out;
}

TestFile normalize_class_suite(const std::string& raw) {
    dialect::ModulePtr mod;
    try {
        mod = dialect::parse(raw);
    } catch (const dialect::SyntaxError& e) {
        throw NormalizationError("class-suite input does not parse: " + e.message + " (line " +
                                 std::to_string(e.line) + ")");
    }
    auto lines = split_lines(raw);
    TestFile out;
    std::vector<std::string> pre;
    for (const auto& s : mod->stmts) {
        int first = stmt_start_line(*s);
        int last = std::min<int>(s->end_line, static_cast<int>(lines.size()));
        if (s->kind == dialect::StmtKind::Import || s->kind == dialect::StmtKind::ImportFrom) {
            // unittest itself is obsolete in the canonical dialect
            bool is_unittest = false;
            for (const auto& im : s->imports)
                if (im.module == "unittest") is_unittest = true;
            if (s->module == "unittest") is_unittest = true;
            if (!is_unittest)
                for (int ln = first; ln <= last; ++ln) pre.push_back(lines[ln - 1]);
            continue;
        }
        if (s->kind != dialect::StmtKind::ClassDef) continue;
        for (const auto& m : s->body) {
            if (m->kind != dialect::StmtKind::FuncDef) continue;
            if (m->name == "__init__" || m->name == "setUp" || m->name == "tearDown") continue;
            TestCase c;
            c.name = m->name.rfind("test", 0) == 0 ? m->name : "test_" + m->name;
            std::string sig = "def " + c.name + "():";
            std::vector<std::string> body_lines{sig};
            for (const auto& st : m->body) {
                int bf = stmt_start_line(*st);
                int bl = std::min<int>(st->end_line, static_cast<int>(lines.size()));
                if (st->kind == dialect::StmtKind::ExprStmt && st->expr &&
                    st->expr->kind == dialect::ExprKind::Call) {
                    std::string text = joined_stmt_text(lines, bf, bl);
                    // method body sits two levels deep; target is one
                    size_t ind = text.find_first_not_of(" \t");
                    std::string rewritten =
                        rewrite_assert_call("    " + (ind == std::string::npos ? text : text.substr(ind)));
                    body_lines.push_back(rewritten);
                    continue;
                }
                for (int ln = bf; ln <= bl; ++ln) {
                    std::string t = lines[ln - 1];
                    // drop one indentation level (method body → function body)
                    if (t.rfind("        ", 0) == 0) t = t.substr(4);
                    else {
                        size_t ind = t.find_first_not_of(" \t");
                        if (ind != std::string::npos && ind >= 4) t = t.substr(4);
                    }
                    size_t p;
                    while ((p = t.find("self.assertRaises")) != std::string::npos)
                        t.replace(p, 17, "pytest.raises");
                    body_lines.push_back(t);
                }
            }
            c.body = join_lines(body_lines);
            out.cases.push_back(std::move(c));
        }
    }
    strip_edge_blanks(pre);
    out.preamble = join_lines(pre);
    std::string rendered = out.render();
    if (needs_pytest_import(rendered) && !has_pytest_import(out.preamble)) {
        out.preamble = out.preamble.empty() ? "import pytest" : "import pytest\n" + out.preamble;
    }
    return out;
}

}  // namespace

TestFile normalize_tests(const std::string& raw, TestDialect dialect) {
    return dialect == TestDialect::AssertBlock ? normalize_assert_block(raw)
                                               : normalize_class_suite(raw);
}

namespace {

void attach_test_file(Corpus& corpus, const std::string& pid, TestSource src, TestFile file) {
    file.problem_id = pid;
    for (size_t i = 0; i < file.cases.size(); ++i) {
        file.cases[i].problem_id = pid;
        file.cases[i].source = src;
        file.cases[i].id = make_case_id(pid, src, file.cases[i].name, i);
    }
    corpus.tests[{pid, src}] = std::move(file);
}

/// `test_dialect` empty means the test text is already canonical and only
/// needs splitting; otherwise it is normalized from the named dialect.
void validate_and_insert(Corpus& corpus, Problem p, const json& tests_obj,
                         std::optional<TestDialect> test_dialect) {
    if (p.id.empty()) throw IngestError("record with empty problem id");
    if (corpus.problems.count(p.id))
        throw IngestError("duplicate problem id '" + p.id + "'");
    try {
        dialect::parse(p.solution_source);
    } catch (const dialect::SyntaxError& e) {
        corpus.rejects.push_back(p.id + ": solution does not parse: " + e.message);
        return;
    }
    if (p.solution_source.find(p.class_name) == std::string::npos) {
        corpus.rejects.push_back(p.id + ": class_name '" + p.class_name +
                                 "' not found in solution");
        return;
    }
    p.header_comment = extract_header_comment(p.solution_source);
    std::string pid = p.id;
    corpus.problems.emplace(pid, std::move(p));
    if (!tests_obj.is_object()) return;
    for (const auto& [key, val] : tests_obj.items()) {
        TestSource src;
        try {
            src = test_source_from_string(key);
        } catch (const IngestError&) {
            corpus.rejects.push_back(pid + ": unknown test source '" + key + "'");
            continue;
        }
        try {
            TestFile tf = test_dialect
                              ? normalize_tests(val.get<std::string>(), *test_dialect)
                              : split_test_source(val.get<std::string>());
            attach_test_file(corpus, pid, src, std::move(tf));
        } catch (const NormalizationError& e) {
            corpus.rejects.push_back(pid + "/" + key + ": " + e.what());
        }
    }
}

Corpus load_canonical(std::istream& in) {
    Corpus corpus;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded())
            throw IngestError("line " + std::to_string(lineno) + ": not valid JSON");
        if (!rec.is_object()) {
            corpus.rejects.push_back("line " + std::to_string(lineno) + ": record is not an object");
            continue;
        }
        if (!rec.contains("id") || !rec.contains("solution")) {
            corpus.rejects.push_back("line " + std::to_string(lineno) +
                                     ": missing required fields id/solution");
            continue;
        }
        Problem p;
        p.id = rec.value("id", "");
        p.description = rec.value("description", "");
        p.class_name = rec.value("class_name", "");
        p.solution_source = rec.value("solution", "");
        if (rec.contains("aux_sources"))
            for (const auto& a : rec["aux_sources"]) p.aux_sources.push_back(a.get<std::string>());
        validate_and_insert(corpus, std::move(p),
                            rec.contains("tests") ? rec["tests"] : json(), std::nullopt);
    }
    return corpus;
}

Corpus load_humaneval(std::istream& in) {
    Corpus corpus;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded())
            throw IngestError("line " + std::to_string(lineno) + ": not valid JSON");
        if (!rec.contains("task_id") || !rec.contains("canonical_solution")) {
            corpus.rejects.push_back("line " + std::to_string(lineno) +
                                     ": missing task_id/canonical_solution");
            continue;
        }
        Problem p;
        p.id = rec.value("task_id", "");
        std::string prompt = rec.value("prompt", "");
        p.solution_source = prompt + rec.value("canonical_solution", "");
        p.class_name = rec.value("entry_point", "");
        // the docstring inside the prompt is the problem definition
        std::string doc = extract_header_comment(p.solution_source);
        p.description = doc.empty() ? prompt : doc;
        json tests;
        if (rec.contains("test")) tests["human"] = rec["test"];
        validate_and_insert(corpus, std::move(p), tests, TestDialect::AssertBlock);
    }
    return corpus;
}

Corpus load_classeval(std::istream& in) {
    Corpus corpus;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded())
            throw IngestError("line " + std::to_string(lineno) + ": not valid JSON");
        Problem p;
        p.id = rec.value("class_id", rec.value("class_name", ""));
        p.description = rec.value("class_description", "");
        p.class_name = rec.value("class_name", "");
        p.solution_source = rec.value("solution_code", "");
        json tests;
        if (rec.contains("test")) tests["human"] = rec["test"];
        validate_and_insert(corpus, std::move(p), tests, TestDialect::ClassMethodSuite);
    }
    return corpus;
}

}  // namespace

Corpus load_corpus(const std::string& path, CorpusFormat format) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open corpus file '" + path + "'");
    switch (format) {
        case CorpusFormat::CanonicalJsonl: return load_canonical(in);
        case CorpusFormat::HumanevalStyle: return load_humaneval(in);
        case CorpusFormat::ClassevalStyle: return load_classeval(in);
    }
    throw IngestError("unknown corpus format");
}

std::string emit(const Corpus& corpus) {
    std::string out;
    for (const auto& [id, p] : corpus.problems) {
        json rec;
        rec["id"] = p.id;
        rec["description"] = p.description;
        rec["class_name"] = p.class_name;
        rec["solution"] = p.solution_source;
        if (!p.aux_sources.empty()) rec["aux_sources"] = p.aux_sources;
        json tests = json::object();
        for (TestSource src : {TestSource::Human, TestSource::Sbst, TestSource::Llm}) {
            auto it = corpus.tests.find({id, src});
            if (it != corpus.tests.end()) tests[to_string(src)] = it->second.render();
        }
        if (!tests.empty()) rec["tests"] = tests;
        out += rec.dump() + "\n";
    }
    return out;
}

void emit_to_file(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IngestError("cannot write corpus file '" + path + "'");
    out << emit(corpus);
}

}  // namespace suitesmith
