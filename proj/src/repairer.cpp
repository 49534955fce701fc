#include "suitesmith/repairer.hpp"

#include <algorithm>
#include <sstream>

#include "suitesmith/promptkit.hpp"  // sha256_hex

namespace suitesmith {

namespace {

enum class SegKind { Preamble, Def, Stray };

/// One top-level region of the candidate. Defs carry their name; strays are
/// top-level statements appearing after the first def.
struct Segment {
    SegKind kind = SegKind::Preamble;
    std::string name;
    std::vector<std::string> lines;
};

std::vector<std::string> to_lines(const std::string& text) {
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

bool is_blank(const std::string& l) { return l.find_first_not_of(" \t\r") == std::string::npos; }
bool is_comment(const std::string& l) {
    size_t b = l.find_first_not_of(" \t");
    return b != std::string::npos && l[b] == '#';
}
bool at_col0(const std::string& l) {
    return !l.empty() && l[0] != ' ' && l[0] != '\t';
}

std::string def_name(const std::string& line) {
    if (line.rfind("def ", 0) != 0) return "";
    size_t b = 4;
    size_t e = b;
    while (e < line.size() && (std::isalnum(static_cast<unsigned char>(line[e])) || line[e] == '_'))
        ++e;
    return line.substr(b, e - b);
}

/// Purely textual split at top-level `def ` lines so that per-case syntax
/// errors never take the whole file down. Decorator lines at column 0 attach
/// to the following def.
std::vector<Segment> segment_candidate(const std::string& text) {
    auto lines = to_lines(text);
    std::vector<Segment> segs;
    Segment cur;  // starts as preamble
    bool seen_def = false;
    std::vector<std::string> pending_decorators;
    auto flush = [&]() {
        while (!cur.lines.empty() && is_blank(cur.lines.back())) cur.lines.pop_back();
        if (!cur.lines.empty()) segs.push_back(cur);
        cur = Segment{};
    };
    for (const auto& line : lines) {
        if (at_col0(line) && line[0] == '@') {
            pending_decorators.push_back(line);
            continue;
        }
        if (at_col0(line) && line.rfind("def ", 0) == 0) {
            flush();
            cur.kind = SegKind::Def;
            cur.name = def_name(line);
            cur.lines = pending_decorators;
            pending_decorators.clear();
            cur.lines.push_back(line);
            seen_def = true;
            continue;
        }
        if (!pending_decorators.empty()) {
            // decorator not followed by a def: treat as ordinary lines
            for (auto& d : pending_decorators) cur.lines.push_back(d);
            pending_decorators.clear();
        }
        if (at_col0(line) && !is_comment(line) && cur.kind == SegKind::Def) {
            flush();
            cur.kind = seen_def ? SegKind::Stray : SegKind::Preamble;
        }
        if (at_col0(line) && cur.kind == SegKind::Stray && line.rfind("class ", 0) == 0) {
            // a top-level class opens an indented region; keep it in one segment
        }
        cur.lines.push_back(line);
    }
    for (auto& d : pending_decorators) cur.lines.push_back(d);
    flush();
    return segs;
}

std::string assemble(const std::vector<Segment>& segs) {
    std::string out;
    for (const auto& s : segs) {
        if (s.lines.empty()) continue;
        if (!out.empty()) out += "\n";
        for (const auto& l : s.lines) out += l + "\n";
    }
    return out;
}

std::string segment_text(const Segment& s) {
    std::string out;
    for (const auto& l : s.lines) out += l + "\n";
    return out;
}

bool def_body_comment_only(const Segment& s) {
    if (s.kind != SegKind::Def) return false;
    bool any_code = false;
    for (size_t i = 0; i < s.lines.size(); ++i) {
        const std::string& l = s.lines[i];
        if (l.rfind("def ", 0) == 0 || (!l.empty() && l[0] == '@')) continue;
        if (is_blank(l) || is_comment(l)) continue;
        any_code = true;
    }
    return !any_code;
}

bool has_self_first_param(const std::string& line) {
    size_t open = line.find('(');
    if (open == std::string::npos) return false;
    size_t b = line.find_first_not_of(" \t", open + 1);
    if (b == std::string::npos) return false;
    if (line.compare(b, 4, "self") != 0) return false;
    size_t after = b + 4;
    return after >= line.size() || line[after] == ',' || line[after] == ')' ||
           line[after] == ' ' || line[after] == ':';
}

std::string drop_self_param(const std::string& line) {
    size_t open = line.find('(');
    size_t b = line.find_first_not_of(" \t", open + 1);
    size_t after = b + 4;
    while (after < line.size() && (line[after] == ' ' || line[after] == ',')) ++after;
    return line.substr(0, open + 1) + line.substr(after);
}

std::vector<std::string> gather_diagnostics(const ValidationReport& report) {
    std::vector<std::string> out;
    if (report.syntax && !report.syntax->pass) out.push_back(report.syntax->diagnostic);
    if (report.compile && !report.compile->pass) out.push_back(report.compile->diagnostic);
    for (const auto& c : report.execute)
        if (c.outcome != CaseOutcome::Pass) out.push_back(c.diagnostic);
    return out;
}

std::vector<std::string> missing_modules(const std::vector<std::string>& diagnostics) {
    std::vector<std::string> mods;
    const std::string marker = "No module named '";
    for (const auto& d : diagnostics) {
        size_t p = d.find(marker);
        if (p == std::string::npos) continue;
        size_t b = p + marker.size();
        size_t e = d.find('\'', b);
        if (e != std::string::npos) mods.push_back(d.substr(b, e - b));
    }
    std::sort(mods.begin(), mods.end());
    mods.erase(std::unique(mods.begin(), mods.end()), mods.end());
    return mods;
}

bool mentions_missing_name(const std::vector<std::string>& diagnostics, const std::string& name) {
    const std::string needle = "name '" + name + "' is not defined";
    for (const auto& d : diagnostics)
        if (d.find(needle) != std::string::npos) return true;
    return false;
}

bool line_imports_module(const std::string& line, const std::string& mod) {
    std::string t = line;
    size_t b = t.find_first_not_of(" \t");
    if (b == std::string::npos) return false;
    t = t.substr(b);
    return t.rfind("import " + mod, 0) == 0 || t.rfind("from " + mod + " ", 0) == 0 ||
           t.rfind("from " + mod + ".", 0) == 0;
}

}  // namespace

std::set<int> diagnose(const std::string& candidate, const ValidationReport& report,
                       const RepairContext& ctx) {
    std::set<int> rules;
    auto segs = segment_candidate(candidate);
    auto diagnostics = gather_diagnostics(report);

    bool any_def = std::any_of(segs.begin(), segs.end(),
                               [](const Segment& s) { return s.kind == SegKind::Def; });

    if (report.truncated && any_def) rules.insert(1);

    if (mentions_missing_name(diagnostics, "pytest") &&
        candidate.find("import pytest") == std::string::npos)
        rules.insert(2);

    if (!ctx.class_name.empty() && mentions_missing_name(diagnostics, ctx.class_name)) {
        bool imported = false;
        for (const auto& l : to_lines(candidate))
            if (line_imports_module(l, ctx.module_name)) imported = true;
        if (!imported) rules.insert(3);
    }

    if (!missing_modules(diagnostics).empty()) rules.insert(4);

    for (const auto& s : segs) {
        if (s.kind != SegKind::Def) continue;
        for (const auto& l : s.lines)
            if (l.rfind("def ", 0) == 0 && has_self_first_param(l)) rules.insert(5);
    }

    if (!ctx.class_name.empty())
        for (const auto& s : segs)
            if (s.kind == SegKind::Def && s.name == ctx.class_name) rules.insert(6);

    for (const auto& s : segs) {
        if (s.kind == SegKind::Def) continue;
        for (const auto& l : s.lines)
            if (l.rfind("assert", 0) == 0) rules.insert(7);
    }

    for (const auto& s : segs)
        if (s.kind == SegKind::Def && !check_syntax(segment_text(s)).pass) rules.insert(8);

    if (report.no_executable_code) rules.insert(9);
    for (const auto& s : segs)
        if (def_body_comment_only(s)) rules.insert(9);

    return rules;
}

namespace {

/// Applies one numbered rule; returns true (and records) when text changed.
bool apply_rule(int rule, std::string& text, const RepairContext& ctx,
                const ValidationReport& report, RepairLog& log) {
    std::string before = text;
    auto record = [&](const std::string& scope) {
        log.applied.push_back({rule, scope, sha256_hex(before), sha256_hex(text)});
    };
    auto segs = segment_candidate(text);
    switch (rule) {
        case 1: {  // drop the truncated final case
            for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
                if (it->kind != SegKind::Def) continue;
                std::string scope = it->name;
                segs.erase(std::next(it).base());
                text = assemble(segs);
                record(scope);
                return true;
            }
            return false;
        }
        case 2: {
            text = "import pytest\n" + text;
            record("file");
            return true;
        }
        case 3: {
            text = "from " + ctx.module_name + " import " + ctx.class_name + "\n" + text;
            record("file");
            return true;
        }
        case 4: {
            auto mods = missing_modules(gather_diagnostics(report));
            bool changed = false;
            std::string out;
            for (const auto& l : to_lines(text)) {
                bool drop = false;
                for (const auto& m : mods)
                    if (line_imports_module(l, m)) drop = true;
                if (drop) {
                    changed = true;
                    continue;
                }
                out += l + "\n";
            }
            if (!changed) return false;
            text = out;
            record("file");
            return true;
        }
        case 5: {
            bool changed = false;
            for (auto& s : segs) {
                if (s.kind != SegKind::Def) continue;
                for (auto& l : s.lines)
                    if (l.rfind("def ", 0) == 0 && has_self_first_param(l)) {
                        l = drop_self_param(l);
                        changed = true;
                    }
            }
            if (!changed) return false;
            text = assemble(segs);
            record("file");
            return true;
        }
        case 6: {
            std::string scope;
            auto it = std::remove_if(segs.begin(), segs.end(), [&](const Segment& s) {
                if (s.kind == SegKind::Def && s.name == ctx.class_name) {
                    scope = s.name;
                    return true;
                }
                return false;
            });
            if (it == segs.end()) return false;
            segs.erase(it, segs.end());
            text = assemble(segs);
            record(scope);
            return true;
        }
        case 7: {
            // wrap each contiguous run of top-level bare asserts in a function
            int k = 0;
            bool changed = false;
            std::vector<Segment> out;
            for (auto& s : segs) {
                if (s.kind == SegKind::Def) {
                    out.push_back(std::move(s));
                    continue;
                }
                Segment keep;
                keep.kind = s.kind;
                Segment wrapped;
                auto flush_wrapped = [&]() {
                    if (wrapped.lines.size() <= 1) {
                        wrapped = Segment{};
                        return;
                    }
                    if (!keep.lines.empty()) {
                        out.push_back(keep);
                        keep = Segment{};
                        keep.kind = s.kind;
                    }
                    out.push_back(wrapped);
                    wrapped = Segment{};
                    changed = true;
                };
                for (const auto& l : s.lines) {
                    if (l.rfind("assert", 0) == 0) {
                        if (wrapped.lines.empty()) {
                            wrapped.kind = SegKind::Def;
                            wrapped.name = "test_repaired_" + std::to_string(++k);
                            wrapped.lines.push_back("def " + wrapped.name + "():");
                        }
                        wrapped.lines.push_back("    " + l);
                        continue;
                    }
                    if (!wrapped.lines.empty() && is_blank(l)) continue;
                    flush_wrapped();
                    keep.lines.push_back(l);
                }
                flush_wrapped();
                if (!keep.lines.empty()) out.push_back(std::move(keep));
            }
            if (!changed) return false;
            text = assemble(out);
            record("file");
            return true;
        }
        case 8: {
            std::vector<std::string> removed;
            std::vector<Segment> out;
            for (auto& s : segs) {
                if (s.kind == SegKind::Def && !check_syntax(segment_text(s)).pass) {
                    removed.push_back(s.name);
                    continue;
                }
                out.push_back(std::move(s));
            }
            if (removed.empty()) return false;
            text = assemble(out);
            for (const auto& name : removed) record(name);
            return true;
        }
        case 9: {
            std::vector<std::string> removed;
            std::vector<Segment> out;
            for (auto& s : segs) {
                if (def_body_comment_only(s)) {
                    removed.push_back(s.name);
                    continue;
                }
                if (s.kind == SegKind::Preamble &&
                    std::all_of(s.lines.begin(), s.lines.end(),
                                [](const auto& l) { return is_blank(l) || is_comment(l); })) {
                    removed.push_back("file");
                    continue;
                }
                out.push_back(std::move(s));
            }
            if (removed.empty()) return false;
            text = assemble(out);
            for (const auto& name : removed) record(name);
            return true;
        }
        default:
            return false;
    }
}

}  // namespace

RepairResult apply_repairs(const std::string& candidate, const Sandbox& sandbox,
                           const RepairContext& ctx, const std::string& problem_id,
                           bool truncated, int max_passes) {
    RepairResult result;
    result.text = candidate;
    result.log.problem_id = problem_id;
    ValidationReport report =
        validate(result.text, sandbox, problem_id, ValidationPhase::Original, truncated);
    result.final_report = report;
    for (int pass = 0; pass < max_passes; ++pass) {
        std::set<int> rules = diagnose(result.text, report, ctx);
        if (rules.empty()) break;
        bool changed = false;
        for (int rule : rules)
            changed |= apply_rule(rule, result.text, ctx, report, result.log);
        ++result.log.passes;
        if (!changed) break;
        // truncation is resolved once the offending tail is gone
        report = validate(result.text, sandbox, problem_id, ValidationPhase::Repaired, false);
        result.final_report = report;
    }
    return result;
}

RepairStats repair_stats(const std::vector<RepairLog>& logs) {
    RepairStats stats;
    for (int r = 1; r <= 9; ++r) stats.counts[r] = 0;
    for (const auto& log : logs)
        for (const auto& app : log.applied) {
            ++stats.counts[app.rule];
            ++stats.total;
        }
    for (int r = 1; r <= 9; ++r)
        stats.percentages[r] = stats.total ? 100.0 * stats.counts[r] / stats.total : 0.0;
    return stats;
}

}  // namespace suitesmith
