// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line; the process exits nonzero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "suitesmith/corpus.hpp"
#include "suitesmith/metrics.hpp"
#include "suitesmith/modelgw.hpp"
#include "suitesmith/optimizer.hpp"
#include "suitesmith/pipeline.hpp"
#include "suitesmith/promptkit.hpp"
#include "suitesmith/repairer.hpp"
#include "suitesmith/retrieval.hpp"
#include "suitesmith/validator.hpp"

using namespace suitesmith;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------- criteria 1-3

Sandbox fixture_sandbox() {
    Sandbox s;
    s.module_name = "solution";
    s.solution_source =
        "class Widget:\n"
        "    def __init__(self):\n"
        "        self.size = 0\n"
        "    def grow(self, n):\n"
        "        if n < 0:\n"
        "            raise ValueError('negative growth')\n"
        "        self.size = self.size + n\n"
        "        return self.size\n"
        "    def shrink(self, n):\n"
        "        if n > self.size:\n"
        "            return 0\n"
        "        self.size = self.size - n\n"
        "        return self.size\n";
    s.timeout_per_case = std::chrono::milliseconds(2000);
    return s;
}

struct SeededCandidate {
    std::string text;
    bool truncated = false;
};

/// 32 candidate files collectively seeding all nine failure modes, most with
/// at least one salvageable case.
std::vector<SeededCandidate> seeded_candidates() {
    const std::string import_line = "from solution import Widget\n";
    const std::string good_case =
        "def test_grow_ok():\n    assert Widget().grow(2) == 2\n";
    std::vector<SeededCandidate> out;

    // mode 1: truncation mid-case
    out.push_back({import_line + "\n" + good_case +
                       "\ndef test_cut():\n    assert Widget().gro",
                   true});
    out.push_back({import_line + "\n" + good_case + "\ndef test_cut2():\n    x = Widget(", true});
    // mode 2: pytest used but never imported
    out.push_back({import_line +
                   "\ndef test_raises():\n    with pytest.raises(ValueError):\n"
                   "        Widget().grow(-1)\n"});
    out.push_back({import_line +
                   "\ndef test_raises2():\n    with pytest.raises(ValueError):\n"
                   "        Widget().grow(-5)\n\n" +
                   good_case});
    // mode 3: class under test never imported
    out.push_back({"def test_plain():\n    assert Widget().grow(1) == 1\n"});
    out.push_back({"def test_plain2():\n    assert Widget().shrink(1) == 0\n"});
    // mode 4: imports of unavailable modules
    out.push_back({"import numpy\n" + import_line + "\n" + good_case});
    out.push_back({"from collections import OrderedDict\n" + import_line + "\n" + good_case});
    // mode 5: stray self parameters
    out.push_back({import_line + "\ndef test_selfish(self):\n    assert Widget().grow(3) == 3\n"});
    out.push_back({import_line +
                   "\ndef test_selfish2(self):\n    assert Widget().shrink(2) == 0\n\n" +
                   good_case});
    // mode 6: the class under test re-defined in the candidate
    out.push_back({import_line + "\ndef Widget():\n    return None\n\n" + good_case});
    // mode 7: top-level bare asserts
    out.push_back({import_line + "assert Widget().grow(1) == 1\nassert Widget().grow(4) == 4\n"});
    out.push_back({import_line + "\n" + good_case + "\nassert Widget().shrink(9) == 0\n"});
    // mode 8: one syntactically broken case among intact ones
    out.push_back({import_line + "\n" + good_case +
                   "\ndef test_broken():\n    assert Widget().grow( == 1\n"});
    out.push_back({import_line + "\ndef test_broken2(:\n    pass\n\n" + good_case});
    // mode 9: comment-only output or comment-only bodies
    out.push_back({"# unable to produce tests\n"});
    out.push_back({import_line + "\ndef test_todo():\n    # later\n    pass\n\n" + good_case});

    // combined modes
    out.push_back({"import numpy\ndef test_combo(self):\n    assert Widget().grow(2) == 2\n"});
    out.push_back({"assert Widget().grow(2) == 2\n"});
    out.push_back({"import pandas\n" + import_line +
                   "assert Widget().grow(3) == 3\n\ndef test_c2(self):\n"
                   "    assert Widget().shrink(1) == 0\n"});
    out.push_back({import_line + "\ndef Widget():\n    pass\n\ndef test_c3():\n"
                   "    assert Widget().grow(1) == 1\nassert Widget().grow(2) == 2\n"});
    out.push_back({"def test_c4():\n    with pytest.raises(ValueError):\n"
                   "        Widget().grow(-2)\n"});
    // already-clean files to guard non-regression
    for (int i = 0; i < 10; ++i) {
        std::string name = "test_clean_" + std::to_string(i);
        out.push_back({import_line + "\ndef " + name + "():\n    assert Widget().grow(" +
                       std::to_string(i) + ") == " + std::to_string(i) + "\n"});
    }
    return out;
}

struct RepairOutcome {
    RepairResult result;
    ValidationReport before;
};

std::vector<RepairOutcome> repair_all(const std::vector<SeededCandidate>& seeds) {
    Sandbox sandbox = fixture_sandbox();
    RepairContext ctx{"Widget", "solution"};
    std::vector<RepairOutcome> out;
    for (size_t i = 0; i < seeds.size(); ++i) {
        RepairOutcome o;
        o.before = validate(seeds[i].text, sandbox, "fixture_" + std::to_string(i),
                            ValidationPhase::Original, seeds[i].truncated);
        o.result = apply_repairs(seeds[i].text, sandbox, ctx, "fixture_" + std::to_string(i),
                                 seeds[i].truncated);
        out.push_back(std::move(o));
    }
    return out;
}

int passing_cases(const ValidationReport& r) {
    int n = 0;
    for (const auto& c : r.execute)
        if (c.outcome == CaseOutcome::Pass) ++n;
    return n;
}

bool criterion1(const std::vector<RepairOutcome>& outcomes, double repair_secs,
                std::string& detail) {
    auto start = Clock::now();
    int retained = 0;
    for (const auto& o : outcomes) {
        if (o.result.text.empty()) continue;
        if (!check_syntax(o.result.text).pass) {
            detail = "a repaired file fails whole-file syntax";
            return false;
        }
        TestFile split = split_test_source(o.result.text);
        for (const auto& c : split.cases) {
            ++retained;
            if (!check_syntax(c.body).pass) {
                detail = "retained case " + c.name + " fails syntax";
                return false;
            }
        }
    }
    double secs = repair_secs + seconds_since(start);
    std::ostringstream msg;
    msg << retained << " retained cases all syntactically valid, " << secs
        << "s to repair and check";
    detail = msg.str();
    return retained > 0 && secs < 60.0;
}

bool criterion2(const std::vector<RepairOutcome>& outcomes, std::string& detail) {
    int pre = 0, post = 0, pre_total = 0, post_total = 0;
    for (const auto& o : outcomes) {
        pre += passing_cases(o.before);
        post += passing_cases(o.result.final_report);
        pre_total += static_cast<int>(o.before.execute.size());
        post_total += static_cast<int>(o.result.final_report.execute.size());
    }
    double pre_rate = pre_total ? 100.0 * pre / pre_total : 0.0;
    double post_rate = post_total ? 100.0 * post / post_total : 0.0;
    std::ostringstream msg;
    msg << "pass rate " << pre_rate << "% -> " << post_rate << "% (" << pre << "/" << pre_total
        << " -> " << post << "/" << post_total << " cases)";
    detail = msg.str();
    return post > pre && post_rate > pre_rate;
}

bool criterion3(const std::vector<RepairOutcome>& outcomes, std::string& detail) {
    Sandbox sandbox = fixture_sandbox();
    RepairContext ctx{"Widget", "solution"};
    for (size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        // idempotence: a second repair run applies zero rules
        RepairResult again = apply_repairs(o.result.text, sandbox, ctx,
                                           "fixture_" + std::to_string(i), false);
        if (!again.log.applied.empty()) {
            detail = "second pass still applied " + std::to_string(again.log.applied.size()) +
                     " rules on fixture " + std::to_string(i);
            return false;
        }
        // non-regression: every case passing before still passes after
        std::set<std::string> after_pass;
        for (const auto& c : o.result.final_report.execute)
            if (c.outcome == CaseOutcome::Pass) after_pass.insert(c.name);
        for (const auto& c : o.before.execute)
            if (c.outcome == CaseOutcome::Pass && !after_pass.count(c.name)) {
                detail = "case " + c.name + " regressed on fixture " + std::to_string(i);
                return false;
            }
    }
    detail = "second repair pass applies 0 rules and no passing case regressed, over " +
             std::to_string(outcomes.size()) + " fixtures";
    return true;
}

// ------------------------------------------------------------------ criterion 4

/// Dense brute-force TF-IDF oracle sharing only the tokenizer with the
/// implementation under test.
struct DenseOracle {
    std::vector<std::string> vocab;
    std::vector<double> idf;

    explicit DenseOracle(const std::vector<std::string>& docs) {
        std::set<std::string> seen;
        for (const auto& d : docs)
            for (const auto& t : tokenize(d)) seen.insert(t);
        vocab.assign(seen.begin(), seen.end());
        idf.resize(vocab.size());
        for (size_t i = 0; i < vocab.size(); ++i) {
            int df = 0;
            for (const auto& d : docs) {
                auto toks = tokenize(d);
                if (std::find(toks.begin(), toks.end(), vocab[i]) != toks.end()) ++df;
            }
            idf[i] = std::log((1.0 + docs.size()) / (1.0 + df)) + 1.0;
        }
    }

    std::vector<double> vec(const std::string& doc) const {
        std::vector<double> v(vocab.size(), 0.0);
        for (const auto& t : tokenize(doc)) {
            auto it = std::lower_bound(vocab.begin(), vocab.end(), t);
            if (it != vocab.end() && *it == t) v[it - vocab.begin()] += idf[it - vocab.begin()];
        }
        return v;
    }

    static double cosine(const std::vector<double>& a, const std::vector<double>& b) {
        double dot = 0, na = 0, nb = 0;
        for (size_t i = 0; i < a.size(); ++i) {
            dot += a[i] * b[i];
            na += a[i] * a[i];
            nb += b[i] * b[i];
        }
        if (na == 0 || nb == 0) return 0.0;
        return dot / (std::sqrt(na) * std::sqrt(nb));
    }
};

std::string oracle_strip_header(const Problem& p) {
    if (p.header_comment.empty()) return p.solution_source;
    std::istringstream in(p.solution_source);
    std::string line, rest;
    bool past = false;
    while (std::getline(in, line)) {
        if (!past) {
            size_t b = line.find_first_not_of(" \t");
            if (b == std::string::npos || line[b] == '#') continue;
            past = true;
        }
        rest += line + "\n";
    }
    return rest;
}

Corpus random_corpus(std::mt19937_64& rng) {
    static const char* words[] = {"stack", "queue", "graph", "matrix", "string", "parser",
                                  "cache", "token", "vector", "buffer", "heap", "trie"};
    std::uniform_int_distribution<int> n_problems(4, 12), n_words(3, 8), pick(0, 11);
    Corpus c;
    int count = n_problems(rng);
    for (int i = 0; i < count; ++i) {
        Problem p;
        p.id = "p" + std::to_string(100 + i);
        std::string desc;
        int w = n_words(rng);
        for (int j = 0; j < w; ++j) desc += std::string(words[pick(rng)]) + " ";
        p.description = desc;
        p.class_name = "C";
        p.solution_source = "# " + desc + "\nclass C:\n    def run_" +
                            std::string(words[pick(rng)]) + "(self):\n        return 0\n";
        p.header_comment = extract_header_comment(p.solution_source);
        c.problems[p.id] = p;

        TestFile tf;
        tf.problem_id = p.id;
        std::uniform_int_distribution<int> n_cases(1, 3);
        int cases = n_cases(rng);
        for (int k = 0; k < cases; ++k) {
            TestCase t;
            t.problem_id = p.id;
            t.source = TestSource::Human;
            t.name = "test_" + std::to_string(k);
            t.body = "def " + t.name + "():\n    assert True";
            t.id = p.id + "/human/" + t.name + "/" + std::to_string(k);
            tf.cases.push_back(t);
        }
        c.tests[{p.id, TestSource::Human}] = tf;
    }
    return c;
}

bool criterion4(std::string& detail) {
    auto start = Clock::now();
    std::mt19937_64 rng(20260826);
    for (int trial = 0; trial < 20; ++trial) {
        Corpus corpus = random_corpus(rng);

        // raw score equivalence on the description field
        std::vector<std::string> docs;
        std::vector<std::string> ids;
        for (const auto& [id, p] : corpus.problems) {
            ids.push_back(id);
            docs.push_back(p.description);
        }
        DenseOracle oracle(docs);
        VectorSpace space = fit(docs);
        for (size_t i = 0; i < docs.size(); ++i) {
            SparseVector qi = vectorize(docs[i], space);
            auto oi = oracle.vec(docs[i]);
            for (size_t j = 0; j < docs.size(); ++j) {
                double expect = DenseOracle::cosine(oi, oracle.vec(docs[j]));
                double got = cosine(qi, vectorize(docs[j], space));
                if (std::fabs(expect - got) > 1e-9) {
                    detail = "cosine mismatch " + std::to_string(got) + " vs " +
                             std::to_string(expect);
                    return false;
                }
            }
        }

        // strategy-level ranking equivalence with ascending-id tie-break
        auto ranked_by = [&](const Problem& target, auto field) {
            std::vector<std::string> pool;
            std::vector<std::string> field_docs;
            for (const auto& [id, p] : corpus.problems) field_docs.push_back(field(p));
            DenseOracle o(field_docs);
            auto qv = o.vec(field(target));
            std::vector<std::pair<double, std::string>> scored;
            for (const auto& [id, p] : corpus.problems) {
                if (id == target.id) continue;
                scored.push_back({DenseOracle::cosine(qv, o.vec(field(p))), id});
            }
            std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
            });
            std::vector<std::string> out;
            for (const auto& [s, id] : scored) out.push_back(id);
            return out;
        };
        auto expected_cases = [&](const std::vector<std::string>& ranked, int n) {
            std::vector<std::string> out;
            for (const auto& pid : ranked) {
                for (const auto& c : corpus.tests.at({pid, TestSource::Human}).cases) {
                    if (static_cast<int>(out.size()) == n) return out;
                    out.push_back(c.id);
                }
                if (static_cast<int>(out.size()) == n) break;
            }
            return out;
        };

        const int n = 5;
        for (const auto& [pid, target] : corpus.problems) {
            std::map<StrategyKind, std::vector<std::string>> expected;
            expected[StrategyKind::ProblemSim] =
                expected_cases(ranked_by(target, [](const Problem& p) { return p.description; }), n);
            expected[StrategyKind::CodeSim] =
                expected_cases(ranked_by(target, oracle_strip_header), n);
            expected[StrategyKind::CodeCommentSim] = expected_cases(
                ranked_by(target, [](const Problem& p) { return p.solution_source; }), n);
            // summed-field strategy: rebuild the combined score directly
            {
                std::vector<std::string> d_docs, c_docs;
                for (const auto& [id, p] : corpus.problems) {
                    d_docs.push_back(p.description);
                    c_docs.push_back(oracle_strip_header(p));
                }
                DenseOracle od(d_docs), oc(c_docs);
                auto qd = od.vec(target.description);
                auto qc = oc.vec(oracle_strip_header(target));
                std::vector<std::pair<double, std::string>> scored;
                for (const auto& [id, p] : corpus.problems) {
                    if (id == pid) continue;
                    scored.push_back({DenseOracle::cosine(qd, od.vec(p.description)) +
                                          DenseOracle::cosine(qc, oc.vec(oracle_strip_header(p))),
                                      id});
                }
                std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
                    if (a.first != b.first) return a.first > b.first;
                    return a.second < b.second;
                });
                std::vector<std::string> ranked;
                for (const auto& [s, id] : scored) ranked.push_back(id);
                expected[StrategyKind::ProblemPlusCodeSim] = expected_cases(ranked, n);
            }

            for (const auto& [kind, want] : expected) {
                auto got = select_examples({kind, 0}, target, corpus, TestSource::Human, n);
                if (got.size() != want.size()) {
                    detail = "selection size mismatch for " + to_string(kind) + " on " + pid;
                    return false;
                }
                for (size_t i = 0; i < got.size(); ++i)
                    if (got[i].id != want[i]) {
                        detail = "ranking mismatch for " + to_string(kind) + " on " + pid +
                                 " at position " + std::to_string(i);
                        return false;
                    }
            }

            // random strategies: determinism and pool membership
            for (StrategyKind kind :
                 {StrategyKind::RandomFromSuite, StrategyKind::RandomFromCut}) {
                auto a = select_examples({kind, 11}, target, corpus, TestSource::Human, n);
                auto b = select_examples({kind, 11}, target, corpus, TestSource::Human, n);
                if (!(a == b)) {
                    detail = "random strategy not seed-deterministic";
                    return false;
                }
                for (const auto& t : a) {
                    bool in_target = t.problem_id == pid;
                    if (kind == StrategyKind::RandomFromCut && !in_target) {
                        detail = "random_from_cut left its problem";
                        return false;
                    }
                    if (kind == StrategyKind::RandomFromSuite && in_target) {
                        detail = "random_from_suite drew from the target problem";
                        return false;
                    }
                }
            }
        }
    }
    double secs = seconds_since(start);
    std::ostringstream msg;
    msg << "20 randomized corpora, all six strategies match the dense oracle, " << secs << "s";
    detail = msg.str();
    return secs < 30.0;
}

// ------------------------------------------------------------------ criterion 5

bool criterion5(std::string& detail) {
    auto start = Clock::now();
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<int> n_cands(4, 14), arg(-4, 9), which(0, 2);
    int total_candidates = 0;
    for (int trial = 0; trial < 50; ++trial) {
        Sandbox s;
        s.module_name = "solution";
        s.solution_source =
            "def alpha(x):\n"
            "    if x > 0:\n"
            "        return x\n"
            "    return -x\n"
            "def beta(x):\n"
            "    if x % 2 == 0:\n"
            "        return 'even'\n"
            "    return 'odd'\n"
            "def gamma(x):\n"
            "    if x > 5:\n"
            "        return 5\n"
            "    return x\n";
        s.timeout_per_case = std::chrono::milliseconds(2000);

        std::vector<TestCase> candidates;
        int n = n_cands(rng);
        for (int i = 0; i < n; ++i) {
            int a = arg(rng);
            int f = which(rng);
            std::string call, expect;
            if (f == 0) {
                call = "alpha(" + std::to_string(a) + ")";
                expect = std::to_string(a > 0 ? a : -a);
            } else if (f == 1) {
                call = "beta(" + std::to_string(a) + ")";
                expect = ((a % 2 + 2) % 2 == 0) ? "'even'" : "'odd'";
            } else {
                call = "gamma(" + std::to_string(a) + ")";
                expect = std::to_string(a > 5 ? 5 : a);
            }
            // every fifth candidate asserts the wrong value on purpose
            if (i % 5 == 4) expect = "'never_this'";
            TestCase t;
            t.name = "test_" + std::to_string(trial) + "_" + std::to_string(i);
            t.id = "p/llm/" + t.name + "/" + std::to_string(i);
            t.problem_id = "p";
            t.source = TestSource::Llm;
            t.body = "def " + t.name + "():\n    assert " + call + " == " + expect;
            candidates.push_back(t);
        }
        total_candidates += n;

        const std::string preamble = "from solution import alpha, beta, gamma";
        OptimizationResult r = optimize_suite({}, candidates, preamble, s);
        if (r.decisions.size() != candidates.size()) {
            detail = "accounting broken: " + std::to_string(r.decisions.size()) + " decisions for " +
                     std::to_string(candidates.size()) + " candidates";
            return false;
        }
        if (r.after.line_pct + 1e-12 < r.before.line_pct ||
            r.after.branch_pct + 1e-12 < r.before.branch_pct) {
            detail = "final coverage below initial";
            return false;
        }
        // replay the greedy admission to confirm monotone growth and witnesses
        CoverageSnapshot snap = r.before;
        size_t kept_idx = 0;
        for (const auto& d : r.decisions) {
            if (d.verdict == Verdict::Kept) {
                if (d.delta_lines + d.delta_branch_arms < 1) {
                    detail = "kept candidate " + d.case_id + " without strict improvement";
                    return false;
                }
                double prev_lines = snap.covered_line_count();
                CoverageRun run =
                    run_case_with_coverage(preamble, r.kept[kept_idx++], s);
                for (int line : run.coverage.lines) snap.lines[s.module_name].insert(line);
                for (const auto& arm : run.coverage.arms) snap.arms[s.module_name].insert(arm);
                snap.recompute_percentages();
                if (snap.covered_line_count() < prev_lines) {
                    detail = "coverage shrank mid-stream";
                    return false;
                }
            }
        }
        if (std::fabs(snap.line_pct - r.after.line_pct) > 1e-9 ||
            std::fabs(snap.branch_pct - r.after.branch_pct) > 1e-9) {
            detail = "replayed kept-set coverage disagrees with the reported final snapshot";
            return false;
        }
    }
    double secs = seconds_since(start);
    std::ostringstream msg;
    msg << "50 streams, " << total_candidates
        << " candidates, all decisions accounted, coverage monotone, " << secs << "s";
    detail = msg.str();
    return secs < 120.0;
}

// ------------------------------------------------------------------ criterion 6

bool criterion6(std::string& detail) {
    Sandbox s;
    s.module_name = "solution";
    s.solution_source = "def idle():\n    return 0\n";
    s.timeout_per_case = std::chrono::milliseconds(2000);
    std::string candidate =
        "def test_spin():\n"
        "    x = 0\n"
        "    while True:\n"
        "        x = x + 1\n";
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        auto start = Clock::now();
        auto results = execute_tests(candidate, s);
        double secs = seconds_since(start);
        worst = std::max(worst, secs);
        if (results.size() != 1 || results[0].outcome != CaseOutcome::Timeout) {
            detail = "runaway case not classified as timeout";
            return false;
        }
        if (secs > 2.5) {
            detail = "termination took " + std::to_string(secs) + "s against a 2s budget";
            return false;
        }
    }
    std::ostringstream msg;
    msg << "10 repetitions, worst termination " << worst << "s against a 2s budget (limit 2.5s)";
    detail = msg.str();
    return true;
}

// ------------------------------------------------------------------ criterion 7

bool criterion7(std::string& detail) {
    const std::string expected_system =
        "You are an expert in Python test generation using pytest. Your goal is to generate "
        "new high-quality unit tests for a given Python class. You will be provided with the "
        "class definition and your output should be a list of new unit tests. The prompt will "
        "include EXAMPLES of similar test cases to help you generate well-structured test "
        "cases. Make sure to keep the tests maintainable and easy to understand, while aiming "
        "for high code coverage. The output should only include the test classes.";
    if (build_system_prompt() != expected_system) {
        detail = "system prompt text drifted";
        return false;
    }
    Problem p;
    p.id = "p_demo";
    p.class_name = "Demo";
    p.solution_source = "class Demo:\n    def go(self):\n        return 1\n";
    auto count = [](const std::string& text, const std::string& needle) {
        size_t n = 0, pos = 0;
        while ((pos = text.find(needle, pos)) != std::string::npos) {
            ++n;
            pos += needle.size();
        }
        return n;
    };
    for (int n : {1, 3, 5}) {
        std::vector<TestCase> examples;
        for (int i = 0; i < n; ++i) {
            TestCase t;
            t.name = "test_ex_" + std::to_string(i);
            t.body = "def " + t.name + "():\n    assert " + std::to_string(i) + " == " +
                     std::to_string(i);
            examples.push_back(t);
        }
        std::string user = build_user_prompt(p, examples);
        if (count(user, "# CLASS UNDER TEST:") != 1 || count(user, "# EXAMPLES:") != 1) {
            detail = "section markers not present exactly once for n=" + std::to_string(n);
            return false;
        }
        size_t prev = user.find("# EXAMPLES:");
        for (int i = 0; i < n; ++i) {
            size_t at = user.find(examples[i].body);
            if (at == std::string::npos || at < prev) {
                detail = "example " + std::to_string(i + 1) + " missing or out of order for n=" +
                         std::to_string(n);
                return false;
            }
            prev = at;
        }
        if (count(user, "# EXAMPLE ") != static_cast<size_t>(n)) {
            detail = "example numbering wrong for n=" + std::to_string(n);
            return false;
        }
    }
    detail = "system text verbatim; markers once each; bodies present and ordered for n in {1,3,5}";
    return true;
}

// ------------------------------------------------------------------ criterion 8

bool criterion8(std::string& detail) {
    auto tcase = [](const std::string& body) {
        TestCase t;
        t.name = "t";
        t.body = body;
        return t;
    };
    struct Annotated {
        std::string body;
        int cyc;
        int cog;
    };
    const std::vector<Annotated> oracle = {
        {"def t():\n    x = 1\n    assert x == 1", 1, 0},
        {"def t():\n    assert 1 == 1\n    assert 2 == 2\n    assert 3 == 3", 1, 0},
        {"def t():\n    if 1 > 0:\n        assert True", 2, 1},
        {"def t():\n    if 1 > 0:\n        x = 1\n    else:\n        x = 2\n    assert x == 1",
         2, 2},
        {"def t():\n    for i in range(3):\n        assert i >= 0", 2, 1},
        {"def t():\n    for i in range(3):\n        if i == 1:\n            assert i == 1", 3, 3},
        {"def t():\n    assert True and True or False", 3, 2},
        {"def t():\n    x = 1 if True else 2\n    assert x == 1", 2, 1},
        {"def t():\n    try:\n        x = 1\n    except ValueError:\n        x = 2\n"
         "    assert x == 1",
         2, 1},
        {"def t():\n    i = 0\n    while i < 5:\n        if i > 1:\n            if i > 2:\n"
         "                x = i\n        i = i + 1\n    assert i == 5",
         4, 6},
    };
    for (size_t i = 0; i < oracle.size(); ++i) {
        int cyc = cyclomatic(tcase(oracle[i].body));
        int cog = cognitive(tcase(oracle[i].body));
        if (cyc != oracle[i].cyc || cog != oracle[i].cog) {
            detail = "case " + std::to_string(i) + ": cyclomatic " + std::to_string(cyc) + "/" +
                     std::to_string(oracle[i].cyc) + ", cognitive " + std::to_string(cog) + "/" +
                     std::to_string(oracle[i].cog);
            return false;
        }
    }
    detail = "10 hand-annotated cases match exactly; straight-line cognitive is 0";
    return true;
}

// ------------------------------------------------------------------ criterion 9

Corpus replay_corpus() {
    Corpus c;
    for (int i = 0; i < 10; ++i) {
        std::string cls = "Machine" + std::to_string(i);
        Problem p;
        p.id = "p_" + std::to_string(i);
        p.class_name = cls;
        p.description = "Machine number " + std::to_string(i) + " clamps values at " +
                        std::to_string(i + 3) + ".";
        p.solution_source = "class " + cls + ":\n" +
                            "    def clamp(self, x):\n"
                            "        if x > " + std::to_string(i + 3) + ":\n" +
                            "            return " + std::to_string(i + 3) + "\n" +
                            "        return x\n";
        c.problems[p.id] = p;
        for (TestSource source : {TestSource::Human, TestSource::Sbst, TestSource::Llm}) {
            TestFile tf;
            tf.problem_id = p.id;
            tf.preamble = "from solution import " + cls;
            TestCase t;
            t.problem_id = p.id;
            t.source = source;
            t.name = "test_low";
            t.body = "def test_low():\n    assert " + cls + "().clamp(1) == 1";
            t.id = p.id + "/" + to_string(source) + "/test_low/0";
            tf.cases.push_back(t);
            c.tests[{p.id, source}] = tf;
        }
    }
    return c;
}

void seed_replay_cache(const Corpus& corpus, const RunConfig& config) {
    ReplayCache cache(config.cache_path);
    GenerationParams params;
    for (TestSource source : config.sources) {
        for (StrategyKind kind : config.strategies) {
            BatchPlan plan =
                plan_batch(corpus, {kind, config.seed}, source, config.n_examples, params);
            for (const auto& bundle : plan.bundles) {
                if (cache.contains(bundle.digest)) continue;
                const Problem& p = corpus.problems.at(bundle.problem_id);
                std::string limit = p.description.substr(p.description.rfind(' ') + 1);
                limit.pop_back();  // trailing period
                ModelResponse r;
                r.digest = bundle.digest;
                r.raw_text = "```python\nfrom solution import " + p.class_name +
                             "\n\ndef test_above():\n    assert " + p.class_name +
                             "().clamp(99) == " + limit + "\n\ndef test_below():\n    assert " +
                             p.class_name + "().clamp(0) == 0\n```\n";
                r.finish_reason = FinishReason::Complete;
                cache.put(r);
            }
        }
    }
}

bool criterion9(std::string& detail) {
    auto start = Clock::now();
    fs::path base = fs::temp_directory_path() / "suitesmith_acceptance_replay";
    fs::remove_all(base);
    fs::create_directories(base);
    Corpus corpus = replay_corpus();
    RunConfig config;
    config.corpus_path = (base / "corpus.jsonl").string();
    config.cache_path = (base / "cache.jsonl").string();
    config.sources = {TestSource::Human, TestSource::Sbst, TestSource::Llm};
    config.strategies = {StrategyKind::RandomFromSuite,  StrategyKind::RandomFromCut,
                         StrategyKind::ProblemSim,       StrategyKind::CodeSim,
                         StrategyKind::CodeCommentSim,   StrategyKind::ProblemPlusCodeSim};
    config.n_examples = 3;
    emit_to_file(corpus, config.corpus_path);
    seed_replay_cache(corpus, config);

    std::string flags = " --corpus " + config.corpus_path + " --backend replay --cache " +
                        config.cache_path + " --examples 3";
    for (TestSource s : config.sources) flags += " --source " + to_string(s);
    for (StrategyKind k : config.strategies) flags += " --strategy " + to_string(k);
    auto invoke = [&](const std::string& out_dir) {
        std::string cmd = std::string(SUITESMITH_CLI_PATH) + " run" + flags + " --out " +
                          out_dir + " >/dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    std::string out_a = (base / "runs_a").string();
    std::string out_b = (base / "runs_b").string();
    if (invoke(out_a) != 0 || invoke(out_b) != 0) {
        detail = "replay run exited nonzero";
        return false;
    }

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(out_a)) {
        if (!e.is_regular_file()) continue;
        fs::path rel = fs::relative(e.path(), out_a);
        ++files;
        if (slurp(e.path()) != slurp(out_b / rel)) {
            detail = "artifact differs between runs: " + rel.string();
            return false;
        }
    }
    double secs = seconds_since(start);
    fs::remove_all(base);
    std::ostringstream msg;
    msg << "18 cells over 10 problems, " << files << " artifacts byte-identical, " << secs << "s";
    detail = msg.str();
    return files >= 8 && secs < 600.0;
}

// ----------------------------------------------------------------- criterion 10

bool criterion10(std::string& detail) {
    fs::path base = fs::temp_directory_path() / "suitesmith_acceptance_diff";
    fs::create_directories(base);
    auto write_report = [&](const std::string& name, double line, double branch, double debt) {
        nlohmann::json r{{"schema_version", 1},  {"suite_id", name},     {"total_tests", 12},
                         {"cyclomatic_total", 14}, {"cognitive_total", 3}, {"avg_smells", 0.25},
                         {"avg_debt_minutes", debt}, {"line_pct", line},  {"branch_pct", branch}};
        fs::path p = base / name;
        std::ofstream(p) << r.dump();
        return p.string();
    };
    std::string a = write_report("a.json", 76.2, 61.5, 4.0);
    std::string b = write_report("b.json", 82.4, 61.5, 3.1);
    nlohmann::json diff = diff_reports(a, b);
    double line_delta = diff.at("fields").at("line_pct").at("delta").get<double>();
    double branch_delta = diff.at("fields").at("branch_pct").at("delta").get<double>();
    double debt_delta = diff.at("fields").at("avg_debt_minutes").at("delta").get<double>();
    fs::remove_all(base);
    if (line_delta != 6.2 || branch_delta != 0.0 || debt_delta != -0.9) {
        std::ostringstream msg;
        msg << "deltas " << line_delta << ", " << branch_delta << ", " << debt_delta;
        detail = msg.str();
        return false;
    }
    detail = "76.2 -> 82.4 yields +6.2 exactly; flat and negative deltas exact as well";
    return true;
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const char* title, bool pass, const std::string& detail) {
        std::printf("%s: criterion %2d (%s) — %s\n", pass ? "PASS" : "FAIL", id, title,
                    detail.c_str());
        if (!pass) ++failures;
    };

    auto repair_start = Clock::now();
    auto outcomes = repair_all(seeded_candidates());
    double repair_secs = seconds_since(repair_start);
    std::string detail;

    bool ok = criterion1(outcomes, repair_secs, detail);
    report(1, "repaired-syntax guarantee", ok, detail);
    ok = criterion2(outcomes, detail);
    report(2, "repair improves pass rate", ok, detail);
    ok = criterion3(outcomes, detail);
    report(3, "repair idempotence and non-regression", ok, detail);
    ok = criterion4(detail);
    report(4, "retrieval oracle equivalence", ok, detail);
    ok = criterion5(detail);
    report(5, "optimizer monotonicity and accounting", ok, detail);
    ok = criterion6(detail);
    report(6, "timeout enforcement", ok, detail);
    ok = criterion7(detail);
    report(7, "prompt fidelity", ok, detail);
    ok = criterion8(detail);
    report(8, "complexity metric fixtures", ok, detail);
    ok = criterion9(detail);
    report(9, "end-to-end replay determinism", ok, detail);
    ok = criterion10(detail);
    report(10, "report diff arithmetic", ok, detail);

    if (failures) std::printf("%d of 10 criteria failed\n", failures);
    else std::printf("all 10 criteria passed\n");
    return failures ? 1 : 0;
}
