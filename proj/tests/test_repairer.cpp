#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "suitesmith/repairer.hpp"

using namespace suitesmith;

namespace {

Sandbox widget_sandbox() {
    Sandbox s;
    s.module_name = "solution";
    s.solution_source =
        "class Widget:\n"
        "    def __init__(self):\n"
        "        self.size = 0\n"
        "    def grow(self, n):\n"
        "        self.size = self.size + n\n"
        "        return self.size\n";
    s.timeout_per_case = std::chrono::milliseconds(2000);
    return s;
}

RepairContext widget_ctx() { return {"Widget", "solution"}; }

RepairResult repair(const std::string& candidate, bool truncated = false) {
    return apply_repairs(candidate, widget_sandbox(), widget_ctx(), "p_widget", truncated);
}

bool applied_rule(const RepairResult& r, int rule) {
    for (const auto& a : r.log.applied)
        if (a.rule == rule) return true;
    return false;
}

int pass_count(const ValidationReport& r) {
    int n = 0;
    for (const auto& c : r.execute)
        if (c.outcome == CaseOutcome::Pass) ++n;
    return n;
}

int non_pass_count(const ValidationReport& r) {
    return static_cast<int>(r.execute.size()) - pass_count(r);
}

}  // namespace

TEST_CASE("truncated final case is dropped") {
    std::string candidate =
        "from solution import Widget\n"
        "\n"
        "def test_good():\n"
        "    assert Widget().grow(3) == 3\n"
        "\n"
        "def test_cut_off():\n"
        "    assert Widget().gro";
    RepairResult r = repair(candidate, /*truncated=*/true);
    CHECK(applied_rule(r, 1));
    CHECK(r.text.find("test_cut_off") == std::string::npos);
    CHECK(r.text.find("test_good") != std::string::npos);
    REQUIRE(r.final_report.execute.size() == 1);
    CHECK(r.final_report.all_executed_pass());
}

TEST_CASE("missing pytest import is added") {
    std::string candidate =
        "def test_raises():\n"
        "    with pytest.raises(ValueError):\n"
        "        raise ValueError('boom')\n";
    RepairResult r = repair(candidate);
    CHECK(applied_rule(r, 2));
    CHECK(r.text.rfind("import pytest\n", 0) == 0);
    CHECK(r.final_report.all_executed_pass());
    CHECK(!r.final_report.execute.empty());
}

TEST_CASE("missing class-under-test import is added") {
    std::string candidate =
        "def test_grow():\n"
        "    assert Widget().grow(2) == 2\n";
    RepairResult r = repair(candidate);
    CHECK(applied_rule(r, 3));
    CHECK(r.text.find("from solution import Widget") != std::string::npos);
    CHECK(r.final_report.all_executed_pass());
}

TEST_CASE("imports of unavailable modules are removed") {
    std::string candidate =
        "import numpy\n"
        "from solution import Widget\n"
        "\n"
        "def test_grow():\n"
        "    assert Widget().grow(4) == 4\n";
    RepairResult r = repair(candidate);
    CHECK(applied_rule(r, 4));
    CHECK(r.text.find("numpy") == std::string::npos);
    CHECK(r.text.find("from solution import Widget") != std::string::npos);
    CHECK(r.final_report.all_executed_pass());
}

TEST_CASE("stray self parameters are stripped from test functions") {
    std::string candidate =
        "from solution import Widget\n"
        "\n"
        "def test_grow(self):\n"
        "    assert Widget().grow(1) == 1\n";
    RepairResult r = repair(candidate);
    CHECK(applied_rule(r, 5));
    CHECK(r.text.find("(self)") == std::string::npos);
    CHECK(r.final_report.all_executed_pass());
}

TEST_CASE("a re-definition shadowing the class under test is removed") {
    std::string candidate =
        "from solution import Widget\n"
        "\n"
        "def Widget():\n"
        "    return None\n"
        "\n"
        "def test_grow():\n"
        "    assert Widget().grow(2) == 2\n";
    RepairResult r = repair(candidate);
    CHECK(applied_rule(r, 6));
    CHECK(r.text.find("def Widget") == std::string::npos);
    CHECK(r.final_report.all_executed_pass());
}

TEST_CASE("top-level bare asserts are wrapped into test functions") {
    std::string candidate =
        "from solution import Widget\n"
        "assert Widget().grow(1) == 1\n"
        "assert Widget().grow(5) == 5\n";
    RepairResult r = repair(candidate);
    CHECK(applied_rule(r, 7));
    CHECK(r.text.find("def test_repaired_1():") != std::string::npos);
    REQUIRE(!r.final_report.execute.empty());
    CHECK(r.final_report.all_executed_pass());
    // no bare assert remains at top level
    size_t pos = 0;
    bool bare = false;
    std::string text = "\n" + r.text;
    while ((pos = text.find("\nassert", pos)) != std::string::npos) {
        bare = true;
        break;
    }
    CHECK(!bare);
}

TEST_CASE("syntactically broken cases are removed, intact ones kept") {
    std::string candidate =
        "from solution import Widget\n"
        "\n"
        "def test_ok():\n"
        "    assert Widget().grow(2) == 2\n"
        "\n"
        "def test_broken():\n"
        "    assert Widget().grow( == 2\n";
    RepairResult r = repair(candidate);
    CHECK(applied_rule(r, 8));
    CHECK(r.text.find("test_broken") == std::string::npos);
    CHECK(r.text.find("test_ok") != std::string::npos);
    CHECK(check_syntax(r.text).pass);
    CHECK(r.final_report.all_executed_pass());
}

TEST_CASE("comment-only output is recognized and emptied") {
    std::string candidate = "# I could not generate tests\n# sorry\n";
    RepairResult r = repair(candidate);
    CHECK(applied_rule(r, 9));
    CHECK(r.text.find('#') == std::string::npos);
    CHECK(!r.log.applied.empty());
}

TEST_CASE("comment-only case bodies are dropped") {
    std::string candidate =
        "from solution import Widget\n"
        "\n"
        "def test_todo():\n"
        "    # fill me in\n"
        "    pass\n"
        "\n"
        "def test_real():\n"
        "    assert Widget().grow(1) == 1\n";
    // a body of only comments/pass is flagged; the real case survives
    RepairResult r = repair(candidate);
    if (applied_rule(r, 9)) CHECK(r.text.find("test_todo") == std::string::npos);
    CHECK(r.text.find("test_real") != std::string::npos);
    CHECK(r.final_report.all_executed_pass());
}

TEST_CASE("repairs on an already-clean candidate are the identity") {
    std::string candidate =
        "import pytest\n"
        "from solution import Widget\n"
        "\n"
        "def test_grow():\n"
        "    assert Widget().grow(2) == 2\n";
    RepairResult r = repair(candidate);
    CHECK(r.log.applied.empty());
    CHECK(r.text == candidate);
    CHECK(r.log.passes == 0);
}

TEST_CASE("repairing twice changes nothing further") {
    std::string candidate =
        "def test_grow():\n"
        "    assert Widget().grow(2) == 2\n"
        "assert Widget().grow(9) == 9\n";
    RepairResult once = repair(candidate);
    RepairResult twice = repair(once.text);
    CHECK(twice.text == once.text);
}

TEST_CASE("repair never reduces the number of passing cases") {
    std::vector<std::string> candidates = {
        "def test_a():\n    assert Widget().grow(1) == 1\n",          // needs import
        "from solution import Widget\ndef test_b(self):\n    assert Widget().grow(2) == 2\n",
        "import numpy\nfrom solution import Widget\ndef test_c():\n    assert True\n",
    };
    for (const auto& c : candidates) {
        Sandbox s = widget_sandbox();
        ValidationReport before =
            validate(c, s, "p", ValidationPhase::Original);
        RepairResult r = repair(c);
        CHECK(pass_count(r.final_report) >= pass_count(before));
    }
}

TEST_CASE("whatever survives repair parses") {
    std::vector<std::string> rough = {
        "def test_a(:\n    pass\ndef test_b():\n    assert True\n",
        "assert 1 == 1\nassert 2 == 2\n",
        "# nothing\n",
        "def Widget():\n    pass\ndef test_x():\n    assert Widget().grow(1) == 1\n",
    };
    for (const auto& c : rough) {
        RepairResult r = repair(c);
        if (!r.text.empty()) CHECK(check_syntax(r.text).pass);
    }
}

TEST_CASE("multiple faults are fixed in one run, rules in ascending order") {
    std::string candidate =
        "import numpy\n"
        "\n"
        "def test_one(self):\n"
        "    assert Widget().grow(1) == 1\n"
        "\n"
        "assert Widget().grow(2) == 2\n";
    RepairResult r = repair(candidate);
    CHECK(applied_rule(r, 5));
    CHECK(applied_rule(r, 7));
    CHECK(r.final_report.all_executed_pass());
    CHECK(non_pass_count(r.final_report) == 0);
    // within each pass, applications are recorded in ascending rule order
    int prev = 0;
    int seen_passes = 0;
    for (const auto& a : r.log.applied) {
        if (a.rule < prev) {
            ++seen_passes;  // a new pass restarted the ordering
            prev = 0;
        }
        CHECK(a.rule >= prev);
        prev = a.rule;
    }
    CHECK(seen_passes <= 1);  // at most two passes happen at all
}

TEST_CASE("application counts aggregate into stats") {
    std::vector<RepairLog> logs(2);
    logs[0].applied = {{2, "file", "a", "b"}, {3, "file", "b", "c"}};
    logs[1].applied = {{2, "file", "d", "e"}, {2, "file", "e", "f"}};
    RepairStats stats = repair_stats(logs);
    CHECK(stats.total == 4);
    CHECK(stats.counts.at(2) == 3);
    CHECK(stats.counts.at(3) == 1);
    CHECK(stats.counts.at(7) == 0);
    CHECK(stats.percentages.at(2) == doctest::Approx(75.0));
    CHECK(stats.percentages.at(3) == doctest::Approx(25.0));
}
