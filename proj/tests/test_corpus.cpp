#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "suitesmith/corpus.hpp"
#include "suitesmith/errors.hpp"

using namespace suitesmith;
namespace fs = std::filesystem;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
    return p.string();
}

Corpus sample_corpus() {
    Corpus c;
    Problem p1;
    p1.id = "p_calc";
    p1.description = "A basic calculator.";
    p1.class_name = "Calculator";
    p1.solution_source =
        "# A basic calculator.\n"
        "class Calculator:\n"
        "    def add(self, a, b):\n"
        "        return a + b\n"
        "    def div(self, a, b):\n"
        "        if b == 0:\n"
        "            raise ZeroDivisionError('no')\n"
        "        return a / b\n";
    p1.header_comment = extract_header_comment(p1.solution_source);
    c.problems[p1.id] = p1;

    Problem p2;
    p2.id = "p_stack";
    p2.description = "A LIFO stack.";
    p2.class_name = "Stack";
    p2.solution_source =
        "class Stack:\n"
        "    def __init__(self):\n"
        "        self.items = []\n"
        "    def push(self, x):\n"
        "        self.items.append(x)\n"
        "    def pop(self):\n"
        "        return self.items.pop()\n";
    c.problems[p2.id] = p2;

    TestFile tf;
    tf.problem_id = "p_calc";
    tf.preamble = "import pytest\nfrom solution import Calculator";
    TestCase t0;
    t0.id = "p_calc/human/test_add/0";
    t0.problem_id = "p_calc";
    t0.source = TestSource::Human;
    t0.name = "test_add";
    t0.body = "def test_add():\n    assert Calculator().add(1, 2) == 3";
    tf.cases.push_back(t0);
    TestCase t1 = t0;
    t1.id = "p_calc/human/test_div/1";
    t1.name = "test_div";
    t1.body =
        "def test_div():\n"
        "    with pytest.raises(ZeroDivisionError):\n"
        "        Calculator().div(1, 0)";
    tf.cases.push_back(t1);
    c.tests[{"p_calc", TestSource::Human}] = tf;
    return c;
}

int count_lines_matching(const std::string& text, const std::string& needle) {
    int n = 0;
    size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

}  // namespace

TEST_CASE("header comment extraction") {
    CHECK(extract_header_comment("# a stack\n# of ints\nclass S:\n    pass\n") ==
          "# a stack\n# of ints");
    CHECK(extract_header_comment("\"\"\"A queue.\"\"\"\nclass Q:\n    pass\n") == "A queue.");
    CHECK(extract_header_comment("'''multi\nline'''\nx = 1\n") == "multi\nline");
    CHECK(extract_header_comment("class S:\n    pass\n") == "");
    CHECK(extract_header_comment("") == "");
}

TEST_CASE("splitting keeps case bodies byte-identical") {
    std::string text =
        "import pytest\n"
        "from solution import Stack\n"
        "\n"
        "HELPER = 41\n"
        "\n"
        "def test_push():\n"
        "    s = Stack()\n"
        "    s.push(1)\n"
        "    assert s.pop() == 1\n"
        "\n"
        "@pytest.mark.slow\n"
        "def test_empty():\n"
        "    assert Stack().items == []\n";
    TestFile tf = split_test_source(text);
    REQUIRE(tf.cases.size() == 2);
    CHECK(tf.cases[0].name == "test_push");
    CHECK(tf.cases[0].body ==
          "def test_push():\n    s = Stack()\n    s.push(1)\n    assert s.pop() == 1");
    // the decorator belongs to the case, not the preamble
    CHECK(tf.cases[1].body ==
          "@pytest.mark.slow\ndef test_empty():\n    assert Stack().items == []");
    CHECK(tf.preamble == "import pytest\nfrom solution import Stack\n\nHELPER = 41");
}

TEST_CASE("splitting rejects unparseable text") {
    CHECK_THROWS_AS(split_test_source("def broken(:\n    pass\n"), NormalizationError);
}

TEST_CASE("assert-block normalization wraps bare statements") {
    std::string raw =
        "from solution import add\n"
        "assert add(1, 2) == 3\n"
        "assert add(0, 0) == 0\n"
        "\n"
        "def check(x):\n"
        "    return x + 1\n"
        "\n"
        "assert check(1) == 2\n";
    TestFile tf = normalize_tests(raw, TestDialect::AssertBlock);
    REQUIRE(tf.cases.size() == 2);
    CHECK(tf.cases[0].name == "test_block_1");
    CHECK(tf.cases[0].body ==
          "def test_block_1():\n    assert add(1, 2) == 3\n    assert add(0, 0) == 0");
    CHECK(tf.cases[1].name == "test_block_2");
    CHECK(tf.preamble ==
          "from solution import add\ndef check(x):\n    return x + 1");
    // assertion multiset is preserved: 3 in, 3 out
    int total = 0;
    for (const auto& c : tf.cases) total += count_lines_matching(c.body, "assert ");
    CHECK(total == 3);
}

TEST_CASE("assert-block normalization keeps existing test functions untouched") {
    std::string raw =
        "import pytest\n"
        "def test_one():\n"
        "    assert 1 == 1\n";
    TestFile tf = normalize_tests(raw, TestDialect::AssertBlock);
    REQUIRE(tf.cases.size() == 1);
    CHECK(tf.cases[0].body == "def test_one():\n    assert 1 == 1");
    CHECK(tf.preamble == "import pytest");
}

TEST_CASE("class-method normalization rewrites unittest suites") {
    std::string raw =
        "import unittest\n"
        "from solution import Calculator\n"
        "\n"
        "class TestCalculator(unittest.TestCase):\n"
        "    def setUp(self):\n"
        "        self.calc = Calculator()\n"
        "    def test_add(self):\n"
        "        self.assertEqual(self.calc.add(1, 2), 3)\n"
        "    def test_div_zero(self):\n"
        "        with self.assertRaises(ZeroDivisionError):\n"
        "            self.calc.div(1, 0)\n"
        "    def helper_case(self):\n"
        "        self.assertTrue(self.calc.add(0, 0) == 0)\n";
    TestFile tf = normalize_tests(raw, TestDialect::ClassMethodSuite);
    REQUIRE(tf.cases.size() == 3);
    CHECK(tf.cases[0].name == "test_add");
    CHECK(tf.cases[1].name == "test_div_zero");
    CHECK(tf.cases[2].name == "test_helper_case");
    // unittest import dropped, pytest import added for assertRaises rewrites
    CHECK(tf.preamble.find("unittest") == std::string::npos);
    CHECK(tf.preamble.find("import pytest") != std::string::npos);
    CHECK(tf.cases[0].body.find("assertEqual") == std::string::npos);
    CHECK(tf.cases[0].body.find("== 3") != std::string::npos);
    CHECK(tf.cases[1].body.find("pytest.raises(ZeroDivisionError)") != std::string::npos);
    // every rewritten case is standalone: no self parameter remains in the def line
    for (const auto& c : tf.cases) CHECK(c.body.find("(self)") == std::string::npos);
}

TEST_CASE("class-method normalization is idempotent over a round trip") {
    std::string raw =
        "import unittest\n"
        "class TestX(unittest.TestCase):\n"
        "    def test_a(self):\n"
        "        self.assertEqual(1 + 1, 2)\n";
    TestFile once = normalize_tests(raw, TestDialect::ClassMethodSuite);
    TestFile twice = split_test_source(once.render());
    CHECK(once.preamble == twice.preamble);
    REQUIRE(once.cases.size() == twice.cases.size());
    for (size_t i = 0; i < once.cases.size(); ++i) {
        CHECK(once.cases[i].name == twice.cases[i].name);
        CHECK(once.cases[i].body == twice.cases[i].body);
    }
}

TEST_CASE("emit then load reproduces the corpus") {
    Corpus c = sample_corpus();
    std::string path = write_temp("suitesmith_roundtrip.jsonl", emit(c));
    Corpus back = load_corpus(path, CorpusFormat::CanonicalJsonl);
    CHECK(back == c);
    // and a second round trip is byte-stable
    CHECK(emit(back) == emit(c));
}

TEST_CASE("duplicate problem ids are fatal") {
    std::string two =
        R"({"id": "p1", "solution": "x = 1"})" "\n"
        R"({"id": "p1", "solution": "x = 2"})" "\n";
    std::string path = write_temp("suitesmith_dup.jsonl", two);
    CHECK_THROWS_AS(load_corpus(path, CorpusFormat::CanonicalJsonl), IngestError);
}

TEST_CASE("malformed json is fatal but bad records are quarantined") {
    std::string path = write_temp("suitesmith_badjson.jsonl", "{not json\n");
    CHECK_THROWS_AS(load_corpus(path, CorpusFormat::CanonicalJsonl), IngestError);

    std::string mixed =
        R"({"id": "ok", "solution": "x = 1"})" "\n"
        R"({"solution": "missing id"})" "\n"
        R"({"id": "bad_tests", "solution": "y = 1", "tests": {"human": "def broken(:\n    pass"}})" "\n";
    path = write_temp("suitesmith_mixed.jsonl", mixed);
    Corpus c = load_corpus(path, CorpusFormat::CanonicalJsonl);
    CHECK(c.problems.count("ok") == 1);
    CHECK(c.problems.count("bad_tests") == 1);  // problem kept, its tests rejected
    CHECK(c.tests.count({"bad_tests", TestSource::Human}) == 0);
    CHECK(c.rejects.size() == 2);
}

TEST_CASE("humaneval-style records ingest as assert-block tests") {
    std::string rec = nlohmann::json{
        {"task_id", "HE/0"},
        {"prompt", "def add(a, b):\n    \"\"\"Return a + b.\"\"\"\n"},
        {"canonical_solution", "    return a + b\n"},
        {"entry_point", "add"},
        {"test", "from solution import add\nassert add(1, 1) == 2\n"}}.dump();
    std::string path = write_temp("suitesmith_he.jsonl", rec + "\n");
    Corpus c = load_corpus(path, CorpusFormat::HumanevalStyle);
    REQUIRE(c.problems.count("HE/0") == 1);
    CHECK(c.problems["HE/0"].class_name == "add");
    // no module-level docstring here, so the whole prompt is the description
    CHECK(c.problems["HE/0"].description ==
          "def add(a, b):\n    \"\"\"Return a + b.\"\"\"\n");
    auto it = c.tests.find({"HE/0", TestSource::Human});
    REQUIRE(it != c.tests.end());
    REQUIRE(it->second.cases.size() == 1);
    CHECK(it->second.cases[0].name == "test_block_1");
}

TEST_CASE("test case ids are scoped and ordinal-stable") {
    Corpus c = sample_corpus();
    std::string path = write_temp("suitesmith_ids.jsonl", emit(c));
    Corpus back = load_corpus(path, CorpusFormat::CanonicalJsonl);
    const TestFile& tf = back.tests.at({"p_calc", TestSource::Human});
    CHECK(tf.cases[0].id == "p_calc/human/test_add/0");
    CHECK(tf.cases[1].id == "p_calc/human/test_div/1");
    for (const auto& tc : tf.cases) {
        CHECK(tc.problem_id == "p_calc");
        CHECK(tc.source == TestSource::Human);
    }
}

TEST_CASE("render produces a runnable file and re-splits losslessly") {
    Corpus c = sample_corpus();
    const TestFile& tf = c.tests.at({"p_calc", TestSource::Human});
    TestFile again = split_test_source(tf.render());
    CHECK(again.preamble == tf.preamble);
    REQUIRE(again.cases.size() == tf.cases.size());
    for (size_t i = 0; i < tf.cases.size(); ++i) CHECK(again.cases[i].body == tf.cases[i].body);
}
