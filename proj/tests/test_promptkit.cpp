#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "suitesmith/errors.hpp"
#include "suitesmith/promptkit.hpp"

using namespace suitesmith;
namespace fs = std::filesystem;

namespace {

size_t count_occurrences(const std::string& text, const std::string& needle) {
    size_t n = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

Problem sample_problem() {
    Problem p;
    p.id = "p_acc";
    p.class_name = "Accumulator";
    p.description = "Accumulates integers.";
    p.solution_source =
        "class Accumulator:\n"
        "    def __init__(self):\n"
        "        self.total = 0\n"
        "    def add(self, x):\n"
        "        self.total = self.total + x\n"
        "        return self.total\n";
    return p;
}

std::vector<TestCase> sample_examples(int n) {
    std::vector<TestCase> out;
    for (int i = 0; i < n; ++i) {
        TestCase t;
        t.id = "other/human/test_" + std::to_string(i) + "/" + std::to_string(i);
        t.problem_id = "other";
        t.source = TestSource::Human;
        t.name = "test_" + std::to_string(i);
        t.body = "def test_" + std::to_string(i) + "():\n    assert " + std::to_string(i) +
                 " == " + std::to_string(i);
        out.push_back(t);
    }
    return out;
}

Corpus two_problem_corpus() {
    Corpus c;
    Problem target = sample_problem();
    c.problems[target.id] = target;
    Problem other;
    other.id = "p_other";
    other.class_name = "Other";
    other.description = "Another class.";
    other.solution_source = "class Other:\n    pass\n";
    c.problems[other.id] = other;

    TestFile tf;
    tf.problem_id = "p_other";
    for (auto& t : sample_examples(2)) {
        t.problem_id = "p_other";
        tf.cases.push_back(t);
    }
    c.tests[{"p_other", TestSource::Human}] = tf;
    return c;
}

}  // namespace

TEST_CASE("sha256 matches known vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("system prompt is the fixed instruction block") {
    std::string sys = build_system_prompt();
    CHECK(sys ==
          "You are an expert in Python test generation using pytest. Your goal is to generate "
          "new high-quality unit tests for a given Python class. You will be provided with the "
          "class definition and your output should be a list of new unit tests. The prompt will "
          "include EXAMPLES of similar test cases to help you generate well-structured test "
          "cases. Make sure to keep the tests maintainable and easy to understand, while aiming "
          "for high code coverage. The output should only include the test classes.");
    CHECK(build_system_prompt() == sys);  // constant across calls
}

TEST_CASE("user prompt carries both section markers exactly once") {
    Problem p = sample_problem();
    for (int n : {1, 3, 5}) {
        std::string user = build_user_prompt(p, sample_examples(n));
        CHECK(count_occurrences(user, "# CLASS UNDER TEST: Accumulator\n") == 1);
        CHECK(count_occurrences(user, "# EXAMPLES:\n") == 1);
        CHECK(user.find(p.solution_source) != std::string::npos);
        // every example body appears, numbered in order, after the marker
        size_t prev = user.find("# EXAMPLES:");
        for (int i = 1; i <= n; ++i) {
            size_t at = user.find("# EXAMPLE " + std::to_string(i) + "\n");
            REQUIRE(at != std::string::npos);
            CHECK(at > prev);
            prev = at;
        }
        CHECK(count_occurrences(user, "# EXAMPLE ") == static_cast<size_t>(n));
    }
}

TEST_CASE("example bodies are embedded verbatim") {
    Problem p = sample_problem();
    auto examples = sample_examples(3);
    std::string user = build_user_prompt(p, examples);
    for (const auto& e : examples) CHECK(user.find(e.body) != std::string::npos);
}

TEST_CASE("a prompt with no examples is an error") {
    CHECK_THROWS_AS(build_user_prompt(sample_problem(), {}), PromptError);
}

TEST_CASE("bundle digests are deterministic and sensitive to every field") {
    GenerationParams params;
    std::string base = bundle_digest("sys", "user", params);
    CHECK(base == bundle_digest("sys", "user", params));
    CHECK(base.size() == 64);
    CHECK(bundle_digest("sys2", "user", params) != base);
    CHECK(bundle_digest("sys", "user2", params) != base);
    GenerationParams other = params;
    other.temperature = 0.7;
    CHECK(bundle_digest("sys", "user", other) != base);
    other = params;
    other.model_id = "different-model";
    CHECK(bundle_digest("sys", "user", other) != base);
    other = params;
    other.max_output_tokens = 1;
    CHECK(bundle_digest("sys", "user", other) != base);
    // length-prefixed framing: moving a byte across the field boundary differs
    CHECK(bundle_digest("sysu", "ser", params) != base);
}

TEST_CASE("batch planning emits one bundle per eligible problem") {
    Corpus c = two_problem_corpus();
    GenerationParams params;
    BatchPlan plan = plan_batch(c, {StrategyKind::ProblemSim, 0}, TestSource::Human, 2, params);
    // p_acc can borrow p_other's cases; p_other has no other problem to draw from
    REQUIRE(plan.bundles.size() == 1);
    CHECK(plan.bundles[0].problem_id == "p_acc");
    CHECK(plan.bundles[0].example_ids.size() == 2);
    REQUIRE(plan.skips.size() == 1);
    CHECK(plan.skips[0].problem_id == "p_other");
    CHECK(!plan.skips[0].reason.empty());
}

TEST_CASE("planning twice yields identical digests") {
    Corpus c = two_problem_corpus();
    GenerationParams params;
    BatchPlan a = plan_batch(c, {StrategyKind::ProblemSim, 0}, TestSource::Human, 2, params);
    BatchPlan b = plan_batch(c, {StrategyKind::ProblemSim, 0}, TestSource::Human, 2, params);
    REQUIRE(a.bundles.size() == b.bundles.size());
    for (size_t i = 0; i < a.bundles.size(); ++i)
        CHECK(a.bundles[i].digest == b.bundles[i].digest);
}

TEST_CASE("prompt archive holds one auditable record per bundle") {
    Corpus c = two_problem_corpus();
    GenerationParams params;
    SelectionStrategy strategy{StrategyKind::ProblemSim, 0};
    BatchPlan plan = plan_batch(c, strategy, TestSource::Human, 2, params);
    fs::path path = fs::temp_directory_path() / "suitesmith_prompts.jsonl";
    write_prompt_archive(plan, path.string(), strategy, TestSource::Human);

    std::ifstream in(path);
    std::string line;
    int records = 0;
    while (std::getline(in, line)) {
        nlohmann::json rec = nlohmann::json::parse(line);
        CHECK(rec.at("digest") == plan.bundles[records].digest);
        CHECK(rec.at("strategy") == "problem_sim");
        CHECK(rec.at("source") == "human");
        CHECK(rec.at("system_text") == plan.bundles[records].system_text);
        ++records;
    }
    CHECK(records == static_cast<int>(plan.bundles.size()));
}
