#include "suitesmith/promptkit.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "suitesmith/errors.hpp"

namespace suitesmith {

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

std::string build_system_prompt() {
    return "You are an expert in Python test generation using pytest. Your goal is to generate "
           "new high-quality unit tests for a given Python class. You will be provided with the "
           "class definition and your output should be a list of new unit tests. The prompt will "
           "include EXAMPLES of similar test cases to help you generate well-structured test "
           "cases. Make sure to keep the tests maintainable and easy to understand, while aiming "
           "for high code coverage. The output should only include the test classes.";
}

std::string build_user_prompt(const Problem& problem, const std::vector<TestCase>& examples) {
    if (examples.empty())
        throw PromptError("few-shot prompt for " + problem.id + " requires at least one example");
    std::string out = "# CLASS UNDER TEST: " + problem.class_name + "\n";
    out += problem.solution_source;
    if (out.back() != '\n') out += '\n';
    out += "\n# EXAMPLES:\n";
    for (size_t i = 0; i < examples.size(); ++i) {
        out += "\n# EXAMPLE " + std::to_string(i + 1) + "\n";
        out += examples[i].body;
        if (out.back() != '\n') out += '\n';
    }
    return out;
}

std::string bundle_digest(const std::string& system_text, const std::string& user_text,
                          const GenerationParams& params) {
    // length-prefixed framing so field boundaries cannot collide
    std::ostringstream buf;
    buf << system_text.size() << ':' << system_text << user_text.size() << ':' << user_text
        << params.model_id << '|' << params.temperature << '|' << params.max_output_tokens;
    return sha256_hex(buf.str());
}

BatchPlan plan_batch(const Corpus& corpus, const SelectionStrategy& strategy, TestSource source,
                     int n, const GenerationParams& params) {
    BatchPlan plan;
    const std::string system_text = build_system_prompt();
    for (const auto& [id, problem] : corpus.problems) {
        std::vector<TestCase> examples;
        try {
            examples = select_examples(strategy, problem, corpus, source, n);
        } catch (const SelectionError& e) {
            plan.skips.push_back({id, e.what()});
            continue;
        }
        PromptBundle b;
        b.problem_id = id;
        b.system_text = system_text;
        b.user_text = build_user_prompt(problem, examples);
        for (const auto& e : examples) b.example_ids.push_back(e.id);
        b.params = params;
        b.digest = bundle_digest(b.system_text, b.user_text, b.params);
        plan.bundles.push_back(std::move(b));
    }
    return plan;
}

void write_prompt_archive(const BatchPlan& plan, const std::string& path,
                          const SelectionStrategy& strategy, TestSource source) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write prompt archive '" + path + "'");
    for (const auto& b : plan.bundles) {
        nlohmann::json rec;
        rec["digest"] = b.digest;
        rec["problem_id"] = b.problem_id;
        rec["strategy"] = to_string(strategy.kind);
        rec["source"] = to_string(source);
        rec["system_text"] = b.system_text;
        rec["user_text"] = b.user_text;
        rec["example_ids"] = b.example_ids;
        rec["params"] = {{"model_id", b.params.model_id},
                         {"temperature", b.params.temperature},
                         {"max_output_tokens", b.params.max_output_tokens}};
        out << rec.dump() << "\n";
    }
}

}  // namespace suitesmith
