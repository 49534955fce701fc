#pragma once

#include <string>
#include <vector>

#include "suitesmith/corpus.hpp"
#include "suitesmith/retrieval.hpp"

namespace suitesmith {

struct GenerationParams {
    std::string model_id = "gpt-4o";
    double temperature = 0.0;
    int max_output_tokens = 4096;

    bool operator==(const GenerationParams&) const = default;
};

struct PromptBundle {
    std::string problem_id;
    std::string system_text;
    std::string user_text;
    std::vector<std::string> example_ids;
    GenerationParams params;
    std::string digest;  // 64-hex SHA-256 of (system_text, user_text, params)
};

/// A problem skipped during batch planning, with the selection diagnostic.
struct PlanningSkip {
    std::string problem_id;
    std::string reason;
};

struct BatchPlan {
    std::vector<PromptBundle> bundles;  // ascending problem id
    std::vector<PlanningSkip> skips;
};

/// Lowercase hex SHA-256 of arbitrary bytes.
std::string sha256_hex(const std::string& data);

/// The fixed system prompt; constant across calls.
std::string build_system_prompt();

/// Renders the user prompt: class header, full solution source, then the
/// numbered example bodies in selection order. Throws PromptError when
/// examples is empty.
std::string build_user_prompt(const Problem& problem, const std::vector<TestCase>& examples);

/// Content digest binding prompt text and generation params.
std::string bundle_digest(const std::string& system_text, const std::string& user_text,
                          const GenerationParams& params);

/// One bundle per problem with a non-empty example pool; pool-less problems
/// become skips, never errors.
BatchPlan plan_batch(const Corpus& corpus, const SelectionStrategy& strategy, TestSource source,
                     int n, const GenerationParams& params);

/// Line-delimited archive of bundles for audit {digest, problem_id, ...}.
void write_prompt_archive(const BatchPlan& plan, const std::string& path,
                          const SelectionStrategy& strategy, TestSource source);

}  // namespace suitesmith
