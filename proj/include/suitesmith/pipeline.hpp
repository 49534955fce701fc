#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "suitesmith/corpus.hpp"
#include "suitesmith/modelgw.hpp"
#include "suitesmith/retrieval.hpp"

namespace suitesmith {

struct RunConfig {
    std::string corpus_path;
    CorpusFormat format = CorpusFormat::CanonicalJsonl;
    std::vector<TestSource> sources{TestSource::Human};
    std::vector<StrategyKind> strategies{StrategyKind::ProblemSim};
    int n_examples = 5;
    BackendMode backend = BackendMode::Replay;
    std::string cache_path;
    std::chrono::milliseconds timeout_per_case{120000};
    std::uint64_t seed = 0;
    std::string output_dir = "runs";
    std::string cut_module = "solution";  // import name the sandbox exposes
};

/// Stable digest over every field that affects artifacts.
std::string config_digest(const RunConfig& config);

enum class Stage { Ingest, Select, Prompt, Generate, Validate, Repair, Optimize, Report };

std::string to_string(Stage s);
Stage stage_from_string(const std::string& s);
const std::vector<Stage>& all_stages();

struct RunManifest {
    std::string config_digest;
    std::string run_dir;
    std::map<std::string, std::string> markers;  // stage name → artifact path
    std::vector<std::string> quarantined;        // "<source>:<strategy>: reason"

    nlohmann::json to_json() const;
};

/// Executes the requested stages in pipeline order for every
/// (source, strategy) cell. Completed stages are skipped unless forced.
/// Throws ConfigError when a requested stage's prerequisites are missing.
RunManifest run_pipeline(const RunConfig& config, const std::set<Stage>& stages,
                         bool force = false);

/// Per-metric signed deltas between two report files sharing a schema.
nlohmann::json diff_reports(const std::string& path_a, const std::string& path_b);

}  // namespace suitesmith
