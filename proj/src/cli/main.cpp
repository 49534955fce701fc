#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "suitesmith/errors.hpp"
#include "suitesmith/pipeline.hpp"

using namespace suitesmith;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCellFailures = 1;
constexpr int kExitConfig = 2;

struct CliOptions {
    RunConfig config;
    std::string format = "canonical-jsonl";
    std::vector<std::string> sources{"human"};
    std::vector<std::string> strategies{"problem_sim"};
    std::string backend = "replay";
    long long timeout_ms = 120000;
    bool force = false;
};

void add_config_options(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--corpus", opts.config.corpus_path, "Corpus file to process")->required();
    cmd->add_option("--format", opts.format, "Corpus format")
        ->check(CLI::IsMember({"canonical-jsonl", "humaneval-style", "classeval-style"}));
    cmd->add_option("--source", opts.sources, "Test provenance to draw examples from");
    cmd->add_option("--strategy", opts.strategies, "Example selection strategy");
    cmd->add_option("--examples", opts.config.n_examples, "Few-shot examples per prompt");
    cmd->add_option("--backend", opts.backend, "Model backend mode")
        ->check(CLI::IsMember({"live", "replay", "record"}));
    cmd->add_option("--cache", opts.config.cache_path, "Replay cache file");
    cmd->add_option("--timeout-ms", opts.timeout_ms, "Per-case execution budget");
    cmd->add_option("--seed", opts.config.seed, "Seed for the random strategies");
    cmd->add_option("--out", opts.config.output_dir, "Run directory root");
    cmd->add_option("--module", opts.config.cut_module, "Import name of the class under test");
    cmd->add_flag("--force", opts.force, "Redo stages even when already complete");
}

RunConfig resolve(CliOptions& opts) {
    RunConfig config = opts.config;
    if (opts.format == "canonical-jsonl") config.format = CorpusFormat::CanonicalJsonl;
    else if (opts.format == "humaneval-style") config.format = CorpusFormat::HumanevalStyle;
    else config.format = CorpusFormat::ClassevalStyle;
    config.sources.clear();
    for (const auto& s : opts.sources) config.sources.push_back(test_source_from_string(s));
    config.strategies.clear();
    for (const auto& s : opts.strategies) config.strategies.push_back(strategy_from_string(s));
    config.backend = backend_mode_from_string(opts.backend);
    config.timeout_per_case = std::chrono::milliseconds(opts.timeout_ms);
    if (config.n_examples <= 0) throw ConfigError("--examples must be positive");
    return config;
}

int execute_stages(CliOptions& opts, const std::set<Stage>& stages) {
    RunConfig config = resolve(opts);
    RunManifest manifest = run_pipeline(config, stages, opts.force);
    std::printf("run %s\n", manifest.run_dir.c_str());
    for (const auto& [stage, artifact] : manifest.markers)
        std::printf("  %-9s %s\n", stage.c_str(), artifact.c_str());
    for (const auto& q : manifest.quarantined)
        std::fprintf(stderr, "quarantined: %s\n", q.c_str());
    return manifest.quarantined.empty() ? kExitOk : kExitCellFailures;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Few-shot test-suite generation, validation, repair, and optimization"};
    app.require_subcommand(1);

    CliOptions opts;
    std::set<Stage> requested;

    // Each stage subcommand accumulates its stage plus everything before it
    // that has not completed yet is rejected by the pipeline's ordering check,
    // so a bare stage on a fresh directory fails fast with guidance.
    for (Stage stage : all_stages()) {
        auto* cmd = app.add_subcommand(to_string(stage),
                                       "Run the " + to_string(stage) + " stage");
        add_config_options(cmd, opts);
        cmd->callback([&requested, stage] { requested.insert(stage); });
    }

    auto* run_cmd = app.add_subcommand("run", "Run every stage in order");
    add_config_options(run_cmd, opts);
    std::vector<std::string> stage_names;
    run_cmd->add_option("--stages", stage_names, "Subset of stages to run");
    run_cmd->callback([&requested, &stage_names] {
        if (stage_names.empty())
            for (Stage s : all_stages()) requested.insert(s);
        else
            for (const auto& n : stage_names) requested.insert(stage_from_string(n));
    });

    auto* diff_cmd = app.add_subcommand("diff", "Show metric deltas between two reports");
    std::string report_a, report_b;
    diff_cmd->add_option("a", report_a, "Baseline report")->required();
    diff_cmd->add_option("b", report_b, "Comparison report")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*diff_cmd) {
            nlohmann::json diff = diff_reports(report_a, report_b);
            std::printf("%s vs %s\n", diff["suite_a"].get<std::string>().c_str(),
                        diff["suite_b"].get<std::string>().c_str());
            for (const auto& [key, v] : diff["fields"].items()) {
                double delta = v["delta"].get<double>();
                std::printf("  %-18s %.1f -> %.1f (%+.1f)\n", key.c_str(),
                            v["a"].get<double>(), v["b"].get<double>(), delta);
            }
            return kExitOk;
        }
        return execute_stages(opts, requested);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitCellFailures;
    }
}
