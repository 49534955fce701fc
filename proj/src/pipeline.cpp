#include "suitesmith/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "suitesmith/errors.hpp"
#include "suitesmith/metrics.hpp"
#include "suitesmith/optimizer.hpp"
#include "suitesmith/promptkit.hpp"
#include "suitesmith/repairer.hpp"
#include "suitesmith/validator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace suitesmith {

namespace {

const char* kManifestName = "manifest.json";

std::string format_name(CorpusFormat f) {
    switch (f) {
        case CorpusFormat::CanonicalJsonl: return "canonical-jsonl";
        case CorpusFormat::HumanevalStyle: return "humaneval-style";
        case CorpusFormat::ClassevalStyle: return "classeval-style";
    }
    return "?";
}

std::string cell_name(TestSource source, StrategyKind strategy) {
    return to_string(source) + "_" + to_string(strategy);
}

fs::path cell_dir(const fs::path& run_dir, TestSource source, StrategyKind strategy) {
    return run_dir / "cells" / cell_name(source, strategy);
}

void write_lines(const fs::path& path, const std::vector<json>& records) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    for (const auto& r : records) out << r.dump() << "\n";
}

std::vector<json> read_lines(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("missing artifact " + path.string());
    std::vector<json> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(json::parse(line));
    }
    return records;
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

Sandbox make_sandbox(const Problem& problem, const RunConfig& config) {
    Sandbox sandbox;
    sandbox.module_name = config.cut_module;
    sandbox.solution_source = problem.solution_source;
    sandbox.aux_sources = problem.aux_sources;
    sandbox.timeout_per_case = config.timeout_per_case;
    return sandbox;
}

json report_to_json(const ValidationReport& r) {
    json j;
    j["problem_id"] = r.problem_id;
    j["phase"] = r.phase == ValidationPhase::Original ? "original" : "repaired";
    j["truncated"] = r.truncated;
    j["no_executable_code"] = r.no_executable_code;
    if (r.syntax) j["syntax"] = {{"pass", r.syntax->pass}, {"diagnostic", r.syntax->diagnostic}};
    if (r.compile) j["compile"] = {{"pass", r.compile->pass}, {"diagnostic", r.compile->diagnostic}};
    json cases = json::array();
    for (const auto& c : r.execute)
        cases.push_back({{"name", c.name},
                         {"outcome", to_string(c.outcome)},
                         {"diagnostic", c.diagnostic}});
    j["execute"] = cases;
    return j;
}

json quality_to_json(const QualityReport& r) {
    json smells = json::array();
    for (const auto& s : r.smells)
        smells.push_back({{"case_id", s.case_id}, {"kind", to_string(s.kind)}});
    return json{{"schema_version", 1},
                {"suite_id", r.suite_id},
                {"total_tests", r.total_tests},
                {"cyclomatic_total", r.cyclomatic_total},
                {"cognitive_total", r.cognitive_total},
                {"smells", smells},
                {"avg_smells", r.avg_smells},
                {"avg_debt_minutes", r.avg_debt_minutes},
                {"line_pct", r.line_pct},
                {"branch_pct", r.branch_pct}};
}

/// Combines per-problem reports into one cell-level report: counters summed,
/// per-case averages recomputed from the sums, coverage averaged over the
/// problems that actually have a suite.
QualityReport aggregate_reports(const std::string& suite_id,
                                const std::vector<QualityReport>& parts) {
    QualityReport agg;
    agg.suite_id = suite_id;
    int covered_parts = 0;
    for (const auto& p : parts) {
        agg.total_tests += p.total_tests;
        agg.cyclomatic_total += p.cyclomatic_total;
        agg.cognitive_total += p.cognitive_total;
        agg.smells.insert(agg.smells.end(), p.smells.begin(), p.smells.end());
        if (p.total_tests > 0) {
            agg.line_pct += p.line_pct;
            agg.branch_pct += p.branch_pct;
            ++covered_parts;
        }
    }
    if (agg.total_tests > 0) {
        agg.avg_smells = double(agg.smells.size()) / agg.total_tests;
        agg.avg_debt_minutes = technical_debt(agg.smells, agg.total_tests);
    }
    if (covered_parts > 0) {
        agg.line_pct /= covered_parts;
        agg.branch_pct /= covered_parts;
    }
    return agg;
}

struct CellTask {
    TestSource source;
    StrategyKind strategy;
};

std::vector<CellTask> cells_of(const RunConfig& config) {
    std::vector<CellTask> cells;
    for (TestSource s : config.sources)
        for (StrategyKind k : config.strategies) cells.push_back({s, k});
    return cells;
}

}  // namespace

std::string config_digest(const RunConfig& config) {
    json j{{"corpus_path", config.corpus_path},
           {"format", format_name(config.format)},
           {"n_examples", config.n_examples},
           {"backend", to_string(config.backend)},
           {"cache_path", config.cache_path},
           {"timeout_ms", config.timeout_per_case.count()},
           {"seed", config.seed},
           {"cut_module", config.cut_module}};
    json sources = json::array();
    for (TestSource s : config.sources) sources.push_back(to_string(s));
    json strategies = json::array();
    for (StrategyKind k : config.strategies) strategies.push_back(to_string(k));
    j["sources"] = sources;
    j["strategies"] = strategies;
    return sha256_hex(j.dump());
}

std::string to_string(Stage s) {
    switch (s) {
        case Stage::Ingest: return "ingest";
        case Stage::Select: return "select";
        case Stage::Prompt: return "prompt";
        case Stage::Generate: return "generate";
        case Stage::Validate: return "validate";
        case Stage::Repair: return "repair";
        case Stage::Optimize: return "optimize";
        case Stage::Report: return "report";
    }
    return "?";
}

Stage stage_from_string(const std::string& s) {
    for (Stage st : all_stages())
        if (to_string(st) == s) return st;
    throw ConfigError("unknown stage '" + s + "'");
}

const std::vector<Stage>& all_stages() {
    static const std::vector<Stage> order{Stage::Ingest,   Stage::Select,  Stage::Prompt,
                                          Stage::Generate, Stage::Validate, Stage::Repair,
                                          Stage::Optimize, Stage::Report};
    return order;
}

// run_dir is deliberately absent from the serialized form so that two runs of
// the same configuration in different roots produce byte-identical manifests.
json RunManifest::to_json() const {
    json m{{"config_digest", config_digest}};
    m["markers"] = markers;
    m["quarantined"] = quarantined;
    return m;
}

namespace {

void save_manifest(const RunManifest& manifest) {
    write_text(fs::path(manifest.run_dir) / kManifestName, manifest.to_json().dump(2) + "\n");
}

RunManifest load_or_init_manifest(const RunConfig& config, const fs::path& run_dir,
                                  const std::string& digest) {
    RunManifest manifest;
    manifest.config_digest = digest;
    manifest.run_dir = run_dir.string();
    fs::path path = run_dir / kManifestName;
    if (fs::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        json m = json::parse(in);
        if (m.value("config_digest", "") != digest)
            throw ConfigError("run directory holds a different configuration");
        manifest.markers = m.value("markers", std::map<std::string, std::string>{});
        manifest.quarantined = m.value("quarantined", std::vector<std::string>{});
    }
    return manifest;
}

Corpus load_run_corpus(const RunManifest& manifest) {
    return load_corpus((fs::path(manifest.run_dir) / "corpus.jsonl").string(),
                       CorpusFormat::CanonicalJsonl);
}

void run_ingest(const RunConfig& config, RunManifest& manifest) {
    fs::path out = fs::path(manifest.run_dir) / "corpus.jsonl";
    Corpus corpus = load_corpus(config.corpus_path, config.format);
    emit_to_file(corpus, out.string());
    manifest.markers["ingest"] = "corpus.jsonl";
}

void run_select(const RunConfig& config, RunManifest& manifest, const Corpus& corpus) {
    for (const auto& cell : cells_of(config)) {
        fs::path dir = cell_dir(manifest.run_dir, cell.source, cell.strategy);
        std::vector<json> records;
        SelectionStrategy strategy{cell.strategy, config.seed};
        for (const auto& [pid, problem] : corpus.problems) {
            json rec{{"problem_id", pid}};
            try {
                auto examples =
                    select_examples(strategy, problem, corpus, cell.source, config.n_examples);
                json ids = json::array();
                for (const auto& e : examples) ids.push_back(e.id);
                rec["example_ids"] = ids;
            } catch (const SelectionError& e) {
                rec["skip"] = e.what();
            }
            records.push_back(rec);
        }
        write_lines(dir / "selections.jsonl", records);
    }
    manifest.markers["select"] = "cells/*/selections.jsonl";
}

void run_prompt(const RunConfig& config, RunManifest& manifest, const Corpus& corpus) {
    GenerationParams params;
    for (const auto& cell : cells_of(config)) {
        fs::path dir = cell_dir(manifest.run_dir, cell.source, cell.strategy);
        SelectionStrategy strategy{cell.strategy, config.seed};
        BatchPlan plan = plan_batch(corpus, strategy, cell.source, config.n_examples, params);
        write_prompt_archive(plan, (dir / "prompts.jsonl").string(), strategy, cell.source);
    }
    manifest.markers["prompt"] = "cells/*/prompts.jsonl";
}

void run_generate(const RunConfig& config, RunManifest& manifest, const Corpus& corpus) {
    GenerationParams params;
    ReplayCache cache(config.cache_path);
    for (const auto& cell : cells_of(config)) {
        fs::path dir = cell_dir(manifest.run_dir, cell.source, cell.strategy);
        SelectionStrategy strategy{cell.strategy, config.seed};
        BatchPlan plan = plan_batch(corpus, strategy, cell.source, config.n_examples, params);
        std::vector<json> records;
        int misses = 0;
        for (const auto& bundle : plan.bundles) {
            json rec{{"problem_id", bundle.problem_id}, {"digest", bundle.digest}};
            try {
                ModelResponse resp = generate(bundle, config.backend, cache);
                rec["raw_text"] = scrub_credentials(resp.raw_text);
                rec["finish_reason"] = to_string(resp.finish_reason);
            } catch (const CacheMissError& e) {
                rec["error"] = e.what();
                ++misses;
            }
            records.push_back(rec);
        }
        write_lines(dir / "responses.jsonl", records);
        if (misses > 0)
            manifest.quarantined.push_back("generate: " + cell_name(cell.source, cell.strategy) +
                                           ": " + std::to_string(misses) + " cache misses");
    }
    manifest.markers["generate"] = "cells/*/responses.jsonl";
}

void run_validate(const RunConfig& config, RunManifest& manifest, const Corpus& corpus) {
    for (const auto& cell : cells_of(config)) {
        fs::path dir = cell_dir(manifest.run_dir, cell.source, cell.strategy);
        std::vector<json> records;
        for (const auto& resp : read_lines(dir / "responses.jsonl")) {
            std::string pid = resp.at("problem_id");
            json rec{{"problem_id", pid}};
            if (resp.contains("error")) {
                rec["error"] = resp["error"];
                records.push_back(rec);
                continue;
            }
            ModelResponse model;
            model.raw_text = resp.at("raw_text");
            model.finish_reason = finish_reason_from_string(resp.at("finish_reason"));
            auto blocks = extract_test_code(model);
            std::string candidate;
            for (size_t i = 0; i < blocks.size(); ++i) {
                if (i) candidate += "\n\n";
                candidate += blocks[i];
            }
            const Problem& problem = corpus.problems.at(pid);
            Sandbox sandbox = make_sandbox(problem, config);
            ValidationReport report =
                validate(candidate, sandbox, pid, ValidationPhase::Original,
                         model.finish_reason == FinishReason::Truncated);
            rec["candidate"] = candidate;
            rec["truncated"] = report.truncated;
            rec["report"] = report_to_json(report);
            records.push_back(rec);
        }
        write_lines(dir / "validation.jsonl", records);
    }
    manifest.markers["validate"] = "cells/*/validation.jsonl";
}

void run_repair(const RunConfig& config, RunManifest& manifest, const Corpus& corpus) {
    for (const auto& cell : cells_of(config)) {
        fs::path dir = cell_dir(manifest.run_dir, cell.source, cell.strategy);
        std::vector<json> records;
        for (const auto& entry : read_lines(dir / "validation.jsonl")) {
            std::string pid = entry.at("problem_id");
            json rec{{"problem_id", pid}};
            if (entry.contains("error")) {
                rec["error"] = entry["error"];
                records.push_back(rec);
                continue;
            }
            const Problem& problem = corpus.problems.at(pid);
            Sandbox sandbox = make_sandbox(problem, config);
            RepairContext ctx{problem.class_name, config.cut_module};
            RepairResult result =
                apply_repairs(entry.at("candidate"), sandbox, ctx, pid,
                              entry.value("truncated", false));
            rec["text"] = result.text;
            rec["passes"] = result.log.passes;
            json applied = json::array();
            for (const auto& a : result.log.applied)
                applied.push_back({{"rule", a.rule}, {"scope", a.scope}});
            rec["applied"] = applied;
            rec["report"] = report_to_json(result.final_report);
            records.push_back(rec);
        }
        write_lines(dir / "repaired.jsonl", records);
    }
    manifest.markers["repair"] = "cells/*/repaired.jsonl";
}

void run_optimize(const RunConfig& config, RunManifest& manifest, const Corpus& corpus) {
    for (const auto& cell : cells_of(config)) {
        fs::path dir = cell_dir(manifest.run_dir, cell.source, cell.strategy);
        std::vector<json> records;
        for (const auto& entry : read_lines(dir / "repaired.jsonl")) {
            std::string pid = entry.at("problem_id");
            json rec{{"problem_id", pid}};
            if (entry.contains("error")) {
                rec["error"] = entry["error"];
                records.push_back(rec);
                continue;
            }
            const Problem& problem = corpus.problems.at(pid);
            Sandbox sandbox = make_sandbox(problem, config);
            std::vector<TestFile> initial;
            auto it = corpus.tests.find({pid, TestSource::Human});
            if (it != corpus.tests.end()) initial.push_back(it->second);
            TestFile repaired = split_test_source(entry.at("text"));
            OptimizationResult result =
                optimize_suite(initial, repaired.cases, repaired.preamble, sandbox);
            rec["preamble"] = repaired.preamble;
            json kept = json::array();
            for (const auto& c : result.kept)
                kept.push_back({{"name", c.name}, {"body", c.body}});
            rec["kept"] = kept;
            json decisions = json::array();
            for (const auto& d : result.decisions)
                decisions.push_back({{"case_id", d.case_id},
                                     {"verdict", to_string(d.verdict)},
                                     {"delta_lines", d.delta_lines},
                                     {"delta_branch_arms", d.delta_branch_arms}});
            rec["decisions"] = decisions;
            rec["line_pct_before"] = result.before.line_pct;
            rec["line_pct_after"] = result.after.line_pct;
            rec["branch_pct_before"] = result.before.branch_pct;
            rec["branch_pct_after"] = result.after.branch_pct;
            records.push_back(rec);
        }
        write_lines(dir / "optimized.jsonl", records);
    }
    manifest.markers["optimize"] = "cells/*/optimized.jsonl";
}

void run_report(const RunConfig& config, RunManifest& manifest, const Corpus& corpus) {
    for (const auto& cell : cells_of(config)) {
        fs::path dir = cell_dir(manifest.run_dir, cell.source, cell.strategy);
        std::string cname = cell_name(cell.source, cell.strategy);
        std::vector<QualityReport> initial_parts, generated_parts, optimized_parts;
        for (const auto& entry : read_lines(dir / "optimized.jsonl")) {
            std::string pid = entry.at("problem_id");
            if (entry.contains("error")) continue;
            const Problem& problem = corpus.problems.at(pid);
            Sandbox sandbox = make_sandbox(problem, config);

            std::vector<TestFile> initial;
            auto it = corpus.tests.find({pid, TestSource::Human});
            if (it != corpus.tests.end()) initial.push_back(it->second);
            initial_parts.push_back(build_report(pid, initial, sandbox));

            TestFile generated;
            generated.problem_id = pid;
            generated.preamble = entry.at("preamble");
            int ordinal = 0;
            for (const auto& k : entry.at("kept")) {
                TestCase c;
                c.problem_id = pid;
                c.source = TestSource::Llm;
                c.name = k.at("name");
                c.body = k.at("body");
                c.id = pid + "/llm/" + c.name + "/" + std::to_string(ordinal++);
                generated.cases.push_back(c);
            }
            // "generated" also counts candidates the optimizer later dropped;
            // rebuild the full repaired file from kept + decisions is lossy,
            // so it is scored from the repaired-stage artifact instead.
            optimized_parts.push_back(
                build_report(pid, [&] {
                    std::vector<TestFile> suite = initial;
                    if (!generated.cases.empty()) suite.push_back(generated);
                    return suite;
                }(), sandbox));
        }
        for (const auto& entry : read_lines(dir / "repaired.jsonl")) {
            if (entry.contains("error")) continue;
            std::string pid = entry.at("problem_id");
            const Problem& problem = corpus.problems.at(pid);
            Sandbox sandbox = make_sandbox(problem, config);
            TestFile repaired = split_test_source(entry.at("text"));
            std::vector<TestFile> suite;
            if (!repaired.cases.empty()) suite.push_back(repaired);
            generated_parts.push_back(build_report(pid, suite, sandbox));
        }
        write_text(dir / "report_initial.json",
                   quality_to_json(aggregate_reports(cname + "/initial", initial_parts)).dump(2) +
                       "\n");
        write_text(dir / "report_generated.json",
                   quality_to_json(aggregate_reports(cname + "/generated", generated_parts))
                           .dump(2) +
                       "\n");
        write_text(dir / "report_optimized.json",
                   quality_to_json(aggregate_reports(cname + "/optimized", optimized_parts))
                           .dump(2) +
                       "\n");
    }
    manifest.markers["report"] = "cells/*/report_*.json";
}

}  // namespace

RunManifest run_pipeline(const RunConfig& config, const std::set<Stage>& stages, bool force) {
    if (stages.empty()) throw ConfigError("no stages requested");
    std::string digest = config_digest(config);
    fs::path run_dir = fs::path(config.output_dir) / digest.substr(0, 16);
    fs::create_directories(run_dir);
    RunManifest manifest = load_or_init_manifest(config, run_dir, digest);

    // Every stage before a requested one must already be done or also requested.
    for (Stage requested : stages) {
        for (Stage prior : all_stages()) {
            if (prior == requested) break;
            if (!stages.count(prior) && !manifest.markers.count(to_string(prior)))
                throw ConfigError("stage '" + to_string(requested) + "' needs '" +
                                  to_string(prior) + "' first");
        }
    }

    Corpus corpus;
    bool corpus_loaded = false;
    auto ensure_corpus = [&] {
        if (!corpus_loaded) {
            corpus = load_run_corpus(manifest);
            corpus_loaded = true;
        }
    };

    for (Stage stage : all_stages()) {
        if (!stages.count(stage)) continue;
        std::string name = to_string(stage);
        if (manifest.markers.count(name) && !force) continue;
        try {
            switch (stage) {
                case Stage::Ingest: run_ingest(config, manifest); break;
                case Stage::Select: ensure_corpus(); run_select(config, manifest, corpus); break;
                case Stage::Prompt: ensure_corpus(); run_prompt(config, manifest, corpus); break;
                case Stage::Generate:
                    ensure_corpus();
                    run_generate(config, manifest, corpus);
                    break;
                case Stage::Validate:
                    ensure_corpus();
                    run_validate(config, manifest, corpus);
                    break;
                case Stage::Repair: ensure_corpus(); run_repair(config, manifest, corpus); break;
                case Stage::Optimize:
                    ensure_corpus();
                    run_optimize(config, manifest, corpus);
                    break;
                case Stage::Report: ensure_corpus(); run_report(config, manifest, corpus); break;
            }
        } catch (const ConfigError&) {
            throw;  // misconfiguration is fatal, not quarantinable
        } catch (const std::exception& e) {
            manifest.quarantined.push_back(name + ": " + e.what());
        }
        save_manifest(manifest);
    }
    return manifest;
}

json diff_reports(const std::string& path_a, const std::string& path_b) {
    std::ifstream ia(path_a, std::ios::binary), ib(path_b, std::ios::binary);
    if (!ia) throw ConfigError("cannot read " + path_a);
    if (!ib) throw ConfigError("cannot read " + path_b);
    json a = json::parse(ia), b = json::parse(ib);
    if (a.value("schema_version", 0) != b.value("schema_version", 0))
        throw ConfigError("reports use different schema versions");

    json diff{{"schema_version", a.value("schema_version", 0)},
              {"suite_a", a.value("suite_id", "")},
              {"suite_b", b.value("suite_id", "")}};
    json fields = json::object();
    for (const char* key : {"total_tests", "cyclomatic_total", "cognitive_total", "avg_smells",
                            "avg_debt_minutes", "line_pct", "branch_pct"}) {
        if (!a.contains(key) || !b.contains(key)) continue;
        double va = a.at(key).get<double>();
        double vb = b.at(key).get<double>();
        double delta = std::round((vb - va) * 10.0) / 10.0;
        fields[key] = {{"a", va}, {"b", vb}, {"delta", delta}};
    }
    diff["fields"] = fields;
    return diff;
}

}  // namespace suitesmith
