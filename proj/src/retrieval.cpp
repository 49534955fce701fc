#include "suitesmith/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "suitesmith/errors.hpp"

namespace suitesmith {

std::string to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::RandomFromSuite: return "random_from_suite";
        case StrategyKind::RandomFromCut: return "random_from_cut";
        case StrategyKind::ProblemSim: return "problem_sim";
        case StrategyKind::CodeSim: return "code_sim";
        case StrategyKind::CodeCommentSim: return "code_comment_sim";
        case StrategyKind::ProblemPlusCodeSim: return "problem_plus_code_sim";
    }
    return "problem_sim";
}

StrategyKind strategy_from_string(const std::string& s) {
    if (s == "random_from_suite") return StrategyKind::RandomFromSuite;
    if (s == "random_from_cut") return StrategyKind::RandomFromCut;
    if (s == "problem_sim") return StrategyKind::ProblemSim;
    if (s == "code_sim") return StrategyKind::CodeSim;
    if (s == "code_comment_sim") return StrategyKind::CodeCommentSim;
    if (s == "problem_plus_code_sim") return StrategyKind::ProblemPlusCodeSim;
    throw ConfigError("unknown selection strategy '" + s + "'");
}

bool is_random_strategy(StrategyKind k) {
    return k == StrategyKind::RandomFromSuite || k == StrategyKind::RandomFromCut;
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string run;
    auto flush_run = [&]() {
        if (run.empty()) return;
        // split snake_case, then camelCase boundaries, lowercase everything
        std::string word;
        auto emit_word = [&]() {
            if (!word.empty()) tokens.push_back(word);
            word.clear();
        };
        for (size_t i = 0; i < run.size(); ++i) {
            char c = run[i];
            if (c == '_') { emit_word(); continue; }
            if (std::isupper(static_cast<unsigned char>(c)) && !word.empty() &&
                !std::isupper(static_cast<unsigned char>(word.back())))
                emit_word();
            word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        emit_word();
        run.clear();
    };
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') run += c;
        else flush_run();
    }
    flush_run();
    return tokens;
}

VectorSpace fit(const std::vector<std::string>& documents) {
    if (documents.empty()) throw ConfigError("fit() requires at least one document");
    VectorSpace space;
    space.doc_count = static_cast<int>(documents.size());
    std::map<std::string, int> df;
    for (const auto& doc : documents) {
        std::set<std::string> seen;
        for (const auto& t : tokenize(doc)) seen.insert(t);
        for (const auto& t : seen) ++df[t];
    }
    int idx = 0;
    space.idf.reserve(df.size());
    for (const auto& [token, count] : df) {
        space.vocabulary[token] = idx++;
        space.idf.push_back(std::log((1.0 + space.doc_count) / (1.0 + count)) + 1.0);
    }
    return space;
}

SparseVector vectorize(const std::string& doc, const VectorSpace& space) {
    std::map<int, int> counts;
    for (const auto& t : tokenize(doc)) {
        auto it = space.vocabulary.find(t);
        if (it != space.vocabulary.end()) ++counts[it->second];
    }
    SparseVector v;
    double sq = 0.0;
    for (const auto& [idx, count] : counts) {
        double w = count * space.idf[idx];
        if (w == 0.0) continue;
        v.entries[idx] = w;
        sq += w * w;
    }
    v.norm = std::sqrt(sq);
    return v;
}

double cosine(const SparseVector& a, const SparseVector& b) {
    if (a.norm == 0.0 || b.norm == 0.0) return 0.0;
    const SparseVector& small = a.entries.size() <= b.entries.size() ? a : b;
    const SparseVector& large = a.entries.size() <= b.entries.size() ? b : a;
    double dot = 0.0;
    for (const auto& [idx, w] : small.entries) {
        auto it = large.entries.find(idx);
        if (it != large.entries.end()) dot += w * it->second;
    }
    return dot / (a.norm * b.norm);
}

std::vector<double> score_all_serial(const SparseVector& query,
                                     const std::vector<SparseVector>& docs) {
    std::vector<double> scores(docs.size());
    for (size_t i = 0; i < docs.size(); ++i) scores[i] = cosine(query, docs[i]);
    return scores;
}

std::vector<double> score_all_parallel(const SparseVector& query,
                                       const std::vector<SparseVector>& docs) {
    std::vector<double> scores(docs.size());
    const long long n = static_cast<long long>(docs.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) scores[i] = cosine(query, docs[i]);
    return scores;
}

namespace {

/// Solution text with its leading comment/docstring block removed.
std::string strip_header(const Problem& p) {
    if (p.header_comment.empty()) return p.solution_source;
    std::istringstream in(p.solution_source);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    size_t i = 0;
    auto blank = [](const std::string& s) {
        return s.find_first_not_of(" \t\r") == std::string::npos;
    };
    while (i < lines.size() && blank(lines[i])) ++i;
    if (i < lines.size()) {
        size_t b = lines[i].find_first_not_of(" \t");
        if (b != std::string::npos && lines[i][b] == '#') {
            while (i < lines.size()) {
                size_t c = lines[i].find_first_not_of(" \t");
                if (c == std::string::npos || lines[i][c] != '#') break;
                ++i;
            }
        } else if (b != std::string::npos && (lines[i].compare(b, 3, "'''") == 0 ||
                                              lines[i].compare(b, 3, "\"\"\"") == 0)) {
            std::string q = lines[i].substr(b, 3);
            size_t close = lines[i].find(q, b + 3);
            if (close != std::string::npos) ++i;
            else {
                ++i;
                while (i < lines.size() && lines[i].find(q) == std::string::npos) ++i;
                if (i < lines.size()) ++i;
            }
        }
    }
    std::string out;
    for (; i < lines.size(); ++i) out += lines[i] + "\n";
    return out;
}

/// Candidate problem ids holding at least one case of the given source.
std::vector<std::string> candidate_ids(const Corpus& corpus, const std::string& exclude,
                                       TestSource source) {
    std::vector<std::string> ids;
    for (const auto& [key, file] : corpus.tests) {
        if (key.second != source || file.cases.empty()) continue;
        if (key.first == exclude) continue;
        ids.push_back(key.first);
    }
    return ids;  // map iteration ⇒ already ascending by problem id
}

std::vector<TestCase> take_cases(const Corpus& corpus, const std::vector<std::string>& ranked,
                                 TestSource source, int n) {
    std::vector<TestCase> out;
    for (const auto& pid : ranked) {
        const auto& file = corpus.tests.at({pid, source});
        for (const auto& c : file.cases) {
            out.push_back(c);
            if (static_cast<int>(out.size()) == n) return out;
        }
    }
    return out;
}

}  // namespace

std::vector<TestCase> select_examples(const SelectionStrategy& strategy, const Problem& target,
                                      const Corpus& corpus, TestSource source, int n) {
    if (n < 1) throw ConfigError("select_examples requires n >= 1");

    if (strategy.kind == StrategyKind::RandomFromCut) {
        auto it = corpus.tests.find({target.id, source});
        if (it == corpus.tests.end() || it->second.cases.empty())
            throw SelectionError("empty pool for random_from_cut over source " +
                                 to_string(source) + " on problem " + target.id);
        std::vector<TestCase> pool = it->second.cases;
        std::mt19937_64 rng(strategy.seed);
        std::shuffle(pool.begin(), pool.end(), rng);
        if (static_cast<int>(pool.size()) > n) pool.resize(n);
        return pool;
    }

    std::vector<std::string> candidates = candidate_ids(corpus, target.id, source);
    if (candidates.empty())
        throw SelectionError("empty pool for " + to_string(strategy.kind) + " over source " +
                             to_string(source) + " on problem " + target.id);

    if (strategy.kind == StrategyKind::RandomFromSuite) {
        std::vector<TestCase> pool;
        for (const auto& pid : candidates)
            for (const auto& c : corpus.tests.at({pid, source}).cases) pool.push_back(c);
        std::mt19937_64 rng(strategy.seed);
        std::shuffle(pool.begin(), pool.end(), rng);
        if (static_cast<int>(pool.size()) > n) pool.resize(n);
        return pool;
    }

    // similarity strategies: spaces are fitted per field over the whole corpus
    auto docs_of = [&](auto field) {
        std::vector<std::string> docs;
        for (const auto& [id, p] : corpus.problems) docs.push_back(field(p));
        return docs;
    };
    auto score_with = [&](auto field) {
        auto docs = docs_of(field);
        VectorSpace space = fit(docs);
        SparseVector query = vectorize(field(target), space);
        std::vector<SparseVector> cand_vecs;
        cand_vecs.reserve(candidates.size());
        for (const auto& pid : candidates)
            cand_vecs.push_back(vectorize(field(corpus.problems.at(pid)), space));
        return score_all_parallel(query, cand_vecs);
    };

    std::vector<double> scores;
    switch (strategy.kind) {
        case StrategyKind::ProblemSim:
            scores = score_with([](const Problem& p) { return p.description; });
            break;
        case StrategyKind::CodeSim:
            scores = score_with([](const Problem& p) { return strip_header(p); });
            break;
        case StrategyKind::CodeCommentSim:
            scores = score_with([](const Problem& p) { return p.solution_source; });
            break;
        case StrategyKind::ProblemPlusCodeSim: {
            auto a = score_with([](const Problem& p) { return p.description; });
            auto b = score_with([](const Problem& p) { return strip_header(p); });
            scores.resize(a.size());
            for (size_t i = 0; i < a.size(); ++i) scores[i] = a[i] + b[i];
            break;
        }
        default:
            throw ConfigError("unhandled strategy kind");
    }

    std::vector<size_t> order(candidates.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
        if (scores[x] != scores[y]) return scores[x] > scores[y];
        return candidates[x] < candidates[y];
    });
    std::vector<std::string> ranked;
    ranked.reserve(order.size());
    for (size_t i : order) ranked.push_back(candidates[i]);
    return take_cases(corpus, ranked, source, n);
}

}  // namespace suitesmith
