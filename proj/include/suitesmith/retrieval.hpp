#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "suitesmith/corpus.hpp"

namespace suitesmith {

/// TF-IDF document space: vocabulary plus per-token idf weights.
struct VectorSpace {
    std::map<std::string, int> vocabulary;
    std::vector<double> idf;   // indexed by vocabulary value
    int doc_count = 0;
};

struct SparseVector {
    std::map<int, double> entries;  // index → weight, zeros never stored
    double norm = 0.0;
};

enum class StrategyKind {
    RandomFromSuite,
    RandomFromCut,
    ProblemSim,
    CodeSim,
    CodeCommentSim,
    ProblemPlusCodeSim,
};

std::string to_string(StrategyKind k);
StrategyKind strategy_from_string(const std::string& s);
bool is_random_strategy(StrategyKind k);

struct SelectionStrategy {
    StrategyKind kind = StrategyKind::ProblemSim;
    std::uint64_t seed = 0;  // consumed only by the random kinds
};

/// Lowercased alphanumeric runs split on camelCase and snake_case boundaries.
std::vector<std::string> tokenize(const std::string& text);

/// idf(t) = ln((1+N)/(1+df(t))) + 1 over the document list.
VectorSpace fit(const std::vector<std::string>& documents);

/// weight(t) = count(t in doc) * idf(t); out-of-vocabulary tokens ignored.
SparseVector vectorize(const std::string& doc, const VectorSpace& space);

/// dot(a,b) / (|a|*|b|); 0 when either norm is 0.
double cosine(const SparseVector& a, const SparseVector& b);

/// Cosine of `query` against every document vector. The parallel variant
/// splits the loop across threads; both produce identical results.
std::vector<double> score_all_serial(const SparseVector& query,
                                     const std::vector<SparseVector>& docs);
std::vector<double> score_all_parallel(const SparseVector& query,
                                       const std::vector<SparseVector>& docs);

/// Picks up to n few-shot example cases for `target` from `corpus` restricted
/// to the given provenance. Similarity strategies rank other problems by the
/// strategy's score (ties by ascending problem id) and take cases in stored
/// order; random strategies draw with the strategy seed. Throws
/// SelectionError when the pool is empty.
std::vector<TestCase> select_examples(const SelectionStrategy& strategy, const Problem& target,
                                      const Corpus& corpus, TestSource source, int n);

}  // namespace suitesmith
