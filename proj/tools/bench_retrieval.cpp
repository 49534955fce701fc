// Benchmarks the parallel similarity-scoring kernel against the serial
// reference on a synthetic document set, and verifies they agree.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "suitesmith/retrieval.hpp"

using namespace suitesmith;
using Clock = std::chrono::steady_clock;

namespace {

std::string synth_doc(std::mt19937_64& rng, int words) {
    static const char* vocab[] = {"stack",  "queue",  "push",   "pop",    "value", "index",
                                  "result", "total",  "count",  "insert", "node",  "search",
                                  "matrix", "vector", "string", "parse",  "token", "merge"};
    std::uniform_int_distribution<int> pick(0, 17);
    std::string doc;
    for (int i = 0; i < words; ++i) {
        if (i) doc += ' ';
        doc += vocab[pick(rng)];
    }
    return doc;
}

}  // namespace

int main(int argc, char** argv) {
    int n_docs = argc > 1 ? std::atoi(argv[1]) : 20000;
    int words = argc > 2 ? std::atoi(argv[2]) : 120;
    int reps = argc > 3 ? std::atoi(argv[3]) : 10;

    std::mt19937_64 rng(42);
    std::vector<std::string> raw;
    raw.reserve(n_docs);
    for (int i = 0; i < n_docs; ++i) raw.push_back(synth_doc(rng, words));

    VectorSpace space = fit(raw);
    std::vector<SparseVector> docs;
    docs.reserve(n_docs);
    for (const auto& d : raw) docs.push_back(vectorize(d, space));
    SparseVector query = vectorize(synth_doc(rng, words), space);

    std::vector<double> serial, parallel;
    double serial_ms = 0, parallel_ms = 0;
    for (int r = 0; r < reps; ++r) {
        auto t0 = Clock::now();
        serial = score_all_serial(query, docs);
        auto t1 = Clock::now();
        parallel = score_all_parallel(query, docs);
        auto t2 = Clock::now();
        serial_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
        parallel_ms += std::chrono::duration<double, std::milli>(t2 - t1).count();
    }

    for (int i = 0; i < n_docs; ++i) {
        if (serial[i] != parallel[i]) {
            std::fprintf(stderr, "MISMATCH at %d: %.17g vs %.17g\n", i, serial[i], parallel[i]);
            return 1;
        }
    }

    std::printf("docs=%d words/doc=%d reps=%d\n", n_docs, words, reps);
    std::printf("serial   %8.2f ms/rep\n", serial_ms / reps);
    std::printf("parallel %8.2f ms/rep\n", parallel_ms / reps);
    std::printf("speedup  %8.2fx (results identical)\n", serial_ms / parallel_ms);
    return 0;
}
