#pragma once

#include <stdexcept>
#include <string>

namespace suitesmith {

/// Fatal ingest problem: unreadable container or duplicate problem id.
struct IngestError : std::runtime_error {
    explicit IngestError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raw test text could not be normalized to the canonical dialect.
struct NormalizationError : std::runtime_error {
    explicit NormalizationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Example selection found an empty pool for the requested strategy/source.
struct SelectionError : std::runtime_error {
    explicit SelectionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Prompt construction precondition violated (e.g. zero examples).
struct PromptError : std::runtime_error {
    explicit PromptError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Replay backend has no entry for the requested digest.
struct CacheMissError : std::runtime_error {
    explicit CacheMissError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Live backend unreachable or retries exhausted.
struct TransportError : std::runtime_error {
    explicit TransportError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Metric requested over an unparseable case.
struct MetricError : std::runtime_error {
    explicit MetricError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad run configuration or stage-ordering violation (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace suitesmith
