#pragma once

#include <map>
#include <string>
#include <vector>

#include "suitesmith/promptkit.hpp"

namespace suitesmith {

enum class FinishReason { Complete, Truncated, Error };

std::string to_string(FinishReason r);
FinishReason finish_reason_from_string(const std::string& s);

struct ModelResponse {
    std::string digest;
    std::string raw_text;
    FinishReason finish_reason = FinishReason::Complete;
    long long latency_ms = 0;

    bool operator==(const ModelResponse& o) const {
        return digest == o.digest && raw_text == o.raw_text && finish_reason == o.finish_reason;
    }
};

/// Digest-keyed store of model responses; append-only while recording.
class ReplayCache {
public:
    ReplayCache() = default;
    explicit ReplayCache(const std::string& path);  // loads if the file exists

    bool contains(const std::string& digest) const { return entries_.count(digest) > 0; }
    const ModelResponse& get(const std::string& digest) const;  // CacheMissError on miss
    void put(const ModelResponse& response);  // appends to the backing file when one is set

    size_t size() const { return entries_.size(); }
    const std::string& origin() const { return origin_; }

private:
    std::map<std::string, ModelResponse> entries_;
    std::string origin_;
};

enum class BackendMode { Live, Replay, Record };

BackendMode backend_mode_from_string(const std::string& s);
std::string to_string(BackendMode m);

/// Sends a bundle to the backend. Replay reads the cache; record performs the
/// live call and appends; live requires SUITESMITH_API_BASE/_KEY.
ModelResponse generate(const PromptBundle& bundle, BackendMode mode, ReplayCache& cache);

/// Fenced code blocks from the response in document order; whole text as one
/// candidate when no fences are present.
std::vector<std::string> extract_test_code(const ModelResponse& response);

/// Replaces any occurrence of the configured credential with "***" before
/// text reaches archives or logs.
std::string scrub_credentials(const std::string& text);

}  // namespace suitesmith
