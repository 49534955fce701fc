#include "suitesmith/modelgw.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "suitesmith/errors.hpp"

namespace suitesmith {

using nlohmann::json;

std::string to_string(FinishReason r) {
    switch (r) {
        case FinishReason::Complete: return "complete";
        case FinishReason::Truncated: return "truncated";
        case FinishReason::Error: return "error";
    }
    return "error";
}

FinishReason finish_reason_from_string(const std::string& s) {
    if (s == "complete") return FinishReason::Complete;
    if (s == "truncated") return FinishReason::Truncated;
    return FinishReason::Error;
}

BackendMode backend_mode_from_string(const std::string& s) {
    if (s == "live") return BackendMode::Live;
    if (s == "replay") return BackendMode::Replay;
    if (s == "record") return BackendMode::Record;
    throw ConfigError("unknown backend mode '" + s + "'");
}

std::string to_string(BackendMode m) {
    switch (m) {
        case BackendMode::Live: return "live";
        case BackendMode::Replay: return "replay";
        case BackendMode::Record: return "record";
    }
    return "replay";
}

ReplayCache::ReplayCache(const std::string& path) : origin_(path) {
    std::ifstream in(path);
    if (!in) return;  // a fresh cache file is legal in record mode
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded()) continue;
        ModelResponse r;
        r.digest = rec.value("digest", "");
        r.raw_text = rec.value("raw_text", "");
        r.finish_reason = finish_reason_from_string(rec.value("finish_reason", "complete"));
        if (!r.digest.empty()) entries_[r.digest] = std::move(r);
    }
}

const ModelResponse& ReplayCache::get(const std::string& digest) const {
    auto it = entries_.find(digest);
    if (it == entries_.end())
        throw CacheMissError("replay cache has no entry for digest " + digest);
    return it->second;
}

void ReplayCache::put(const ModelResponse& response) {
    entries_[response.digest] = response;
    if (origin_.empty()) return;
    std::ofstream out(origin_, std::ios::app);
    json rec;
    rec["digest"] = response.digest;
    rec["raw_text"] = scrub_credentials(response.raw_text);
    rec["finish_reason"] = to_string(response.finish_reason);
    out << rec.dump() << "\n";
}

std::string scrub_credentials(const std::string& text) {
    const char* key = std::getenv("SUITESMITH_API_KEY");
    if (!key || !*key) return text;
    std::string out = text;
    std::string needle(key);
    size_t pos = 0;
    while ((pos = out.find(needle, pos)) != std::string::npos) {
        out.replace(pos, needle.size(), "***");
        pos += 3;
    }
    return out;
}

namespace {

ModelResponse call_live(const PromptBundle& bundle) {
    const char* base = std::getenv("SUITESMITH_API_BASE");
    const char* key = std::getenv("SUITESMITH_API_KEY");
    if (!base || !*base || !key || !*key)
        throw ConfigError("live mode requires SUITESMITH_API_BASE and SUITESMITH_API_KEY");

    json body;
    body["model"] = bundle.params.model_id;
    body["temperature"] = bundle.params.temperature;
    body["max_tokens"] = bundle.params.max_output_tokens;
    body["messages"] = {{{"role", "system"}, {"content", bundle.system_text}},
                        {{"role", "user"}, {"content", bundle.user_text}}};

    std::string last_error;
    for (int attempt = 0; attempt < 3; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(250 << attempt));
        auto started = std::chrono::steady_clock::now();
        httplib::Client client(base);
        client.set_read_timeout(120, 0);
        httplib::Headers headers{{"Authorization", std::string("Bearer ") + key}};
        auto res = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
        if (!res) {
            last_error = "no response from backend";
            continue;
        }
        if (res->status >= 500) {
            last_error = "backend status " + std::to_string(res->status);
            continue;
        }
        ModelResponse out;
        out.digest = bundle.digest;
        out.latency_ms = elapsed;
        if (res->status != 200) {
            out.finish_reason = FinishReason::Error;
            out.raw_text = scrub_credentials(res->body);
            return out;
        }
        json parsed = json::parse(res->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty()) {
            out.finish_reason = FinishReason::Error;
            out.raw_text = scrub_credentials(res->body);
            return out;
        }
        const auto& choice = parsed["choices"][0];
        out.raw_text = choice["message"].value("content", "");
        std::string finish = choice.value("finish_reason", "stop");
        out.finish_reason =
            finish == "length" ? FinishReason::Truncated : FinishReason::Complete;
        return out;
    }
    throw TransportError("live backend failed after 3 attempts: " + last_error);
}

/// A response whose final fence never closes is treated as truncated.
bool has_unterminated_fence(const std::string& text) {
    size_t count = 0, pos = 0;
    while ((pos = text.find("```", pos)) != std::string::npos) {
        ++count;
        pos += 3;
    }
    return count % 2 == 1;
}

}  // namespace

ModelResponse generate(const PromptBundle& bundle, BackendMode mode, ReplayCache& cache) {
    switch (mode) {
        case BackendMode::Replay:
            return cache.get(bundle.digest);
        case BackendMode::Record: {
            if (cache.contains(bundle.digest)) return cache.get(bundle.digest);
            ModelResponse r = call_live(bundle);
            if (r.finish_reason == FinishReason::Complete && has_unterminated_fence(r.raw_text))
                r.finish_reason = FinishReason::Truncated;
            cache.put(r);
            return r;
        }
        case BackendMode::Live: {
            ModelResponse r = call_live(bundle);
            if (r.finish_reason == FinishReason::Complete && has_unterminated_fence(r.raw_text))
                r.finish_reason = FinishReason::Truncated;
            return r;
        }
    }
    throw ConfigError("unknown backend mode");
}

std::vector<std::string> extract_test_code(const ModelResponse& response) {
    const std::string& text = response.raw_text;
    std::vector<std::string> blocks;
    size_t pos = 0;
    while (true) {
        size_t open = text.find("```", pos);
        if (open == std::string::npos) break;
        size_t lang_end = text.find('\n', open + 3);
        if (lang_end == std::string::npos) break;  // fence with no content
        size_t close = text.find("```", lang_end + 1);
        std::string code = close == std::string::npos
                               ? text.substr(lang_end + 1)  // unterminated: take the tail
                               : text.substr(lang_end + 1, close - lang_end - 1);
        blocks.push_back(code);
        if (close == std::string::npos) break;
        pos = close + 3;
    }
    if (blocks.empty() && !text.empty()) blocks.push_back(text);
    return blocks;
}

}  // namespace suitesmith
