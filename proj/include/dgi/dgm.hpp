#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dgi/errors.hpp"

namespace dgi {

struct MediaRef {
    enum class Kind { Video, Frame };
    Kind kind = Kind::Video;
    std::string locator;                    // clip id, path, or URI
    std::optional<double> timestamp_s;      // set for frames
};

struct DecodingParams {
    double temperature = 0.0;   // greedy for reproducibility
    int max_output_tokens = 1024;
};

struct GenerationRequest {
    std::string prompt;
    std::vector<MediaRef> media;  // may be empty only for text-only judge calls
    DecodingParams decoding;
    std::string backend_id;
};

struct Usage {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
    std::int64_t latency_ms = 0;
};

struct Completion {
    std::string text;
    Usage usage;
};

struct BackendConfig {
    std::string id;
    std::string endpoint;         // base URL, e.g. http://host:port
    std::string path = "/v1/chat/completions";
    std::string credential_env;   // name of the env var holding the key
    std::string model;
    double timeout_s = 30.0;
    int retries = 2;
    std::vector<double> backoff_s = {0.5, 1.0};  // delay before retry k
    bool native_video = false;    // else the backend receives sampled frames
    int requests_per_minute = 0;  // 0 = unlimited
};

// Config file shape: {"backends": {"<id>": {...}}}. The credential itself is
// read from the named env var at call time and never stored.
BackendConfig backend_config_from_json(const std::string& id, const nlohmann::json& j);

class DgmBackend {
public:
    virtual ~DgmBackend() = default;
    virtual Completion complete(const GenerationRequest& request) = 0;
    virtual const std::string& id() const = 0;
    virtual bool native_video() const { return true; }
};

/// Deterministic offline backend: answers with the response of the first
/// script entry whose marker occurs in the prompt; unmatched prompts get a
/// fixed fallback.
std::unique_ptr<DgmBackend> make_mock_backend(
    std::vector<std::pair<std::string, std::string>> script,
    std::string fallback = "Would the final outcome described in the video still occur under "
                           "the stated assumptions? Answer Y or N.");

/// Chat-completions-style HTTP client. Transient failures (timeouts, 429,
/// 5xx) are retried per BackendConfig; auth failures are surfaced at once.
std::unique_ptr<DgmBackend> make_remote_backend(BackendConfig config);

/// Shared token bucket; acquire() blocks until a slot is available.
class RateLimiter {
public:
    explicit RateLimiter(int requests_per_minute);
    void acquire();
    bool try_acquire();

private:
    void refill_locked();

    std::mutex mutex_;
    double rate_per_s_;
    double capacity_;
    double tokens_;
    std::chrono::steady_clock::time_point last_refill_;
};

}  // namespace dgi
