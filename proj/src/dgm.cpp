#include "dgi/dgm.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>

namespace dgi {

using nlohmann::json;

BackendConfig backend_config_from_json(const std::string& id, const json& j) {
    BackendConfig c;
    c.id = id;
    c.endpoint = j.at("endpoint").get<std::string>();
    if (j.contains("path")) c.path = j["path"].get<std::string>();
    if (j.contains("credential_env")) c.credential_env = j["credential_env"].get<std::string>();
    if (j.contains("model")) c.model = j["model"].get<std::string>();
    if (j.contains("timeout_s")) c.timeout_s = j["timeout_s"].get<double>();
    if (j.contains("retries")) c.retries = j["retries"].get<int>();
    if (j.contains("backoff_s")) c.backoff_s = j["backoff_s"].get<std::vector<double>>();
    if (j.contains("native_video")) c.native_video = j["native_video"].get<bool>();
    if (j.contains("requests_per_minute")) {
        c.requests_per_minute = j["requests_per_minute"].get<int>();
    }
    return c;
}

namespace {

class MockBackend : public DgmBackend {
public:
    MockBackend(std::vector<std::pair<std::string, std::string>> script, std::string fallback)
        : script_(std::move(script)), fallback_(std::move(fallback)), id_("mock") {}

    Completion complete(const GenerationRequest& request) override {
        for (const auto& [marker, response] : script_) {
            if (request.prompt.find(marker) != std::string::npos) {
                return Completion{response, Usage{}};
            }
        }
        return Completion{fallback_, Usage{}};
    }

    const std::string& id() const override { return id_; }

private:
    std::vector<std::pair<std::string, std::string>> script_;
    std::string fallback_;
    std::string id_;
};

class RemoteBackend : public DgmBackend {
public:
    explicit RemoteBackend(BackendConfig config)
        : config_(std::move(config)), limiter_(config_.requests_per_minute) {}

    Completion complete(const GenerationRequest& request) override {
        const char* key = nullptr;
        if (!config_.credential_env.empty()) {
            key = std::getenv(config_.credential_env.c_str());
            if (!key || !*key) {
                throw DgiError(Errc::AuthFailure,
                               "credential env var " + config_.credential_env + " is not set");
            }
        }

        json body = build_body(request);
        std::string payload = body.dump();

        int attempts = config_.retries + 1;
        Errc last_code = Errc::Timeout;
        std::string last_message = "no attempt made";
        for (int attempt = 0; attempt < attempts; ++attempt) {
            if (attempt > 0) {
                std::size_t k = static_cast<std::size_t>(attempt - 1);
                double delay = config_.backoff_s.empty()
                                   ? 0.0
                                   : config_.backoff_s[std::min(k, config_.backoff_s.size() - 1)];
                std::this_thread::sleep_for(std::chrono::duration<double>(delay));
            }
            limiter_.acquire();

            httplib::Client client(config_.endpoint);
            auto timeout = std::chrono::duration<double>(config_.timeout_s);
            client.set_connection_timeout(timeout);
            client.set_read_timeout(timeout);
            client.set_write_timeout(timeout);
            httplib::Headers headers;
            if (key) headers.emplace("Authorization", std::string("Bearer ") + key);

            auto start = std::chrono::steady_clock::now();
            auto res = client.Post(config_.path, headers, payload, "application/json");
            auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - start)
                               .count();

            if (!res) {
                last_code = Errc::Timeout;
                last_message = "no response from " + config_.endpoint +
                               " (attempt " + std::to_string(attempt + 1) + ")";
                continue;  // transient
            }
            if (res->status == 401 || res->status == 403) {
                throw DgiError(Errc::AuthFailure,
                               "backend " + config_.id + " rejected credentials (HTTP " +
                                   std::to_string(res->status) + ")");
            }
            if (res->status == 429) {
                last_code = Errc::RateLimited;
                last_message = "backend " + config_.id + " rate-limited the request";
                continue;  // transient
            }
            if (res->status >= 500) {
                last_code = Errc::MalformedResponse;
                last_message = "backend returned HTTP " + std::to_string(res->status);
                continue;  // transient
            }
            if (res->status != 200) {
                throw DgiError(Errc::MalformedResponse,
                               "backend returned HTTP " + std::to_string(res->status));
            }
            return parse_response(res->body, elapsed);
        }
        throw DgiError(last_code, last_message + " after " + std::to_string(attempts) +
                                      " attempts");
    }

    const std::string& id() const override { return config_.id; }
    bool native_video() const override { return config_.native_video; }

private:
    json build_body(const GenerationRequest& request) const {
        json parts = json::array();
        parts.push_back({{"type", "text"}, {"text", request.prompt}});
        for (const auto& m : request.media) {
            if (m.kind == MediaRef::Kind::Video) {
                parts.push_back({{"type", "video_url"}, {"video_url", {{"url", m.locator}}}});
            } else {
                json frame = {{"type", "image_url"}, {"image_url", {{"url", m.locator}}}};
                if (m.timestamp_s) frame["timestamp_s"] = *m.timestamp_s;
                parts.push_back(std::move(frame));
            }
        }
        return json{{"model", config_.model},
                    {"messages", json::array({json{{"role", "user"}, {"content", parts}}})},
                    {"temperature", request.decoding.temperature},
                    {"max_tokens", request.decoding.max_output_tokens}};
    }

    Completion parse_response(const std::string& body, std::int64_t latency_ms) const {
        json j = json::parse(body, nullptr, false);
        if (j.is_discarded()) {
            throw DgiError(Errc::MalformedResponse, "response is not valid JSON");
        }
        try {
            Completion out;
            out.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
            if (j.contains("usage")) {
                out.usage.prompt_tokens = j["usage"].value("prompt_tokens", 0);
                out.usage.completion_tokens = j["usage"].value("completion_tokens", 0);
            }
            out.usage.latency_ms = latency_ms;
            return out;
        } catch (const json::exception& e) {
            throw DgiError(Errc::MalformedResponse,
                           std::string("unexpected response shape: ") + e.what());
        }
    }

    BackendConfig config_;
    RateLimiter limiter_;
};

}  // namespace

std::unique_ptr<DgmBackend> make_mock_backend(
    std::vector<std::pair<std::string, std::string>> script, std::string fallback) {
    return std::make_unique<MockBackend>(std::move(script), std::move(fallback));
}

std::unique_ptr<DgmBackend> make_remote_backend(BackendConfig config) {
    return std::make_unique<RemoteBackend>(std::move(config));
}

RateLimiter::RateLimiter(int requests_per_minute)
    : rate_per_s_(requests_per_minute / 60.0),
      capacity_(requests_per_minute > 0 ? requests_per_minute : 0),
      tokens_(capacity_),
      last_refill_(std::chrono::steady_clock::now()) {}

void RateLimiter::refill_locked() {
    auto now = std::chrono::steady_clock::now();
    double elapsed = std::chrono::duration<double>(now - last_refill_).count();
    tokens_ = std::min(capacity_, tokens_ + elapsed * rate_per_s_);
    last_refill_ = now;
}

bool RateLimiter::try_acquire() {
    if (capacity_ <= 0) return true;  // unlimited
    std::lock_guard<std::mutex> lock(mutex_);
    refill_locked();
    if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return true;
    }
    return false;
}

void RateLimiter::acquire() {
    while (!try_acquire()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
}

}  // namespace dgi
