#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "tiersim/cassette.hpp"

namespace tiersim {

// A frontend's channel to a language model: sends one prompt, returns the
// model's text. Implementations must be safe to call from multiple threads.
class LlmTransport {
public:
    virtual ~LlmTransport() = default;
    virtual std::string complete(const std::string& prompt) = 0;
};

// Deterministic offline transport: answers from a recorded cassette, throws
// CassetteMiss (naming the digest) for unknown prompts.
class ReplayTransport : public LlmTransport {
public:
    explicit ReplayTransport(const std::string& cassette_path);
    explicit ReplayTransport(std::vector<LlmExchange> exchanges);

    std::string complete(const std::string& prompt) override;

private:
    std::vector<LlmExchange> exchanges_;
};

// Chat-completion style HTTP endpoint (POST {base}/v1/chat/completions with
// a bearer token read from token_env).
class HttpChatTransport : public LlmTransport {
public:
    HttpChatTransport(std::string base_url, std::string model,
                      std::string token_env = "TIERSIM_API_TOKEN");

    std::string complete(const std::string& prompt) override;

private:
    std::string base_url_;
    std::string model_;
    std::string token_env_;
};

// Wraps another transport and appends every exchange to a cassette.
class RecordingTransport : public LlmTransport {
public:
    RecordingTransport(std::shared_ptr<LlmTransport> inner, std::string cassette_path);

    std::string complete(const std::string& prompt) override;

private:
    std::shared_ptr<LlmTransport> inner_;
    std::string cassette_path_;
    std::mutex mutex_;
};

}  // namespace tiersim
