#include "tiersim/transport.hpp"

#include <cstdlib>

#include <fmt/core.h>
#include <httplib.h>
#include <json.hpp>

#include "tiersim/digest.hpp"
#include "tiersim/error.hpp"

namespace tiersim {

using nlohmann::json;

ReplayTransport::ReplayTransport(const std::string& cassette_path)
    : exchanges_(load_cassette(cassette_path)) {}

ReplayTransport::ReplayTransport(std::vector<LlmExchange> exchanges)
    : exchanges_(std::move(exchanges)) {}

std::string ReplayTransport::complete(const std::string& prompt) {
    const std::string digest = sha256_hex(prompt);
    for (const auto& ex : exchanges_) {
        if (ex.prompt_digest == digest) return ex.response_text;
    }
    throw CassetteMiss(digest);
}

HttpChatTransport::HttpChatTransport(std::string base_url, std::string model,
                                     std::string token_env)
    : base_url_(std::move(base_url)), model_(std::move(model)), token_env_(std::move(token_env)) {}

std::string HttpChatTransport::complete(const std::string& prompt) {
    json body;
    body["model"] = model_;
    body["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});

    httplib::Client client(base_url_);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (const char* token = std::getenv(token_env_.c_str()); token != nullptr && *token != '\0') {
        headers.emplace("Authorization", fmt::format("Bearer {}", token));
    }
    auto res = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
    if (!res) {
        throw TransportError(fmt::format("POST {} failed: {}", base_url_,
                                         httplib::to_string(res.error())));
    }
    if (res->status != 200) {
        throw TransportError(fmt::format("endpoint returned HTTP {}", res->status));
    }
    json reply;
    try {
        reply = json::parse(res->body);
    } catch (const json::parse_error& e) {
        throw TransportError(fmt::format("endpoint returned invalid JSON: {}", e.what()));
    }
    try {
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
        throw TransportError("endpoint reply carries no choices[0].message.content");
    }
}

RecordingTransport::RecordingTransport(std::shared_ptr<LlmTransport> inner,
                                       std::string cassette_path)
    : inner_(std::move(inner)), cassette_path_(std::move(cassette_path)) {}

std::string RecordingTransport::complete(const std::string& prompt) {
    std::string response = inner_->complete(prompt);
    LlmExchange ex;
    ex.prompt_text = prompt;
    ex.prompt_digest = sha256_hex(prompt);
    ex.response_text = response;
    std::lock_guard<std::mutex> lock(mutex_);
    record_exchange(cassette_path_, ex);
    return response;
}

}  // namespace tiersim
