#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace tiersim {

// One recorded prompt/response pair. prompt_digest must equal
// sha256_hex(prompt_text); cassettes recorded anywhere replay here.
struct LlmExchange {
    std::string prompt_digest;
    std::string prompt_text;
    std::string response_text;

    friend bool operator==(const LlmExchange&, const LlmExchange&) = default;
};

// Cassette file: JSON array of exchanges. Digests are unique; re-recording
// an existing digest replaces the entry in place.
std::vector<LlmExchange> parse_cassette(std::string_view json_text);
std::string serialize_cassette(const std::vector<LlmExchange>& exchanges);

std::vector<LlmExchange> load_cassette(const std::string& path);
void record_exchange(const std::string& path, const LlmExchange& exchange);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace tiersim
