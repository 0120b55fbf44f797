#include "tiersim/cassette.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/core.h>
#include <json.hpp>

#include "tiersim/digest.hpp"
#include "tiersim/error.hpp"

namespace tiersim {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", path));
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(fmt::format("short write to '{}'", path));
}

std::vector<LlmExchange> parse_cassette(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(fmt::format("cassette: invalid JSON: {}", e.what()));
    }
    if (!root.is_array()) throw Error("cassette: top level must be an array");
    std::vector<LlmExchange> exchanges;
    for (const auto& item : root) {
        LlmExchange ex;
        ex.prompt_digest = item.at("prompt_digest").get<std::string>();
        ex.prompt_text = item.at("prompt_text").get<std::string>();
        ex.response_text = item.at("response_text").get<std::string>();
        if (sha256_hex(ex.prompt_text) != ex.prompt_digest) {
            throw Error(fmt::format("cassette: digest mismatch for entry '{}'", ex.prompt_digest));
        }
        exchanges.push_back(std::move(ex));
    }
    return exchanges;
}

std::string serialize_cassette(const std::vector<LlmExchange>& exchanges) {
    json root = json::array();
    for (const auto& ex : exchanges) {
        root.push_back({{"prompt_digest", ex.prompt_digest},
                        {"prompt_text", ex.prompt_text},
                        {"response_text", ex.response_text}});
    }
    return root.dump(2) + "\n";
}

std::vector<LlmExchange> load_cassette(const std::string& path) {
    return parse_cassette(read_file(path));
}

void record_exchange(const std::string& path, const LlmExchange& exchange) {
    if (sha256_hex(exchange.prompt_text) != exchange.prompt_digest) {
        throw Error(fmt::format("record_exchange: digest mismatch for '{}'",
                                exchange.prompt_digest));
    }
    std::vector<LlmExchange> exchanges;
    if (std::filesystem::exists(path)) {
        exchanges = load_cassette(path);
    }
    bool replaced = false;
    for (auto& ex : exchanges) {
        if (ex.prompt_digest == exchange.prompt_digest) {
            ex = exchange;
            replaced = true;
            break;
        }
    }
    if (!replaced) exchanges.push_back(exchange);
    write_file(path, serialize_cassette(exchanges));
}

}  // namespace tiersim
