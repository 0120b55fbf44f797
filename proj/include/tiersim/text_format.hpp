#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tiersim/error.hpp"

namespace tiersim {

// Sectioned key/value dialect shared by system descriptions and workload
// manifests:
//
//   # comment
//   [tier DRAM]
//   read_latency_ns = 100
//
// A header is "[kind]" or "[kind name]"; each following line is one
// "key = value" pair. '#' at the start of a line (after whitespace) opens a
// comment. Canonical output writes sections in declaration order with keys
// sorted lexicographically; comments are not preserved.

struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

struct Section {
    std::string kind;
    std::string name;  // empty for unnamed sections like [system]
    std::vector<Entry> entries;
    std::size_t line = 0;

    const Entry* find(std::string_view key) const;
};

struct Document {
    std::vector<Section> sections;
};

Document parse_document(std::string_view text);
std::string write_document(const Document& doc);

// Typed access to one section's entries. Tracks which keys were read so
// finish() can reject unknown ones with a line/column diagnostic.
class SectionReader {
public:
    explicit SectionReader(const Section& section);

    bool has(std::string_view key) const;

    std::uint64_t required_u64(std::string_view key);
    std::uint64_t optional_u64(std::string_view key, std::uint64_t fallback);
    double required_double(std::string_view key);
    double optional_double(std::string_view key, double fallback);
    bool optional_bool(std::string_view key, bool fallback);
    std::string required_token(std::string_view key);
    std::string optional_token(std::string_view key, std::string fallback);
    // Comma-separated identifier list.
    std::vector<std::string> optional_list(std::string_view key);

    std::optional<std::uint64_t> maybe_u64(std::string_view key);

    // Throws ParseError on the first key that was never consumed.
    void finish();

    const Section& section() const { return *section_; }

private:
    const Entry* consume(std::string_view key);
    [[noreturn]] void missing(std::string_view key) const;

    const Section* section_;
    std::vector<bool> consumed_;
};

// Canonical scalar renderings used everywhere a number must be byte-stable.
std::string format_u64(std::uint64_t v);
std::string format_double(double v);  // shortest round-trip via to_chars

}  // namespace tiersim
