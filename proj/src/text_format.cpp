#include "tiersim/text_format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include <fmt/core.h>

namespace tiersim {

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_identifier(std::string_view s) {
    if (s.empty() || !is_ident_start(s.front())) return false;
    return std::all_of(s.begin(), s.end(), is_ident_char);
}

}  // namespace

const Entry* Section::find(std::string_view key) const {
    for (const Entry& e : entries) {
        if (e.key == key) return &e;
    }
    return nullptr;
}

Document parse_document(std::string_view text) {
    Document doc;
    Section* current = nullptr;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view raw = eol == std::string_view::npos ? text.substr(pos)
                                                             : text.substr(pos, eol - pos);
        if (eol == std::string_view::npos && raw.empty() && pos == text.size()) break;
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

        std::size_t indent = 0;
        while (indent < raw.size() && std::isspace(static_cast<unsigned char>(raw[indent]))) ++indent;
        std::string_view body = raw.substr(indent);

        if (body.empty() || body.front() == '#') {
            // blank or comment
        } else if (body.front() == '[') {
            std::size_t close = body.find(']');
            if (close == std::string_view::npos) {
                throw ParseError("unterminated section header", line_no, indent + 1);
            }
            if (!trim(body.substr(close + 1)).empty()) {
                throw ParseError("trailing characters after section header", line_no,
                                 indent + close + 2);
            }
            std::string_view inner = trim(body.substr(1, close - 1));
            if (inner.empty()) {
                throw ParseError("empty section header", line_no, indent + 1);
            }
            std::size_t sp = inner.find_first_of(" \t");
            Section section;
            section.line = line_no;
            if (sp == std::string_view::npos) {
                section.kind = std::string(inner);
            } else {
                section.kind = std::string(inner.substr(0, sp));
                section.name = std::string(trim(inner.substr(sp)));
            }
            if (!is_identifier(section.kind)) {
                throw ParseError(fmt::format("section kind '{}' is not an identifier", section.kind),
                                 line_no, indent + 2);
            }
            if (!section.name.empty() && !is_identifier(section.name)) {
                throw ParseError(fmt::format("section name '{}' is not an identifier", section.name),
                                 line_no, indent + 2);
            }
            doc.sections.push_back(std::move(section));
            current = &doc.sections.back();
        } else {
            std::size_t eq = body.find('=');
            if (eq == std::string_view::npos) {
                throw ParseError("expected 'key = value'", line_no, indent + 1);
            }
            std::string_view key = trim(body.substr(0, eq));
            std::string_view value = trim(body.substr(eq + 1));
            if (!is_identifier(key)) {
                throw ParseError(fmt::format("key '{}' is not an identifier", key), line_no,
                                 indent + 1);
            }
            if (value.empty()) {
                throw ParseError(fmt::format("key '{}' has an empty value", key), line_no,
                                 indent + eq + 2);
            }
            if (current == nullptr) {
                throw ParseError("key/value pair before any section header", line_no, indent + 1);
            }
            if (current->find(key) != nullptr) {
                throw ParseError(fmt::format("duplicate key '{}' in section [{}]", key,
                                             current->kind),
                                 line_no, indent + 1);
            }
            current->entries.push_back({std::string(key), std::string(value), line_no});
        }

        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return doc;
}

std::string write_document(const Document& doc) {
    std::string out;
    bool first = true;
    for (const Section& s : doc.sections) {
        if (!first) out += '\n';
        first = false;
        out += '[';
        out += s.kind;
        if (!s.name.empty()) {
            out += ' ';
            out += s.name;
        }
        out += "]\n";
        std::vector<const Entry*> ordered;
        ordered.reserve(s.entries.size());
        for (const Entry& e : s.entries) ordered.push_back(&e);
        std::sort(ordered.begin(), ordered.end(),
                  [](const Entry* a, const Entry* b) { return a->key < b->key; });
        for (const Entry* e : ordered) {
            out += e->key;
            out += " = ";
            out += e->value;
            out += '\n';
        }
    }
    return out;
}

SectionReader::SectionReader(const Section& section)
    : section_(&section), consumed_(section.entries.size(), false) {}

const Entry* SectionReader::consume(std::string_view key) {
    for (std::size_t i = 0; i < section_->entries.size(); ++i) {
        if (section_->entries[i].key == key) {
            consumed_[i] = true;
            return &section_->entries[i];
        }
    }
    return nullptr;
}

bool SectionReader::has(std::string_view key) const {
    return section_->find(key) != nullptr;
}

void SectionReader::missing(std::string_view key) const {
    throw ParseError(fmt::format("section [{}{}{}] is missing mandatory key '{}'", section_->kind,
                                 section_->name.empty() ? "" : " ", section_->name, key),
                     section_->line, 1);
}

std::uint64_t SectionReader::required_u64(std::string_view key) {
    const Entry* e = consume(key);
    if (e == nullptr) missing(key);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (ec != std::errc() || ptr != e->value.data() + e->value.size()) {
        throw ParseError(fmt::format("key '{}': '{}' is not an unsigned integer", key, e->value),
                         e->line, 1);
    }
    return v;
}

std::uint64_t SectionReader::optional_u64(std::string_view key, std::uint64_t fallback) {
    return has(key) ? required_u64(key) : fallback;
}

std::optional<std::uint64_t> SectionReader::maybe_u64(std::string_view key) {
    if (!has(key)) return std::nullopt;
    return required_u64(key);
}

double SectionReader::required_double(std::string_view key) {
    const Entry* e = consume(key);
    if (e == nullptr) missing(key);
    char* end = nullptr;
    double v = std::strtod(e->value.c_str(), &end);
    if (end != e->value.c_str() + e->value.size() || e->value.empty()) {
        throw ParseError(fmt::format("key '{}': '{}' is not a number", key, e->value), e->line, 1);
    }
    return v;
}

double SectionReader::optional_double(std::string_view key, double fallback) {
    return has(key) ? required_double(key) : fallback;
}

bool SectionReader::optional_bool(std::string_view key, bool fallback) {
    const Entry* e = consume(key);
    if (e == nullptr) return fallback;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    throw ParseError(fmt::format("key '{}': expected true or false, got '{}'", key, e->value),
                     e->line, 1);
}

std::string SectionReader::required_token(std::string_view key) {
    const Entry* e = consume(key);
    if (e == nullptr) missing(key);
    return e->value;
}

std::string SectionReader::optional_token(std::string_view key, std::string fallback) {
    const Entry* e = consume(key);
    return e == nullptr ? std::move(fallback) : e->value;
}

std::vector<std::string> SectionReader::optional_list(std::string_view key) {
    const Entry* e = consume(key);
    std::vector<std::string> items;
    if (e == nullptr) return items;
    std::string_view rest = e->value;
    while (!rest.empty()) {
        std::size_t comma = rest.find(',');
        std::string_view item = trim(comma == std::string_view::npos ? rest : rest.substr(0, comma));
        if (!item.empty()) items.emplace_back(item);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return items;
}

void SectionReader::finish() {
    for (std::size_t i = 0; i < consumed_.size(); ++i) {
        if (!consumed_[i]) {
            const Entry& e = section_->entries[i];
            throw ParseError(fmt::format("unknown key '{}' in section [{}{}{}]", e.key,
                                         section_->kind, section_->name.empty() ? "" : " ",
                                         section_->name),
                             e.line, 1);
        }
    }
}

std::string format_u64(std::uint64_t v) {
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace tiersim
