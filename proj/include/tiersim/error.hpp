#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tiersim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Syntax-level failure while reading a text document. 1-based line/column.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// A structurally valid document whose contents break the model invariants.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

class TransportError : public Error {
public:
    using Error::Error;
};

// Replay transport has no entry for the requested prompt digest.
class CassetteMiss : public Error {
public:
    explicit CassetteMiss(const std::string& digest);

    const std::string& digest() const noexcept { return digest_; }

private:
    std::string digest_;
};

// LLM response yielded neither a machine-readable block nor a known pattern.
class UnparseableResponse : public Error {
public:
    using Error::Error;
};

// No tier (including the catch-all fallbacks) can hold the hint's pages.
class InfeasibleAllocation : public Error {
public:
    using Error::Error;
};

}  // namespace tiersim
