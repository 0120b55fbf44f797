#pragma once

#include <string>
#include <string_view>

namespace tiersim {

// Lowercase hex SHA-256 of the exact bytes. Used for prompt digests,
// directive provenance and report input digests; cassettes recorded by one
// build replay under any other.
std::string sha256_hex(std::string_view bytes);

}  // namespace tiersim
