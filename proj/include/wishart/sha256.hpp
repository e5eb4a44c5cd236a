#pragma once

#include <string>

namespace wishart {

// Hex digest of the SHA-256 of the input bytes (FIPS 180-4).
std::string sha256_hex(const std::string& data);

}  // namespace wishart
