#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace gasless {

using Digest = std::array<uint8_t, 32>;

// SHA-256 of an arbitrary byte string.
Digest digest(const std::vector<uint8_t>& message);
Digest digest(const uint8_t* data, size_t len);

std::string hex(const uint8_t* data, size_t len);

template <size_t N>
std::string hex(const std::array<uint8_t, N>& a) {
    return hex(a.data(), N);
}

}  // namespace gasless
