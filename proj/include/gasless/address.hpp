#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace gasless {

// 20-byte account identifier; display form is lowercase hex with "xdc" prefix.
struct Address {
    std::array<uint8_t, 20> id{};

    friend bool operator==(const Address& a, const Address& b) { return a.id == b.id; }
    friend bool operator!=(const Address& a, const Address& b) { return a.id != b.id; }
    friend bool operator<(const Address& a, const Address& b) { return a.id < b.id; }

    std::string to_string() const {
        static const char* hex = "0123456789abcdef";
        std::string s = "xdc";
        for (uint8_t b : id) {
            s.push_back(hex[b >> 4]);
            s.push_back(hex[b & 0xf]);
        }
        return s;
    }
};

struct AddressHash {
    size_t operator()(const Address& a) const {
        size_t h = 14695981039346656037ull;
        for (uint8_t b : a.id) h = (h ^ b) * 1099511628211ull;
        return h;
    }
};

}  // namespace gasless
