#include "gasless/hash.hpp"

#include <openssl/evp.h>

namespace gasless {

Digest digest(const uint8_t* data, size_t len) {
    Digest out{};
    unsigned int n = 0;
    EVP_Digest(data, len, out.data(), &n, EVP_sha256(), nullptr);
    return out;
}

Digest digest(const std::vector<uint8_t>& message) {
    return digest(message.data(), message.size());
}

std::string hex(const uint8_t* data, size_t len) {
    static const char* h = "0123456789abcdef";
    std::string s;
    s.reserve(len * 2);
    for (size_t i = 0; i < len; ++i) {
        s.push_back(h[data[i] >> 4]);
        s.push_back(h[data[i] & 0xf]);
    }
    return s;
}

}  // namespace gasless
