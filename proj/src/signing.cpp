#include "gasless/signing.hpp"

#include <cstring>

namespace gasless {

namespace {
const char kKeyDomain[] = "gasless.signing-key";
const char kVkDomain[] = "gasless.verification-key";
const char kAddrDomain[] = "gasless.address";
const char kMacDomain[] = "gasless.mac";

std::vector<uint8_t> cat(const char* domain, const uint8_t* a, size_t alen,
                         const uint8_t* b, size_t blen) {
    std::vector<uint8_t> buf;
    buf.insert(buf.end(), domain, domain + std::strlen(domain));
    buf.insert(buf.end(), a, a + alen);
    if (b) buf.insert(buf.end(), b, b + blen);
    return buf;
}
}  // namespace

Seed seed_from_u64(uint64_t n) {
    Seed s{};
    for (int i = 7; i >= 0; --i) {
        s[size_t(i)] = uint8_t(n & 0xff);
        n >>= 8;
    }
    return s;
}

Digest RegistryScheme::verification_key(const std::array<uint8_t, 32>& signing_key) {
    return digest(cat(kVkDomain, signing_key.data(), 32, nullptr, 0));
}

Digest RegistryScheme::mac(const Digest& vk, const Digest& d) {
    return digest(cat(kMacDomain, vk.data(), 32, d.data(), 32));
}

KeyPair RegistryScheme::keygen(const Seed& seed) {
    KeyPair kp;
    kp.signing_key = digest(cat(kKeyDomain, seed.data(), 32, nullptr, 0));
    Digest vk = verification_key(kp.signing_key);
    Digest addr_digest = digest(cat(kAddrDomain, vk.data(), 32, nullptr, 0));
    std::memcpy(kp.address.id.data(), addr_digest.data(), 20);
    directory_[kp.address] = vk;
    return kp;
}

Signature RegistryScheme::sign(const KeyPair& kp, const Digest& d) const {
    Digest vk = verification_key(kp.signing_key);
    Digest m = mac(vk, d);
    Signature sig;
    sig.bytes.reserve(kSignatureLen);
    sig.bytes.insert(sig.bytes.end(), kp.address.id.begin(), kp.address.id.end());
    sig.bytes.insert(sig.bytes.end(), m.begin(), m.end());
    return sig;
}

Result<Address> RegistryScheme::recover(const Digest& d, const Signature& sig) const {
    if (sig.bytes.size() != kSignatureLen) return Err::MalformedSignature;
    Address claimed;
    std::memcpy(claimed.id.data(), sig.bytes.data(), 20);
    auto it = directory_.find(claimed);
    if (it == directory_.end()) return Err::RecoveryFailure;
    Digest expected = mac(it->second, d);
    if (std::memcmp(expected.data(), sig.bytes.data() + 20, 32) != 0) return Err::RecoveryFailure;
    return claimed;
}

}  // namespace gasless
