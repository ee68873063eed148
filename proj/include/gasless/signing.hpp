#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "gasless/address.hpp"
#include "gasless/hash.hpp"
#include "gasless/result.hpp"

namespace gasless {

using Seed = std::array<uint8_t, 32>;

struct KeyPair {
    std::array<uint8_t, 32> signing_key{};
    Address address;
};

// Fixed-length opaque signature; layout is scheme-defined.
struct Signature {
    std::vector<uint8_t> bytes;

    friend bool operator==(const Signature& a, const Signature& b) { return a.bytes == b.bytes; }
};

// Deterministic recoverable-signature scheme. keygen and sign are pure
// functions of their inputs; recover never attributes a tampered signature
// to the honest signer.
class SignatureScheme {
public:
    virtual ~SignatureScheme() = default;
    virtual KeyPair keygen(const Seed& seed) = 0;
    virtual Signature sign(const KeyPair& kp, const Digest& d) const = 0;
    virtual Result<Address> recover(const Digest& d, const Signature& sig) const = 0;
};

// In-process directory scheme: address -> verification key, signature is the
// verification key's MAC over the digest. All simulated parties live in one
// process, so the directory stands in for public-key recovery.
class RegistryScheme : public SignatureScheme {
public:
    static constexpr size_t kSignatureLen = 52;  // 20B address + 32B mac

    KeyPair keygen(const Seed& seed) override;
    Signature sign(const KeyPair& kp, const Digest& d) const override;
    Result<Address> recover(const Digest& d, const Signature& sig) const override;

private:
    static Digest verification_key(const std::array<uint8_t, 32>& signing_key);
    static Digest mac(const Digest& vk, const Digest& d);

    std::unordered_map<Address, Digest, AddressHash> directory_;
};

Seed seed_from_u64(uint64_t n);

}  // namespace gasless
