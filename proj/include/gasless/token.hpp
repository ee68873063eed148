#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "gasless/result.hpp"

namespace gasless {

using u128 = unsigned __int128;

// Exact integer token arithmetic in wei. 1 XDC = 10^18 wei, 1 Gwei = 10^9 wei.
// Subtraction below zero and multiplicative overflow are errors, never wraps.
struct TokenAmount {
    u128 wei = 0;

    static constexpr uint64_t kWeiPerGwei = 1'000'000'000ull;
    static constexpr uint64_t kWeiPerXdc = 1'000'000'000'000'000'000ull;

    static TokenAmount from_wei(u128 w) { return TokenAmount{w}; }
    static TokenAmount from_gwei(uint64_t g) { return TokenAmount{u128(g) * kWeiPerGwei}; }
    static TokenAmount from_xdc(uint64_t x) { return TokenAmount{u128(x) * kWeiPerXdc}; }

    bool is_zero() const { return wei == 0; }

    friend bool operator==(const TokenAmount& a, const TokenAmount& b) { return a.wei == b.wei; }
    friend bool operator!=(const TokenAmount& a, const TokenAmount& b) { return a.wei != b.wei; }
    friend bool operator<(const TokenAmount& a, const TokenAmount& b) { return a.wei < b.wei; }
    friend bool operator<=(const TokenAmount& a, const TokenAmount& b) { return a.wei <= b.wei; }
    friend bool operator>(const TokenAmount& a, const TokenAmount& b) { return a.wei > b.wei; }
    friend bool operator>=(const TokenAmount& a, const TokenAmount& b) { return a.wei >= b.wei; }
};

Result<TokenAmount> checked_add(TokenAmount a, TokenAmount b);
Result<TokenAmount> checked_sub(TokenAmount a, TokenAmount b);
Result<TokenAmount> checked_mul(TokenAmount a, uint64_t k);

// Big-endian fixed-width encodings used by the canonical serializations.
std::array<uint8_t, 32> to_be32(u128 v);
u128 from_be32(const std::array<uint8_t, 32>& b);
std::array<uint8_t, 8> to_be8(uint64_t v);

std::string u128_to_string(u128 v);
// Display-only: "0.00042" style decimal XDC string. Never used in ledger paths.
std::string format_xdc(TokenAmount t);

}  // namespace gasless
