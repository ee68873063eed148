#include "gasless/token.hpp"

#include <algorithm>

namespace gasless {

const char* to_string(Err e) {
    switch (e) {
        case Err::ArithmeticOverflow: return "arithmetic-overflow";
        case Err::InsufficientBalance: return "insufficient-balance";
        case Err::UnknownAccount: return "unknown-account";
        case Err::BelowMinimumStake: return "below-minimum-stake";
        case Err::SubnetActive: return "subnet-active";
        case Err::UnknownSubnet: return "unknown-subnet";
        case Err::EpochGap: return "epoch-gap";
        case Err::StaleEpoch: return "stale-epoch";
        case Err::MalformedSignature: return "malformed-signature";
        case Err::RecoveryFailure: return "recovery-failure";
        case Err::BadSignature: return "bad-signature";
        case Err::BadNonce: return "bad-nonce";
        case Err::PaymentMissing: return "payment-missing";
        case Err::PaymentUnconfirmed: return "payment-unconfirmed";
        case Err::PaymentAlreadyConsumed: return "payment-already-consumed";
        case Err::QueueFull: return "queue-full";
        case Err::InsufficientEscrow: return "insufficient-escrow";
        case Err::PoolUnderfunded: return "pool-underfunded";
        case Err::NotConfirmed: return "not-confirmed";
        case Err::AlreadyConsumed: return "already-consumed";
        case Err::UnknownId: return "unknown-id";
        case Err::InsufficientFiat: return "insufficient-fiat";
        case Err::NoStandbyAvailable: return "no-standby-available";
        case Err::Throttled: return "throttled";
        case Err::EmptyWindow: return "empty-window";
        case Err::ScenariosNotComparable: return "scenarios-not-comparable";
        case Err::ConfigInvalid: return "config-invalid";
        case Err::UnsupportedFormat: return "unsupported-format";
        case Err::NegativeInput: return "negative-input";
    }
    return "unknown-error";
}

Result<TokenAmount> checked_add(TokenAmount a, TokenAmount b) {
    u128 s = a.wei + b.wei;
    if (s < a.wei) return Err::ArithmeticOverflow;
    return TokenAmount{s};
}

Result<TokenAmount> checked_sub(TokenAmount a, TokenAmount b) {
    if (b.wei > a.wei) return Err::InsufficientBalance;
    return TokenAmount{a.wei - b.wei};
}

Result<TokenAmount> checked_mul(TokenAmount a, uint64_t k) {
    if (k == 0 || a.wei == 0) return TokenAmount{0};
    u128 p = a.wei * u128(k);
    if (p / u128(k) != a.wei) return Err::ArithmeticOverflow;
    return TokenAmount{p};
}

std::array<uint8_t, 32> to_be32(u128 v) {
    std::array<uint8_t, 32> out{};
    for (int i = 31; i >= 0 && v != 0; --i) {
        out[size_t(i)] = uint8_t(v & 0xff);
        v >>= 8;
    }
    return out;
}

u128 from_be32(const std::array<uint8_t, 32>& b) {
    u128 v = 0;
    for (uint8_t byte : b) v = (v << 8) | byte;
    return v;
}

std::array<uint8_t, 8> to_be8(uint64_t v) {
    std::array<uint8_t, 8> out{};
    for (int i = 7; i >= 0; --i) {
        out[size_t(i)] = uint8_t(v & 0xff);
        v >>= 8;
    }
    return out;
}

std::string u128_to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v != 0) {
        s.push_back(char('0' + int(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

std::string format_xdc(TokenAmount t) {
    u128 whole = t.wei / TokenAmount::kWeiPerXdc;
    u128 frac = t.wei % TokenAmount::kWeiPerXdc;
    std::string s = u128_to_string(whole);
    if (frac == 0) return s;
    std::string f = u128_to_string(frac);
    f.insert(f.begin(), 18 - f.size(), '0');
    while (!f.empty() && f.back() == '0') f.pop_back();
    return s + "." + f;
}

}  // namespace gasless
