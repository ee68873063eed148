#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "gasless/ledger.hpp"
#include "gasless/signing.hpp"

namespace gasless {

using PaymentId = std::array<uint8_t, 16>;

// User-signed intent executed gas-free for the user; a relayer fronts the gas.
struct MetaTransaction {
    uint64_t chain_id = 0;
    uint64_t subnet_id = 0;
    Address from;
    Address to;
    TokenAmount value;
    std::vector<uint8_t> payload;
    uint64_t nonce = 0;
    PaymentId payment_id{};
    Signature signature;
};

struct ExecutionReceipt {
    Digest tx_digest{};
    uint64_t block_height = 0;
    uint64_t gas_used = 0;
    Address gas_fee_paid_by;  // always a relayer, never the sender
    uint64_t user_fee_fiat_microcents = 0;
    bool executed = false;
    std::optional<Err> reject_reason;
};

// Injective wire format signed by the user and carried on relayer queues:
// chain_id(8B BE) || subnet_id(8B BE) || from(20B) || to(20B) || value(32B BE)
// || payload_len(8B BE) || payload || nonce(8B BE) || payment_id(16B).
std::vector<uint8_t> encode_canonical(const MetaTransaction& tx);
Result<MetaTransaction> decode_canonical(const std::vector<uint8_t>& bytes);

Digest tx_digest(const MetaTransaction& tx);

MetaTransaction make_signed_tx(const SignatureScheme& scheme, const KeyPair& sender,
                               uint64_t chain_id, uint64_t subnet_id, const Address& to,
                               TokenAmount value, std::vector<uint8_t> payload,
                               uint64_t nonce, const PaymentId& payment_id);

// Default gas model: 21000 + 500 per payload byte.
uint64_t gas_limit_for(const MetaTransaction& tx);

// Valid iff the signature recovers to tx.from, the nonce matches, and the
// bound payment checks out. Each rejection reason is distinct.
Status validate(const SignatureScheme& scheme, const MetaTransaction& tx,
                uint64_t expected_nonce, bool payment_ok);

// Applies the value transfer and bumps the sender nonce; the sender pays zero
// gas. Insufficient balance rejects atomically and does not consume the nonce.
ExecutionReceipt execute(MetaTransaction const& tx, Ledger& ledger, uint64_t block_height,
                         const Address& gas_payer);

}  // namespace gasless
