#include "gasless/metatx.hpp"

#include <cstring>

namespace gasless {

std::vector<uint8_t> encode_canonical(const MetaTransaction& tx) {
    std::vector<uint8_t> buf;
    buf.reserve(120 + tx.payload.size());
    auto put8 = [&buf](uint64_t v) {
        auto b = to_be8(v);
        buf.insert(buf.end(), b.begin(), b.end());
    };
    put8(tx.chain_id);
    put8(tx.subnet_id);
    buf.insert(buf.end(), tx.from.id.begin(), tx.from.id.end());
    buf.insert(buf.end(), tx.to.id.begin(), tx.to.id.end());
    auto v = to_be32(tx.value.wei);
    buf.insert(buf.end(), v.begin(), v.end());
    put8(tx.payload.size());
    buf.insert(buf.end(), tx.payload.begin(), tx.payload.end());
    put8(tx.nonce);
    buf.insert(buf.end(), tx.payment_id.begin(), tx.payment_id.end());
    return buf;
}

Result<MetaTransaction> decode_canonical(const std::vector<uint8_t>& bytes) {
    MetaTransaction tx;
    size_t pos = 0;
    auto need = [&](size_t n) { return pos + n <= bytes.size(); };
    auto get8 = [&](uint64_t& out) {
        out = 0;
        for (int i = 0; i < 8; ++i) out = (out << 8) | bytes[pos++];
    };
    if (!need(120)) return Err::ConfigInvalid;
    get8(tx.chain_id);
    get8(tx.subnet_id);
    std::memcpy(tx.from.id.data(), bytes.data() + pos, 20);
    pos += 20;
    std::memcpy(tx.to.id.data(), bytes.data() + pos, 20);
    pos += 20;
    std::array<uint8_t, 32> v{};
    std::memcpy(v.data(), bytes.data() + pos, 32);
    pos += 32;
    tx.value = TokenAmount{from_be32(v)};
    uint64_t plen = 0;
    get8(plen);
    if (!need(plen + 8 + 16)) return Err::ConfigInvalid;
    tx.payload.assign(bytes.begin() + long(pos), bytes.begin() + long(pos + plen));
    pos += plen;
    get8(tx.nonce);
    std::memcpy(tx.payment_id.data(), bytes.data() + pos, 16);
    pos += 16;
    if (pos != bytes.size()) return Err::ConfigInvalid;
    return tx;
}

Digest tx_digest(const MetaTransaction& tx) {
    return digest(encode_canonical(tx));
}

MetaTransaction make_signed_tx(const SignatureScheme& scheme, const KeyPair& sender,
                               uint64_t chain_id, uint64_t subnet_id, const Address& to,
                               TokenAmount value, std::vector<uint8_t> payload,
                               uint64_t nonce, const PaymentId& payment_id) {
    MetaTransaction tx;
    tx.chain_id = chain_id;
    tx.subnet_id = subnet_id;
    tx.from = sender.address;
    tx.to = to;
    tx.value = value;
    tx.payload = std::move(payload);
    tx.nonce = nonce;
    tx.payment_id = payment_id;
    tx.signature = scheme.sign(sender, tx_digest(tx));
    return tx;
}

uint64_t gas_limit_for(const MetaTransaction& tx) {
    return 21000 + 500 * uint64_t(tx.payload.size());
}

Status validate(const SignatureScheme& scheme, const MetaTransaction& tx,
                uint64_t expected_nonce, bool payment_ok) {
    auto signer = scheme.recover(tx_digest(tx), tx.signature);
    if (!signer || signer.value() != tx.from) return Err::BadSignature;
    if (tx.nonce != expected_nonce) return Err::BadNonce;
    if (!payment_ok) return Err::PaymentMissing;
    return Ok{};
}

ExecutionReceipt execute(MetaTransaction const& tx, Ledger& ledger, uint64_t block_height,
                         const Address& gas_payer) {
    invariant(gas_payer != tx.from, "meta-tx sender must never pay gas");
    ExecutionReceipt r;
    r.tx_digest = tx_digest(tx);
    r.block_height = block_height;
    r.gas_used = gas_limit_for(tx);
    r.gas_fee_paid_by = gas_payer;
    if (ledger.balance(tx.from) < tx.value) {
        r.executed = false;
        r.reject_reason = Err::InsufficientBalance;
        return r;
    }
    if (!tx.value.is_zero()) {
        auto st = ledger.transfer(tx.from, tx.to, tx.value);
        invariant(st.ok(), "transfer failed after balance precheck");
    }
    ledger.open(tx.from).nonce += 1;
    r.executed = true;
    return r;
}

}  // namespace gasless
