#include <doctest.h>

#include <random>

#include "gasless/metatx.hpp"

using namespace gasless;

namespace {

MetaTransaction random_tx(RegistryScheme& scheme, std::mt19937_64& rng) {
    KeyPair kp = scheme.keygen(seed_from_u64(rng()));
    Address to = scheme.keygen(seed_from_u64(rng())).address;
    std::vector<uint8_t> payload(rng() % 64);
    for (auto& b : payload) b = uint8_t(rng());
    PaymentId pid{};
    for (auto& b : pid) b = uint8_t(rng());
    return make_signed_tx(scheme, kp, rng() % 1000, rng() % 16, to,
                          TokenAmount{(u128(rng()) << 64) | rng()}, payload, rng() % 100, pid);
}

}  // namespace

TEST_CASE("canonical encoding of an empty-payload tx is 120 bytes") {
    RegistryScheme scheme;
    KeyPair kp = scheme.keygen(seed_from_u64(1));
    MetaTransaction tx = make_signed_tx(scheme, kp, 51, 0, kp.address, TokenAmount{7}, {}, 3,
                                        PaymentId{});
    auto bytes = encode_canonical(tx);
    CHECK(bytes.size() == 120);
    // chain_id big-endian in the first 8 bytes
    CHECK(bytes[7] == 51);
    // nonce big-endian right before the 16-byte payment id
    CHECK(bytes[bytes.size() - 17] == 3);
}

TEST_CASE("decode(encode(tx)) round-trips") {
    RegistryScheme scheme;
    std::mt19937_64 rng(42);
    for (int i = 0; i < 500; ++i) {
        MetaTransaction tx = random_tx(scheme, rng);
        auto decoded = decode_canonical(encode_canonical(tx));
        REQUIRE(decoded.ok());
        const MetaTransaction& d = decoded.value();
        CHECK(d.chain_id == tx.chain_id);
        CHECK(d.subnet_id == tx.subnet_id);
        CHECK(d.from == tx.from);
        CHECK(d.to == tx.to);
        CHECK(d.value == tx.value);
        CHECK(d.payload == tx.payload);
        CHECK(d.nonce == tx.nonce);
        CHECK(d.payment_id == tx.payment_id);
        CHECK(tx_digest(d) == tx_digest(tx));
    }
}

TEST_CASE("digest changes when any signed field changes") {
    RegistryScheme scheme;
    std::mt19937_64 rng(7);
    MetaTransaction tx = random_tx(scheme, rng);
    Digest base = tx_digest(tx);
    auto changed = [&](auto mutate) {
        MetaTransaction m = tx;
        mutate(m);
        return tx_digest(m) != base;
    };
    CHECK(changed([](MetaTransaction& m) { m.chain_id ^= 1; }));
    CHECK(changed([](MetaTransaction& m) { m.subnet_id ^= 1; }));
    CHECK(changed([](MetaTransaction& m) { m.value.wei += 1; }));
    CHECK(changed([](MetaTransaction& m) { m.nonce += 1; }));
    CHECK(changed([](MetaTransaction& m) { m.payload.push_back(0); }));
    CHECK(changed([](MetaTransaction& m) { m.payment_id[0] ^= 1; }));
}

TEST_CASE("gas model is 21000 + 500 per payload byte") {
    MetaTransaction tx;
    CHECK(gas_limit_for(tx) == 21000);
    tx.payload.resize(10);
    CHECK(gas_limit_for(tx) == 26000);
}

TEST_CASE("validation distinguishes every rejection reason") {
    RegistryScheme scheme;
    KeyPair kp = scheme.keygen(seed_from_u64(5));
    Address to = scheme.keygen(seed_from_u64(6)).address;
    MetaTransaction tx =
        make_signed_tx(scheme, kp, 51, 0, to, TokenAmount{1}, {}, 4, PaymentId{});

    CHECK(validate(scheme, tx, 4, true).ok());
    CHECK(validate(scheme, tx, 5, true).error() == Err::BadNonce);
    CHECK(validate(scheme, tx, 4, false).error() == Err::PaymentMissing);

    MetaTransaction forged = tx;
    forged.value.wei += 1;  // body no longer matches the signature
    CHECK(validate(scheme, forged, 4, true).error() == Err::BadSignature);
}

TEST_CASE("execution moves value, bumps nonce, charges the sender no gas") {
    RegistryScheme scheme;
    KeyPair kp = scheme.keygen(seed_from_u64(5));
    Address to = scheme.keygen(seed_from_u64(6)).address;
    Address relayer = scheme.keygen(seed_from_u64(7)).address;

    Ledger l;
    l.open(kp.address).balance = TokenAmount::from_xdc(10);
    l.open(to);
    l.open(relayer).balance = TokenAmount::from_xdc(1);

    MetaTransaction tx =
        make_signed_tx(scheme, kp, 51, 0, to, TokenAmount::from_xdc(4), {}, 0, PaymentId{});
    ExecutionReceipt r = execute(tx, l, 1, relayer);
    CHECK(r.executed);
    CHECK(r.gas_fee_paid_by == relayer);
    CHECK(l.balance(kp.address) == TokenAmount::from_xdc(6));
    CHECK(l.balance(to) == TokenAmount::from_xdc(4));
    CHECK(l.nonce(kp.address) == 1);

    // Replay of the executed tx: stale nonce.
    CHECK(validate(scheme, tx, l.nonce(kp.address), true).error() == Err::BadNonce);

    // Over-spend rejects atomically and does not consume the nonce.
    MetaTransaction big =
        make_signed_tx(scheme, kp, 51, 0, to, TokenAmount::from_xdc(100), {}, 1, PaymentId{});
    Digest root = l.state_root();
    ExecutionReceipt r2 = execute(big, l, 2, relayer);
    CHECK_FALSE(r2.executed);
    CHECK(r2.reject_reason == Err::InsufficientBalance);
    CHECK(l.state_root() == root);
    CHECK(l.nonce(kp.address) == 1);

    // A sender acting as its own gas payer violates the gasless invariant.
    MetaTransaction self =
        make_signed_tx(scheme, kp, 51, 0, to, TokenAmount{1}, {}, 1, PaymentId{});
    CHECK_THROWS_AS(execute(self, l, 3, kp.address), InvariantViolation);
}
