#include <doctest.h>

#include <random>

#include "gasless/ledger.hpp"

using namespace gasless;

namespace {
Address addr(uint8_t b) {
    Address a;
    a.id.fill(b);
    return a;
}
}  // namespace

TEST_CASE("checked arithmetic never wraps") {
    TokenAmount max{~u128(0)};
    CHECK_FALSE(checked_add(max, TokenAmount{1}).ok());
    CHECK(checked_add(max, TokenAmount{0}).ok());
    CHECK_FALSE(checked_sub(TokenAmount{1}, TokenAmount{2}).ok());
    CHECK(checked_sub(TokenAmount{2}, TokenAmount{2}).value().is_zero());
    CHECK_FALSE(checked_mul(max, 2).ok());
    CHECK(checked_mul(TokenAmount{3}, 7).value() == TokenAmount{21});
}

TEST_CASE("gas fee is gas_limit x (base + priority), exact") {
    // 21000 x (15 + 5) Gwei = 420000 Gwei = 0.00042 XDC
    GasParams p{21000, TokenAmount::from_gwei(15), TokenAmount::from_gwei(5)};
    CHECK(compute_gas_fee(p).value() == TokenAmount::from_gwei(420000));
    CHECK(compute_gas_fee(p).value().wei == u128(420) * 1'000'000'000'000ull);

    GasParams zero{0, TokenAmount::from_gwei(20), {}};
    CHECK(compute_gas_fee(zero).value().is_zero());

    GasParams flat{21000, TokenAmount::from_gwei(20), {}};
    CHECK(compute_gas_fee(flat).value() == TokenAmount::from_gwei(420000));

    GasParams huge{UINT64_MAX, TokenAmount{~u128(0) / 2}, {}};
    auto r = compute_gas_fee(huge);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error() == Err::ArithmeticOverflow);
}

TEST_CASE("big-endian 32-byte encoding round-trips") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        u128 v = (u128(rng()) << 64) | rng();
        CHECK(from_be32(to_be32(v)) == v);
    }
    CHECK(u128_to_string(0) == "0");
    CHECK(u128_to_string(u128(1'000'000'000'000'000'000ull)) == "1000000000000000000");
}

TEST_CASE("transfers are exact and atomic") {
    Ledger l;
    l.open(addr(1)).balance = TokenAmount::from_xdc(100);
    l.open(addr(2));

    CHECK(l.transfer(addr(1), addr(2), TokenAmount::from_xdc(40)).ok());
    CHECK(l.balance(addr(1)) == TokenAmount::from_xdc(60));
    CHECK(l.balance(addr(2)) == TokenAmount::from_xdc(40));

    CHECK(l.transfer(addr(1), addr(2), TokenAmount{}).ok());  // zero transfer is a no-op
    CHECK(l.balance(addr(1)) == TokenAmount::from_xdc(60));

    Ledger tiny;
    tiny.open(addr(1)).balance = TokenAmount{1};
    tiny.open(addr(2));
    auto r = tiny.transfer(addr(1), addr(2), TokenAmount{2});
    REQUIRE_FALSE(r.ok());
    CHECK(r.error() == Err::InsufficientBalance);
    CHECK(tiny.balance(addr(1)) == TokenAmount{1});  // unchanged on error

    auto unknown = tiny.transfer(addr(9), addr(2), TokenAmount{1});
    REQUIRE_FALSE(unknown.ok());
    CHECK(unknown.error() == Err::UnknownAccount);
}

TEST_CASE("total supply counts balances and stakes") {
    Ledger l;
    l.open(addr(1)).balance = TokenAmount::from_xdc(100);
    CHECK(l.move_to_staked(addr(1), TokenAmount::from_xdc(30)).ok());
    l.open(addr(2)).balance = TokenAmount::from_xdc(5);
    CHECK(l.total_supply() == TokenAmount::from_xdc(105));
    CHECK(l.staked(addr(1)) == TokenAmount::from_xdc(30));
    CHECK(l.release_staked(addr(1), TokenAmount::from_xdc(30)).ok());
    CHECK(l.total_supply() == TokenAmount::from_xdc(105));
}

TEST_CASE("state root depends only on final state") {
    Ledger a;
    a.open(addr(1)).balance = TokenAmount{10};
    a.open(addr(2)).balance = TokenAmount{20};
    Ledger b;
    b.open(addr(2)).balance = TokenAmount{20};
    b.open(addr(1)).balance = TokenAmount{10};
    CHECK(a.state_root() == b.state_root());
    b.open(addr(1)).balance = TokenAmount{11};
    CHECK(a.state_root() != b.state_root());
}

TEST_CASE("block digest covers every field") {
    Block b;
    b.height = 3;
    b.timestamp_ms = 2500;
    b.proposer = addr(7);
    Digest base = block_digest(b);
    Block c = b;
    c.height = 4;
    CHECK(block_digest(c) != base);
    c = b;
    c.tx_digests.push_back(Digest{});
    CHECK(block_digest(c) != base);
}
