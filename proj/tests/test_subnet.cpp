#include <doctest.h>

#include "gasless/relayer.hpp"
#include "gasless/subnet.hpp"

using namespace gasless;

namespace {

struct World {
    RegistryScheme scheme;
    SubnetConfig cfg;
    Address treasury;
    Address relayer_addr;
    Address pool;
    Address market;
    std::unique_ptr<SubnetEngine> engine;
    std::unique_ptr<FiatGateway> gateway;
    KeyPair user;
    uint64_t nonce = 0;

    explicit World(uint32_t masternodes = 4, uint32_t standbys = 2) {
        ValidatorSet vs;
        for (uint32_t i = 0; i < masternodes; ++i) {
            vs.masternodes.push_back(scheme.keygen(seed_from_u64(100 + i)).address);
        }
        for (uint32_t i = 0; i < standbys; ++i) {
            vs.standbys.push_back(scheme.keygen(seed_from_u64(200 + i)).address);
        }
        treasury = scheme.keygen(seed_from_u64(300)).address;
        relayer_addr = scheme.keygen(seed_from_u64(301)).address;
        pool = scheme.keygen(seed_from_u64(302)).address;
        market = scheme.keygen(seed_from_u64(303)).address;
        engine = std::make_unique<SubnetEngine>(cfg, vs, treasury);
        engine->ledger().credit(relayer_addr, TokenAmount::from_xdc(1000));
        engine->ledger().credit(market, TokenAmount::from_xdc(100000));
        engine->ledger().open(pool);
        gateway = std::make_unique<FiatGateway>(ExchangeRate{}, pool, market, 0, 0.0);
        user = scheme.keygen(seed_from_u64(400));
        engine->ledger().credit(user.address, TokenAmount::from_xdc(100));
    }

    QueuedTx paid_tx(TokenAmount value, uint64_t handoff_ms, uint64_t nonce_override = UINT64_MAX) {
        GasParams gas{21000, cfg.gas_price, {}};
        MicroCents fee = quote_user_fee(gas, gateway->rate(), 1000);
        PaymentId pid = gateway->create_and_confirm_payment(user.address, fee, handoff_ms)
                            .payment_id;
        uint64_t n = nonce_override == UINT64_MAX ? nonce++ : nonce_override;
        QueuedTx q;
        q.tx = make_signed_tx(scheme, user, cfg.chain_id, cfg.subnet_id, treasury, value, {}, n,
                              pid);
        q.relayer = relayer_addr;
        q.handoff_ms = handoff_ms;
        return q;
    }
};

}  // namespace

TEST_CASE("token bucket admits a burst of capacity, then throttles") {
    World w;
    uint64_t admitted = 0;
    AdmitResult last{};
    for (int i = 0; i < 11; ++i) {
        last = w.engine->admit(w.paid_tx(TokenAmount{1}, 0), 0);
        if (last.admitted) ++admitted;
    }
    CHECK(admitted == 10);  // capacity 10
    CHECK_FALSE(last.admitted);
    CHECK(last.retry_after_ms == 500);  // refill 2/s -> one token in 0.5 s

    // After the advertised wait the same sender is admitted again.
    CHECK(w.engine->admit(w.paid_tx(TokenAmount{1}, 500), 500).admitted);
}

TEST_CASE("gasless blocks are FIFO and cap-bounded") {
    World w;
    w.cfg.block_tx_cap = 3;
    ValidatorSet vs;
    vs.masternodes = {w.scheme.keygen(seed_from_u64(100)).address};
    SubnetEngine engine(w.cfg, vs, w.treasury);
    engine.ledger().credit(w.relayer_addr, TokenAmount::from_xdc(1000));
    engine.ledger().credit(w.user.address, TokenAmount::from_xdc(100));

    std::vector<Digest> order;
    for (int i = 0; i < 5; ++i) {
        QueuedTx q = w.paid_tx(TokenAmount{u128(i)}, 0);
        order.push_back(tx_digest(q.tx));
        REQUIRE(engine.admit(std::move(q), 0).admitted);
    }
    Block b1 = engine.produce_block_gasless(2500, w.scheme, *w.gateway, nullptr);
    REQUIRE(b1.tx_digests.size() == 3);
    CHECK(b1.tx_digests[0] == order[0]);
    CHECK(b1.tx_digests[1] == order[1]);
    CHECK(b1.tx_digests[2] == order[2]);
    Block b2 = engine.produce_block_gasless(5000, w.scheme, *w.gateway, nullptr);
    REQUIRE(b2.tx_digests.size() == 2);
    CHECK(b2.tx_digests[0] == order[3]);
    CHECK(b2.tx_digests[1] == order[4]);
}

TEST_CASE("execution charges gas to the relayer escrow, never the sender") {
    World w;
    TokenAmount user_before = w.engine->ledger().balance(w.user.address);
    TokenAmount relayer_before = w.engine->ledger().balance(w.relayer_addr);

    REQUIRE(w.engine->admit(w.paid_tx(TokenAmount::from_xdc(2), 0), 0).admitted);
    std::vector<ExecutedTx> items;
    w.engine->produce_block_gasless(2500, w.scheme, *w.gateway, &items);
    REQUIRE(items.size() == 1);
    REQUIRE(items[0].receipt.executed);

    TokenAmount gas = compute_gas_fee({21000, w.cfg.gas_price, {}}).value();
    CHECK(items[0].gas_fee == gas);
    CHECK(w.engine->ledger().balance(w.user.address) ==
          checked_sub(user_before, TokenAmount::from_xdc(2)).value());  // value only, zero gas
    CHECK(w.engine->ledger().balance(w.relayer_addr) ==
          checked_sub(relayer_before, gas).value());
    CHECK(w.engine->ledger().balance(w.treasury) >= gas);
    // The bound payment is consumed exactly once.
    CHECK(w.gateway->find(items[0].tx.payment_id)->status == PaymentStatus::Consumed);
}

TEST_CASE("invalid txs are rejected without touching state") {
    World w;
    QueuedTx bad = w.paid_tx(TokenAmount{1}, 0, 7);  // nonce gap
    REQUIRE(w.engine->admit(std::move(bad), 0).admitted);
    Digest pre = w.engine->ledger().state_root();
    std::vector<ExecutedTx> items;
    Block b = w.engine->produce_block_gasless(2500, w.scheme, *w.gateway, &items);
    REQUIRE(items.size() == 1);
    CHECK_FALSE(items[0].receipt.executed);
    CHECK(items[0].receipt.reject_reason == Err::BadNonce);
    CHECK(b.tx_digests.empty());
    CHECK(w.engine->ledger().state_root() == pre);
}

TEST_CASE("proposer rotation is round-robin over masternodes") {
    World w;
    std::vector<Address> seen;
    for (int i = 1; i <= 5; ++i) {
        seen.push_back(
            w.engine->produce_block_gasless(uint64_t(i) * 2500, w.scheme, *w.gateway, nullptr)
                .proposer);
    }
    const auto& mn = w.engine->validators().masternodes;
    CHECK(seen[0] == mn[0]);
    CHECK(seen[1] == mn[1]);
    CHECK(seen[2] == mn[2]);
    CHECK(seen[3] == mn[3]);
    CHECK(seen[4] == mn[0]);
}

TEST_CASE("reward split is 90/10 with integer-division remainder retained") {
    World w;
    w.engine->ledger().credit(w.treasury, TokenAmount::from_xdc(1));
    RewardDelta d = w.engine->distribute_rewards(TokenAmount::from_xdc(1));
    // 0.9 XDC over 4 masternodes, 0.1 XDC over 2 standbys.
    CHECK(d.per_masternode == TokenAmount{u128(225'000'000'000'000'000ull)});
    CHECK(d.per_standby == TokenAmount{u128(50'000'000'000'000'000ull)});
    CHECK(d.retained.is_zero());

    w.engine->ledger().credit(w.treasury, TokenAmount{10});
    RewardDelta tiny = w.engine->distribute_rewards(TokenAmount{10});
    // 9/4 = 2 each (8), 1/2 = 0 each; 2 wei retained.
    CHECK(tiny.per_masternode == TokenAmount{2});
    CHECK(tiny.per_standby == TokenAmount{0});
    CHECK(tiny.retained == TokenAmount{2});
    // Rewards are redistribution, never minting.
    u128 distributed = 4 * d.per_masternode.wei + 2 * d.per_standby.wei + 8;
    CHECK(w.engine->ledger().balance(w.treasury).wei + distributed ==
          TokenAmount::from_xdc(1).wei + 10);
}

TEST_CASE("failover promotes a standby in place; exhausted standbys degrade") {
    World w(2, 1);
    const auto& vs = w.engine->validators();
    Address first = vs.masternodes[0];
    Address second = vs.masternodes[1];
    Address standby = vs.standbys[0];

    auto promoted = w.engine->failover(second, 1000);
    REQUIRE(promoted.ok());
    CHECK(promoted.value() == standby);
    CHECK(vs.masternodes.size() == 2);
    CHECK(vs.masternodes[0] == first);
    CHECK(vs.masternodes[1] == standby);  // in-place, rotation preserved
    CHECK(vs.standbys.empty());
    CHECK_FALSE(vs.degraded);

    auto degraded = w.engine->failover(standby, 2000);
    REQUIRE_FALSE(degraded.ok());
    CHECK(degraded.error() == Err::NoStandbyAvailable);
    CHECK(vs.masternodes.size() == 1);
    CHECK(vs.degraded);

    CHECK(w.engine->failover(standby, 3000).error() == Err::UnknownAccount);

    // Block production continues on the surviving masternode.
    Block b = w.engine->produce_block_gasless(2500, w.scheme, *w.gateway, nullptr);
    CHECK(b.proposer == first);
}

TEST_CASE("checkpoints are emitted every interval with sequential epochs") {
    World w;
    w.cfg.checkpoint_interval_blocks = 2;
    ValidatorSet vs;
    vs.masternodes = {w.scheme.keygen(seed_from_u64(100)).address};
    SubnetEngine engine(w.cfg, vs, w.treasury);

    CHECK_FALSE(engine.maybe_emit_checkpoint().has_value());
    engine.produce_block_gasless(2500, w.scheme, *w.gateway, nullptr);
    CHECK_FALSE(engine.maybe_emit_checkpoint().has_value());
    engine.produce_block_gasless(5000, w.scheme, *w.gateway, nullptr);
    auto cp0 = engine.maybe_emit_checkpoint();
    REQUIRE(cp0.has_value());
    CHECK(cp0->epoch == 0);
    CHECK(cp0->subnet_block_height == 2);
    CHECK(cp0->state_root == engine.ledger().state_root());
    CHECK_FALSE(engine.maybe_emit_checkpoint().has_value());  // once per epoch
    engine.produce_block_gasless(7500, w.scheme, *w.gateway, nullptr);
    engine.produce_block_gasless(10000, w.scheme, *w.gateway, nullptr);
    auto cp1 = engine.maybe_emit_checkpoint();
    REQUIRE(cp1.has_value());
    CHECK(cp1->epoch == 1);
}
