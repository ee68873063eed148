#include <doctest.h>

#include "gasless/relayer.hpp"

using namespace gasless;

namespace {

struct Rig {
    RegistryScheme scheme;
    SubnetConfig cfg;
    Address treasury;
    Address pool;
    Address market;
    std::unique_ptr<SubnetEngine> engine;
    std::unique_ptr<FiatGateway> gateway;
    std::unique_ptr<Relayer> relayer;
    KeyPair alice;
    KeyPair bob;
    uint64_t alice_nonce = 0;
    uint64_t bob_nonce = 0;

    explicit Rig(size_t max_queue = SIZE_MAX, uint64_t escrow_xdc = 1000) {
        ValidatorSet vs;
        vs.masternodes = {scheme.keygen(seed_from_u64(1)).address};
        treasury = scheme.keygen(seed_from_u64(2)).address;
        pool = scheme.keygen(seed_from_u64(3)).address;
        market = scheme.keygen(seed_from_u64(4)).address;
        engine = std::make_unique<SubnetEngine>(cfg, vs, treasury);
        gateway = std::make_unique<FiatGateway>(ExchangeRate{}, pool, market, 0, 0.0);
        Address raddr = scheme.keygen(seed_from_u64(5)).address;
        relayer = std::make_unique<Relayer>(raddr, 1000, max_queue);
        engine->ledger().credit(raddr, TokenAmount::from_xdc(escrow_xdc));
        engine->ledger().credit(market, TokenAmount::from_xdc(100000));
        engine->ledger().open(pool);
        alice = scheme.keygen(seed_from_u64(6));
        bob = scheme.keygen(seed_from_u64(7));
        engine->ledger().credit(alice.address, TokenAmount::from_xdc(100));
        engine->ledger().credit(bob.address, TokenAmount::from_xdc(100));
    }

    MetaTransaction tx_for(KeyPair& kp, uint64_t& n, bool confirm_payment = true) {
        GasParams gas{21000, cfg.gas_price, {}};
        MicroCents fee = quote_user_fee(gas, gateway->rate(), relayer->margin_bps());
        PaymentIntent& p = confirm_payment
                               ? gateway->create_and_confirm_payment(kp.address, fee, 0)
                               : gateway->create_payment(kp.address, fee, 0);
        return make_signed_tx(scheme, kp, cfg.chain_id, cfg.subnet_id, treasury, TokenAmount{1},
                              {}, n++, p.payment_id);
    }
};

}  // namespace

TEST_CASE("accept rejects bad signatures, unpaid or reused payments, full queues") {
    Rig rig(2);
    MetaTransaction good = rig.tx_for(rig.alice, rig.alice_nonce);

    MetaTransaction forged = good;
    forged.value.wei += 1;
    CHECK(rig.relayer->accept(rig.scheme, *rig.gateway, forged, 0).error() == Err::BadSignature);

    MetaTransaction unpaid = rig.tx_for(rig.alice, rig.alice_nonce, /*confirm=*/false);
    CHECK(rig.relayer->accept(rig.scheme, *rig.gateway, unpaid, 0).error() ==
          Err::PaymentUnconfirmed);

    CHECK(rig.relayer->accept(rig.scheme, *rig.gateway, good, 0).ok());
    // Same payment id on a second tx: double-spend of the fiat payment.
    MetaTransaction reuse = make_signed_tx(rig.scheme, rig.bob, rig.cfg.chain_id,
                                           rig.cfg.subnet_id, rig.treasury, TokenAmount{1}, {},
                                           rig.bob_nonce++, good.payment_id);
    CHECK(rig.relayer->accept(rig.scheme, *rig.gateway, reuse, 0).error() ==
          Err::PaymentAlreadyConsumed);

    CHECK(rig.relayer->accept(rig.scheme, *rig.gateway, rig.tx_for(rig.bob, rig.bob_nonce), 0)
              .ok());
    CHECK(rig.relayer->accept(rig.scheme, *rig.gateway, rig.tx_for(rig.alice, rig.alice_nonce), 0)
              .error() == Err::QueueFull);
}

TEST_CASE("batches respect escrow and preserve per-sender order under throttling") {
    Rig rig;
    // Sender-order preservation: flood alice beyond the rate capacity.
    for (int i = 0; i < 12; ++i) {
        REQUIRE(rig.relayer->accept(rig.scheme, *rig.gateway, rig.tx_for(rig.alice,
                                                                         rig.alice_nonce), 0)
                    .ok());
    }
    std::vector<std::pair<Digest, uint64_t>> throttled;
    auto batch = rig.relayer->submit_batch(*rig.engine, SIZE_MAX, 0, &throttled);
    REQUIRE(batch.ok());
    CHECK(batch.value().tx_digests.size() == 10);  // bucket capacity
    CHECK(throttled.size() == 1);  // later alice txs held back, not re-tried
    CHECK(rig.relayer->queue_size() == 2);

    // Once throttled txs clear, the nonce order is intact.
    rig.engine->produce_block_gasless(2500, rig.scheme, *rig.gateway, nullptr);
    auto batch2 = rig.relayer->submit_batch(*rig.engine, SIZE_MAX, 2000, nullptr);
    REQUIRE(batch2.ok());
    CHECK(batch2.value().tx_digests.size() == 2);
    std::vector<ExecutedTx> items;
    rig.engine->produce_block_gasless(5000, rig.scheme, *rig.gateway, &items);
    for (const auto& it : items) CHECK(it.receipt.executed);
}

TEST_CASE("insufficient escrow defers the whole batch") {
    Rig rig(SIZE_MAX, 0);  // no escrow at all
    REQUIRE(rig.relayer->accept(rig.scheme, *rig.gateway, rig.tx_for(rig.alice, rig.alice_nonce),
                                0)
                .ok());
    auto batch = rig.relayer->submit_batch(*rig.engine, SIZE_MAX, 0, nullptr);
    REQUIRE_FALSE(batch.ok());
    CHECK(batch.error() == Err::InsufficientEscrow);
    CHECK(rig.relayer->queue_size() == 1);  // nothing lost
}

TEST_CASE("settlement pays gas x 1.1 exactly from the fee pool") {
    Rig rig;
    for (int i = 0; i < 5; ++i) {
        REQUIRE(rig.relayer->accept(rig.scheme, *rig.gateway, rig.tx_for(rig.alice,
                                                                         rig.alice_nonce), 0)
                    .ok());
    }
    REQUIRE(rig.relayer->submit_batch(*rig.engine, SIZE_MAX, 0, nullptr).ok());
    std::vector<ExecutedTx> items;
    rig.engine->produce_block_gasless(2500, rig.scheme, *rig.gateway, &items);
    TokenAmount gas;
    for (const auto& it : items) {
        REQUIRE(it.receipt.executed);
        rig.relayer->note_gas_spent(it.gas_fee);
        gas = checked_add(gas, it.gas_fee).value();
    }
    CHECK(gas == TokenAmount::from_gwei(5 * 420000));

    auto settle = rig.relayer->settle_compensation(*rig.gateway, rig.engine->ledger());
    REQUIRE(settle.ok());
    CHECK(settle.value().remaining_owed.is_zero());
    CHECK(settle.value().credited.wei == gas.wei * 11 / 10);
    CHECK(rig.relayer->compensation_received().wei == gas.wei * 11 / 10);
    CHECK(rig.relayer->owed().is_zero());
    // The collected fiat (ceil-quoted with margin) covers the payout.
    CHECK(rig.gateway->fiat_collected_total() >= 5 * 2677);
}

TEST_CASE("underfunded pool settles partially and carries the debt") {
    Rig rig;
    // Gas owed but no consumed payments: pool is empty.
    rig.relayer->note_gas_spent(TokenAmount::from_gwei(420000));
    auto settle = rig.relayer->settle_compensation(*rig.gateway, rig.engine->ledger());
    REQUIRE_FALSE(settle.ok());
    CHECK(settle.error() == Err::PoolUnderfunded);
    CHECK(rig.relayer->owed().wei == TokenAmount::from_gwei(420000).wei * 11 / 10);

    // Fund the pool; the next cycle clears the debt.
    MicroCents fee = 1'000'000;  // $0.01, far above the debt
    PaymentId pid = rig.gateway->create_and_confirm_payment(rig.alice.address, fee, 0).payment_id;
    REQUIRE(rig.gateway->consume(pid).ok());
    auto settle2 = rig.relayer->settle_compensation(*rig.gateway, rig.engine->ledger());
    REQUIRE(settle2.ok());
    CHECK(rig.relayer->owed().is_zero());
    CHECK(rig.relayer->compensation_received().wei ==
          TokenAmount::from_gwei(420000).wei * 11 / 10);
}
