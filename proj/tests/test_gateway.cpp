#include <doctest.h>

#include "gasless/gateway.hpp"
#include "gasless/signing.hpp"

using namespace gasless;

namespace {
Address addr(uint8_t b) {
    Address a;
    a.id.fill(b);
    return a;
}
}  // namespace

TEST_CASE("fiat quote matches the calibrated exchange rate") {
    GasParams gas{21000, TokenAmount::from_gwei(20), {}};
    ExchangeRate rate{};  // $0.057929/XDC

    // 0.00042 XDC x $0.057929 = $0.0000243302, ceiled to 2434 micro-cents.
    CHECK(quote_user_fee(gas, rate, 0) == 2434);
    // With a 10% relayer margin: ceil(2433.018 x 1.1) = 2677.
    CHECK(quote_user_fee(gas, rate, 1000) == 2677);
    CHECK(quote_user_fee(GasParams{0, TokenAmount::from_gwei(20), {}}, rate, 0) == 0);
}

TEST_CASE("fiat/wei conversions floor one way and ceil the other") {
    ExchangeRate rate{};
    CHECK(fiat_to_wei(rate.microcents_per_xdc, rate) == TokenAmount::from_xdc(1));
    CHECK(wei_to_fiat_ceil(TokenAmount::from_xdc(1), rate) == rate.microcents_per_xdc);
    // Ceil covers the floor loss: converting the quoted fiat back always
    // yields at least the original amount.
    for (u128 wei : {u128(1), u128(999), u128(420000) * 1'000'000'000ull}) {
        MicroCents fiat = wei_to_fiat_ceil(TokenAmount{wei}, rate);
        CHECK(fiat_to_wei(fiat, rate).wei >= wei);
    }
}

TEST_CASE("payment intent lifecycle") {
    Ledger l;
    Address pool = addr(1), market = addr(2), payer = addr(3);
    l.open(market).balance = TokenAmount::from_xdc(1000);
    l.open(pool);
    FiatGateway gw(ExchangeRate{}, pool, market, 200, 0.5);

    PaymentIntent& p = gw.create_payment(payer, 2434, 0);
    PaymentId id = p.payment_id;
    CHECK(gw.find(id)->status == PaymentStatus::Created);
    CHECK_FALSE(gw.is_confirmed(id));
    CHECK(gw.consume(id).error() == Err::NotConfirmed);

    // Draw below the failure rate: refunded, never consumable.
    CHECK(gw.settle_confirmation(id, 0.1).ok());
    CHECK(gw.find(id)->status == PaymentStatus::Refunded);
    CHECK(gw.consume(id).error() == Err::NotConfirmed);
    CHECK(gw.settle_confirmation(id, 0.9).error() == Err::AlreadyConsumed);

    PaymentId id2 = gw.create_payment(payer, 2434, 10).payment_id;
    CHECK(gw.settle_confirmation(id2, 0.9).ok());
    CHECK(gw.is_confirmed(id2));
    CHECK(gw.consume(id2).ok());
    CHECK(gw.pool_fiat_microcents() == 2434);
    CHECK(gw.consume(id2).error() == Err::AlreadyConsumed);

    PaymentId unknown{};
    CHECK(gw.settle_confirmation(unknown, 0.9).error() == Err::UnknownId);
    CHECK(gw.consume(unknown).error() == Err::UnknownId);
}

TEST_CASE("pool conversion pulls XDC from the market account at the fixed rate") {
    Ledger l;
    Address pool = addr(1), market = addr(2);
    l.open(market).balance = TokenAmount::from_xdc(1000);
    l.open(pool);
    FiatGateway gw(ExchangeRate{}, pool, market, 200, 0.0);

    gw.create_and_confirm_payment(addr(3), ExchangeRate{}.microcents_per_xdc, 0);
    CHECK(gw.consume(gw.intents().begin()->second.payment_id).ok());

    TokenAmount supply_before = l.total_supply();
    auto converted = gw.convert_to_xdc(ExchangeRate{}.microcents_per_xdc, l);
    REQUIRE(converted.ok());
    CHECK(converted.value() == TokenAmount::from_xdc(1));
    CHECK(l.balance(pool) == TokenAmount::from_xdc(1));
    CHECK(l.balance(market) == TokenAmount::from_xdc(999));
    CHECK(l.total_supply() == supply_before);  // conversion mints nothing
    CHECK(gw.pool_fiat_microcents() == 0);
    CHECK(gw.convert_to_xdc(1, l).error() == Err::InsufficientFiat);
}

TEST_CASE("payment ids are deterministic per gateway instance") {
    Ledger l;
    FiatGateway a(ExchangeRate{}, addr(1), addr(2), 200, 0.0);
    FiatGateway b(ExchangeRate{}, addr(1), addr(2), 200, 0.0);
    for (int i = 0; i < 5; ++i) {
        CHECK(a.create_payment(addr(3), 100, 0).payment_id ==
              b.create_payment(addr(3), 100, 0).payment_id);
    }
}
