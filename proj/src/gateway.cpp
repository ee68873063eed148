#include "gasless/gateway.hpp"

#include <cstring>

namespace gasless {

const char* to_string(PaymentStatus s) {
    switch (s) {
        case PaymentStatus::Created: return "created";
        case PaymentStatus::Confirmed: return "confirmed";
        case PaymentStatus::Consumed: return "consumed";
        case PaymentStatus::Refunded: return "refunded";
    }
    return "?";
}

namespace {
u128 ceil_div(u128 a, u128 b) { return (a + b - 1) / b; }

std::vector<uint8_t> key_of(const PaymentId& id) {
    return std::vector<uint8_t>(id.begin(), id.end());
}
}  // namespace

MicroCents quote_user_fee(const GasParams& gas, const ExchangeRate& rate, uint32_t margin_bps) {
    TokenAmount fee = compute_gas_fee(gas).value();
    if (fee.is_zero()) return 0;
    u128 numer = fee.wei * u128(rate.microcents_per_xdc) * u128(10000 + margin_bps);
    u128 denom = u128(10000) * u128(TokenAmount::kWeiPerXdc);
    return MicroCents(ceil_div(numer, denom));
}

TokenAmount fiat_to_wei(MicroCents fiat, const ExchangeRate& rate) {
    invariant(rate.microcents_per_xdc > 0, "exchange rate must be positive");
    return TokenAmount{u128(fiat) * u128(TokenAmount::kWeiPerXdc) / u128(rate.microcents_per_xdc)};
}

MicroCents wei_to_fiat_ceil(TokenAmount wei, const ExchangeRate& rate) {
    if (wei.is_zero()) return 0;
    return MicroCents(ceil_div(wei.wei * u128(rate.microcents_per_xdc),
                               u128(TokenAmount::kWeiPerXdc)));
}

FiatGateway::FiatGateway(ExchangeRate rate, Address pool_account, Address market_account,
                         uint64_t confirm_delay_ms, double failure_rate)
    : rate_(rate),
      pool_account_(pool_account),
      market_account_(market_account),
      confirm_delay_ms_(confirm_delay_ms),
      failure_rate_(failure_rate) {
    invariant(rate_.microcents_per_xdc > 0, "exchange rate must be positive");
}

PaymentId FiatGateway::next_payment_id() {
    // Deterministic ids: hash of a monotone counter, truncated to 16 bytes.
    auto c = to_be8(++id_counter_);
    Digest d = digest(c.data(), c.size());
    PaymentId id{};
    std::memcpy(id.data(), d.data(), 16);
    return id;
}

PaymentIntent& FiatGateway::create_payment(const Address& payer, MicroCents fiat,
                                           uint64_t now_ms) {
    invariant(fiat > 0, "payment amount must be positive");
    PaymentIntent intent;
    intent.payment_id = next_payment_id();
    intent.payer = payer;
    intent.fiat_microcents = fiat;
    intent.status = PaymentStatus::Created;
    intent.created_at_ms = now_ms;
    auto [it, inserted] = intents_.emplace(key_of(intent.payment_id), intent);
    invariant(inserted, "duplicate payment id");
    return it->second;
}

PaymentIntent& FiatGateway::create_and_confirm_payment(const Address& payer, MicroCents fiat,
                                                       uint64_t now_ms) {
    PaymentIntent& intent = create_payment(payer, fiat, now_ms);
    settle_confirmation(intent.payment_id, 1.0);  // draw above any failure rate
    return intent;
}

Status FiatGateway::settle_confirmation(const PaymentId& id, double failure_draw) {
    auto it = intents_.find(key_of(id));
    if (it == intents_.end()) return Err::UnknownId;
    if (it->second.status != PaymentStatus::Created) return Err::AlreadyConsumed;
    it->second.status =
        failure_draw < failure_rate_ ? PaymentStatus::Refunded : PaymentStatus::Confirmed;
    return Ok{};
}

bool FiatGateway::is_confirmed(const PaymentId& id) const {
    const PaymentIntent* p = find(id);
    return p && p->status == PaymentStatus::Confirmed;
}

const PaymentIntent* FiatGateway::find(const PaymentId& id) const {
    auto it = intents_.find(key_of(id));
    return it == intents_.end() ? nullptr : &it->second;
}

Status FiatGateway::consume(const PaymentId& id) {
    auto it = intents_.find(key_of(id));
    if (it == intents_.end()) return Err::UnknownId;
    PaymentIntent& intent = it->second;
    if (intent.status == PaymentStatus::Consumed) return Err::AlreadyConsumed;
    if (intent.status != PaymentStatus::Confirmed) return Err::NotConfirmed;
    intent.status = PaymentStatus::Consumed;
    pool_fiat_ += intent.fiat_microcents;
    fiat_collected_total_ += intent.fiat_microcents;
    return Ok{};
}

Result<TokenAmount> FiatGateway::convert_to_xdc(MicroCents fiat, Ledger& ledger) {
    if (fiat > pool_fiat_) return Err::InsufficientFiat;
    TokenAmount wei = fiat_to_wei(fiat, rate_);
    auto st = ledger.transfer(market_account_, pool_account_, wei);
    if (!st.ok()) return st.error();
    pool_fiat_ -= fiat;
    return wei;
}

}  // namespace gasless
