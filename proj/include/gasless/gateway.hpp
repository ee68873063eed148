#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gasless/ledger.hpp"
#include "gasless/metatx.hpp"

namespace gasless {

// Fiat amounts are integer micro-cents (cents with 6 fractional digits).
using MicroCents = uint64_t;

enum class PaymentStatus { Created, Confirmed, Consumed, Refunded };

const char* to_string(PaymentStatus s);

struct PaymentIntent {
    PaymentId payment_id{};
    Address payer;
    MicroCents fiat_microcents = 0;
    // currency: USD only
    PaymentStatus status = PaymentStatus::Created;
    uint64_t created_at_ms = 0;
};

// Fixed-point USD price of one XDC, in micro-cents per XDC.
struct ExchangeRate {
    uint64_t microcents_per_xdc = 5'792'900;  // $0.057929/XDC
};

// ceil(gas fee in XDC x rate x (1 + margin)) in micro-cents.
MicroCents quote_user_fee(const GasParams& gas, const ExchangeRate& rate, uint32_t margin_bps);

// fiat / rate, floored to wei.
TokenAmount fiat_to_wei(MicroCents fiat, const ExchangeRate& rate);
// wei x rate, ceiled to micro-cents.
MicroCents wei_to_fiat_ceil(TokenAmount wei, const ExchangeRate& rate);

// Mock payment processor plus the fee-management pool. Fiat collected from
// consumed intents is converted to XDC sourced from a pre-funded market
// account (infinite-liquidity model) and released to relayers/validators.
class FiatGateway {
public:
    FiatGateway(ExchangeRate rate, Address pool_account, Address market_account,
                uint64_t confirm_delay_ms = 200, double failure_rate = 0.0);

    const ExchangeRate& rate() const { return rate_; }
    const Address& pool_account() const { return pool_account_; }
    uint64_t confirm_delay_ms() const { return confirm_delay_ms_; }

    // Creates the intent; confirmation (or injected refund) is applied by
    // settle_confirmation at created_at + confirm_delay.
    PaymentIntent& create_payment(const Address& payer, MicroCents fiat, uint64_t now_ms);
    // Convenience for non-simulated callers.
    PaymentIntent& create_and_confirm_payment(const Address& payer, MicroCents fiat,
                                              uint64_t now_ms);

    Status settle_confirmation(const PaymentId& id, double failure_draw);

    bool is_confirmed(const PaymentId& id) const;
    const PaymentIntent* find(const PaymentId& id) const;

    // confirmed -> consumed; fiat joins the pool.
    Status consume(const PaymentId& id);

    // Pulls XDC from the market account into the pool at the fixed rate.
    Result<TokenAmount> convert_to_xdc(MicroCents fiat, Ledger& ledger);

    MicroCents pool_fiat_microcents() const { return pool_fiat_; }
    MicroCents fiat_collected_total() const { return fiat_collected_total_; }

    const std::map<std::vector<uint8_t>, PaymentIntent>& intents() const { return intents_; }

private:
    PaymentId next_payment_id();

    ExchangeRate rate_;
    Address pool_account_;
    Address market_account_;
    uint64_t confirm_delay_ms_;
    double failure_rate_;
    uint64_t id_counter_ = 0;
    MicroCents pool_fiat_ = 0;
    MicroCents fiat_collected_total_ = 0;
    std::map<std::vector<uint8_t>, PaymentIntent> intents_;
};

}  // namespace gasless
