#include "gasless/relayer.hpp"

#include <algorithm>

namespace gasless {

Status Relayer::accept(const SignatureScheme& scheme, const FiatGateway& gateway,
                       MetaTransaction tx, uint64_t handoff_ms) {
    if (queue_.size() >= max_queue_) return Err::QueueFull;
    auto signer = scheme.recover(tx_digest(tx), tx.signature);
    if (!signer || signer.value() != tx.from) return Err::BadSignature;

    std::vector<uint8_t> key(tx.payment_id.begin(), tx.payment_id.end());
    if (seen_payments_.count(key)) return Err::PaymentAlreadyConsumed;
    const PaymentIntent* intent = gateway.find(tx.payment_id);
    if (!intent || intent->status == PaymentStatus::Consumed) return Err::PaymentAlreadyConsumed;
    if (intent->status != PaymentStatus::Confirmed) return Err::PaymentUnconfirmed;

    seen_payments_.insert(std::move(key));
    QueuedTx qtx;
    qtx.tx = std::move(tx);
    qtx.relayer = address_;
    qtx.handoff_ms = handoff_ms;
    queue_.push_back(std::move(qtx));
    return Ok{};
}

Result<BatchReceipt> Relayer::submit_batch(SubnetEngine& subnet, size_t max_n, uint64_t now_ms,
                                           std::vector<std::pair<Digest, uint64_t>>* throttled) {
    BatchReceipt receipt;
    receipt.batch_id = ++batch_counter_;
    receipt.submitted_at_ms = now_ms;
    if (queue_.empty() || max_n == 0) return receipt;

    // Escrow must cover this batch plus anything already admitted upstream.
    TokenAmount projected = subnet.pending_gas(address_);
    size_t count = std::min(max_n, queue_.size());
    for (size_t i = 0; i < count; ++i) {
        GasParams gas{gas_limit_for(queue_[i].tx), subnet.config().gas_price, {}};
        projected = checked_add(projected, compute_gas_fee(gas).value()).value();
    }
    if (subnet.ledger().balance(address_) < projected) {
        --batch_counter_;
        return Err::InsufficientEscrow;
    }

    std::deque<QueuedTx> kept;
    std::set<std::vector<uint8_t>> stalled_senders;
    size_t forwarded = 0;
    while (!queue_.empty()) {
        if (forwarded >= max_n) {
            kept.push_back(std::move(queue_.front()));
            queue_.pop_front();
            continue;
        }
        QueuedTx qtx = std::move(queue_.front());
        queue_.pop_front();
        std::vector<uint8_t> sender(qtx.tx.from.id.begin(), qtx.tx.from.id.end());
        if (stalled_senders.count(sender)) {
            kept.push_back(std::move(qtx));
            continue;
        }
        GasParams gas{gas_limit_for(qtx.tx), subnet.config().gas_price, {}};
        TokenAmount fee = compute_gas_fee(gas).value();
        Digest d = tx_digest(qtx.tx);
        AdmitResult res = subnet.admit(qtx, now_ms);
        if (res.admitted) {
            ++forwarded;
            receipt.tx_digests.push_back(d);
            receipt.total_gas_fee = checked_add(receipt.total_gas_fee, fee).value();
        } else {
            if (throttled) throttled->emplace_back(d, res.retry_after_ms);
            stalled_senders.insert(std::move(sender));
            kept.push_back(std::move(qtx));
        }
    }
    queue_ = std::move(kept);
    return receipt;
}

void Relayer::note_gas_spent(TokenAmount gas_fee) {
    gas_spent_ = checked_add(gas_spent_, gas_fee).value();
    unsettled_gas_ = checked_add(unsettled_gas_, gas_fee).value();
}

Result<SettlementResult> Relayer::settle_compensation(FiatGateway& gateway,
                                                      Ledger& subnet_ledger) {
    // gas x (1 + margin), floored to wei; remainder tolerance is on the caller.
    TokenAmount new_owed{unsettled_gas_.wei * u128(10000 + margin_bps_) / 10000};
    unsettled_gas_ = TokenAmount{};
    owed_ = checked_add(owed_, new_owed).value();
    SettlementResult result;
    if (owed_.is_zero()) return result;

    // Convert just enough pool fiat to cover the debt at the fixed rate.
    TokenAmount pool_xdc = subnet_ledger.balance(gateway.pool_account());
    if (pool_xdc < owed_) {
        TokenAmount shortfall = checked_sub(owed_, pool_xdc).value();
        MicroCents fiat_needed = wei_to_fiat_ceil(shortfall, gateway.rate());
        MicroCents fiat_avail = std::min<MicroCents>(fiat_needed, gateway.pool_fiat_microcents());
        if (fiat_avail > 0) {
            auto converted = gateway.convert_to_xdc(fiat_avail, subnet_ledger);
            invariant(converted.ok(), "market account must back conversions");
        }
        pool_xdc = subnet_ledger.balance(gateway.pool_account());
    }

    TokenAmount pay = std::min(owed_, pool_xdc);
    if (!pay.is_zero()) {
        invariant(subnet_ledger.transfer(gateway.pool_account(), address_, pay).ok(),
                  "pool payout");
        compensation_received_ = checked_add(compensation_received_, pay).value();
        owed_ = checked_sub(owed_, pay).value();
    }
    result.credited = pay;
    result.remaining_owed = owed_;
    if (!owed_.is_zero()) return Err::PoolUnderfunded;
    return result;
}

std::vector<QueuedTx> Relayer::drain_queue() {
    std::vector<QueuedTx> out(queue_.begin(), queue_.end());
    queue_.clear();
    return out;
}

}  // namespace gasless
