#pragma once

#include <cstdint>
#include <deque>
#include <set>
#include <vector>

#include "gasless/subnet.hpp"

namespace gasless {

struct BatchReceipt {
    uint64_t batch_id = 0;
    std::vector<Digest> tx_digests;
    TokenAmount total_gas_fee;  // sum of per-tx gas fees of admitted txs
    uint64_t submitted_at_ms = 0;
};

struct SettlementResult {
    TokenAmount credited;
    TokenAmount remaining_owed;  // nonzero means the pool was underfunded
};

// Accepts signed meta-txs with paid payment ids, fronts gas from its escrow
// account on the subnet ledger, batches submissions on a fixed cadence, and
// settles compensation from the fee pool (gas x (1 + margin)).
class Relayer {
public:
    Relayer(Address address, uint32_t margin_bps, size_t max_queue = SIZE_MAX)
        : address_(address), margin_bps_(margin_bps), max_queue_(max_queue) {}

    const Address& address() const { return address_; }
    uint32_t margin_bps() const { return margin_bps_; }
    size_t queue_size() const { return queue_.size(); }

    Status accept(const SignatureScheme& scheme, const FiatGateway& gateway,
                  MetaTransaction tx, uint64_t handoff_ms);

    // Forwards up to max_n queued txs to the subnet in queue order. Throttled
    // txs stay queued; later txs of a throttled sender are held back so the
    // relayer never reorders one sender's txs.
    Result<BatchReceipt> submit_batch(SubnetEngine& subnet, size_t max_n, uint64_t now_ms,
                                      std::vector<std::pair<Digest, uint64_t>>* throttled = nullptr);

    // Called per executed tx once its gas has been debited from escrow.
    void note_gas_spent(TokenAmount gas_fee);

    // Converts pool fiat and credits owed compensation; partial settlement
    // leaves the remainder in the debt ledger.
    Result<SettlementResult> settle_compensation(FiatGateway& gateway, Ledger& subnet_ledger);

    TokenAmount gas_spent() const { return gas_spent_; }
    TokenAmount compensation_received() const { return compensation_received_; }
    TokenAmount owed() const { return owed_; }
    uint64_t batches_submitted() const { return batch_counter_; }

    // Terminates remaining queued requests (stress accounting).
    std::vector<QueuedTx> drain_queue();

private:
    Address address_;
    uint32_t margin_bps_;
    size_t max_queue_;
    std::deque<QueuedTx> queue_;
    std::set<std::vector<uint8_t>> seen_payments_;
    uint64_t batch_counter_ = 0;
    TokenAmount gas_spent_;
    TokenAmount unsettled_gas_;
    TokenAmount owed_;
    TokenAmount compensation_received_;
};

}  // namespace gasless
