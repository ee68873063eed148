#include "gasless/subnet.hpp"

#include <algorithm>
#include <cmath>

namespace gasless {

SubnetEngine::SubnetEngine(SubnetConfig cfg, ValidatorSet validators, Address treasury)
    : cfg_(cfg), validators_(std::move(validators)), treasury_(treasury) {
    invariant(!validators_.masternodes.empty(), "active subnet needs masternodes");
    for (const auto& m : validators_.masternodes) {
        invariant(std::find(validators_.standbys.begin(), validators_.standbys.end(), m) ==
                      validators_.standbys.end(),
                  "masternode and standby sets must be disjoint");
    }
    ledger_.open(treasury_);
}

AdmitResult SubnetEngine::admit(QueuedTx qtx, uint64_t now_ms) {
    TokenBucket& bucket = buckets_.try_emplace(qtx.tx.from,
                                               TokenBucket{cfg_.rate_capacity, now_ms})
                              .first->second;
    double elapsed_s = double(now_ms - bucket.last_refill_ms) / 1000.0;
    bucket.tokens = std::min(cfg_.rate_capacity, bucket.tokens + elapsed_s * cfg_.rate_refill_per_s);
    bucket.last_refill_ms = now_ms;
    if (bucket.tokens < 1.0) {
        double wait_s = cfg_.rate_refill_per_s > 0
                            ? (1.0 - bucket.tokens) / cfg_.rate_refill_per_s
                            : 0.0;
        return AdmitResult{false, uint64_t(std::ceil(wait_s * 1000.0))};
    }
    bucket.tokens -= 1.0;
    qtx.admitted_ms = now_ms;
    queue_.push_back(std::move(qtx));
    return AdmitResult{true, 0};
}

TokenAmount SubnetEngine::pending_gas(const Address& relayer) const {
    TokenAmount total;
    for (const auto& q : queue_) {
        if (q.relayer != relayer) continue;
        GasParams p{gas_limit_for(q.tx), cfg_.gas_price, {}};
        total = checked_add(total, compute_gas_fee(p).value()).value();
    }
    return total;
}

Block SubnetEngine::produce_block_gasless(uint64_t now_ms, const SignatureScheme& scheme,
                                          FiatGateway& gateway,
                                          std::vector<ExecutedTx>* out_executed) {
    invariant(!validators_.masternodes.empty(), "no masternodes left to propose");
    if (validators_.round_robin_cursor >= validators_.masternodes.size()) {
        validators_.round_robin_cursor = 0;
    }
    Address proposer = validators_.masternodes[validators_.round_robin_cursor];
    validators_.round_robin_cursor =
        (validators_.round_robin_cursor + 1) % validators_.masternodes.size();

    std::vector<Digest> tx_digests;
    uint64_t taken = 0;
    while (!queue_.empty() && taken < cfg_.block_tx_cap) {
        QueuedTx qtx = std::move(queue_.front());
        queue_.pop_front();
        ++taken;

        ExecutedTx item;
        item.tx = qtx.tx;
        item.relayer = qtx.relayer;
        item.handoff_ms = qtx.handoff_ms;
        GasParams gas{gas_limit_for(qtx.tx), cfg_.gas_price, {}};
        item.gas_fee = compute_gas_fee(gas).value();

        bool payment_ok = gateway.is_confirmed(qtx.tx.payment_id);
        Status v = validate(scheme, qtx.tx, ledger_.nonce(qtx.tx.from), payment_ok);
        if (!v.ok()) {
            item.receipt.tx_digest = tx_digest(qtx.tx);
            item.receipt.block_height = blocks_.size() + 1;
            item.receipt.gas_used = 0;
            item.receipt.gas_fee_paid_by = qtx.relayer;
            item.receipt.executed = false;
            item.receipt.reject_reason = v.error();
            if (out_executed) out_executed->push_back(std::move(item));
            continue;
        }

        Digest pre_root = ledger_.state_root();
        item.receipt = execute(qtx.tx, ledger_, blocks_.size() + 1, qtx.relayer);
        if (!item.receipt.executed) {
            invariant(ledger_.state_root() == pre_root, "rejected tx must leave state unchanged");
            if (out_executed) out_executed->push_back(std::move(item));
            continue;
        }

        // Gas is fronted by the relayer's escrow and feeds the treasury pool.
        auto gas_st = ledger_.transfer(qtx.relayer, treasury_, item.gas_fee);
        invariant(gas_st.ok(), "relayer escrow must cover admitted gas");
        invariant(gateway.consume(qtx.tx.payment_id).ok(), "confirmed payment must consume");
        const PaymentIntent* intent = gateway.find(qtx.tx.payment_id);
        item.receipt.user_fee_fiat_microcents = intent ? intent->fiat_microcents : 0;

        tx_digests.push_back(item.receipt.tx_digest);
        if (out_executed) out_executed->push_back(std::move(item));
    }

    Block b;
    b.height = blocks_.size() + 1;
    b.parent_digest = blocks_.empty() ? Digest{} : block_digest(blocks_.back());
    b.timestamp_ms = now_ms;
    b.proposer = proposer;
    b.tx_digests = std::move(tx_digests);
    b.state_root = ledger_.state_root();
    if (!blocks_.empty()) {
        invariant(now_ms > blocks_.back().timestamp_ms, "block timestamps must strictly increase");
    }
    blocks_.push_back(b);
    return b;
}

RewardDelta SubnetEngine::distribute_rewards(TokenAmount pool_inflow) {
    RewardDelta delta;
    invariant(ledger_.balance(treasury_) >= pool_inflow, "inflow must be in the treasury");
    size_t n_m = validators_.masternodes.size();
    size_t n_s = validators_.standbys.size();
    if ((n_m == 0 && n_s == 0) || pool_inflow.is_zero()) {
        delta.retained = pool_inflow;
        reward_history_.push_back(delta);
        return delta;
    }

    u128 m_share = pool_inflow.wei * u128(cfg_.reward_split_masternode_bps) / 10000;
    u128 s_share = pool_inflow.wei * u128(10000 - cfg_.reward_split_masternode_bps) / 10000;
    u128 per_m = n_m ? m_share / n_m : 0;
    u128 per_s = n_s ? s_share / n_s : 0;

    for (const auto& m : validators_.masternodes) {
        if (per_m == 0) break;
        invariant(ledger_.transfer(treasury_, m, TokenAmount{per_m}).ok(), "masternode reward");
        rewards_[m] = checked_add(rewards_[m], TokenAmount{per_m}).value();
    }
    for (const auto& s : validators_.standbys) {
        if (per_s == 0) break;
        invariant(ledger_.transfer(treasury_, s, TokenAmount{per_s}).ok(), "standby reward");
        rewards_[s] = checked_add(rewards_[s], TokenAmount{per_s}).value();
    }
    delta.per_masternode = TokenAmount{per_m};
    delta.per_standby = TokenAmount{per_s};
    delta.retained = TokenAmount{pool_inflow.wei - per_m * n_m - per_s * n_s};
    reward_history_.push_back(delta);
    return delta;
}

Result<Address> SubnetEngine::failover(const Address& failed, uint64_t) {
    auto it = std::find(validators_.masternodes.begin(), validators_.masternodes.end(), failed);
    if (it == validators_.masternodes.end()) return Err::UnknownAccount;
    size_t failed_idx = size_t(it - validators_.masternodes.begin());

    if (validators_.standbys.empty()) {
        validators_.masternodes.erase(it);
        validators_.degraded = true;
        if (failed_idx < validators_.round_robin_cursor) validators_.round_robin_cursor -= 1;
        if (!validators_.masternodes.empty()) {
            validators_.round_robin_cursor %= validators_.masternodes.size();
        }
        return Err::NoStandbyAvailable;
    }

    Address promoted = validators_.standbys.front();
    validators_.standbys.erase(validators_.standbys.begin());
    *it = promoted;  // in-place swap keeps rotation order and count
    return promoted;
}

std::optional<CheckpointRecord> SubnetEngine::maybe_emit_checkpoint() {
    if (height() < last_checkpoint_height_ + cfg_.checkpoint_interval_blocks) return std::nullopt;
    CheckpointRecord cp;
    cp.subnet_id = cfg_.subnet_id;
    cp.epoch = next_checkpoint_epoch_++;
    cp.subnet_block_height = height();
    cp.state_root = ledger_.state_root();
    last_checkpoint_height_ = height();
    return cp;
}

}  // namespace gasless
