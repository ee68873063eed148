#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gasless/gateway.hpp"
#include "gasless/mainnet.hpp"
#include "gasless/metatx.hpp"

namespace gasless {

struct ValidatorSet {
    std::vector<Address> masternodes;
    std::vector<Address> standbys;
    size_t round_robin_cursor = 0;
    bool degraded = false;  // set when a failover found no standby
};

// Per-address token bucket.
struct TokenBucket {
    double tokens = 0;
    uint64_t last_refill_ms = 0;
};

struct AdmitResult {
    bool admitted = false;
    uint64_t retry_after_ms = 0;
};

struct SubnetConfig {
    uint64_t subnet_id = 0;
    uint64_t chain_id = 51;
    uint64_t block_interval_ms = 2500;
    uint64_t block_tx_cap = 1428;
    uint64_t checkpoint_interval_blocks = 100;
    double rate_capacity = 10.0;
    double rate_refill_per_s = 2.0;
    uint32_t reward_split_masternode_bps = 9000;
    TokenAmount gas_price = TokenAmount::from_gwei(20);  // base fee; priority is 0 in-subnet
};

struct QueuedTx {
    MetaTransaction tx;
    Address relayer;
    uint64_t handoff_ms = 0;   // signature hand-off; latency measurement start
    uint64_t admitted_ms = 0;
};

struct ExecutedTx {
    ExecutionReceipt receipt;
    MetaTransaction tx;
    Address relayer;
    uint64_t handoff_ms = 0;
    TokenAmount gas_fee;
};

struct RewardDelta {
    TokenAmount per_masternode;
    TokenAmount per_standby;
    TokenAmount retained;
};

// Gasless Layer-2 state machine: FIFO block production with per-address rate
// limiting, round-robin proposers, non-inflationary reward distribution,
// standby failover, and periodic checkpoint emission.
class SubnetEngine {
public:
    SubnetEngine(SubnetConfig cfg, ValidatorSet validators, Address treasury);

    const SubnetConfig& config() const { return cfg_; }
    Ledger& ledger() { return ledger_; }
    const Ledger& ledger() const { return ledger_; }
    const ValidatorSet& validators() const { return validators_; }
    const Address& treasury() const { return treasury_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    uint64_t height() const { return blocks_.size(); }
    size_t queue_size() const { return queue_.size(); }

    // Rate-limit gate; admitted txs join the FIFO queue.
    AdmitResult admit(QueuedTx qtx, uint64_t now_ms);

    // Gas a relayer's admitted-but-unexecuted txs would cost.
    TokenAmount pending_gas(const Address& relayer) const;

    // Seals the next block: up to block_tx_cap queued txs in strict FIFO
    // order, each validated and executed, gas charged to its relayer's
    // escrow and paid into the subnet treasury.
    Block produce_block_gasless(uint64_t now_ms, const SignatureScheme& scheme,
                                FiatGateway& gateway, std::vector<ExecutedTx>* out_executed);

    RewardDelta distribute_rewards(TokenAmount pool_inflow);

    Result<Address> failover(const Address& failed, uint64_t now_ms);

    std::optional<CheckpointRecord> maybe_emit_checkpoint();

    const std::unordered_map<Address, TokenAmount, AddressHash>& rewards() const {
        return rewards_;
    }
    const std::vector<RewardDelta>& reward_history() const { return reward_history_; }

private:
    SubnetConfig cfg_;
    Ledger ledger_;
    ValidatorSet validators_;
    Address treasury_;
    std::deque<QueuedTx> queue_;
    std::unordered_map<Address, TokenBucket, AddressHash> buckets_;
    std::vector<Block> blocks_;
    std::unordered_map<Address, TokenAmount, AddressHash> rewards_;
    std::vector<RewardDelta> reward_history_;
    uint64_t next_checkpoint_epoch_ = 0;
    uint64_t last_checkpoint_height_ = 0;
};

}  // namespace gasless
