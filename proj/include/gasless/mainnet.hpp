#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <vector>

#include "gasless/ledger.hpp"

namespace gasless {

enum class FeeMode { GaslessFiat, TraditionalGas };

const char* to_string(FeeMode m);

struct SubnetCharter {
    uint64_t subnet_id = 0;
    Address operator_addr;
    TokenAmount staked;
    uint32_t masternode_count = 0;
    uint32_t standby_count = 0;
    uint64_t checkpoint_interval_blocks = 0;
    FeeMode fee_mode = FeeMode::GaslessFiat;
    bool retired = false;
};

struct CheckpointRecord {
    uint64_t subnet_id = 0;
    uint64_t epoch = 0;
    uint64_t subnet_block_height = 0;
    Digest state_root{};
    uint64_t mainnet_block_height = 0;
};

// Gas-priced transaction for the traditional comparison model.
struct GasPricedTx {
    Digest id{};
    Address from;
    Address to;
    TokenAmount value;
    GasParams gas;
    uint64_t arrival_ms = 0;
};

struct MainnetConfig {
    TokenAmount min_stake = TokenAmount::from_xdc(10'000);
    TokenAmount mint_per_block;  // nonzero only in traditional mode
    uint64_t block_interval_ms = 2000;
};

// Layer-1 state machine: staking contract that spawns subnets, checkpoint
// registry, and the traditional fee/inflation baseline.
class Mainnet {
public:
    explicit Mainnet(MainnetConfig cfg) : cfg_(cfg) {}

    Ledger& ledger() { return ledger_; }
    const Ledger& ledger() const { return ledger_; }
    const MainnetConfig& config() const { return cfg_; }

    Result<SubnetCharter> stake_and_spawn(const Address& operator_addr, TokenAmount amount,
                                          uint32_t masternodes, uint32_t standbys,
                                          uint64_t checkpoint_interval_blocks, FeeMode mode);
    Status unstake(const Address& operator_addr, uint64_t subnet_id);
    Status retire(uint64_t subnet_id);

    Status record_checkpoint(const CheckpointRecord& cp);

    void submit_traditional(GasPricedTx tx);
    // Fills by (priority_fee desc, arrival asc) until the gas cap; each
    // included sender pays the gas fee to the proposer, who also receives
    // the configured mint.
    Block produce_block_traditional(uint64_t gas_cap, const Address& proposer, uint64_t now_ms,
                                    std::vector<GasPricedTx>* included = nullptr,
                                    std::vector<GasPricedTx>* rejected = nullptr);
    // Seals an empty-mempool block (used while gasless subnets run).
    Block produce_block_plain(const Address& proposer, uint64_t now_ms);

    double governance_weight(const Address& operator_addr) const;

    const std::vector<SubnetCharter>& charters() const { return charters_; }
    const std::map<uint64_t, std::vector<CheckpointRecord>>& checkpoints() const {
        return checkpoints_;
    }
    const std::vector<Block>& blocks() const { return blocks_; }
    size_t mempool_size() const { return mempool_.size(); }
    uint64_t blocks_sealed() const { return blocks_.size(); }

private:
    Block seal(const Address& proposer, uint64_t now_ms, std::vector<Digest> tx_digests);

    MainnetConfig cfg_;
    Ledger ledger_;
    std::vector<SubnetCharter> charters_;
    std::map<uint64_t, std::vector<CheckpointRecord>> checkpoints_;
    std::vector<CheckpointRecord> pending_checkpoints_;  // included in the next block
    std::deque<GasPricedTx> mempool_;
    std::vector<Block> blocks_;
};

}  // namespace gasless
