#include "gasless/mainnet.hpp"

#include <algorithm>

namespace gasless {

const char* to_string(FeeMode m) {
    return m == FeeMode::GaslessFiat ? "gasless_fiat" : "traditional_gas";
}

Result<SubnetCharter> Mainnet::stake_and_spawn(const Address& operator_addr, TokenAmount amount,
                                               uint32_t masternodes, uint32_t standbys,
                                               uint64_t checkpoint_interval_blocks,
                                               FeeMode mode) {
    if (amount < cfg_.min_stake) return Err::BelowMinimumStake;
    if (ledger_.balance(operator_addr) < amount) return Err::InsufficientBalance;
    auto st = ledger_.move_to_staked(operator_addr, amount);
    if (!st.ok()) return st.error();
    SubnetCharter charter;
    charter.subnet_id = charters_.size();
    charter.operator_addr = operator_addr;
    charter.staked = amount;
    charter.masternode_count = masternodes;
    charter.standby_count = standbys;
    charter.checkpoint_interval_blocks = checkpoint_interval_blocks;
    charter.fee_mode = mode;
    charters_.push_back(charter);
    return charter;
}

Status Mainnet::retire(uint64_t subnet_id) {
    if (subnet_id >= charters_.size()) return Err::UnknownSubnet;
    charters_[subnet_id].retired = true;
    return Ok{};
}

Status Mainnet::unstake(const Address& operator_addr, uint64_t subnet_id) {
    if (subnet_id >= charters_.size()) return Err::UnknownSubnet;
    SubnetCharter& charter = charters_[subnet_id];
    if (charter.operator_addr != operator_addr) return Err::UnknownAccount;
    if (!charter.retired) return Err::SubnetActive;
    if (charter.staked.is_zero()) return Ok{};
    auto st = ledger_.release_staked(operator_addr, charter.staked);
    if (!st.ok()) return st;
    charter.staked = TokenAmount{};
    return Ok{};
}

Status Mainnet::record_checkpoint(const CheckpointRecord& cp) {
    if (cp.subnet_id >= charters_.size()) return Err::UnknownSubnet;
    auto& chain = checkpoints_[cp.subnet_id];
    uint64_t expected = chain.empty() ? 0 : chain.back().epoch + 1;
    if (cp.epoch < expected) return Err::StaleEpoch;
    if (cp.epoch > expected) return Err::EpochGap;
    CheckpointRecord rec = cp;
    rec.mainnet_block_height = blocks_.size() + 1;  // lands in the next sealed block
    chain.push_back(rec);
    pending_checkpoints_.push_back(rec);
    return Ok{};
}

void Mainnet::submit_traditional(GasPricedTx tx) {
    mempool_.push_back(std::move(tx));
}

Block Mainnet::produce_block_traditional(uint64_t gas_cap, const Address& proposer,
                                         uint64_t now_ms, std::vector<GasPricedTx>* included,
                                         std::vector<GasPricedTx>* rejected) {
    std::vector<GasPricedTx> pool(mempool_.begin(), mempool_.end());
    mempool_.clear();
    std::stable_sort(pool.begin(), pool.end(), [](const GasPricedTx& a, const GasPricedTx& b) {
        if (a.gas.priority_fee != b.gas.priority_fee) return b.gas.priority_fee < a.gas.priority_fee;
        return a.arrival_ms < b.arrival_ms;
    });

    std::vector<Digest> tx_digests;
    uint64_t gas_used = 0;
    for (auto& tx : pool) {
        if (gas_used + tx.gas.gas_limit > gas_cap) {
            mempool_.push_back(tx);  // left for a later block
            continue;
        }
        TokenAmount fee = compute_gas_fee(tx.gas).value();
        auto need = checked_add(tx.value, fee);
        if (!need || ledger_.balance(tx.from) < need.value()) {
            if (rejected) rejected->push_back(tx);
            continue;
        }
        invariant(ledger_.transfer(tx.from, tx.to, tx.value).ok(), "traditional value transfer");
        invariant(ledger_.transfer(tx.from, proposer, fee).ok(), "traditional gas payment");
        ledger_.open(tx.from).nonce += 1;
        gas_used += tx.gas.gas_limit;
        tx_digests.push_back(tx.id);
        if (included) included->push_back(tx);
    }

    if (!cfg_.mint_per_block.is_zero()) {
        invariant(ledger_.credit(proposer, cfg_.mint_per_block).ok(), "block mint");
    }
    return seal(proposer, now_ms, std::move(tx_digests));
}

Block Mainnet::produce_block_plain(const Address& proposer, uint64_t now_ms) {
    if (!cfg_.mint_per_block.is_zero()) {
        invariant(ledger_.credit(proposer, cfg_.mint_per_block).ok(), "block mint");
    }
    return seal(proposer, now_ms, {});
}

Block Mainnet::seal(const Address& proposer, uint64_t now_ms, std::vector<Digest> tx_digests) {
    Block b;
    b.height = blocks_.size() + 1;
    b.parent_digest = blocks_.empty() ? Digest{} : block_digest(blocks_.back());
    b.timestamp_ms = now_ms;
    b.proposer = proposer;
    b.tx_digests = std::move(tx_digests);
    pending_checkpoints_.clear();
    b.state_root = ledger_.state_root();
    if (!blocks_.empty()) {
        invariant(now_ms > blocks_.back().timestamp_ms, "block timestamps must strictly increase");
    }
    blocks_.push_back(b);
    return b;
}

double Mainnet::governance_weight(const Address& operator_addr) const {
    u128 total = 0;
    u128 mine = 0;
    for (const auto& c : charters_) {
        total += c.staked.wei;
        if (c.operator_addr == operator_addr) mine += c.staked.wei;
    }
    if (total == 0) return 0.0;
    return double(mine) / double(total);
}

}  // namespace gasless
