#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gasless/result.hpp"

namespace gasless {

enum class SimModel { GaslessFiat, TraditionalGas };
enum class ArrivalKind { Poisson, Burst };
enum class CongestionPreset { None, Low, High };

// Full simulation configuration. Identical Scenario + seed produce a
// byte-identical event log. Every field has a default; scenario JSON files
// may override any subset and unknown keys are config errors.
struct Scenario {
    uint64_t seed = 42;
    double duration_s = 100.0;
    SimModel model = SimModel::GaslessFiat;

    ArrivalKind arrival = ArrivalKind::Poisson;
    double arrival_rate_tps = 8.62;
    uint64_t burst_n = 300;
    double burst_window_s = 10.0;

    uint32_t user_count = 100;
    uint32_t subnet_count = 1;
    CongestionPreset congestion = CongestionPreset::None;

    // Masternode failure injection: explicit times and/or a Poisson rate.
    std::vector<double> failure_times_s;
    double failure_rate_per_s = 0.0;

    // Subnet
    uint64_t block_interval_ms = 2500;
    uint64_t block_tx_cap = 1428;
    uint64_t checkpoint_interval_blocks = 100;
    uint32_t masternodes = 4;
    uint32_t standbys = 2;
    double rate_capacity = 10.0;
    double rate_refill_per_s = 2.0;
    uint32_t reward_split_masternode_bps = 9000;

    // Relayer
    uint32_t margin_bps = 1000;
    uint64_t relayer_queue_max = 0;  // 0 = unbounded
    uint64_t relayer_batch_max = 0;  // 0 = unbounded

    // Gateway
    uint64_t exchange_rate_microcents_per_xdc = 5'792'900;
    uint64_t payment_confirm_delay_ms = 200;
    double payment_failure_rate = 0.0;

    // Mainnet / traditional model
    uint64_t mainnet_interval_ms = 2000;
    uint64_t mint_per_block_xdc = 1;
    uint64_t min_stake_xdc = 10'000;
    uint64_t stake_xdc = 10'000;
    uint64_t traditional_gas_cap_per_block = 30'000'000;
    uint64_t priority_fee_max_gwei = 50;
    uint64_t gas_price_gwei = 20;

    // Funding
    uint64_t user_funding_xdc = 100;
    uint64_t relayer_escrow_xdc = 1000;
    uint64_t market_account_xdc = 1'000'000;
    uint64_t operator_funding_xdc = 50'000;

    // Workload: user tx values drawn in [0, value_max_xdc_centi] hundredths
    // of an XDC (0 allows pure no-value txs).
    uint64_t value_max_xdc_centi = 100;

    double effective_arrival_tps() const;
};

Result<Scenario> scenario_from_json_text(const std::string& text, std::string* diag);
Result<Scenario> scenario_from_file(const std::string& path, std::string* diag);
std::string scenario_to_json_text(const Scenario& s);

const char* to_string(SimModel m);

}  // namespace gasless
