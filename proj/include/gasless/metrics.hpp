#pragma once

#include <string>
#include <vector>

#include "gasless/events.hpp"
#include "gasless/scenario.hpp"
#include "gasless/token.hpp"

namespace gasless {

struct LatencyStats {
    uint64_t count = 0;
    double mean_s = 0;
    double p50_s = 0;
    double p95_s = 0;
    double max_s = 0;
};

// Everything here is recomputed from the event log alone.
struct MetricsReport {
    std::string model;
    uint64_t seed = 0;
    double duration_s = 0;
    uint32_t subnet_count = 0;

    uint64_t executed = 0;
    uint64_t rejected = 0;
    uint64_t throttled = 0;

    double tps_measured = 0;
    double aggregate_tps = 0;
    LatencyStats latency;
    double gini_validator_rewards = 0;

    double user_cost_xdc_per_tx = 0;
    double user_cost_usd_per_tx = 0;

    double validator_reward_mean_per_block = 0;  // XDC
    double validator_reward_cov = 0;             // coefficient of variation

    uint64_t blocks_confirmed = 0;  // subnet blocks (gasless) / mainnet (traditional)
    uint64_t mainnet_blocks = 0;
    uint64_t checkpoint_epochs = 0;

    std::string genesis_supply_wei;
    std::string final_supply_wei;
    std::string supply_delta_wei;
    double supply_delta_xdc = 0;
    double gas_price_gwei = 0;
};

// Executed-tx count divided by the window, in logical seconds.
Result<double> measure_tps(const EventLog& log, double window_s);

// Per-tx latency from signature hand-off (gasless) or mempool submission
// (traditional) to block seal. Empty log yields count = 0.
LatencyStats measure_latency(const EventLog& log);

// G = sum |xi - xj| / (2 n^2 mu); 0 for n <= 1 or mu = 0.
Result<double> gini(const std::vector<double>& values);
double gini_amounts(const std::vector<TokenAmount>& values);

MetricsReport build_report(const EventLog& log);
nlohmann::json report_to_json(const MetricsReport& r);

// Runs both scenarios (which must differ only in `model`) and reports the
// paired metrics plus deltas.
Result<nlohmann::json> compare_models(const Scenario& a, const Scenario& b);

// Constrained-capacity run; every request must terminate.
nlohmann::json stress(const Scenario& base);

// Independent-subnet scaling curve.
nlohmann::json scalability_sweep(const Scenario& base, const std::vector<uint32_t>& subnet_counts);

}  // namespace gasless
