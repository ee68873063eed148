#include "gasless/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gasless {

using nlohmann::json;

const char* to_string(SimModel m) {
    return m == SimModel::GaslessFiat ? "gasless_fiat" : "traditional_gas";
}

double Scenario::effective_arrival_tps() const {
    if (congestion == CongestionPreset::None) return arrival_rate_tps;
    // Congestion presets scale arrivals against block capacity:
    // high = 3x capacity, low = 0.3x.
    double interval_s = (model == SimModel::GaslessFiat)
                            ? double(block_interval_ms) / 1000.0
                            : double(mainnet_interval_ms) / 1000.0;
    double cap_per_block = (model == SimModel::GaslessFiat)
                               ? double(block_tx_cap)
                               : double(traditional_gas_cap_per_block) / 21000.0;
    double capacity_tps = cap_per_block / interval_s;
    return congestion == CongestionPreset::High ? 3.0 * capacity_tps : 0.3 * capacity_tps;
}

namespace {

#define PARSE_FAIL(msg)                                   \
    do {                                                  \
        if (diag) *diag = (msg);                          \
        return Err::ConfigInvalid;                        \
    } while (0)

Result<Scenario> parse(const json& j, std::string* diag) {
    Scenario s;
    static const std::set<std::string> known = {
        "seed", "duration_s", "model", "arrival", "arrival_rate_tps", "burst_n",
        "burst_window_s", "user_count", "subnet_count", "congestion", "failure_times_s",
        "failure_rate_per_s", "block_interval_ms", "block_tx_cap", "checkpoint_interval_blocks",
        "masternodes", "standbys", "rate_capacity", "rate_refill_per_s",
        "reward_split_masternode_bps", "margin_bps", "relayer_queue_max", "relayer_batch_max",
        "exchange_rate_microcents_per_xdc", "payment_confirm_delay_ms", "payment_failure_rate",
        "mainnet_interval_ms", "mint_per_block_xdc", "min_stake_xdc", "stake_xdc",
        "traditional_gas_cap_per_block", "priority_fee_max_gwei", "gas_price_gwei",
        "user_funding_xdc", "relayer_escrow_xdc", "market_account_xdc", "operator_funding_xdc",
        "value_max_xdc_centi"};
    if (!j.is_object()) PARSE_FAIL("scenario root must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) PARSE_FAIL("unknown scenario field: " + it.key());
    }
    try {
        if (j.contains("seed")) s.seed = j.at("seed").get<uint64_t>();
        if (j.contains("duration_s")) s.duration_s = j.at("duration_s").get<double>();
        if (j.contains("model")) {
            std::string m = j.at("model").get<std::string>();
            if (m == "gasless_fiat") s.model = SimModel::GaslessFiat;
            else if (m == "traditional_gas") s.model = SimModel::TraditionalGas;
            else PARSE_FAIL("model must be gasless_fiat or traditional_gas, got: " + m);
        }
        if (j.contains("arrival")) {
            std::string a = j.at("arrival").get<std::string>();
            if (a == "poisson") s.arrival = ArrivalKind::Poisson;
            else if (a == "burst") s.arrival = ArrivalKind::Burst;
            else PARSE_FAIL("arrival must be poisson or burst, got: " + a);
        }
        if (j.contains("arrival_rate_tps")) s.arrival_rate_tps = j.at("arrival_rate_tps").get<double>();
        if (j.contains("burst_n")) s.burst_n = j.at("burst_n").get<uint64_t>();
        if (j.contains("burst_window_s")) s.burst_window_s = j.at("burst_window_s").get<double>();
        if (j.contains("user_count")) s.user_count = j.at("user_count").get<uint32_t>();
        if (j.contains("subnet_count")) s.subnet_count = j.at("subnet_count").get<uint32_t>();
        if (j.contains("congestion")) {
            std::string c = j.at("congestion").get<std::string>();
            if (c == "none") s.congestion = CongestionPreset::None;
            else if (c == "low") s.congestion = CongestionPreset::Low;
            else if (c == "high") s.congestion = CongestionPreset::High;
            else PARSE_FAIL("congestion must be none, low, or high, got: " + c);
        }
        if (j.contains("failure_times_s"))
            s.failure_times_s = j.at("failure_times_s").get<std::vector<double>>();
        if (j.contains("failure_rate_per_s"))
            s.failure_rate_per_s = j.at("failure_rate_per_s").get<double>();
        if (j.contains("block_interval_ms")) s.block_interval_ms = j.at("block_interval_ms").get<uint64_t>();
        if (j.contains("block_tx_cap")) s.block_tx_cap = j.at("block_tx_cap").get<uint64_t>();
        if (j.contains("checkpoint_interval_blocks"))
            s.checkpoint_interval_blocks = j.at("checkpoint_interval_blocks").get<uint64_t>();
        if (j.contains("masternodes")) s.masternodes = j.at("masternodes").get<uint32_t>();
        if (j.contains("standbys")) s.standbys = j.at("standbys").get<uint32_t>();
        if (j.contains("rate_capacity")) s.rate_capacity = j.at("rate_capacity").get<double>();
        if (j.contains("rate_refill_per_s")) s.rate_refill_per_s = j.at("rate_refill_per_s").get<double>();
        if (j.contains("reward_split_masternode_bps"))
            s.reward_split_masternode_bps = j.at("reward_split_masternode_bps").get<uint32_t>();
        if (j.contains("margin_bps")) s.margin_bps = j.at("margin_bps").get<uint32_t>();
        if (j.contains("relayer_queue_max")) s.relayer_queue_max = j.at("relayer_queue_max").get<uint64_t>();
        if (j.contains("relayer_batch_max")) s.relayer_batch_max = j.at("relayer_batch_max").get<uint64_t>();
        if (j.contains("exchange_rate_microcents_per_xdc"))
            s.exchange_rate_microcents_per_xdc = j.at("exchange_rate_microcents_per_xdc").get<uint64_t>();
        if (j.contains("payment_confirm_delay_ms"))
            s.payment_confirm_delay_ms = j.at("payment_confirm_delay_ms").get<uint64_t>();
        if (j.contains("payment_failure_rate"))
            s.payment_failure_rate = j.at("payment_failure_rate").get<double>();
        if (j.contains("mainnet_interval_ms")) s.mainnet_interval_ms = j.at("mainnet_interval_ms").get<uint64_t>();
        if (j.contains("mint_per_block_xdc")) s.mint_per_block_xdc = j.at("mint_per_block_xdc").get<uint64_t>();
        if (j.contains("min_stake_xdc")) s.min_stake_xdc = j.at("min_stake_xdc").get<uint64_t>();
        if (j.contains("stake_xdc")) s.stake_xdc = j.at("stake_xdc").get<uint64_t>();
        if (j.contains("traditional_gas_cap_per_block"))
            s.traditional_gas_cap_per_block = j.at("traditional_gas_cap_per_block").get<uint64_t>();
        if (j.contains("priority_fee_max_gwei"))
            s.priority_fee_max_gwei = j.at("priority_fee_max_gwei").get<uint64_t>();
        if (j.contains("gas_price_gwei")) s.gas_price_gwei = j.at("gas_price_gwei").get<uint64_t>();
        if (j.contains("user_funding_xdc")) s.user_funding_xdc = j.at("user_funding_xdc").get<uint64_t>();
        if (j.contains("relayer_escrow_xdc")) s.relayer_escrow_xdc = j.at("relayer_escrow_xdc").get<uint64_t>();
        if (j.contains("market_account_xdc")) s.market_account_xdc = j.at("market_account_xdc").get<uint64_t>();
        if (j.contains("operator_funding_xdc"))
            s.operator_funding_xdc = j.at("operator_funding_xdc").get<uint64_t>();
        if (j.contains("value_max_xdc_centi"))
            s.value_max_xdc_centi = j.at("value_max_xdc_centi").get<uint64_t>();
    } catch (const json::exception& e) {
        PARSE_FAIL(std::string("scenario field type error: ") + e.what());
    }

    if (s.duration_s < 0) PARSE_FAIL("duration_s must be >= 0");
    if (s.user_count == 0) PARSE_FAIL("user_count must be > 0");
    if (s.subnet_count == 0) PARSE_FAIL("subnet_count must be > 0");
    if (s.masternodes == 0) PARSE_FAIL("masternodes must be > 0");
    if (s.block_interval_ms == 0) PARSE_FAIL("block_interval_ms must be > 0");
    if (s.exchange_rate_microcents_per_xdc == 0) PARSE_FAIL("exchange rate must be > 0");
    if (s.reward_split_masternode_bps > 10000) PARSE_FAIL("reward_split_masternode_bps must be <= 10000");
    if (s.payment_failure_rate < 0 || s.payment_failure_rate > 1)
        PARSE_FAIL("payment_failure_rate must be in [0,1]");
    return s;
}

#undef PARSE_FAIL

}  // namespace

Result<Scenario> scenario_from_json_text(const std::string& text, std::string* diag) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        if (diag) *diag = "scenario is not valid JSON";
        return Err::ConfigInvalid;
    }
    return parse(j, diag);
}

Result<Scenario> scenario_from_file(const std::string& path, std::string* diag) {
    std::ifstream in(path);
    if (!in) {
        if (diag) *diag = "cannot open scenario file: " + path;
        return Err::ConfigInvalid;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return scenario_from_json_text(ss.str(), diag);
}

std::string scenario_to_json_text(const Scenario& s) {
    json j;
    j["seed"] = s.seed;
    j["duration_s"] = s.duration_s;
    j["model"] = to_string(s.model);
    j["arrival"] = s.arrival == ArrivalKind::Poisson ? "poisson" : "burst";
    j["arrival_rate_tps"] = s.arrival_rate_tps;
    j["burst_n"] = s.burst_n;
    j["burst_window_s"] = s.burst_window_s;
    j["user_count"] = s.user_count;
    j["subnet_count"] = s.subnet_count;
    j["congestion"] = s.congestion == CongestionPreset::None
                          ? "none"
                          : (s.congestion == CongestionPreset::Low ? "low" : "high");
    j["failure_times_s"] = s.failure_times_s;
    j["failure_rate_per_s"] = s.failure_rate_per_s;
    j["block_interval_ms"] = s.block_interval_ms;
    j["block_tx_cap"] = s.block_tx_cap;
    j["checkpoint_interval_blocks"] = s.checkpoint_interval_blocks;
    j["masternodes"] = s.masternodes;
    j["standbys"] = s.standbys;
    j["rate_capacity"] = s.rate_capacity;
    j["rate_refill_per_s"] = s.rate_refill_per_s;
    j["reward_split_masternode_bps"] = s.reward_split_masternode_bps;
    j["margin_bps"] = s.margin_bps;
    j["relayer_queue_max"] = s.relayer_queue_max;
    j["relayer_batch_max"] = s.relayer_batch_max;
    j["exchange_rate_microcents_per_xdc"] = s.exchange_rate_microcents_per_xdc;
    j["payment_confirm_delay_ms"] = s.payment_confirm_delay_ms;
    j["payment_failure_rate"] = s.payment_failure_rate;
    j["mainnet_interval_ms"] = s.mainnet_interval_ms;
    j["mint_per_block_xdc"] = s.mint_per_block_xdc;
    j["min_stake_xdc"] = s.min_stake_xdc;
    j["stake_xdc"] = s.stake_xdc;
    j["traditional_gas_cap_per_block"] = s.traditional_gas_cap_per_block;
    j["priority_fee_max_gwei"] = s.priority_fee_max_gwei;
    j["gas_price_gwei"] = s.gas_price_gwei;
    j["user_funding_xdc"] = s.user_funding_xdc;
    j["relayer_escrow_xdc"] = s.relayer_escrow_xdc;
    j["market_account_xdc"] = s.market_account_xdc;
    j["operator_funding_xdc"] = s.operator_funding_xdc;
    j["value_max_xdc_centi"] = s.value_max_xdc_centi;
    return j.dump();
}

}  // namespace gasless
