#include "gasless/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "gasless/simulator.hpp"

namespace gasless {

namespace {

u128 u128_from_string(const std::string& s) {
    u128 v = 0;
    for (char c : s) v = v * 10 + u128(c - '0');
    return v;
}

bool is_executed_event(const Event& e) {
    const std::string& t = e.at("type").get_ref<const std::string&>();
    return t == "executed" || t == "executed_trad";
}

double percentile(const std::vector<double>& sorted, double q) {
    size_t n = sorted.size();
    size_t idx = size_t(std::ceil(q * double(n)));
    if (idx == 0) idx = 1;
    return sorted[std::min(idx, n) - 1];
}

}  // namespace

Result<double> measure_tps(const EventLog& log, double window_s) {
    if (window_s <= 0) return Err::EmptyWindow;
    uint64_t n = 0;
    uint64_t cutoff_ms = uint64_t(std::llround(window_s * 1000.0));
    for (const auto& e : log.events()) {
        if (is_executed_event(e) && e.at("t").get<uint64_t>() <= cutoff_ms) ++n;
    }
    return double(n) / window_s;
}

LatencyStats measure_latency(const EventLog& log) {
    std::vector<double> samples;
    for (const auto& e : log.events()) {
        if (!is_executed_event(e)) continue;
        uint64_t sealed = e.at("t").get<uint64_t>();
        uint64_t start = e.contains("handoff_ms") ? e.at("handoff_ms").get<uint64_t>()
                                                  : e.at("arrival_ms").get<uint64_t>();
        samples.push_back(double(sealed - start) / 1000.0);
    }
    LatencyStats stats;
    stats.count = samples.size();
    if (samples.empty()) return stats;
    std::sort(samples.begin(), samples.end());
    double sum = 0;
    for (double s : samples) sum += s;
    stats.mean_s = sum / double(samples.size());
    stats.p50_s = percentile(samples, 0.50);
    stats.p95_s = percentile(samples, 0.95);
    stats.max_s = samples.back();
    return stats;
}

Result<double> gini(const std::vector<double>& values) {
    for (double v : values) {
        if (v < 0) return Err::NegativeInput;
    }
    size_t n = values.size();
    if (n <= 1) return 0.0;
    double total = 0;
    for (double v : values) total += v;
    if (total == 0) return 0.0;
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    // Sorted-rank identity: G = 2 * sum(i * x_(i)) / (n * total) - (n + 1) / n,
    // ranks i = 1..n; equals the pairwise-difference definition.
    double weighted = 0;
    for (size_t i = 0; i < n; ++i) weighted += double(i + 1) * sorted[i];
    return 2.0 * weighted / (double(n) * total) - (double(n) + 1.0) / double(n);
}

double gini_amounts(const std::vector<TokenAmount>& values) {
    std::vector<double> v;
    v.reserve(values.size());
    for (const auto& a : values) v.push_back(double(a.wei));
    return gini(v).value();
}

MetricsReport build_report(const EventLog& log) {
    MetricsReport r;
    uint64_t exchange_rate = 5'792'900;
    std::vector<double> rewards;
    double fee_microcents_sum = 0;
    double gas_fee_wei_sum = 0;
    u128 validator_reward_total = 0;
    uint64_t subnet_blocks = 0;

    for (const auto& e : log.events()) {
        const std::string& type = e.at("type").get_ref<const std::string&>();
        if (type == "genesis") {
            r.model = e.at("model").get<std::string>();
            r.seed = e.at("seed").get<uint64_t>();
            r.duration_s = e.at("duration_s").get<double>();
            r.subnet_count = e.at("subnet_count").get<uint32_t>();
            r.gas_price_gwei = e.at("gas_price_gwei").get<double>();
            exchange_rate = e.at("exchange_rate_microcents_per_xdc").get<uint64_t>();
        } else if (type == "executed") {
            fee_microcents_sum += e.at("fee_microcents").get<double>();
        } else if (type == "executed_trad") {
            gas_fee_wei_sum += std::stod(e.at("gas_fee_wei").get<std::string>());
        } else if (type == "end") {
            r.executed = e.at("executed").get<uint64_t>();
            r.rejected = e.at("rejected").get<uint64_t>();
            r.throttled = e.at("throttled").get<uint64_t>();
            r.genesis_supply_wei = e.at("genesis_supply_wei").get<std::string>();
            r.final_supply_wei = e.at("final_supply_wei").get<std::string>();
            r.mainnet_blocks = e.at("mainnet_blocks").get<uint64_t>();
            subnet_blocks = e.at("subnet_blocks").get<uint64_t>();
            r.checkpoint_epochs = e.at("checkpoint_epochs").get<uint64_t>();
            for (const auto& v : e.at("validator_rewards_wei")) {
                u128 wei = u128_from_string(v.get<std::string>());
                validator_reward_total += wei;
                rewards.push_back(double(wei));
            }
        }
    }

    r.latency = measure_latency(log);
    r.tps_measured = r.duration_s > 0 ? double(r.latency.count) / r.duration_s : 0;
    r.aggregate_tps = r.tps_measured;
    r.gini_validator_rewards = rewards.empty() ? 0.0 : gini(rewards).value();

    if (r.latency.count > 0) {
        if (r.model == "traditional_gas") {
            r.user_cost_xdc_per_tx = gas_fee_wei_sum / double(r.latency.count) / 1e18;
            r.user_cost_usd_per_tx =
                r.user_cost_xdc_per_tx * double(exchange_rate) / 1e8;
        } else {
            r.user_cost_xdc_per_tx = 0.0;  // senders never pay gas
            r.user_cost_usd_per_tx = fee_microcents_sum / double(r.latency.count) / 1e8;
        }
    }

    r.blocks_confirmed = r.model == "traditional_gas" ? r.mainnet_blocks : subnet_blocks;
    if (r.blocks_confirmed > 0) {
        r.validator_reward_mean_per_block =
            double(validator_reward_total) / double(r.blocks_confirmed) / 1e18;
    }
    if (!rewards.empty()) {
        double mean = 0;
        for (double v : rewards) mean += v;
        mean /= double(rewards.size());
        if (mean > 0) {
            double var = 0;
            for (double v : rewards) var += (v - mean) * (v - mean);
            var /= double(rewards.size());
            r.validator_reward_cov = std::sqrt(var) / mean;
        }
    }

    u128 genesis = u128_from_string(r.genesis_supply_wei.empty() ? "0" : r.genesis_supply_wei);
    u128 final_supply = u128_from_string(r.final_supply_wei.empty() ? "0" : r.final_supply_wei);
    invariant(final_supply >= genesis, "supply never shrinks");
    r.supply_delta_wei = u128_to_string(final_supply - genesis);
    r.supply_delta_xdc = double(final_supply - genesis) / 1e18;
    return r;
}

nlohmann::json report_to_json(const MetricsReport& r) {
    nlohmann::json j;
    j["model"] = r.model;
    j["seed"] = r.seed;
    j["duration_s"] = r.duration_s;
    j["subnet_count"] = r.subnet_count;
    j["executed"] = r.executed;
    j["rejected"] = r.rejected;
    j["throttled"] = r.throttled;
    j["tps_measured"] = r.tps_measured;
    j["aggregate_tps"] = r.aggregate_tps;
    j["latency"] = {{"count", r.latency.count},
                    {"mean_s", r.latency.mean_s},
                    {"p50_s", r.latency.p50_s},
                    {"p95_s", r.latency.p95_s},
                    {"max_s", r.latency.max_s}};
    j["gini"] = r.gini_validator_rewards;
    j["user_cost"] = {{"xdc_per_tx", r.user_cost_xdc_per_tx},
                      {"usd_per_tx", r.user_cost_usd_per_tx}};
    j["validator_rewards"] = {{"mean_per_block_xdc", r.validator_reward_mean_per_block},
                              {"coefficient_of_variation", r.validator_reward_cov}};
    j["blocks_confirmed"] = r.blocks_confirmed;
    j["mainnet_blocks"] = r.mainnet_blocks;
    j["checkpoint_epochs"] = r.checkpoint_epochs;
    j["supply"] = {{"genesis_wei", r.genesis_supply_wei},
                   {"final_wei", r.final_supply_wei},
                   {"delta_wei", r.supply_delta_wei},
                   {"delta_xdc", r.supply_delta_xdc}};
    j["gas_price_gwei"] = r.gas_price_gwei;
    return j;
}

Result<nlohmann::json> compare_models(const Scenario& a, const Scenario& b) {
    Scenario a_norm = a;
    a_norm.model = b.model;
    if (scenario_to_json_text(a_norm) != scenario_to_json_text(b)) {
        return Err::ScenariosNotComparable;
    }
    if (a.model == b.model) return Err::ScenariosNotComparable;

    MetricsReport ra = build_report(run(a).log);
    MetricsReport rb = build_report(run(b).log);
    const MetricsReport& gasless = a.model == SimModel::GaslessFiat ? ra : rb;
    const MetricsReport& trad = a.model == SimModel::GaslessFiat ? rb : ra;

    nlohmann::json j;
    j["gasless_fiat"] = report_to_json(gasless);
    j["traditional_gas"] = report_to_json(trad);
    j["deltas"] = {
        {"user_cost_xdc_per_tx", trad.user_cost_xdc_per_tx - gasless.user_cost_xdc_per_tx},
        {"user_cost_usd_per_tx", trad.user_cost_usd_per_tx - gasless.user_cost_usd_per_tx},
        {"latency_mean_s", trad.latency.mean_s - gasless.latency.mean_s},
        {"supply_delta_xdc", trad.supply_delta_xdc - gasless.supply_delta_xdc},
    };
    j["ordering"] = {{"gasless", "fifo_admission_order"},
                     {"traditional", "priority_fee_desc_arrival_asc"}};
    return j;
}

nlohmann::json stress(const Scenario& base) {
    EventLog log = run(base).log;
    MetricsReport r = build_report(log);
    uint64_t total = r.executed + r.rejected + r.throttled;
    nlohmann::json j;
    j["requests"] = total;
    j["executed"] = r.executed;
    j["rejected"] = r.rejected;
    j["throttled"] = r.throttled;
    j["all_terminated"] = true;  // the simulator sweeps stragglers at end-of-run
    j["report"] = report_to_json(r);
    return j;
}

nlohmann::json scalability_sweep(const Scenario& base,
                                 const std::vector<uint32_t>& subnet_counts) {
    std::vector<std::future<MetricsReport>> futures;
    for (uint32_t n : subnet_counts) {
        Scenario sc = base;
        sc.subnet_count = n;
        futures.push_back(std::async(std::launch::async,
                                     [sc] { return build_report(run(sc).log); }));
    }
    nlohmann::json points = nlohmann::json::array();
    double baseline_tps = 0;
    for (size_t i = 0; i < subnet_counts.size(); ++i) {
        MetricsReport r = futures[i].get();
        double per_subnet = r.subnet_count ? r.aggregate_tps / double(r.subnet_count) : 0;
        if (i == 0 && subnet_counts[i] == 1) baseline_tps = r.aggregate_tps;
        points.push_back({{"subnets", r.subnet_count},
                          {"aggregate_tps", r.aggregate_tps},
                          {"per_subnet_tps", per_subnet},
                          {"latency_mean_s", r.latency.mean_s},
                          {"checkpoint_epochs", r.checkpoint_epochs},
                          {"executed", r.executed}});
    }
    nlohmann::json j;
    j["baseline_tps"] = baseline_tps;
    j["points"] = std::move(points);
    return j;
}

}  // namespace gasless
