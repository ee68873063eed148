#include "gasless/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace gasless {

namespace {

std::string fmt(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

std::vector<std::pair<std::string, std::string>> table_rows(const MetricsReport& r) {
    return {
        {"Model", r.model},
        {"Average Block confirmation time (sec)", fmt(r.latency.mean_s, 3)},
        {"Average Cost efficiency ($ per tx)", fmt(r.user_cost_usd_per_tx, 8)},
        {"Average Gas price (Gwei)", fmt(r.gas_price_gwei, 0)},
        {"No. of blocks confirmed", std::to_string(r.blocks_confirmed)},
        {"Average TPS", fmt(r.tps_measured, 2)},
        {"User cost (XDC per tx)", fmt(r.user_cost_xdc_per_tx, 8)},
        {"Executed / rejected / throttled",
         std::to_string(r.executed) + " / " + std::to_string(r.rejected) + " / " +
             std::to_string(r.throttled)},
        {"Latency p50 / p95 / max (sec)",
         fmt(r.latency.p50_s, 3) + " / " + fmt(r.latency.p95_s, 3) + " / " +
             fmt(r.latency.max_s, 3)},
        {"Gini (validator rewards)", fmt(r.gini_validator_rewards, 4)},
        {"Validator reward per block (XDC)", fmt(r.validator_reward_mean_per_block, 6)},
        {"Supply delta (XDC)", fmt(r.supply_delta_xdc, 6)},
        {"Subnets", std::to_string(r.subnet_count)},
        {"Checkpoint epochs", std::to_string(r.checkpoint_epochs)},
    };
}

const char* kCsvHeader =
    "schema_version,model,seed,duration_s,subnet_count,executed,rejected,throttled,"
    "tps_measured,aggregate_tps,latency_mean_s,latency_p50_s,latency_p95_s,latency_max_s,"
    "gini,user_cost_xdc_per_tx,user_cost_usd_per_tx,validator_reward_mean_per_block_xdc,"
    "validator_reward_cov,blocks_confirmed,checkpoint_epochs,supply_delta_xdc,gas_price_gwei";

std::string csv_row(const MetricsReport& r) {
    std::ostringstream os;
    os << kSchemaVersion << ',' << r.model << ',' << r.seed << ',' << fmt(r.duration_s, 3) << ','
       << r.subnet_count << ',' << r.executed << ',' << r.rejected << ',' << r.throttled << ','
       << fmt(r.tps_measured, 6) << ',' << fmt(r.aggregate_tps, 6) << ','
       << fmt(r.latency.mean_s, 6) << ',' << fmt(r.latency.p50_s, 6) << ','
       << fmt(r.latency.p95_s, 6) << ',' << fmt(r.latency.max_s, 6) << ','
       << fmt(r.gini_validator_rewards, 6) << ',' << fmt(r.user_cost_xdc_per_tx, 10) << ','
       << fmt(r.user_cost_usd_per_tx, 10) << ',' << fmt(r.validator_reward_mean_per_block, 10)
       << ',' << fmt(r.validator_reward_cov, 6) << ',' << r.blocks_confirmed << ','
       << r.checkpoint_epochs << ',' << fmt(r.supply_delta_xdc, 6) << ','
       << fmt(r.gas_price_gwei, 0);
    return os.str();
}

}  // namespace

Result<ReportFormat> parse_format(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "text") return ReportFormat::Text;
    if (name == "csv") return ReportFormat::Csv;
    return Err::UnsupportedFormat;
}

Result<std::string> render_report(const MetricsReport& r, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: {
            nlohmann::json j = report_to_json(r);
            j["schema_version"] = kSchemaVersion;
            return j.dump(2) + "\n";
        }
        case ReportFormat::Text: {
            auto rows = table_rows(r);
            size_t width = 0;
            for (const auto& [k, v] : rows) width = std::max(width, k.size());
            std::ostringstream os;
            os << "schema_version " << kSchemaVersion << "\n";
            for (const auto& [k, v] : rows) {
                os << k;
                for (size_t i = k.size(); i < width + 2; ++i) os << ' ';
                os << v << "\n";
            }
            return os.str();
        }
        case ReportFormat::Csv:
            return render_reports_csv({r});
    }
    return Err::UnsupportedFormat;
}

Result<std::string> render_reports_csv(const std::vector<MetricsReport>& rs) {
    std::ostringstream os;
    os << kCsvHeader << "\n";
    for (const auto& r : rs) os << csv_row(r) << "\n";
    return os.str();
}

}  // namespace gasless
