#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gasless/gateway.hpp"
#include "gasless/metrics.hpp"
#include "gasless/report.hpp"
#include "gasless/simulator.hpp"

namespace {

using namespace gasless;

int fail_config(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 1;
}

std::string resolve_scenario_path(const std::string& path) {
    std::ifstream probe(path);
    if (probe.good()) return path;
    const char* dir = std::getenv("GASLESS_SCENARIO_DIR");
    if (dir && *dir) return std::string(dir) + "/" + path;
    return path;
}

Result<Scenario> load_scenario(const std::string& path, bool has_seed, uint64_t seed,
                               std::string* diag) {
    Scenario sc;
    if (!path.empty()) {
        auto loaded = scenario_from_file(resolve_scenario_path(path), diag);
        if (!loaded.ok()) return loaded.error();
        sc = loaded.value();
    }
    if (has_seed) sc.seed = seed;
    return sc;
}

int emit(const std::string& data, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << data;
        return 0;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) return fail_config("cannot open output path: " + output_path);
    out << data;
    return 0;
}

std::string trim_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    std::string s = buf;
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos) s += ".0";
    return s;
}

int cmd_run(const std::string& scenario_path, bool has_seed, uint64_t seed,
            const std::string& format_name, const std::string& output_path,
            const std::string& events_path) {
    std::string diag;
    auto sc = load_scenario(scenario_path, has_seed, seed, &diag);
    if (!sc.ok()) return fail_config(diag.empty() ? to_string(sc.error()) : diag);
    auto format = parse_format(format_name);
    if (!format.ok()) return fail_config("unsupported format: " + format_name);

    EventLog log = run(sc.value()).log;
    if (!events_path.empty()) {
        std::ofstream out(events_path, std::ios::binary);
        if (!out) return fail_config("cannot open events path: " + events_path);
        out << log.to_ndjson();
    }
    MetricsReport report = build_report(log);
    return emit(render_report(report, format.value()).value(), output_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gasless subnet staking simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    uint64_t seed = 0;
    std::string format_name = "json";
    std::string output_path;
    std::string events_path;

    auto add_common = [&](CLI::App* cmd, bool with_format = true) {
        cmd->add_option("--scenario", scenario_path,
                        "Scenario JSON file (resolved against $GASLESS_SCENARIO_DIR if not "
                        "found directly); defaults apply when omitted");
        cmd->add_option("--seed", seed, "Override the scenario seed");
        if (with_format) {
            cmd->add_option("--format", format_name, "Output format: json|text|csv")
                ->default_val("json");
        }
        cmd->add_option("--output", output_path, "Write output here instead of stdout");
    };

    auto* run_cmd = app.add_subcommand("run", "Run one scenario and report metrics");
    add_common(run_cmd);
    run_cmd->add_option("--events", events_path, "Also write the NDJSON event log here");

    auto* compare_cmd =
        app.add_subcommand("compare", "Run the scenario under both fee models side by side");
    add_common(compare_cmd, false);

    auto* stress_cmd = app.add_subcommand("stress", "Constrained-capacity completion test");
    add_common(stress_cmd, false);
    uint64_t stress_users = 300;
    double stress_window_s = 10.0;
    uint64_t stress_queue = 64;
    stress_cmd->add_option("--users", stress_users, "Virtual user count")->default_val(300);
    stress_cmd->add_option("--window-s", stress_window_s, "Burst window in seconds")
        ->default_val(10.0);
    stress_cmd->add_option("--relayer-queue", stress_queue, "Relayer queue capacity")
        ->default_val(64);

    auto* sweep_cmd = app.add_subcommand("sweep", "Aggregate TPS across N independent subnets");
    add_common(sweep_cmd, false);
    std::vector<uint32_t> subnet_counts{1, 2, 4, 8};
    sweep_cmd->add_option("--subnets", subnet_counts, "Subnet counts to sweep")
        ->delimiter(',');

    auto* gini_cmd = app.add_subcommand("gini", "Gini coefficient of the given values");
    std::vector<double> gini_values;
    gini_cmd->add_option("values", gini_values, "Non-negative values")->required();

    auto* quote_cmd = app.add_subcommand("quote", "Gas fee and fiat quote for one transaction");
    uint64_t q_gas_limit = 21000;
    uint64_t q_gas_price_gwei = 20;
    uint64_t q_priority_gwei = 0;
    uint32_t q_margin_bps = 0;
    uint64_t q_rate = ExchangeRate{}.microcents_per_xdc;
    quote_cmd->add_option("--gas-limit", q_gas_limit, "Gas units")->default_val(21000);
    quote_cmd->add_option("--gas-price-gwei", q_gas_price_gwei, "Base fee per gas unit (Gwei)")
        ->default_val(20);
    quote_cmd->add_option("--priority-fee-gwei", q_priority_gwei, "Priority fee (Gwei)")
        ->default_val(0);
    quote_cmd->add_option("--margin-bps", q_margin_bps, "Relayer margin in basis points")
        ->default_val(0);
    quote_cmd->add_option("--rate-microcents-per-xdc", q_rate, "USD price of 1 XDC, micro-cents")
        ->default_val(ExchangeRate{}.microcents_per_xdc);

    auto* inspect_cmd =
        app.add_subcommand("inspect", "Resolve a scenario or recompute a report from a log");
    add_common(inspect_cmd);
    std::string inspect_log_path;
    inspect_cmd->add_option("--log", inspect_log_path, "NDJSON event log to replay");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run_cmd->parsed()) {
            return cmd_run(scenario_path, run_cmd->count("--seed") > 0, seed, format_name,
                           output_path, events_path);
        }
        if (compare_cmd->parsed()) {
            std::string diag;
            auto sc = load_scenario(scenario_path, compare_cmd->count("--seed") > 0, seed, &diag);
            if (!sc.ok()) return fail_config(diag.empty() ? to_string(sc.error()) : diag);
            Scenario a = sc.value();
            Scenario b = sc.value();
            a.model = SimModel::GaslessFiat;
            b.model = SimModel::TraditionalGas;
            auto cmp = compare_models(a, b);
            if (!cmp.ok()) return fail_config(to_string(cmp.error()));
            nlohmann::json j = cmp.value();
            j["schema_version"] = kSchemaVersion;
            return emit(j.dump(2) + "\n", output_path);
        }
        if (stress_cmd->parsed()) {
            std::string diag;
            auto sc = load_scenario(scenario_path, stress_cmd->count("--seed") > 0, seed, &diag);
            if (!sc.ok()) return fail_config(diag.empty() ? to_string(sc.error()) : diag);
            Scenario s = sc.value();
            s.arrival = ArrivalKind::Burst;
            s.burst_n = stress_users;
            s.burst_window_s = stress_window_s;
            s.user_count = uint32_t(stress_users);
            s.relayer_queue_max = stress_queue;
            nlohmann::json j = stress(s);
            j["schema_version"] = kSchemaVersion;
            return emit(j.dump(2) + "\n", output_path);
        }
        if (sweep_cmd->parsed()) {
            std::string diag;
            auto sc = load_scenario(scenario_path, sweep_cmd->count("--seed") > 0, seed, &diag);
            if (!sc.ok()) return fail_config(diag.empty() ? to_string(sc.error()) : diag);
            nlohmann::json j = scalability_sweep(sc.value(), subnet_counts);
            j["schema_version"] = kSchemaVersion;
            return emit(j.dump(2) + "\n", output_path);
        }
        if (gini_cmd->parsed()) {
            auto g = gini(gini_values);
            if (!g.ok()) return fail_config(to_string(g.error()));
            std::cout << trim_float(g.value()) << "\n";
            return 0;
        }
        if (quote_cmd->parsed()) {
            GasParams gas{q_gas_limit, TokenAmount::from_gwei(q_gas_price_gwei),
                          TokenAmount::from_gwei(q_priority_gwei)};
            auto fee = compute_gas_fee(gas);
            if (!fee.ok()) return fail_config(to_string(fee.error()));
            ExchangeRate rate{q_rate};
            MicroCents fiat = quote_user_fee(gas, rate, q_margin_bps);
            double usd = double(fee.value().wei) / 1e18 * double(q_rate) / 1e8 *
                         (1.0 + double(q_margin_bps) / 10000.0);
            std::cout << format_xdc(fee.value()) << " XDC ("
                      << u128_to_string(fee.value().wei) << " wei)\n";
            char buf[64];
            std::snprintf(buf, sizeof buf, "$%.10f", usd);
            std::cout << buf << " per tx (" << fiat << " microcents billed)\n";
            return 0;
        }
        if (inspect_cmd->parsed()) {
            if (!inspect_log_path.empty()) {
                std::ifstream in(inspect_log_path, std::ios::binary);
                if (!in) return fail_config("cannot open log: " + inspect_log_path);
                std::ostringstream buf;
                buf << in.rdbuf();
                auto log = EventLog::from_ndjson(buf.str());
                if (!log.ok()) return fail_config("malformed event log");
                auto format = parse_format(format_name);
                if (!format.ok()) return fail_config("unsupported format: " + format_name);
                return emit(render_report(build_report(log.value()), format.value()).value(),
                            output_path);
            }
            std::string diag;
            auto sc = load_scenario(scenario_path, inspect_cmd->count("--seed") > 0, seed, &diag);
            if (!sc.ok()) return fail_config(diag.empty() ? to_string(sc.error()) : diag);
            return emit(scenario_to_json_text(sc.value()) + "\n", output_path);
        }
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violated: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
