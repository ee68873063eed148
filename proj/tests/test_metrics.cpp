#include <doctest.h>

#include <cmath>
#include <random>

#include "gasless/metrics.hpp"
#include "gasless/simulator.hpp"

using namespace gasless;

namespace {

// Definition-level oracle: G = sum_ij |xi - xj| / (2 n^2 mu).
double gini_bruteforce(const std::vector<double>& x) {
    size_t n = x.size();
    if (n <= 1) return 0.0;
    double total = 0;
    for (double v : x) total += v;
    if (total == 0) return 0.0;
    double diff_sum = 0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) diff_sum += std::abs(x[i] - x[j]);
    }
    double mu = total / double(n);
    return diff_sum / (2.0 * double(n) * double(n) * mu);
}

Event ev(uint64_t t, const char* type) {
    Event e;
    e["t"] = t;
    e["type"] = type;
    return e;
}

}  // namespace

TEST_CASE("gini fixed points") {
    CHECK(gini({1, 1, 1, 1}).value() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(gini({0, 0, 0, 4}).value() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(gini({1, 2, 3, 4}).value() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(gini({}).value() == 0.0);
    CHECK(gini({5}).value() == 0.0);
    CHECK(gini({0, 0}).value() == 0.0);  // zero mean convention
    CHECK(gini({1, -1}).error() == Err::NegativeInput);
}

TEST_CASE("gini matches the pairwise-difference oracle on random vectors") {
    std::mt19937_64 rng(2024);
    for (int iter = 0; iter < 1000; ++iter) {
        size_t n = 1 + rng() % 16;
        std::vector<double> x(n);
        for (auto& v : x) v = double(rng() % 1'000'001);
        CHECK(std::abs(gini(x).value() - gini_bruteforce(x)) <= 1e-12);
    }
}

TEST_CASE("tps and latency match hand counts on a toy log") {
    EventLog log;
    Event g = ev(0, "genesis");
    g["model"] = "gasless_fiat";
    g["seed"] = 1;
    g["duration_s"] = 10.0;
    g["subnet_count"] = 1;
    g["gas_price_gwei"] = 20;
    g["exchange_rate_microcents_per_xdc"] = 5792900;
    log.append(g);
    uint64_t seals[] = {2500, 2500, 5000, 7500, 10000};
    uint64_t handoffs[] = {0, 1000, 2500, 5000, 7500};
    for (int i = 0; i < 5; ++i) {
        Event e = ev(seals[i], "executed");
        e["handoff_ms"] = handoffs[i];
        e["fee_microcents"] = 2677;
        log.append(e);
    }
    CHECK(measure_tps(log, 10.0).value() == doctest::Approx(0.5));
    CHECK(measure_tps(log, 5.0).value() == doctest::Approx(0.6));  // 3 txs by t=5 s
    CHECK(measure_tps(log, 0.0).error() == Err::EmptyWindow);

    LatencyStats s = measure_latency(log);
    CHECK(s.count == 5);
    // Latencies: 2.5, 1.5, 2.5, 2.5, 2.5
    CHECK(s.mean_s == doctest::Approx(2.3));
    CHECK(s.p50_s == doctest::Approx(2.5));
    CHECK(s.p95_s == doctest::Approx(2.5));
    CHECK(s.max_s == doctest::Approx(2.5));

    EventLog empty;
    CHECK(measure_latency(empty).count == 0);
    CHECK(measure_tps(empty, 10.0).value() == 0.0);
}

TEST_CASE("report is recomputable from the serialized log alone") {
    Scenario sc;
    sc.duration_s = 50;
    EventLog log = run(sc).log;
    MetricsReport direct = build_report(log);

    auto reparsed = EventLog::from_ndjson(log.to_ndjson());
    REQUIRE(reparsed.ok());
    MetricsReport replayed = build_report(reparsed.value());
    CHECK(report_to_json(direct).dump() == report_to_json(replayed).dump());
    CHECK(direct.user_cost_xdc_per_tx == 0.0);
    CHECK(direct.supply_delta_wei == "0");
}

TEST_CASE("model comparison requires scenarios differing only in model") {
    Scenario a;
    a.duration_s = 30;
    Scenario b = a;
    CHECK(compare_models(a, b).error() == Err::ScenariosNotComparable);

    b.model = SimModel::TraditionalGas;
    b.seed = 43;
    CHECK(compare_models(a, b).error() == Err::ScenariosNotComparable);

    b.seed = a.seed;
    auto r = compare_models(a, b);
    REQUIRE(r.ok());
    const auto& j = r.value();
    CHECK(j.at("gasless_fiat").at("user_cost").at("xdc_per_tx").get<double>() == 0.0);
    CHECK(j.at("traditional_gas").at("user_cost").at("xdc_per_tx").get<double>() > 0.0);
    CHECK(j.at("gasless_fiat").at("supply").at("delta_wei").get<std::string>() == "0");
    // Traditional supply grows by blocks x mint.
    uint64_t blocks = j.at("traditional_gas").at("mainnet_blocks").get<uint64_t>();
    CHECK(j.at("traditional_gas").at("supply").at("delta_xdc").get<double>() ==
          doctest::Approx(double(blocks)));
}
