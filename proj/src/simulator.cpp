#include "gasless/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <queue>
#include <random>

#include "gasless/mainnet.hpp"
#include "gasless/relayer.hpp"

namespace gasless {

namespace {

std::string wei_str(TokenAmount t) { return u128_to_string(t.wei); }

Seed derive_seed(uint64_t root, const std::string& label) {
    std::vector<uint8_t> buf;
    auto r = to_be8(root);
    buf.insert(buf.end(), r.begin(), r.end());
    buf.insert(buf.end(), label.begin(), label.end());
    return digest(buf);
}

uint64_t derive_u64(uint64_t root, const std::string& label) {
    Seed s = derive_seed(root, label);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | s[size_t(i)];
    return v;
}

double unit_draw(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

enum class EvKind { PaymentSettle, Failure, RelayTick, BlockTick, MainnetTick, Arrival };

struct Ev {
    uint64_t t;
    uint32_t prio;
    uint64_t seq;
    EvKind kind;
    uint32_t subnet;
    uint64_t arg;  // request id / failure index
};

struct EvCmp {
    bool operator()(const Ev& a, const Ev& b) const {
        if (a.t != b.t) return a.t > b.t;
        if (a.prio != b.prio) return a.prio > b.prio;
        return a.seq > b.seq;
    }
};

uint32_t prio_of(EvKind k) {
    switch (k) {
        case EvKind::PaymentSettle: return 0;
        case EvKind::Failure: return 1;
        case EvKind::RelayTick: return 2;
        case EvKind::BlockTick: return 3;
        case EvKind::MainnetTick: return 4;
        case EvKind::Arrival: return 5;
    }
    return 9;
}

enum class ReqState { Pending, Executed, Rejected, Throttled };

struct Request {
    uint32_t subnet = 0;
    uint32_t user = 0;
    uint64_t arrival_ms = 0;
    TokenAmount value;
    PaymentId pid{};
    ReqState state = ReqState::Pending;
};

struct UserSim {
    KeyPair kp;
    uint64_t next_nonce = 0;
    TokenAmount budget;  // ledger balance minus in-flight values
};

struct SubnetWorld {
    std::unique_ptr<SubnetEngine> engine;
    std::unique_ptr<Relayer> relayer;
    std::unique_ptr<FiatGateway> gateway;
    Address merchant;
    Address pool;
    Address market;
    std::vector<UserSim> users;
    std::mt19937_64 rng;
};

struct Sim {
    const Scenario& sc;
    RegistryScheme scheme;
    EventLog log;
    std::unique_ptr<Mainnet> mainnet;
    KeyPair operator_kp;
    std::vector<std::unique_ptr<SubnetWorld>> worlds;
    std::vector<Request> requests;
    std::map<std::vector<uint8_t>, uint64_t> tx_to_req;
    std::priority_queue<Ev, std::vector<Ev>, EvCmp> heap;
    uint64_t seq = 0;
    uint64_t duration_ms = 0;
    TokenAmount genesis_supply;
    // traditional-model user state lives on the mainnet ledger
    std::vector<UserSim> trad_users;
    Address trad_merchant;
    Address trad_proposer;
    std::mt19937_64 trad_rng{0};
    std::map<std::vector<uint8_t>, uint64_t> trad_tx_to_req;

    explicit Sim(const Scenario& s) : sc(s) {}

    void push(uint64_t t, EvKind k, uint32_t subnet, uint64_t arg) {
        heap.push(Ev{t, prio_of(k), seq++, k, subnet, arg});
    }

    TokenAmount total_supply() const {
        TokenAmount sum = mainnet->ledger().total_supply();
        for (const auto& w : worlds) {
            sum = checked_add(sum, w->engine->ledger().total_supply()).value();
        }
        return sum;
    }

    Event base(uint64_t t, const char* type) {
        Event e;
        e["t"] = t;
        e["type"] = type;
        return e;
    }

    // Chain-qualified address -> balance+staked, for whole-trace audits.
    nlohmann::json balances_snapshot() const {
        nlohmann::json j;
        for (const auto& [addr, acct] : mainnet->ledger().accounts()) {
            j["mainnet:" + addr.to_string()] =
                u128_to_string(acct.balance.wei + acct.staked.wei);
        }
        for (size_t s = 0; s < worlds.size(); ++s) {
            std::string prefix = "subnet" + std::to_string(s) + ":";
            for (const auto& [addr, acct] : worlds[s]->engine->ledger().accounts()) {
                j[prefix + addr.to_string()] =
                    u128_to_string(acct.balance.wei + acct.staked.wei);
            }
        }
        return j;
    }

    void setup();
    void setup_gasless();
    void setup_traditional();
    void generate_arrivals();
    void run_loop();
    void finish();

    void on_arrival(uint64_t t, uint64_t req);
    void on_payment_settle(uint64_t t, uint64_t req);
    void do_settlement(uint64_t t, uint32_t subnet);
    void on_relay_tick(uint64_t t, uint32_t subnet);
    void on_block_tick(uint64_t t, uint32_t subnet);
    void on_mainnet_tick(uint64_t t);
    void on_failure(uint64_t t, uint32_t subnet);
};

void Sim::setup() {
    MainnetConfig mcfg;
    mcfg.min_stake = TokenAmount::from_xdc(sc.min_stake_xdc);
    mcfg.block_interval_ms = sc.mainnet_interval_ms;
    mcfg.mint_per_block = sc.model == SimModel::TraditionalGas
                              ? TokenAmount::from_xdc(sc.mint_per_block_xdc)
                              : TokenAmount{};
    mainnet = std::make_unique<Mainnet>(mcfg);
    operator_kp = scheme.keygen(derive_seed(sc.seed, "operator"));
    TokenAmount stakes = checked_mul(TokenAmount::from_xdc(sc.stake_xdc), sc.subnet_count).value();
    mainnet->ledger().credit(
        operator_kp.address,
        checked_add(TokenAmount::from_xdc(sc.operator_funding_xdc), stakes).value());

    if (sc.model == SimModel::GaslessFiat) {
        setup_gasless();
    } else {
        setup_traditional();
    }

    genesis_supply = total_supply();
    Event g = base(0, "genesis");
    g["model"] = to_string(sc.model);
    g["seed"] = sc.seed;
    g["duration_s"] = sc.duration_s;
    g["subnet_count"] = sc.subnet_count;
    g["supply_wei"] = wei_str(genesis_supply);
    g["gas_price_gwei"] = sc.gas_price_gwei;
    g["exchange_rate_microcents_per_xdc"] = sc.exchange_rate_microcents_per_xdc;
    g["block_interval_ms"] = sc.block_interval_ms;
    g["mainnet_interval_ms"] = sc.mainnet_interval_ms;
    g["balances"] = balances_snapshot();
    log.append(std::move(g));

    generate_arrivals();

    duration_ms = uint64_t(std::llround(sc.duration_s * 1000.0));
    if (sc.model == SimModel::GaslessFiat) {
        uint64_t B = sc.block_interval_ms;
        for (uint32_t s = 0; s < sc.subnet_count; ++s) {
            for (uint64_t t = B / 2; t <= duration_ms; t += B) push(t, EvKind::RelayTick, s, 0);
            for (uint64_t t = B; t <= duration_ms; t += B) push(t, EvKind::BlockTick, s, 0);
        }
    }
    for (uint64_t t = sc.mainnet_interval_ms; t <= duration_ms; t += sc.mainnet_interval_ms) {
        push(t, EvKind::MainnetTick, 0, 0);
    }
    for (size_t i = 0; i < sc.failure_times_s.size(); ++i) {
        uint64_t t = uint64_t(std::llround(sc.failure_times_s[i] * 1000.0));
        if (t <= duration_ms) push(t, EvKind::Failure, 0, i);
    }
    if (sc.failure_rate_per_s > 0 && sc.model == SimModel::GaslessFiat) {
        for (uint32_t s = 0; s < sc.subnet_count; ++s) {
            std::mt19937_64 frng(derive_u64(sc.seed, "failures-" + std::to_string(s)));
            double acc = 0;
            while (true) {
                acc += -std::log(1.0 - unit_draw(frng)) / sc.failure_rate_per_s;
                uint64_t t = uint64_t(std::llround(acc * 1000.0));
                if (t > duration_ms) break;
                push(t, EvKind::Failure, s, SIZE_MAX);
            }
        }
    }
}

void Sim::setup_gasless() {
    for (uint32_t s = 0; s < sc.subnet_count; ++s) {
        std::string tag = "subnet-" + std::to_string(s);
        auto charter = mainnet->stake_and_spawn(
            operator_kp.address, TokenAmount::from_xdc(sc.stake_xdc), sc.masternodes,
            sc.standbys, sc.checkpoint_interval_blocks, FeeMode::GaslessFiat);
        invariant(charter.ok(), "genesis stake_and_spawn must succeed");

        Event st = base(0, "stake");
        st["operator"] = operator_kp.address.to_string();
        st["amount_wei"] = wei_str(charter.value().staked);
        st["subnet"] = charter.value().subnet_id;
        log.append(std::move(st));

        auto world = std::make_unique<SubnetWorld>();
        world->rng.seed(derive_u64(sc.seed, tag));

        ValidatorSet vs;
        for (uint32_t i = 0; i < sc.masternodes; ++i) {
            vs.masternodes.push_back(
                scheme.keygen(derive_seed(sc.seed, tag + "-mn-" + std::to_string(i))).address);
        }
        for (uint32_t i = 0; i < sc.standbys; ++i) {
            vs.standbys.push_back(
                scheme.keygen(derive_seed(sc.seed, tag + "-sb-" + std::to_string(i))).address);
        }

        SubnetConfig cfg;
        cfg.subnet_id = s;
        cfg.block_interval_ms = sc.block_interval_ms;
        cfg.block_tx_cap = sc.block_tx_cap;
        cfg.checkpoint_interval_blocks = sc.checkpoint_interval_blocks;
        cfg.rate_capacity = sc.rate_capacity;
        cfg.rate_refill_per_s = sc.rate_refill_per_s;
        cfg.reward_split_masternode_bps = sc.reward_split_masternode_bps;
        cfg.gas_price = TokenAmount::from_gwei(sc.gas_price_gwei);

        Address treasury = scheme.keygen(derive_seed(sc.seed, tag + "-treasury")).address;
        world->engine = std::make_unique<SubnetEngine>(cfg, vs, treasury);

        KeyPair relayer_kp = scheme.keygen(derive_seed(sc.seed, tag + "-relayer"));
        world->relayer = std::make_unique<Relayer>(
            relayer_kp.address, sc.margin_bps,
            sc.relayer_queue_max ? sc.relayer_queue_max : SIZE_MAX);
        world->engine->ledger().credit(relayer_kp.address,
                                       TokenAmount::from_xdc(sc.relayer_escrow_xdc));

        world->pool = scheme.keygen(derive_seed(sc.seed, tag + "-pool")).address;
        world->market = scheme.keygen(derive_seed(sc.seed, tag + "-market")).address;
        world->merchant = scheme.keygen(derive_seed(sc.seed, tag + "-merchant")).address;
        world->engine->ledger().credit(world->market,
                                       TokenAmount::from_xdc(sc.market_account_xdc));
        world->engine->ledger().open(world->pool);
        world->engine->ledger().open(world->merchant);

        ExchangeRate rate{sc.exchange_rate_microcents_per_xdc};
        world->gateway = std::make_unique<FiatGateway>(rate, world->pool, world->market,
                                                       sc.payment_confirm_delay_ms,
                                                       sc.payment_failure_rate);

        for (uint32_t u = 0; u < sc.user_count; ++u) {
            UserSim us;
            us.kp = scheme.keygen(derive_seed(sc.seed, tag + "-user-" + std::to_string(u)));
            us.budget = TokenAmount::from_xdc(sc.user_funding_xdc);
            world->engine->ledger().credit(us.kp.address, us.budget);
            world->users.push_back(std::move(us));
        }

        worlds.push_back(std::move(world));
    }
}

void Sim::setup_traditional() {
    trad_rng.seed(derive_u64(sc.seed, "traditional"));
    trad_merchant = scheme.keygen(derive_seed(sc.seed, "trad-merchant")).address;
    trad_proposer = scheme.keygen(derive_seed(sc.seed, "trad-proposer")).address;
    mainnet->ledger().open(trad_merchant);
    mainnet->ledger().open(trad_proposer);
    for (uint32_t u = 0; u < sc.user_count; ++u) {
        UserSim us;
        us.kp = scheme.keygen(derive_seed(sc.seed, "trad-user-" + std::to_string(u)));
        us.budget = TokenAmount::from_xdc(sc.user_funding_xdc);
        mainnet->ledger().credit(us.kp.address, us.budget);
        trad_users.push_back(std::move(us));
    }
}

void Sim::generate_arrivals() {
    double lambda = sc.effective_arrival_tps();
    uint64_t dur_ms = uint64_t(std::llround(sc.duration_s * 1000.0));
    uint32_t streams = sc.model == SimModel::GaslessFiat ? sc.subnet_count : 1;
    for (uint32_t s = 0; s < streams; ++s) {
        std::mt19937_64 arng(derive_u64(sc.seed, "arrivals-" + std::to_string(s)));
        std::vector<uint64_t> times;
        if (sc.arrival == ArrivalKind::Poisson) {
            if (lambda > 0) {
                double acc = 0;
                while (true) {
                    acc += -std::log(1.0 - unit_draw(arng)) / lambda;
                    uint64_t t = uint64_t(std::llround(acc * 1000.0));
                    if (t > dur_ms || t == 0) {
                        if (t == 0) continue;
                        break;
                    }
                    times.push_back(t);
                }
            }
        } else {
            double window_ms = std::min(sc.burst_window_s * 1000.0, double(dur_ms));
            for (uint64_t i = 0; i < sc.burst_n; ++i) {
                uint64_t t = 1 + uint64_t(unit_draw(arng) * window_ms);
                times.push_back(std::min(t, dur_ms));
            }
            std::sort(times.begin(), times.end());
        }
        for (uint64_t t : times) {
            Request r;
            r.subnet = s;
            r.user = uint32_t(arng() % sc.user_count);
            r.arrival_ms = t;
            r.value = TokenAmount{u128(arng() % (sc.value_max_xdc_centi + 1)) *
                                  u128(TokenAmount::kWeiPerXdc / 100)};
            uint64_t req = requests.size();
            requests.push_back(r);
            push(t, EvKind::Arrival, s, req);
        }
    }
}

void Sim::on_arrival(uint64_t t, uint64_t req) {
    Request& r = requests[req];
    if (sc.model == SimModel::TraditionalGas) {
        UserSim& user = trad_users[r.user];
        GasPricedTx tx;
        tx.from = user.kp.address;
        tx.to = trad_merchant;
        tx.gas.gas_limit = 21000;
        tx.gas.base_fee = TokenAmount::from_gwei(sc.gas_price_gwei);
        tx.gas.priority_fee =
            TokenAmount::from_gwei(trad_rng() % (sc.priority_fee_max_gwei + 1));
        TokenAmount fee = compute_gas_fee(tx.gas).value();
        TokenAmount affordable =
            user.budget > fee ? checked_sub(user.budget, fee).value() : TokenAmount{};
        tx.value = std::min(r.value, affordable);
        if (user.budget < fee) {
            r.state = ReqState::Rejected;
            Event e = base(t, "submit_rejected");
            e["req"] = req;
            e["reason"] = to_string(Err::InsufficientBalance);
            log.append(std::move(e));
            return;
        }
        user.budget = checked_sub(user.budget,
                                  checked_add(tx.value, fee).value()).value();
        tx.arrival_ms = t;
        auto rid = to_be8(req);
        tx.id = digest(rid.data(), rid.size());
        trad_tx_to_req[std::vector<uint8_t>(tx.id.begin(), tx.id.end())] = req;
        Event e = base(t, "submit");
        e["tx"] = hex(tx.id);
        e["from"] = tx.from.to_string();
        e["value_wei"] = wei_str(tx.value);
        e["priority_fee_wei"] = wei_str(tx.gas.priority_fee);
        e["gas_fee_wei"] = wei_str(fee);
        log.append(std::move(e));
        mainnet->submit_traditional(std::move(tx));
        return;
    }

    SubnetWorld& w = *worlds[r.subnet];
    UserSim& user = w.users[r.user];
    GasParams gas{21000, TokenAmount::from_gwei(sc.gas_price_gwei), {}};
    MicroCents fee = quote_user_fee(gas, w.gateway->rate(), sc.margin_bps);
    PaymentIntent& intent = w.gateway->create_payment(user.kp.address, fee, t);
    r.pid = intent.payment_id;
    Event e = base(t, "payment_created");
    e["payment_id"] = hex(intent.payment_id);
    e["payer"] = user.kp.address.to_string();
    e["microcents"] = fee;
    e["subnet"] = r.subnet;
    log.append(std::move(e));
    push(t + sc.payment_confirm_delay_ms, EvKind::PaymentSettle, r.subnet, req);
}

void Sim::on_payment_settle(uint64_t t, uint64_t req) {
    Request& r = requests[req];
    SubnetWorld& w = *worlds[r.subnet];
    UserSim& user = w.users[r.user];

    const PaymentId& pid = r.pid;
    double draw = unit_draw(w.rng);
    invariant(w.gateway->settle_confirmation(pid, draw).ok(), "payment settle");
    const PaymentIntent* intent = w.gateway->find(pid);
    if (intent->status == PaymentStatus::Refunded) {
        r.state = ReqState::Rejected;
        Event e = base(t, "payment_refunded");
        e["payment_id"] = hex(pid);
        e["subnet"] = r.subnet;
        log.append(std::move(e));
        return;
    }
    Event c = base(t, "payment_confirmed");
    c["payment_id"] = hex(pid);
    c["subnet"] = r.subnet;
    log.append(std::move(c));

    // Signature hand-off: latency measurement starts here.
    TokenAmount value = std::min(r.value, user.budget);
    r.value = value;
    user.budget = checked_sub(user.budget, value).value();
    uint64_t nonce = user.next_nonce++;
    MetaTransaction tx = make_signed_tx(scheme, user.kp, w.engine->config().chain_id, r.subnet,
                                        w.merchant, value, {}, nonce, pid);
    Digest d = tx_digest(tx);
    tx_to_req[std::vector<uint8_t>(d.begin(), d.end())] = req;

    Event h = base(t, "handoff");
    h["tx"] = hex(d);
    h["from"] = user.kp.address.to_string();
    h["subnet"] = r.subnet;
    h["nonce"] = nonce;
    h["value_wei"] = wei_str(value);
    log.append(std::move(h));

    Status st = w.relayer->accept(scheme, *w.gateway, std::move(tx), t);
    if (!st.ok()) {
        r.state = ReqState::Rejected;
        user.next_nonce -= 1;
        user.budget = checked_add(user.budget, value).value();
        Event e = base(t, "accept_rejected");
        e["tx"] = hex(d);
        e["subnet"] = r.subnet;
        e["reason"] = to_string(st.error());
        log.append(std::move(e));
    }
}

void Sim::do_settlement(uint64_t t, uint32_t subnet) {
    SubnetWorld& w = *worlds[subnet];
    Ledger& sled = w.engine->ledger();

    // Settlement cycle: relayer compensation first, residual to rewards.
    auto settle = w.relayer->settle_compensation(*w.gateway, sled);
    TokenAmount credited =
        settle.ok() ? settle.value().credited : TokenAmount{};  // partial recorded in state
    TokenAmount remaining = w.relayer->owed();
    if (!credited.is_zero() || !remaining.is_zero()) {
        Event e = base(t, "settlement");
        e["subnet"] = subnet;
        e["credited_wei"] = wei_str(credited);
        e["remaining_owed_wei"] = wei_str(remaining);
        e["pool_fiat_microcents"] = w.gateway->pool_fiat_microcents();
        log.append(std::move(e));
    }

    // Sweep: convert residual fiat, move pool XDC into the treasury, distribute.
    if (remaining.is_zero()) {
        MicroCents residual_fiat = w.gateway->pool_fiat_microcents();
        if (residual_fiat > 0) {
            invariant(w.gateway->convert_to_xdc(residual_fiat, sled).ok(), "residual conversion");
        }
        TokenAmount pool_xdc = sled.balance(w.gateway->pool_account());
        if (!pool_xdc.is_zero()) {
            invariant(sled.transfer(w.gateway->pool_account(), w.engine->treasury(), pool_xdc).ok(),
                      "pool sweep");
        }
    }
    TokenAmount inflow = sled.balance(w.engine->treasury());
    if (!inflow.is_zero()) {
        RewardDelta delta = w.engine->distribute_rewards(inflow);
        Event e = base(t, "rewards");
        e["subnet"] = subnet;
        e["inflow_wei"] = wei_str(inflow);
        e["per_masternode_wei"] = wei_str(delta.per_masternode);
        e["per_standby_wei"] = wei_str(delta.per_standby);
        e["retained_wei"] = wei_str(delta.retained);
        log.append(std::move(e));
    }
}

void Sim::on_relay_tick(uint64_t t, uint32_t subnet) {
    SubnetWorld& w = *worlds[subnet];
    Ledger& sled = w.engine->ledger();
    do_settlement(t, subnet);

    // Batch submission.
    std::vector<std::pair<Digest, uint64_t>> throttled;
    size_t max_n = sc.relayer_batch_max ? sc.relayer_batch_max : SIZE_MAX;
    auto batch = w.relayer->submit_batch(*w.engine, max_n, t, &throttled);
    if (!batch.ok()) {
        Event e = base(t, "batch_deferred");
        e["subnet"] = subnet;
        e["reason"] = to_string(batch.error());
        log.append(std::move(e));
        return;
    }
    if (!batch.value().tx_digests.empty() || !throttled.empty()) {
        Event e = base(t, "batch");
        e["subnet"] = subnet;
        e["batch_id"] = batch.value().batch_id;
        e["txs"] = batch.value().tx_digests.size();
        e["gas_wei"] = wei_str(batch.value().total_gas_fee);
        e["escrow_after_wei"] = wei_str(sled.balance(w.relayer->address()));
        log.append(std::move(e));
    }
    for (const auto& d : batch.value().tx_digests) {
        Event e = base(t, "admitted");
        e["tx"] = hex(d);
        e["subnet"] = subnet;
        log.append(std::move(e));
    }
    for (const auto& [d, retry] : throttled) {
        Event e = base(t, "throttled");
        e["tx"] = hex(d);
        e["subnet"] = subnet;
        e["retry_after_ms"] = retry;
        log.append(std::move(e));
    }
}

void Sim::on_block_tick(uint64_t t, uint32_t subnet) {
    SubnetWorld& w = *worlds[subnet];
    std::vector<ExecutedTx> items;
    Block b = w.engine->produce_block_gasless(t, scheme, *w.gateway, &items);
    for (auto& item : items) {
        std::vector<uint8_t> key(item.receipt.tx_digest.begin(), item.receipt.tx_digest.end());
        auto rit = tx_to_req.find(key);
        if (item.receipt.executed) {
            w.relayer->note_gas_spent(item.gas_fee);
            if (rit != tx_to_req.end()) requests[rit->second].state = ReqState::Executed;
            Event e = base(t, "executed");
            e["tx"] = hex(item.receipt.tx_digest);
            e["subnet"] = subnet;
            e["from"] = item.tx.from.to_string();
            e["to"] = item.tx.to.to_string();
            e["value_wei"] = wei_str(item.tx.value);
            e["nonce"] = item.tx.nonce;
            e["gas_wei"] = wei_str(item.gas_fee);
            e["gas_used"] = item.receipt.gas_used;
            e["fee_microcents"] = item.receipt.user_fee_fiat_microcents;
            e["handoff_ms"] = item.handoff_ms;
            e["height"] = item.receipt.block_height;
            log.append(std::move(e));
        } else {
            if (rit != tx_to_req.end()) requests[rit->second].state = ReqState::Rejected;
            Event e = base(t, "tx_rejected");
            e["tx"] = hex(item.receipt.tx_digest);
            e["subnet"] = subnet;
            e["reason"] = to_string(*item.receipt.reject_reason);
            log.append(std::move(e));
        }
    }
    Event e = base(t, "block");
    e["chain"] = "subnet";
    e["subnet"] = subnet;
    e["height"] = b.height;
    e["proposer"] = b.proposer.to_string();
    e["txs"] = b.tx_digests.size();
    nlohmann::json digests = nlohmann::json::array();
    for (const auto& d : b.tx_digests) digests.push_back(hex(d));
    e["tx_digests"] = std::move(digests);
    e["state_root"] = hex(b.state_root);
    e["total_supply_wei"] = wei_str(total_supply());
    log.append(std::move(e));

    if (auto cp = w.engine->maybe_emit_checkpoint()) {
        Status st = mainnet->record_checkpoint(*cp);
        Event ce = base(t, "checkpoint");
        ce["subnet"] = cp->subnet_id;
        ce["epoch"] = cp->epoch;
        ce["subnet_height"] = cp->subnet_block_height;
        ce["state_root"] = hex(cp->state_root);
        ce["accepted"] = st.ok();
        log.append(std::move(ce));
    }
}

void Sim::on_mainnet_tick(uint64_t t) {
    Event e = base(t, "block");
    e["chain"] = "mainnet";
    if (sc.model == SimModel::TraditionalGas) {
        std::vector<GasPricedTx> included;
        std::vector<GasPricedTx> rejected;
        Block b = mainnet->produce_block_traditional(sc.traditional_gas_cap_per_block,
                                                     trad_proposer, t, &included, &rejected);
        for (const auto& tx : included) {
            auto rit = trad_tx_to_req.find(std::vector<uint8_t>(tx.id.begin(), tx.id.end()));
            if (rit != trad_tx_to_req.end()) requests[rit->second].state = ReqState::Executed;
            Event x = base(t, "executed_trad");
            x["tx"] = hex(tx.id);
            x["from"] = tx.from.to_string();
            x["value_wei"] = wei_str(tx.value);
            x["priority_fee_wei"] = wei_str(tx.gas.priority_fee);
            x["gas_fee_wei"] = wei_str(compute_gas_fee(tx.gas).value());
            x["arrival_ms"] = tx.arrival_ms;
            x["height"] = b.height;
            log.append(std::move(x));
        }
        for (const auto& tx : rejected) {
            auto rit = trad_tx_to_req.find(std::vector<uint8_t>(tx.id.begin(), tx.id.end()));
            if (rit != trad_tx_to_req.end()) requests[rit->second].state = ReqState::Rejected;
            Event x = base(t, "tx_rejected");
            x["tx"] = hex(tx.id);
            x["reason"] = to_string(Err::InsufficientBalance);
            log.append(std::move(x));
        }
        e["height"] = b.height;
        e["proposer"] = b.proposer.to_string();
        e["txs"] = b.tx_digests.size();
        nlohmann::json digests = nlohmann::json::array();
        for (const auto& d : b.tx_digests) digests.push_back(hex(d));
        e["tx_digests"] = std::move(digests);
        e["state_root"] = hex(b.state_root);
    } else {
        Block b = mainnet->produce_block_plain(operator_kp.address, t);
        e["height"] = b.height;
        e["proposer"] = b.proposer.to_string();
        e["txs"] = 0;
        e["state_root"] = hex(b.state_root);
    }
    e["total_supply_wei"] = wei_str(total_supply());
    log.append(std::move(e));
}

void Sim::on_failure(uint64_t t, uint32_t subnet) {
    if (sc.model != SimModel::GaslessFiat || subnet >= worlds.size()) return;
    SubnetWorld& w = *worlds[subnet];
    const ValidatorSet& vs = w.engine->validators();
    if (vs.masternodes.empty()) return;
    Address failed = vs.masternodes[vs.round_robin_cursor % vs.masternodes.size()];
    auto res = w.engine->failover(failed, t);
    Event e = base(t, "failover");
    e["subnet"] = subnet;
    e["failed"] = failed.to_string();
    if (res.ok()) {
        e["promoted"] = res.value().to_string();
    } else {
        e["degraded"] = true;
    }
    e["masternodes"] = w.engine->validators().masternodes.size();
    e["standbys"] = w.engine->validators().standbys.size();
    log.append(std::move(e));
}

void Sim::run_loop() {
    while (!heap.empty()) {
        Ev ev = heap.top();
        heap.pop();
        if (ev.t > duration_ms) continue;
        switch (ev.kind) {
            case EvKind::Arrival: on_arrival(ev.t, ev.arg); break;
            case EvKind::PaymentSettle: on_payment_settle(ev.t, ev.arg); break;
            case EvKind::RelayTick: on_relay_tick(ev.t, ev.subnet); break;
            case EvKind::BlockTick: on_block_tick(ev.t, ev.subnet); break;
            case EvKind::MainnetTick: on_mainnet_tick(ev.t); break;
            case EvKind::Failure: on_failure(ev.t, ev.subnet); break;
        }
    }
}

void Sim::finish() {
    // Final settlement so gas fronted in the last block cycle is compensated.
    if (sc.model == SimModel::GaslessFiat && sc.duration_s > 0) {
        for (uint32_t s = 0; s < uint32_t(worlds.size()); ++s) do_settlement(duration_ms, s);
    }

    // Terminal sweep: anything still pending counts as throttled.
    uint64_t executed = 0, rejected = 0, throttled = 0;
    for (auto& r : requests) {
        if (r.state == ReqState::Pending) r.state = ReqState::Throttled;
        switch (r.state) {
            case ReqState::Executed: ++executed; break;
            case ReqState::Rejected: ++rejected; break;
            case ReqState::Throttled: ++throttled; break;
            case ReqState::Pending: break;
        }
    }

    Event e = base(duration_ms, "end");
    e["requests"] = requests.size();
    e["executed"] = executed;
    e["rejected"] = rejected;
    e["throttled"] = throttled;
    e["model"] = to_string(sc.model);
    e["seed"] = sc.seed;
    e["duration_s"] = sc.duration_s;
    e["subnet_count"] = sc.subnet_count;
    e["genesis_supply_wei"] = wei_str(genesis_supply);
    e["final_supply_wei"] = wei_str(total_supply());
    e["mainnet_blocks"] = mainnet->blocks_sealed();
    e["mint_per_block_wei"] = wei_str(mainnet->config().mint_per_block);

    nlohmann::json rewards = nlohmann::json::array();
    uint64_t subnet_blocks = 0;
    uint64_t checkpoint_epochs = 0;
    if (sc.model == SimModel::GaslessFiat) {
        for (const auto& w : worlds) {
            subnet_blocks += w->engine->height();
            const ValidatorSet& vs = w->engine->validators();
            auto push_val = [&](const Address& a) {
                TokenAmount rw;
                auto it = w->engine->rewards().find(a);
                if (it != w->engine->rewards().end()) rw = it->second;
                rewards.push_back(u128_to_string(rw.wei));
            };
            for (const auto& m : vs.masternodes) push_val(m);
            for (const auto& s : vs.standbys) push_val(s);
        }
        for (const auto& [sid, chain] : mainnet->checkpoints()) checkpoint_epochs += chain.size();
    }
    e["subnet_blocks"] = subnet_blocks;
    e["checkpoint_epochs"] = checkpoint_epochs;
    e["validator_rewards_wei"] = std::move(rewards);
    nlohmann::json relayers = nlohmann::json::array();
    for (size_t s = 0; s < worlds.size(); ++s) {
        const Relayer& rl = *worlds[s]->relayer;
        relayers.push_back({{"subnet", s},
                            {"gas_spent_wei", u128_to_string(rl.gas_spent().wei)},
                            {"compensation_wei", u128_to_string(rl.compensation_received().wei)},
                            {"owed_wei", u128_to_string(rl.owed().wei)},
                            {"margin_bps", rl.margin_bps()}});
    }
    e["relayers"] = std::move(relayers);
    e["balances"] = balances_snapshot();
    log.append(std::move(e));
}

}  // namespace

SimOutcome run(const Scenario& scenario) {
    Sim sim(scenario);
    sim.setup();
    if (scenario.duration_s > 0) sim.run_loop();
    sim.finish();
    SimOutcome out;
    out.log = std::move(sim.log);
    return out;
}

}  // namespace gasless
