#include "coinflow/synth.hpp"
#include "coinflow/error.hpp"
#include "coinflow/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <set>

namespace coinflow {

namespace {

using nlohmann::json;

// Distribution mappings are written out by hand: the std:: distributions are
// implementation-defined and would break byte-identical dumps across
// standard libraries. The engine itself is fully specified.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t below(std::uint64_t n)
    {
        if (n <= 1)
            return 0;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return p > 0.0 && unit() < p; }

    // Trials until first success, support 1, 2, ...
    std::uint64_t geometric(double mean)
    {
        if (mean <= 1.0)
            return 1;
        const double p = 1.0 / mean;
        std::uint64_t k = 1;
        while (!chance(p) && k < 10'000)
            ++k;
        return k;
    }

private:
    std::mt19937_64 engine_;
};

struct Spendable {
    Outpoint outpoint;
    std::uint64_t value = 0;
    std::uint64_t created = 0;
};

struct Pending {
    std::size_t pool = 0;
    Outpoint coinbase_output;
    std::uint64_t value = 0;
    std::uint64_t due = 0;
    std::vector<std::string> miners;
};

struct PoolState {
    const PoolConfig *cfg = nullptr;
    std::vector<std::string> own;    // churnable miners
    std::vector<std::string> shared; // cross-pool miners
    std::uint64_t next_id = 0;

    std::vector<std::string> miners() const
    {
        std::vector<std::string> all = own;
        all.insert(all.end(), shared.begin(), shared.end());
        return all;
    }
};

std::uint64_t target_miners(const PoolConfig &pool, std::uint64_t block)
{
    std::uint64_t count = pool.miner_count;
    std::uint64_t best_from = 0;
    bool any = false;
    for (const auto &step : pool.miner_schedule) {
        if (step.from_block <= block && (!any || step.from_block >= best_from)) {
            count = step.miner_count;
            best_from = step.from_block;
            any = true;
        }
    }
    return count;
}

PayoutLabel label_for_pattern(int pattern)
{
    switch (pattern) {
    case 1: return PayoutLabel::indirect;
    case 2: return PayoutLabel::direct;
    case 3: return PayoutLabel::immediate;
    default: return PayoutLabel::unknown;
    }
}

class Generator {
public:
    explicit Generator(const SimConfig &config) : cfg_(config), rng_(config.seed), txid_salt_(splitmix64(config.seed ^ 0x636f696e666c6f77ULL))
    {
        for (const auto &p : cfg_.pools) {
            PoolState state;
            state.cfg = &p;
            for (std::uint64_t i = 0; i < cfg_.shared_miners; ++i)
                state.shared.push_back("m-shared-" + std::to_string(i));
            pools_.push_back(std::move(state));

            PoolTruth truth;
            truth.name = p.name;
            truth.pattern = p.pattern;
            truth.mining_address = p.pattern == 3 ? "" : "pool-" + p.name;
            truth.relay_address = p.pattern == 1 ? "relay-" + p.name : "";
            truth_.pools.push_back(std::move(truth));
        }
    }

    SimResult run()
    {
        for (std::uint64_t h = 0; h < cfg_.blocks; ++h)
            block(h, h + 1 == cfg_.blocks);
        return {ChainStore::from_transactions(std::move(txs_)), std::move(truth_)};
    }

private:
    Txid next_txid()
    {
        Txid id;
        for (int k = 0; k < 4; ++k) {
            const std::uint64_t w = splitmix64(txid_salt_ + counter_ * 4 + static_cast<std::uint64_t>(k));
            std::memcpy(id.bytes.data() + 8 * k, &w, 8);
        }
        ++counter_;
        return id;
    }

    std::string new_miner(PoolState &pool)
    {
        return "m-" + pool.cfg->name + "-" + std::to_string(pool.next_id++);
    }

    void update_miners(std::uint64_t h)
    {
        for (std::size_t p = 0; p < pools_.size(); ++p) {
            auto &pool = pools_[p];
            const std::uint64_t target = target_miners(*pool.cfg, h);
            while (pool.own.size() < target)
                pool.own.push_back(new_miner(pool));
            if (pool.own.size() > target)
                pool.own.resize(target);
            if (cfg_.miner_churn_rate > 0.0) {
                for (auto &addr : pool.own) {
                    if (rng_.chance(cfg_.miner_churn_rate)) {
                        std::string fresh = new_miner(pool);
                        truth_.churn.push_back({h, p, addr, fresh});
                        addr = std::move(fresh);
                    }
                }
            }
        }
    }

    std::size_t pick_pool()
    {
        const double u = rng_.unit();
        double acc = 0.0;
        for (std::size_t p = 0; p < pools_.size(); ++p) {
            acc += pools_[p].cfg->hashrate_share;
            if (u < acc)
                return p;
        }
        return pools_.size() - 1;
    }

    void record_range(std::size_t p, std::uint64_t h, std::vector<std::string> miners)
    {
        std::sort(miners.begin(), miners.end());
        auto &ranges = truth_.pools[p].ranges;
        if (!ranges.empty() && ranges.back().miners == miners)
            ranges.back().last_height = h;
        else
            ranges.push_back({h, h, std::move(miners)});
    }

    std::vector<TxOutput> split(std::uint64_t value, const std::vector<std::string> &addresses) const
    {
        std::vector<TxOutput> outs;
        const std::uint64_t n = addresses.size();
        const std::uint64_t share = value / n;
        std::uint64_t rest = value - share * n;
        for (const auto &a : addresses) {
            outs.push_back({a, share + rest});
            rest = 0;
        }
        return outs;
    }

    Transaction &emit(std::uint64_t h, std::vector<Outpoint> inputs, std::vector<TxOutput> outputs)
    {
        Transaction tx;
        tx.txid = next_txid();
        tx.height = h;
        tx.time = cfg_.genesis_time + static_cast<std::int64_t>(h) * cfg_.block_interval;
        tx.coinbase = inputs.empty();
        tx.inputs = std::move(inputs);
        tx.outputs = std::move(outputs);
        txs_.push_back(std::move(tx));
        return txs_.back();
    }

    void release_miner_outputs(const Transaction &tx, std::uint64_t h)
    {
        for (std::uint32_t j = 0; j < tx.outputs.size(); ++j)
            if (rng_.chance(cfg_.miner_respend_fraction))
                spendable_.push_back({{tx.txid, j}, tx.outputs[j].value, h});
    }

    void pay(const Pending &due, std::uint64_t h)
    {
        const auto &pool = pools_[due.pool];
        Outpoint source = due.coinbase_output;
        if (pool.cfg->pattern == 1) {
            const auto &relay = emit(h, {source}, {{truth_.pools[due.pool].relay_address, due.value}});
            source = {relay.txid, 0};
        }
        const auto &payout = emit(h, {source}, split(due.value, due.miners));
        release_miner_outputs(payout, h);
    }

    void noise(std::uint64_t h)
    {
        std::erase_if(spendable_, [&](const Spendable &s) { return s.created + cfg_.noise_window < h; });
        for (std::uint64_t k = 0; k < cfg_.noise_tx_per_block && !spendable_.empty(); ++k) {
            const std::uint64_t want = 1 + rng_.below(cfg_.noise_max_inputs);
            std::vector<Outpoint> inputs;
            std::uint64_t total = 0;
            for (std::uint64_t i = 0; i < want && !spendable_.empty(); ++i) {
                const std::size_t pick = static_cast<std::size_t>(rng_.below(spendable_.size()));
                inputs.push_back(spendable_[pick].outpoint);
                total += spendable_[pick].value;
                spendable_[pick] = spendable_.back();
                spendable_.pop_back();
            }
            const std::uint64_t fanout = rng_.geometric(cfg_.noise_fanout_mean);
            std::vector<std::string> payees;
            for (std::uint64_t i = 0; i < fanout; ++i)
                payees.push_back("n-" + std::to_string(rng_.below(cfg_.noise_address_count)));
            const auto &tx = emit(h, std::move(inputs), split(total, payees));
            for (std::uint32_t j = 0; j < tx.outputs.size(); ++j)
                spendable_.push_back({{tx.txid, j}, tx.outputs[j].value, h});
        }
    }

    void block(std::uint64_t h, bool last)
    {
        update_miners(h);
        const std::size_t p = pick_pool();
        auto &pool = pools_[p];
        auto miners = pool.miners();

        const Transaction *cb = nullptr;
        if (pool.cfg->pattern == 3) {
            cb = &emit(h, {}, split(cfg_.block_reward, miners));
            release_miner_outputs(*cb, h);
        } else {
            cb = &emit(h, {}, {{truth_.pools[p].mining_address, cfg_.block_reward}});
            pending_.push_back({p, {cb->txid, 0}, cfg_.block_reward, h + pool.cfg->payout_delay, miners});
        }
        truth_.blocks.push_back({h, p, label_for_pattern(pool.cfg->pattern), cb->txid});
        record_range(p, h, std::move(miners));

        std::vector<Pending> waiting;
        for (auto &due : pending_) {
            if (last || due.due <= h)
                pay(due, h);
            else
                waiting.push_back(std::move(due));
        }
        pending_ = std::move(waiting);

        noise(h);
    }

    const SimConfig &cfg_;
    Rng rng_;
    std::uint64_t txid_salt_;
    std::uint64_t counter_ = 0;
    std::vector<PoolState> pools_;
    std::vector<Transaction> txs_;
    std::vector<Pending> pending_;
    std::vector<Spendable> spendable_;
    GroundTruth truth_;
};

void check(bool ok, const std::string &what)
{
    if (!ok)
        throw error(errc::invalid_config, what);
}

template <typename T>
void read_opt(const json &j, const char *key, T &out)
{
    if (auto it = j.find(key); it != j.end())
        out = it->get<T>();
}

} // namespace

SimConfig default_sim_config()
{
    SimConfig c;
    const double third = 1.0 / 3.0;
    c.pools = {
        {"A", 200, 1, 3, third, {}},
        {"B", 200, 2, 2, third, {}},
        {"C", 200, 3, 0, third, {}},
    };
    return c;
}

void validate(const SimConfig &c)
{
    check(!c.pools.empty(), "at least one pool is required");
    check(c.block_interval > 0, "block_interval must be positive");
    check(c.block_reward > 0, "block_reward must be positive");
    check(c.miner_churn_rate >= 0.0 && c.miner_churn_rate <= 1.0, "miner_churn_rate must be in [0, 1]");
    check(c.miner_respend_fraction >= 0.0 && c.miner_respend_fraction <= 1.0,
          "miner_respend_fraction must be in [0, 1]");
    check(c.noise_max_inputs >= 1, "noise_max_inputs must be at least 1");
    check(c.noise_fanout_mean >= 1.0, "noise_fanout_mean must be at least 1");
    check(c.noise_tx_per_block == 0 || c.noise_address_count >= 1, "noise needs at least one noise address");
    check(c.noise_window >= 1, "noise_window must be at least 1");

    double share = 0.0;
    std::set<std::string> names;
    for (const auto &p : c.pools) {
        check(!p.name.empty(), "pool name must be non-empty");
        check(names.insert(p.name).second, "duplicate pool name " + p.name);
        check(p.pattern >= 1 && p.pattern <= 3, "pool " + p.name + ": pattern must be 1, 2 or 3");
        check(p.hashrate_share >= 0.0, "pool " + p.name + ": negative hashrate share");
        const bool has_miners = p.miner_count + c.shared_miners > 0 || !p.miner_schedule.empty();
        check(has_miners, "pool " + p.name + " has no miners");
        for (const auto &step : p.miner_schedule)
            check(step.miner_count + c.shared_miners > 0, "pool " + p.name + ": schedule step without miners");
        share += p.hashrate_share;
    }
    check(std::abs(share - 1.0) <= 1e-9, "hashrate shares must sum to 1");
}

SimConfig sim_config_from_json(std::string_view text)
{
    static const std::set<std::string> known = {
        "seed", "blocks", "block_interval", "genesis_time", "block_reward", "pools", "miner_churn_rate",
        "miner_respend_fraction", "shared_miners", "noise_tx_per_block", "noise_max_inputs",
        "noise_fanout_mean", "noise_address_count", "noise_window"};
    SimConfig c = default_sim_config();
    try {
        const json j = json::parse(text);
        check(j.is_object(), "config must be a JSON object");
        for (const auto &[key, value] : j.items())
            check(known.contains(key), "unknown config key '" + key + "'");
        read_opt(j, "seed", c.seed);
        read_opt(j, "blocks", c.blocks);
        read_opt(j, "block_interval", c.block_interval);
        read_opt(j, "genesis_time", c.genesis_time);
        read_opt(j, "block_reward", c.block_reward);
        read_opt(j, "miner_churn_rate", c.miner_churn_rate);
        read_opt(j, "miner_respend_fraction", c.miner_respend_fraction);
        read_opt(j, "shared_miners", c.shared_miners);
        read_opt(j, "noise_tx_per_block", c.noise_tx_per_block);
        read_opt(j, "noise_max_inputs", c.noise_max_inputs);
        read_opt(j, "noise_fanout_mean", c.noise_fanout_mean);
        read_opt(j, "noise_address_count", c.noise_address_count);
        read_opt(j, "noise_window", c.noise_window);
        if (auto it = j.find("pools"); it != j.end()) {
            c.pools.clear();
            for (const auto &pj : *it) {
                PoolConfig p;
                p.name = pj.at("name").get<std::string>();
                read_opt(pj, "miner_count", p.miner_count);
                read_opt(pj, "pattern", p.pattern);
                read_opt(pj, "payout_delay", p.payout_delay);
                read_opt(pj, "hashrate_share", p.hashrate_share);
                if (auto s = pj.find("miner_schedule"); s != pj.end())
                    for (const auto &sj : *s)
                        p.miner_schedule.push_back({sj.at("from_block").get<std::uint64_t>(),
                                                    sj.at("miner_count").get<std::uint64_t>()});
                c.pools.push_back(std::move(p));
            }
        }
    } catch (const json::exception &e) {
        throw error(errc::invalid_config, std::string("bad simulation config: ") + e.what());
    }
    validate(c);
    return c;
}

std::string to_json(const SimConfig &c)
{
    nlohmann::ordered_json j;
    j["seed"] = c.seed;
    j["blocks"] = c.blocks;
    j["block_interval"] = c.block_interval;
    j["genesis_time"] = c.genesis_time;
    j["block_reward"] = c.block_reward;
    auto pools = nlohmann::ordered_json::array();
    for (const auto &p : c.pools) {
        nlohmann::ordered_json pj;
        pj["name"] = p.name;
        pj["miner_count"] = p.miner_count;
        pj["pattern"] = p.pattern;
        pj["payout_delay"] = p.payout_delay;
        pj["hashrate_share"] = p.hashrate_share;
        auto sched = nlohmann::ordered_json::array();
        for (const auto &s : p.miner_schedule)
            sched.push_back({{"from_block", s.from_block}, {"miner_count", s.miner_count}});
        pj["miner_schedule"] = std::move(sched);
        pools.push_back(std::move(pj));
    }
    j["pools"] = std::move(pools);
    j["miner_churn_rate"] = c.miner_churn_rate;
    j["miner_respend_fraction"] = c.miner_respend_fraction;
    j["shared_miners"] = c.shared_miners;
    j["noise_tx_per_block"] = c.noise_tx_per_block;
    j["noise_max_inputs"] = c.noise_max_inputs;
    j["noise_fanout_mean"] = c.noise_fanout_mean;
    j["noise_address_count"] = c.noise_address_count;
    j["noise_window"] = c.noise_window;
    return j.dump(2);
}

const MinerRange *PoolTruth::range_at(std::uint64_t height) const
{
    for (const auto &r : ranges)
        if (r.first_height <= height && height <= r.last_height)
            return &r;
    return nullptr;
}

const std::vector<std::string> &GroundTruth::miners_for_block(std::uint64_t height) const
{
    auto it = std::lower_bound(blocks.begin(), blocks.end(), height,
                               [](const BlockTruth &b, std::uint64_t h) { return b.height < h; });
    if (it == blocks.end() || it->height != height)
        throw error(errc::unknown_height, "no ground truth for height " + std::to_string(height));
    const MinerRange *range = pools.at(it->pool).range_at(height);
    if (!range)
        throw error(errc::unknown_height, "no miner range for height " + std::to_string(height));
    return range->miners;
}

std::string to_json(const GroundTruth &truth)
{
    nlohmann::ordered_json j;
    auto pools = nlohmann::ordered_json::array();
    for (const auto &p : truth.pools) {
        nlohmann::ordered_json pj;
        pj["name"] = p.name;
        pj["pattern"] = p.pattern;
        pj["label"] = to_string(label_for_pattern(p.pattern));
        pj["mining_address"] = p.mining_address;
        pj["relay_address"] = p.relay_address;
        auto ranges = nlohmann::ordered_json::array();
        for (const auto &r : p.ranges)
            ranges.push_back({{"first_height", r.first_height}, {"last_height", r.last_height}, {"miners", r.miners}});
        pj["ranges"] = std::move(ranges);
        pools.push_back(std::move(pj));
    }
    j["pools"] = std::move(pools);
    auto blocks = nlohmann::ordered_json::array();
    for (const auto &b : truth.blocks)
        blocks.push_back({{"height", b.height},
                          {"pool", truth.pools.at(b.pool).name},
                          {"label", to_string(b.label)},
                          {"coinbase", b.coinbase.hex()}});
    j["blocks"] = std::move(blocks);
    auto churn = nlohmann::ordered_json::array();
    for (const auto &c : truth.churn)
        churn.push_back({{"height", c.height}, {"pool", truth.pools.at(c.pool).name}, {"removed", c.removed}, {"added", c.added}});
    j["churn"] = std::move(churn);
    return j.dump(1);
}

GroundTruth ground_truth_from_json(std::string_view text)
{
    GroundTruth truth;
    try {
        const json j = json::parse(text);
        std::map<std::string, std::size_t> index;
        for (const auto &pj : j.at("pools")) {
            PoolTruth p;
            p.name = pj.at("name").get<std::string>();
            p.pattern = pj.at("pattern").get<int>();
            p.mining_address = pj.value("mining_address", "");
            p.relay_address = pj.value("relay_address", "");
            for (const auto &rj : pj.at("ranges"))
                p.ranges.push_back({rj.at("first_height").get<std::uint64_t>(), rj.at("last_height").get<std::uint64_t>(),
                                    rj.at("miners").get<std::vector<std::string>>()});
            index[p.name] = truth.pools.size();
            truth.pools.push_back(std::move(p));
        }
        for (const auto &bj : j.at("blocks")) {
            BlockTruth b;
            b.height = bj.at("height").get<std::uint64_t>();
            b.pool = index.at(bj.at("pool").get<std::string>());
            b.label = payout_label_from_string(bj.at("label").get<std::string>()).value_or(PayoutLabel::unknown);
            b.coinbase = Txid::from_hex(bj.at("coinbase").get<std::string>());
            truth.blocks.push_back(std::move(b));
        }
        for (const auto &cj : j.value("churn", json::array()))
            truth.churn.push_back({cj.at("height").get<std::uint64_t>(), index.at(cj.at("pool").get<std::string>()),
                                   cj.at("removed").get<std::string>(), cj.at("added").get<std::string>()});
    } catch (const std::exception &e) {
        throw error(errc::invalid_argument, std::string("bad ground truth file: ") + e.what());
    }
    return truth;
}

SimResult generate_chain(const SimConfig &config)
{
    validate(config);
    return Generator(config).run();
}

} // namespace coinflow
