#include "coinflow/payout.hpp"
#include "coinflow/circulation.hpp"
#include "coinflow/error.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <unordered_map>

namespace coinflow {

std::string_view to_string(PayoutLabel label) noexcept
{
    switch (label) {
    case PayoutLabel::indirect: return "indirect";
    case PayoutLabel::direct: return "direct";
    case PayoutLabel::immediate: return "immediate";
    case PayoutLabel::unknown: return "unknown";
    }
    return "unknown";
}

std::optional<PayoutLabel> payout_label_from_string(std::string_view text) noexcept
{
    for (auto label : {PayoutLabel::indirect, PayoutLabel::direct, PayoutLabel::immediate, PayoutLabel::unknown})
        if (to_string(label) == text)
            return label;
    return std::nullopt;
}

PayoutLabel label_for_hop(std::uint32_t hop) noexcept
{
    switch (hop) {
    case 0: return PayoutLabel::immediate;
    case 1: return PayoutLabel::direct;
    default: return PayoutLabel::indirect;
    }
}

namespace {

PayoutPattern found(const Transaction &tx, std::uint32_t hop)
{
    return {label_for_hop(hop), hop, tx.outputs.size(), tx.txid};
}

std::int64_t horizon_limit(std::int64_t start, std::int64_t horizon)
{
    return start > std::numeric_limits<std::int64_t>::max() - horizon ? std::numeric_limits<std::int64_t>::max()
                                                                       : start + horizon;
}

PayoutPattern walk_largest(const ChainStore &store, const SpendIndex &index, TxIndex root,
                           const PatternOptions &options)
{
    const std::int64_t limit = horizon_limit(store.at(root).time, options.horizon_seconds);
    std::set<TxIndex> seen{root};
    TxIndex cur = root;
    for (std::uint32_t hop = 0;; ++hop) {
        const Transaction &tx = store.at(cur);
        if (tx.outputs.size() >= options.fanout_threshold)
            return found(tx, hop);

        std::optional<TxIndex> next;
        std::uint64_t best_value = 0;
        for (std::uint32_t j = 0; j < tx.outputs.size(); ++j) {
            const auto s = index.spender(cur, j);
            if (!s || store.at(*s).time > limit)
                continue;
            if (!next || tx.outputs[j].value > best_value) {
                next = s;
                best_value = tx.outputs[j].value;
            }
        }
        if (!next || !seen.insert(*next).second)
            return {};
        cur = *next;
    }
}

PayoutPattern walk_all(const ChainStore &store, const SpendIndex &index, TxIndex root, const PatternOptions &options)
{
    const std::int64_t limit = horizon_limit(store.at(root).time, options.horizon_seconds);
    std::set<TxIndex> seen{root};
    std::vector<TxIndex> level{root};
    for (std::uint32_t hop = 0; !level.empty(); ++hop) {
        std::optional<TxIndex> best;
        for (TxIndex t : level) {
            const auto outs = store.at(t).outputs.size();
            if (outs >= options.fanout_threshold && (!best || outs > store.at(*best).outputs.size()))
                best = t;
        }
        if (best)
            return found(store.at(*best), hop);

        std::vector<TxIndex> next_level;
        for (TxIndex t : level) {
            const auto &tx = store.at(t);
            for (std::uint32_t j = 0; j < tx.outputs.size(); ++j) {
                const auto s = index.spender(t, j);
                if (s && store.at(*s).time <= limit && seen.insert(*s).second)
                    next_level.push_back(*s);
            }
        }
        std::sort(next_level.begin(), next_level.end());
        level = std::move(next_level);
    }
    return {};
}

} // namespace

PayoutPattern classify_pattern(const ChainStore &store, const SpendIndex &index, const Txid &coinbase,
                               const PatternOptions &options)
{
    if (options.fanout_threshold < 2)
        throw error(errc::invalid_argument, "fan-out threshold must be at least 2");
    if (options.horizon_seconds <= 0)
        throw error(errc::invalid_argument, "horizon must be positive");
    const auto root = store.find(coinbase);
    if (!root)
        throw error(errc::unknown_txid, "unknown txid " + coinbase.hex());
    if (!store.at(*root).coinbase)
        throw error(errc::not_a_coinbase, coinbase.hex() + " is not a coinbase");
    return options.walk == WalkPolicy::largest_value ? walk_largest(store, index, *root, options)
                                                     : walk_all(store, index, *root, options);
}

namespace {

struct Pair {
    Txid pool_block;
    Txid reference;
};

std::vector<Pair> pair_period(const ChainStore &store, const TrendPeriod &period, const TrendOptions &options)
{
    std::vector<std::pair<std::uint64_t, Txid>> refs;
    for (const auto &r : period.references)
        refs.emplace_back(store.get(r).height, r);
    std::sort(refs.begin(), refs.end());

    std::vector<std::pair<std::uint64_t, Txid>> blocks;
    for (const auto &c : period.coinbases)
        blocks.emplace_back(store.get(c).height, c);
    std::sort(blocks.begin(), blocks.end());
    blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());

    std::vector<Pair> pairs;
    for (const auto &[height, txid] : blocks) {
        auto it = std::lower_bound(refs.begin(), refs.end(), std::make_pair(height, Txid{}));
        // Nearest reference; ties go to the lower height.
        auto pick = it;
        if (it == refs.end() || (it != refs.begin() && height - std::prev(it)->first <= it->first - height))
            pick = std::prev(it);
        pairs.push_back({txid, pick->second});
    }

    if (pairs.size() > options.max_pairs) {
        auto key = [&](const Pair &p) { return splitmix64(options.seed ^ TxidHash{}(p.pool_block)); };
        std::stable_sort(pairs.begin(), pairs.end(), [&](const Pair &x, const Pair &y) { return key(x) < key(y); });
        pairs.resize(options.max_pairs);
        std::sort(pairs.begin(), pairs.end(),
                  [&](const Pair &x, const Pair &y) { return store.get(x.pool_block).height < store.get(y.pool_block).height; });
    }
    return pairs;
}

} // namespace

std::vector<TrendPoint> miner_trend(const ChainStore &store, const SpendIndex &index,
                                    std::span<const TrendPeriod> periods, const TrendOptions &options)
{
    std::vector<std::vector<Pair>> all_pairs;
    for (const auto &period : periods) {
        if (period.coinbases.size() < 2)
            throw error(errc::insufficient_coinbases, "period '" + period.label + "' needs at least 2 pool coinbases");
        if (period.references.empty())
            throw error(errc::insufficient_coinbases, "period '" + period.label + "' has no reference coinbases");
        all_pairs.push_back(pair_period(store, period, options));
    }

    std::vector<Txid> needed;
    for (const auto &pairs : all_pairs)
        for (const auto &p : pairs) {
            needed.push_back(p.pool_block);
            needed.push_back(p.reference);
        }
    std::sort(needed.begin(), needed.end());
    needed.erase(std::unique(needed.begin(), needed.end()), needed.end());

    std::vector<CirculationNetwork> nets(needed.size());
    parallel_for(needed.size(), [&](std::size_t i) {
        nets[i] = build_circulation_network(store, index, needed[i], options.horizon_seconds);
    });
    auto net_of = [&](const Txid &id) -> const CirculationNetwork & {
        return nets[static_cast<std::size_t>(std::lower_bound(needed.begin(), needed.end(), id) - needed.begin())];
    };

    MinerIdOptions mopts;
    mopts.cutoff = options.cutoff;
    mopts.threshold = options.threshold;
    mopts.band = options.band;

    std::vector<TrendPoint> points;
    for (std::size_t p = 0; p < periods.size(); ++p) {
        std::set<std::string> miners;
        for (const auto &pair : all_pairs[p]) {
            try {
                const auto result = identify_miners(net_of(pair.pool_block), net_of(pair.reference), mopts);
                miners.insert(result.a.addresses.begin(), result.a.addresses.end());
            } catch (const error &e) {
                if (e.code() != errc::same_pool_pair)
                    throw;
            }
        }
        TrendPoint point;
        point.period = periods[p].label;
        point.pool = periods[p].pool;
        point.miner_count = miners.size();
        point.blocks = all_pairs[p].size();
        point.pairs = all_pairs[p].size();
        points.push_back(std::move(point));
    }
    return points;
}

} // namespace coinflow
