#pragma once

#include "coinflow/chain.hpp"
#include "coinflow/minerid.hpp"
#include "coinflow/util.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coinflow {

inline constexpr std::size_t default_fanout_threshold = 10;

enum class PayoutLabel { indirect, direct, immediate, unknown };

std::string_view to_string(PayoutLabel label) noexcept;
std::optional<PayoutLabel> payout_label_from_string(std::string_view text) noexcept;
PayoutLabel label_for_hop(std::uint32_t hop) noexcept;

struct PayoutPattern {
    PayoutLabel label = PayoutLabel::unknown;
    std::optional<std::uint32_t> fanout_hop; // empty iff unknown
    std::size_t fanout_size = 0;
    std::optional<Txid> fanout_txid;

    bool operator==(const PayoutPattern &) const = default;
};

enum class WalkPolicy {
    largest_value, // follow the largest-value output that is spent in time
    all_branches,  // search every branch, keep the nearest fan-out
};

struct PatternOptions {
    std::size_t fanout_threshold = default_fanout_threshold;
    std::int64_t horizon_seconds = default_horizon_seconds;
    WalkPolicy walk = WalkPolicy::largest_value;
};

PayoutPattern classify_pattern(const ChainStore &store, const SpendIndex &index,
                               const Txid &coinbase, const PatternOptions &options = {});

struct TrendPeriod {
    std::string label;
    std::string pool;
    std::vector<Txid> coinbases;  // blocks of the pool under study
    std::vector<Txid> references; // blocks of other pools in the same period
};

struct TrendOptions {
    std::int64_t horizon_seconds = default_horizon_seconds;
    std::optional<std::uint32_t> cutoff;
    double threshold = default_same_pool_threshold;
    double band = default_cutoff_band;
    std::size_t max_pairs = 20;
    std::uint64_t seed = 0;
};

struct TrendPoint {
    std::string period;
    std::string pool;
    std::uint64_t miner_count = 0;
    std::uint64_t blocks = 0; // pool blocks that took part in a pair
    std::uint64_t pairs = 0;

    bool operator==(const TrendPoint &) const = default;
};

// Each pool coinbase is paired with the reference nearest in height; when
// there are more than max_pairs pairs a seeded subset is kept. miner_count
// is the size of the union of the pool-side miner sets.
std::vector<TrendPoint> miner_trend(const ChainStore &store, const SpendIndex &index,
                                    std::span<const TrendPeriod> periods,
                                    const TrendOptions &options = {});

} // namespace coinflow
