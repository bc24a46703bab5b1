#pragma once

#include "coinflow/circulation.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coinflow {

inline constexpr double default_same_pool_threshold = 0.95;
inline constexpr double default_cutoff_band = 0.05;
inline constexpr std::size_t default_smoothing_window = 3;

// Per-distance comparison data for one side of a pair. Index i is the hop
// distance from that network's own sources.
struct OverlapSide {
    std::vector<std::uint64_t> nodes_at;    // N_i
    std::vector<std::uint64_t> distinct_at; // D_i: absent from the other network
    std::vector<double> ratio_at;           // D_i / N_i, 0 when N_i = 0
    std::uint64_t node_count = 0;
    double overlap_ratio = 0.0;             // overlap_count / node_count
};

struct OverlapProfile {
    OverlapSide a;
    OverlapSide b;
    std::uint64_t overlap_count = 0;
};

OverlapProfile overlap_profile(const CirculationNetwork &a, const CirculationNetwork &b);

enum class PoolRelation { same_pool, different_pool };

struct PoolVerdict {
    PoolRelation relation = PoolRelation::different_pool;
    double overlap_ratio_min = 0.0;
    double threshold = default_same_pool_threshold;
};

// same_pool iff min(overlap ratios) >= threshold; threshold in (0, 1].
PoolVerdict classify_pair(const OverlapProfile &profile,
                          double threshold = default_same_pool_threshold);

std::string_view to_string(PoolRelation relation) noexcept;

// Centered moving average; the window shrinks at both ends.
std::vector<double> smooth_ratios(std::span<const double> ratios,
                                  std::size_t window = default_smoothing_window);

// Smallest distance at which the smoothed ratio curve lies within `band` of
// the median of its tail (the upper half of the distance range). Falls back
// to the distance closest to that median when no bin is inside the band.
std::uint32_t auto_cutoff(std::span<const double> ratios,
                          double band = default_cutoff_band,
                          std::size_t window = default_smoothing_window);

// Leading distance levels that hold exactly one address: a lone mining
// address and any relay addresses before the payout fan-out.
std::uint32_t relay_prefix_length(std::span<const std::uint64_t> nodes_at);

struct MinerIdOptions {
    std::optional<std::uint32_t> cutoff;  // nullopt selects auto_cutoff
    double threshold = default_same_pool_threshold;
    double band = default_cutoff_band;
    std::size_t window = default_smoothing_window;
    bool force = false;                   // run even on a same-pool verdict
    bool skip_relay_prefix = true;
};

struct MinerSet {
    std::vector<std::string> addresses; // sorted
    std::string label;
    std::uint32_t cutoff = 0;
    std::uint32_t relay_prefix = 0;
};

struct MinerIdResult {
    MinerSet a;
    MinerSet b;
    OverlapProfile profile;
    PoolVerdict verdict;
};

// Miner candidates are addresses present in one network only, at distance
// <= cutoff in their own network, past the relay prefix. Throws
// errc::same_pool_pair on a same-pool verdict unless options.force is set.
MinerIdResult identify_miners(const CirculationNetwork &a, const CirculationNetwork &b,
                              const MinerIdOptions &options = {});

} // namespace coinflow
