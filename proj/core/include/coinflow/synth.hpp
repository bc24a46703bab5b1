#pragma once

#include "coinflow/chain.hpp"
#include "coinflow/payout.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace coinflow {

struct MinerStep {
    std::uint64_t from_block = 0;
    std::uint64_t miner_count = 0;
};

struct PoolConfig {
    std::string name;
    std::uint64_t miner_count = 0;
    int pattern = 2; // 1 indirect, 2 direct, 3 immediate
    std::uint64_t payout_delay = 0; // blocks between mining and payout
    double hashrate_share = 0.0;
    // Optional miner-count changes; the step with the largest from_block
    // not after the current block wins over miner_count.
    std::vector<MinerStep> miner_schedule;
};

struct SimConfig {
    std::uint64_t seed = 42;
    std::uint64_t blocks = 500;
    std::int64_t block_interval = 600;
    std::int64_t genesis_time = 1370000000;
    std::uint64_t block_reward = 2'500'000'000;
    std::vector<PoolConfig> pools;

    double miner_churn_rate = 0.0;        // per miner, per block
    double miner_respend_fraction = 0.3;  // payout outputs that enter the economy
    std::uint64_t shared_miners = 0;      // addresses mining for every pool

    std::uint64_t noise_tx_per_block = 50;
    std::uint32_t noise_max_inputs = 3;   // inputs drawn uniformly from 1..max
    double noise_fanout_mean = 2.0;       // geometric output count, support 1..
    std::uint64_t noise_address_count = 100;
    std::uint64_t noise_window = 6;       // blocks an output stays spendable
};

// Three pools with patterns 1, 2, 3, 200 miners each, equal hashrate.
SimConfig default_sim_config();

// Throws errc::invalid_config.
void validate(const SimConfig &config);

SimConfig sim_config_from_json(std::string_view text);
std::string to_json(const SimConfig &config);

struct MinerRange {
    std::uint64_t first_height = 0;
    std::uint64_t last_height = 0;
    std::vector<std::string> miners; // sorted
};

struct PoolTruth {
    std::string name;
    int pattern = 2;
    std::string mining_address;
    std::string relay_address;
    // Consecutive blocks won by the pool sharing one miner set.
    std::vector<MinerRange> ranges;

    const MinerRange *range_at(std::uint64_t height) const;
};

struct BlockTruth {
    std::uint64_t height = 0;
    std::size_t pool = 0;
    PayoutLabel label = PayoutLabel::unknown;
    Txid coinbase;
};

struct ChurnEvent {
    std::uint64_t height = 0;
    std::size_t pool = 0;
    std::string removed;
    std::string added;
};

struct GroundTruth {
    std::vector<PoolTruth> pools;
    std::vector<BlockTruth> blocks; // one per height, ascending
    std::vector<ChurnEvent> churn;

    // Miners paid for the block at `height`.
    const std::vector<std::string> &miners_for_block(std::uint64_t height) const;
};

std::string to_json(const GroundTruth &truth);
GroundTruth ground_truth_from_json(std::string_view text);

struct SimResult {
    ChainStore store;
    GroundTruth truth;
};

// Pure function of the config (seed included). Payouts still pending after
// the last block are settled inside the last block.
SimResult generate_chain(const SimConfig &config);

} // namespace coinflow
