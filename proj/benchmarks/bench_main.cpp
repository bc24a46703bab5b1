#include "coinflow/circulation.hpp"
#include "coinflow/metrics.hpp"
#include "coinflow/minerid.hpp"
#include "coinflow/payout.hpp"
#include "coinflow/synth.hpp"

#include <benchmark/benchmark.h>

using namespace coinflow;

namespace {

const SimResult &world()
{
    static const SimResult sim = [] {
        SimConfig c = default_sim_config();
        c.blocks = 300;
        return generate_chain(c);
    }();
    return sim;
}

const SpendIndex &world_index()
{
    static const SpendIndex index = build_spend_index(world().store);
    return index;
}

void BM_SpendIndex(benchmark::State &state)
{
    const auto &store = world().store;
    for (auto _ : state)
        benchmark::DoNotOptimize(build_spend_index(store));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * store.size()));
}
BENCHMARK(BM_SpendIndex)->Unit(benchmark::kMillisecond);

void BM_BuildNetwork(benchmark::State &state)
{
    const auto &sim = world();
    const auto &index = world_index();
    std::uint64_t h = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_circulation_network(sim.store, index, sim.store.coinbase_of(h).txid));
        h = (h + 1) % 200;
    }
}
BENCHMARK(BM_BuildNetwork)->Unit(benchmark::kMillisecond);

void BM_OverlapProfile(benchmark::State &state)
{
    const auto &sim = world();
    const auto a = build_circulation_network(sim.store, world_index(), sim.store.coinbase_of(10).txid);
    const auto b = build_circulation_network(sim.store, world_index(), sim.store.coinbase_of(11).txid);
    for (auto _ : state)
        benchmark::DoNotOptimize(overlap_profile(a, b));
}
BENCHMARK(BM_OverlapProfile)->Unit(benchmark::kMicrosecond);

void BM_Summarize(benchmark::State &state)
{
    const auto &sim = world();
    const auto net = build_circulation_network(sim.store, world_index(), sim.store.coinbase_of(10).txid);
    for (auto _ : state)
        benchmark::DoNotOptimize(summarize(net));
    state.counters["edges"] = static_cast<double>(net.edge_count());
}
BENCHMARK(BM_Summarize)->Unit(benchmark::kMicrosecond);

void BM_ClassifyPattern(benchmark::State &state)
{
    const auto &sim = world();
    std::uint64_t h = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(classify_pattern(sim.store, world_index(), sim.store.coinbase_of(h).txid));
        h = (h + 1) % 200;
    }
}
BENCHMARK(BM_ClassifyPattern)->Unit(benchmark::kMicrosecond);

void BM_Generate(benchmark::State &state)
{
    SimConfig c = default_sim_config();
    c.blocks = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_chain(c));
}
BENCHMARK(BM_Generate)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
