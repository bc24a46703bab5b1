#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_store.hpp"

#include "coinflow/circulation.hpp"
#include "coinflow/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace coinflow;

namespace {

using EdgeSet = std::set<std::pair<std::string, std::string>>;

EdgeSet edge_names(const CirculationNetwork &net)
{
    EdgeSet out;
    for (const auto &e : net.edges)
        out.insert({net.nodes[e.from], net.nodes[e.to]});
    return out;
}

std::uint32_t dist(const CirculationNetwork &net, const std::string &addr)
{
    const auto id = net.index_of(addr);
    REQUIRE(id);
    return net.distance[*id];
}

} // namespace

TEST_SUITE("circulation") {

TEST_CASE("reference links fixture gives the traced network")
{
    const auto store = ChainStore::from_transactions(fixture::reference_links());
    const auto index = build_spend_index(store);
    const auto net = build_circulation_network(store, index, fixture::id("coinbase"));

    CHECK(net.nodes == std::vector<std::string>{"a", "b", "d", "e", "s"});
    CHECK(edge_names(net) == EdgeSet{{"s", "a"}, {"s", "b"}, {"a", "d"}, {"a", "e"}});
    CHECK(dist(net, "s") == 0);
    CHECK(dist(net, "a") == 1);
    CHECK(dist(net, "b") == 1);
    CHECK(dist(net, "d") == 2);
    CHECK(dist(net, "e") == 2);
    CHECK(net.tx_count == 3);
    CHECK(net.source_addresses() == std::vector<std::string>{"s"});
    CHECK(net.max_distance() == 2);
    CHECK_FALSE(net.contains("c"));
}

TEST_CASE("unspent coinbase gives a lone source")
{
    const auto store = ChainStore::from_transactions({fixture::coinbase("cb", 0, fixture::t0, {{"s", 1}})});
    const auto net = build_circulation_network(store, build_spend_index(store), fixture::id("cb"));
    CHECK(net.nodes == std::vector<std::string>{"s"});
    CHECK(net.edge_count() == 0);
    CHECK(net.tx_count == 1);
}

TEST_CASE("horizon cuts a branch for good")
{
    using fixture::id;
    using fixture::t0;
    const auto store = ChainStore::from_transactions({
        fixture::coinbase("cb", 0, t0, {{"s", 2}, {"s2", 1}}),
        fixture::spend("near", 0, t0 + 86400, {{id("cb"), 0}}, {{"a", 1}}),
        fixture::spend("late", 0, t0 + 9 * 86400, {{id("cb"), 1}}, {{"b", 1}}),
        // Back inside the window by timestamp, but only reachable through "late".
        fixture::spend("after", 0, t0 + 2 * 86400, {{id("late"), 0}}, {{"c", 1}}),
    });
    const auto index = build_spend_index(store);
    const auto net = build_circulation_network(store, index, id("cb"), parse_duration("7d"));
    CHECK(net.nodes == std::vector<std::string>{"a", "s", "s2"});
    CHECK(net.source_addresses() == std::vector<std::string>{"s", "s2"});
    CHECK(net.tx_count == 2);

    const auto wide = build_circulation_network(store, index, id("cb"), parse_duration("10d"));
    CHECK(wide.nodes == std::vector<std::string>{"a", "b", "c", "s", "s2"});

    const auto exact = build_circulation_network(store, index, id("cb"), 86400);
    CHECK(exact.contains("a"));
}

TEST_CASE("self edges and parallel spends")
{
    using fixture::id;
    using fixture::t0;
    const auto store = ChainStore::from_transactions({
        fixture::coinbase("cb", 0, t0, {{"s", 2}, {"s", 2}}),
        fixture::spend("t1", 0, t0 + 1, {{id("cb"), 0}}, {{"s", 1}, {"a", 1}}),
        fixture::spend("t2", 0, t0 + 2, {{id("cb"), 1}}, {{"a", 1}}),
    });
    const auto net = build_circulation_network(store, build_spend_index(store), id("cb"));
    CHECK(edge_names(net) == EdgeSet{{"s", "s"}, {"s", "a"}});
    const auto sa = std::find_if(net.edges.begin(), net.edges.end(),
                                 [&](const NetworkEdge &e) { return net.nodes[e.from] == "s" && net.nodes[e.to] == "a"; });
    CHECK(sa->multiplicity == 2);
    CHECK(dist(net, "a") == 1);
}

TEST_CASE("argument errors")
{
    const auto store = ChainStore::from_transactions(fixture::reference_links());
    const auto index = build_spend_index(store);
    auto code = [&](const Txid &id, std::int64_t horizon) {
        try {
            build_circulation_network(store, index, id, horizon);
        } catch (const error &e) {
            return e.code();
        }
        return errc::io_failure;
    };
    CHECK(code(fixture::id("missing"), 100) == errc::unknown_txid);
    CHECK(code(fixture::id("tx1"), 100) == errc::not_a_coinbase);
    CHECK(code(fixture::id("coinbase"), 0) == errc::invalid_argument);
}

TEST_CASE("matches the closure oracle on random stores")
{
    for (std::uint64_t seed = 1000; seed < 1060; ++seed) {
        testgen::StoreShape shape;
        shape.dangling_rate = 0.05;
        const auto txs = testgen::random_transactions(seed, shape);
        const auto store = ChainStore::from_transactions(txs);
        const auto index = build_spend_index(store);
        for (auto h : store.heights()) {
            for (std::int64_t horizon : {std::int64_t{3600}, 2 * seconds_per_day, 7 * seconds_per_day}) {
                const auto cb = store.coinbase_of(h).txid;
                const auto got = build_circulation_network(store, index, cb, horizon);
                const std::string why = oracle::diff(got, oracle::circulation(txs, cb, horizon));
                CAPTURE(seed);
                CAPTURE(h);
                CHECK_MESSAGE(why.empty(), why);
            }
        }
    }
}

TEST_CASE("monotone in the horizon")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto store = ChainStore::from_transactions(testgen::random_transactions(seed));
        const auto index = build_spend_index(store);
        const auto cb = store.coinbase_of(store.heights().front()).txid;
        CirculationNetwork prev;
        for (std::int64_t horizon : {600L, 3600L, 86400L, 3 * 86400L, 30 * 86400L}) {
            const auto net = build_circulation_network(store, index, cb, horizon);
            CHECK(std::includes(net.nodes.begin(), net.nodes.end(), prev.nodes.begin(), prev.nodes.end()));
            const auto e_prev = edge_names(prev), e_net = edge_names(net);
            CHECK(std::includes(e_net.begin(), e_net.end(), e_prev.begin(), e_prev.end()));
            prev = net;
        }
    }
}

TEST_CASE("independent of transaction order")
{
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto txs = testgen::random_transactions(seed);
        const auto store = ChainStore::from_transactions(txs);
        std::shuffle(txs.begin(), txs.end(), rng);
        const auto shuffled = ChainStore::from_transactions(txs);
        const auto i1 = build_spend_index(store);
        const auto i2 = build_spend_index(shuffled);
        for (auto h : store.heights()) {
            const auto cb = store.coinbase_of(h).txid;
            CHECK(build_circulation_network(store, i1, cb) == build_circulation_network(shuffled, i2, cb));
        }
    }
}

TEST_CASE("restrict_to_distance")
{
    const auto store = ChainStore::from_transactions(fixture::reference_links());
    const auto net = build_circulation_network(store, build_spend_index(store), fixture::id("coinbase"));

    const auto zero = restrict_to_distance(net, 0);
    CHECK(zero.nodes == std::vector<std::string>{"s"});
    CHECK(zero.edge_count() == 0);
    CHECK(restrict_to_distance(net, 2) == net);
    CHECK(restrict_to_distance(net, 50) == net);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        testgen::StoreShape shape;
        shape.max_txs = 50;
        const auto rs = ChainStore::from_transactions(testgen::random_transactions(seed, shape));
        const auto full = build_circulation_network(rs, build_spend_index(rs), rs.coinbase_of(0).txid);
        const auto cut = restrict_to_distance(full, 2);
        std::vector<std::string> keep;
        for (std::size_t i = 0; i < full.node_count(); ++i)
            if (full.distance[i] <= 2)
                keep.push_back(full.nodes[i]);
        CHECK(cut.nodes == keep);
        EdgeSet want;
        for (const auto &[u, v] : edge_names(full))
            if (std::binary_search(keep.begin(), keep.end(), u) && std::binary_search(keep.begin(), keep.end(), v))
                want.insert({u, v});
        CHECK(edge_names(cut) == want);
        for (std::size_t i = 0; i < cut.node_count(); ++i)
            CHECK(cut.distance[i] == dist(full, cut.nodes[i]));
    }
}

TEST_CASE("make_network validation")
{
    CHECK_THROWS_AS(make_network({{"a", 0}, {"a", 1}}, {}), error);
    CHECK_THROWS_AS(make_network({{"a", 0}}, {{"a", "b"}}), error);
    const auto net = make_network({{"b", 1}, {"a", 0}}, {{"a", "b"}, {"a", "b"}});
    CHECK(net.nodes == std::vector<std::string>{"a", "b"});
    REQUIRE(net.edge_count() == 1);
    CHECK(net.edges[0].multiplicity == 2);
}

} // TEST_SUITE
