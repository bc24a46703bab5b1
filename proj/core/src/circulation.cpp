#include "coinflow/circulation.hpp"
#include "coinflow/error.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace coinflow {

namespace {

constexpr std::uint32_t unreached = std::numeric_limits<std::uint32_t>::max();

std::uint64_t edge_key(NodeId from, NodeId to) noexcept
{
    return static_cast<std::uint64_t>(from) << 32 | to;
}

// Multi-source BFS over a sorted edge list. Nodes not reachable keep
// `unreached`.
std::vector<std::uint32_t> bfs_distances(std::size_t node_count, const std::vector<NetworkEdge> &edges,
                                         const std::vector<NodeId> &sources)
{
    std::vector<std::size_t> offsets(node_count + 1, 0);
    for (const auto &e : edges)
        ++offsets[e.from + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<NodeId> targets(edges.size());
    {
        std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
        for (const auto &e : edges)
            targets[fill[e.from]++] = e.to;
    }

    std::vector<std::uint32_t> dist(node_count, unreached);
    std::deque<NodeId> queue;
    for (NodeId s : sources) {
        if (dist[s] != 0) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        for (std::size_t k = offsets[u]; k < offsets[u + 1]; ++k) {
            const NodeId v = targets[k];
            if (dist[v] == unreached) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

void sort_and_merge(std::vector<NetworkEdge> &edges)
{
    std::sort(edges.begin(), edges.end(), [](const NetworkEdge &x, const NetworkEdge &y) {
        return edge_key(x.from, x.to) < edge_key(y.from, y.to);
    });
    std::vector<NetworkEdge> merged;
    merged.reserve(edges.size());
    for (const auto &e : edges) {
        if (!merged.empty() && merged.back().from == e.from && merged.back().to == e.to)
            merged.back().multiplicity += e.multiplicity;
        else
            merged.push_back(e);
    }
    edges = std::move(merged);
}

} // namespace

std::optional<NodeId> CirculationNetwork::index_of(std::string_view address) const
{
    auto it = std::lower_bound(nodes.begin(), nodes.end(), address,
                               [](const std::string &n, std::string_view a) { return n < a; });
    if (it == nodes.end() || *it != address)
        return std::nullopt;
    return static_cast<NodeId>(it - nodes.begin());
}

std::vector<std::string> CirculationNetwork::source_addresses() const
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (distance[i] == 0)
            out.push_back(nodes[i]);
    return out;
}

std::uint32_t CirculationNetwork::max_distance() const noexcept
{
    return distance.empty() ? 0 : *std::max_element(distance.begin(), distance.end());
}

CirculationNetwork make_network(std::vector<std::pair<std::string, std::uint32_t>> nodes,
                                const std::vector<std::pair<std::string, std::string>> &edges)
{
    std::sort(nodes.begin(), nodes.end());
    CirculationNetwork net;
    net.nodes.reserve(nodes.size());
    net.distance.reserve(nodes.size());
    for (auto &[addr, dist] : nodes) {
        if (addr.empty())
            throw error(errc::invalid_argument, "empty node address");
        if (!net.nodes.empty() && net.nodes.back() == addr)
            throw error(errc::invalid_argument, "node listed twice: " + addr);
        net.nodes.push_back(std::move(addr));
        net.distance.push_back(dist);
    }
    net.edges.reserve(edges.size());
    for (const auto &[from, to] : edges) {
        const auto u = net.index_of(from);
        const auto v = net.index_of(to);
        if (!u || !v)
            throw error(errc::invalid_argument, "edge endpoint not among nodes: " + (u ? to : from));
        net.edges.push_back({*u, *v, 1});
    }
    sort_and_merge(net.edges);
    return net;
}

CirculationNetwork build_circulation_network(const ChainStore &store, const SpendIndex &index,
                                             const Txid &coinbase, std::int64_t horizon_seconds)
{
    if (horizon_seconds <= 0)
        throw error(errc::invalid_argument, "horizon must be positive");
    const auto root = store.find(coinbase);
    if (!root)
        throw error(errc::unknown_txid, "unknown txid " + coinbase.hex());
    const Transaction &cb = store.at(*root);
    if (!cb.coinbase)
        throw error(errc::not_a_coinbase, coinbase.hex() + " is not a coinbase");

    const std::int64_t limit = cb.time > std::numeric_limits<std::int64_t>::max() - horizon_seconds
                                   ? std::numeric_limits<std::int64_t>::max()
                                   : cb.time + horizon_seconds;

    // Local ids in discovery order; renumbered to address order at the end.
    std::unordered_map<std::string_view, NodeId> local;
    std::vector<std::string_view> names;
    auto intern = [&](std::string_view addr) {
        auto [it, inserted] = local.try_emplace(addr, static_cast<NodeId>(names.size()));
        if (inserted)
            names.push_back(addr);
        return it->second;
    };

    std::vector<NodeId> sources;
    for (const auto &out : cb.outputs)
        sources.push_back(intern(out.address));

    std::unordered_map<std::uint64_t, std::uint32_t> edge_counts;
    std::vector<bool> visited(store.size(), false);
    std::deque<TxIndex> queue{*root};
    visited[*root] = true;
    std::size_t traced = 1;

    while (!queue.empty()) {
        const TxIndex pi = queue.front();
        queue.pop_front();
        const Transaction &prev = store.at(pi);
        for (std::uint32_t j = 0; j < prev.outputs.size(); ++j) {
            const auto si = index.spender(pi, j);
            if (!si)
                continue;
            const Transaction &next = store.at(*si);
            if (next.time > limit)
                continue;
            const NodeId u = intern(prev.outputs[j].address);
            for (const auto &out : next.outputs)
                ++edge_counts[edge_key(u, intern(out.address))];
            if (!visited[*si]) {
                visited[*si] = true;
                ++traced;
                queue.push_back(*si);
            }
        }
    }

    std::vector<NodeId> order(names.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](NodeId x, NodeId y) { return names[x] < names[y]; });
    std::vector<NodeId> remap(names.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        remap[order[i]] = static_cast<NodeId>(i);

    CirculationNetwork net;
    net.tx_count = traced;
    net.horizon_seconds = horizon_seconds;
    net.nodes.reserve(names.size());
    for (NodeId id : order)
        net.nodes.emplace_back(names[id]);
    net.edges.reserve(edge_counts.size());
    for (const auto &[key, count] : edge_counts)
        net.edges.push_back({remap[key >> 32], remap[key & 0xffffffffu], count});
    sort_and_merge(net.edges);

    for (auto &s : sources)
        s = remap[s];
    net.distance = bfs_distances(net.nodes.size(), net.edges, sources);
    return net;
}

CirculationNetwork restrict_to_distance(const CirculationNetwork &net, std::uint32_t max_distance)
{
    std::vector<NodeId> remap(net.nodes.size(), static_cast<NodeId>(-1));
    CirculationNetwork out;
    out.tx_count = net.tx_count;
    out.horizon_seconds = net.horizon_seconds;
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
        if (net.distance[i] > max_distance)
            continue;
        remap[i] = static_cast<NodeId>(out.nodes.size());
        out.nodes.push_back(net.nodes[i]);
        out.distance.push_back(net.distance[i]);
    }
    for (const auto &e : net.edges) {
        if (remap[e.from] != static_cast<NodeId>(-1) && remap[e.to] != static_cast<NodeId>(-1))
            out.edges.push_back({remap[e.from], remap[e.to], e.multiplicity});
    }
    return out;
}

} // namespace coinflow
