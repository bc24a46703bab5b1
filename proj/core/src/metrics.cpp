#include "coinflow/metrics.hpp"
#include "coinflow/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace coinflow {

std::uint64_t DegreeHistogram::total() const
{
    std::uint64_t sum = 0;
    for (const auto &[degree, count] : counts)
        sum += count;
    return sum;
}

namespace {

struct UndirectedGraph {
    std::vector<std::size_t> offsets;
    std::vector<NodeId> adjacency; // sorted per node
    std::size_t edge_count = 0;

    std::size_t degree(NodeId u) const { return offsets[u + 1] - offsets[u]; }
};

UndirectedGraph undirected_projection(const CirculationNetwork &net)
{
    std::vector<std::pair<NodeId, NodeId>> pairs;
    pairs.reserve(net.edges.size());
    for (const auto &e : net.edges) {
        if (e.from == e.to)
            continue;
        pairs.emplace_back(std::min(e.from, e.to), std::max(e.from, e.to));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    UndirectedGraph g;
    g.edge_count = pairs.size();
    g.offsets.assign(net.node_count() + 1, 0);
    for (const auto &[u, v] : pairs) {
        ++g.offsets[u + 1];
        ++g.offsets[v + 1];
    }
    std::partial_sum(g.offsets.begin(), g.offsets.end(), g.offsets.begin());
    g.adjacency.resize(2 * pairs.size());
    std::vector<std::size_t> fill(g.offsets.begin(), g.offsets.end() - 1);
    for (const auto &[u, v] : pairs) {
        g.adjacency[fill[u]++] = v;
        g.adjacency[fill[v]++] = u;
    }
    for (std::size_t u = 0; u < net.node_count(); ++u)
        std::sort(g.adjacency.begin() + static_cast<std::ptrdiff_t>(g.offsets[u]),
                  g.adjacency.begin() + static_cast<std::ptrdiff_t>(g.offsets[u + 1]));
    return g;
}

// Triangles through each node. Edges are oriented from lower to higher
// (degree, id) rank so each triangle is found once, in O(m^1.5).
std::vector<std::uint64_t> triangles_per_node(const UndirectedGraph &g, std::size_t n)
{
    auto rank_less = [&](NodeId a, NodeId b) {
        const auto da = g.degree(a), db = g.degree(b);
        return da != db ? da < db : a < b;
    };
    std::vector<std::vector<NodeId>> forward(n);
    for (NodeId u = 0; u < n; ++u)
        for (std::size_t k = g.offsets[u]; k < g.offsets[u + 1]; ++k)
            if (rank_less(u, g.adjacency[k]))
                forward[u].push_back(g.adjacency[k]);

    std::vector<std::uint64_t> tri(n, 0);
    std::vector<NodeId> mark(n, static_cast<NodeId>(-1));
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v : forward[u])
            mark[v] = u;
        for (NodeId v : forward[u]) {
            for (NodeId w : forward[v]) {
                if (mark[w] == u) {
                    ++tri[u];
                    ++tri[v];
                    ++tri[w];
                }
            }
        }
    }
    return tri;
}

} // namespace

NetworkSummary summarize(const CirculationNetwork &net)
{
    NetworkSummary s;
    const std::size_t n = net.node_count();
    s.node_count = n;
    s.edge_count = net.edge_count();
    s.max_distance = net.max_distance();
    if (n == 0)
        return s;

    if (n >= 2) {
        const auto loops = static_cast<std::size_t>(
            std::count_if(net.edges.begin(), net.edges.end(), [](const NetworkEdge &e) { return e.from == e.to; }));
        s.density = static_cast<double>(net.edge_count() - loops) /
                    (static_cast<double>(n) * static_cast<double>(n - 1));
    }

    const UndirectedGraph g = undirected_projection(net);
    s.avg_degree_undirected = 2.0 * static_cast<double>(g.edge_count) / static_cast<double>(n);

    const auto tri = triangles_per_node(g, n);
    double sum = 0.0;
    for (NodeId u = 0; u < n; ++u) {
        const double k = static_cast<double>(g.degree(u));
        if (k >= 2)
            sum += 2.0 * static_cast<double>(tri[u]) / (k * (k - 1.0));
    }
    s.clustering = sum / static_cast<double>(n);
    return s;
}

DegreeHistogram degree_distribution(const CirculationNetwork &net, DegreeDirection direction)
{
    std::vector<std::uint64_t> degree(net.node_count(), 0);
    for (const auto &e : net.edges)
        ++degree[direction == DegreeDirection::out ? e.from : e.to];
    DegreeHistogram h;
    h.direction = direction;
    for (auto d : degree)
        ++h.counts[d];
    return h;
}

DistanceHistogram distance_distribution(const CirculationNetwork &net)
{
    DistanceHistogram h;
    for (auto d : net.distance)
        ++h[d];
    return h;
}

DistanceHistogram distance_distribution(const CirculationNetwork &net, std::span<const std::string> subset)
{
    std::set<NodeId> members;
    for (const auto &addr : subset) {
        const auto id = net.index_of(addr);
        if (!id)
            throw error(errc::subset_not_in_network, "address not in network: " + addr);
        members.insert(*id);
    }
    DistanceHistogram h;
    for (NodeId id : members)
        ++h[net.distance[id]];
    return h;
}

} // namespace coinflow
