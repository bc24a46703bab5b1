#include "oracles.hpp"

#include <cmath>
#include <sstream>

namespace oracle {

using coinflow::Transaction;
using coinflow::Txid;

Network circulation(const std::vector<Transaction> &txs, const Txid &coinbase, std::int64_t horizon)
{
    const Transaction *root = nullptr;
    for (const auto &tx : txs)
        if (tx.txid == coinbase)
            root = &tx;
    if (root == nullptr)
        return {};
    const std::int64_t limit = root->time + horizon;

    std::map<Txid, const Transaction *> member{{coinbase, root}};
    for (bool grew = true; grew;) {
        grew = false;
        for (const auto &tx : txs) {
            if (tx.coinbase || tx.time > limit || member.count(tx.txid))
                continue;
            for (const auto &in : tx.inputs) {
                if (member.count(in.txid)) {
                    member[tx.txid] = &tx;
                    grew = true;
                    break;
                }
            }
        }
    }

    Network net;
    net.tx_count = member.size();
    std::set<std::string> nodes, sources;
    for (const auto &out : root->outputs)
        sources.insert(out.address);
    for (const auto &[id, tx] : member) {
        for (const auto &out : tx->outputs)
            nodes.insert(out.address);
        for (const auto &in : tx->inputs) {
            auto it = member.find(in.txid);
            if (it == member.end())
                continue;
            const std::string &from = it->second->outputs.at(in.vout).address;
            for (const auto &out : tx->outputs)
                net.edges.insert({from, out.address});
        }
    }
    net.distance = distances(sources, net.edges);
    for (const auto &n : nodes)
        if (!net.distance.count(n))
            net.distance[n] = static_cast<std::uint32_t>(-1); // flags a bug: every node is reachable
    return net;
}

std::map<std::string, std::uint32_t> distances(const std::set<std::string> &sources,
                                               const std::set<std::pair<std::string, std::string>> &edges)
{
    std::map<std::string, std::uint32_t> dist;
    for (const auto &s : sources)
        dist[s] = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto &[from, to] : edges) {
            auto f = dist.find(from);
            if (f == dist.end())
                continue;
            const std::uint32_t cand = f->second + 1;
            auto t = dist.find(to);
            if (t == dist.end() || cand < t->second) {
                dist[to] = cand;
                changed = true;
            }
        }
    }
    return dist;
}

std::string diff(const coinflow::CirculationNetwork &got, const Network &want)
{
    std::ostringstream why;
    if (got.node_count() != want.distance.size()) {
        why << "node count " << got.node_count() << " vs " << want.distance.size();
        return why.str();
    }
    for (std::size_t i = 0; i < got.node_count(); ++i) {
        auto it = want.distance.find(got.nodes[i]);
        if (it == want.distance.end())
            return "unexpected node " + got.nodes[i];
        if (it->second != got.distance[i]) {
            why << "distance of " << got.nodes[i] << ": " << got.distance[i] << " vs " << it->second;
            return why.str();
        }
    }
    std::set<std::pair<std::string, std::string>> edges;
    for (const auto &e : got.edges)
        edges.insert({got.nodes[e.from], got.nodes[e.to]});
    if (edges.size() != got.edge_count())
        return "duplicate edges";
    if (edges != want.edges) {
        why << "edge sets differ (" << edges.size() << " vs " << want.edges.size() << ")";
        return why.str();
    }
    if (got.tx_count != want.tx_count) {
        why << "tx_count " << got.tx_count << " vs " << want.tx_count;
        return why.str();
    }
    return {};
}

namespace {

Side side(const coinflow::CirculationNetwork &self, const std::set<std::string> &other)
{
    std::uint32_t top = 0;
    for (auto d : self.distance)
        top = std::max(top, d);
    Side s;
    const std::size_t bins = self.node_count() == 0 ? 0 : top + 1;
    s.nodes_at.assign(bins, 0);
    s.distinct_at.assign(bins, 0);
    for (std::size_t i = 0; i < self.node_count(); ++i) {
        ++s.nodes_at[self.distance[i]];
        if (!other.count(self.nodes[i]))
            ++s.distinct_at[self.distance[i]];
    }
    for (std::size_t i = 0; i < bins; ++i)
        s.ratio_at.push_back(s.nodes_at[i] == 0 ? 0.0
                                                : static_cast<double>(s.distinct_at[i]) / static_cast<double>(s.nodes_at[i]));
    return s;
}

} // namespace

Profile profile(const coinflow::CirculationNetwork &a, const coinflow::CirculationNetwork &b)
{
    const std::set<std::string> va(a.nodes.begin(), a.nodes.end());
    const std::set<std::string> vb(b.nodes.begin(), b.nodes.end());
    Profile p;
    for (const auto &x : va)
        p.overlap += vb.count(x);
    p.a = side(a, vb);
    p.b = side(b, va);
    return p;
}

Summary summary(const coinflow::CirculationNetwork &net)
{
    const std::size_t n = net.node_count();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (const auto &e : net.edges)
        adj[e.from][e.to] = true;

    Summary s;
    std::vector<std::uint64_t> in(n, 0), out(n, 0);
    std::size_t directed = 0, undirected = 0;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (!adj[u][v])
                continue;
            ++out[u];
            ++in[v];
            if (u != v)
                ++directed;
        }
        for (std::size_t v = u + 1; v < n; ++v)
            if (adj[u][v] || adj[v][u])
                ++undirected;
    }
    for (std::size_t u = 0; u < n; ++u) {
        ++s.in_degree[in[u]];
        ++s.out_degree[out[u]];
    }
    if (n >= 2)
        s.density = static_cast<double>(directed) / (static_cast<double>(n) * static_cast<double>(n - 1));
    if (n == 0)
        return s;
    s.avg_degree = 2.0 * static_cast<double>(undirected) / static_cast<double>(n);

    auto linked = [&](std::size_t u, std::size_t v) { return u != v && (adj[u][v] || adj[v][u]); };
    double total = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
        std::vector<std::size_t> nb;
        for (std::size_t v = 0; v < n; ++v)
            if (linked(u, v))
                nb.push_back(v);
        const std::size_t k = nb.size();
        if (k < 2)
            continue;
        std::size_t closed = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                closed += linked(nb[i], nb[j]);
        total += static_cast<double>(closed) / (static_cast<double>(k) * static_cast<double>(k - 1) / 2.0);
    }
    s.clustering = total / static_cast<double>(n);
    return s;
}

bool rel_close(double got, double want, double tol)
{
    if (got == want)
        return true;
    return std::fabs(got - want) <= tol * std::max(std::fabs(got), std::fabs(want));
}

} // namespace oracle
