#pragma once

#include "coinflow/chain.hpp"
#include "coinflow/util.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace coinflow {

using NodeId = std::uint32_t;

struct NetworkEdge {
    NodeId from = 0;
    NodeId to = 0;
    // Number of traced spends that produced this (from, to) pair.
    std::uint32_t multiplicity = 1;

    bool operator==(const NetworkEdge &) const = default;
};

// Address-level fresh coin circulation network.
//
// Nodes are kept sorted by address so node ids are canonical: two networks
// with the same content compare equal no matter how they were traced.
// Sources are exactly the nodes at distance 0.
struct CirculationNetwork {
    std::vector<std::string> nodes;
    std::vector<std::uint32_t> distance;
    std::vector<NetworkEdge> edges; // sorted by (from, to), unique
    std::size_t tx_count = 0;
    std::int64_t horizon_seconds = 0;

    std::size_t node_count() const noexcept { return nodes.size(); }
    std::size_t edge_count() const noexcept { return edges.size(); }

    std::optional<NodeId> index_of(std::string_view address) const;
    bool contains(std::string_view address) const { return index_of(address).has_value(); }

    std::vector<std::string> source_addresses() const;
    std::uint32_t max_distance() const noexcept;

    bool operator==(const CirculationNetwork &) const = default;
};

// Normalizes loose parts into a CirculationNetwork: sorts nodes, merges
// duplicate edges (summing multiplicity). Every edge endpoint must be listed
// among the nodes.
CirculationNetwork make_network(std::vector<std::pair<std::string, std::uint32_t>> nodes,
                                const std::vector<std::pair<std::string, std::string>> &edges);

// Traces every spend reachable from the coinbase's outputs whose spending
// transaction is timestamped no later than coinbase time + horizon. A spend
// past the horizon ends its branch. Each traced spend of an output paying
// address u by transaction T adds u -> v for every output address v of T.
// Distances are shortest hop counts from the coinbase output addresses.
CirculationNetwork build_circulation_network(const ChainStore &store, const SpendIndex &index,
                                             const Txid &coinbase,
                                             std::int64_t horizon_seconds = default_horizon_seconds);

// Subgraph induced on nodes with distance <= max_distance.
CirculationNetwork restrict_to_distance(const CirculationNetwork &net, std::uint32_t max_distance);

} // namespace coinflow
