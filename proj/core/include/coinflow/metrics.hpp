#pragma once

#include "coinflow/circulation.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

namespace coinflow {

enum class DegreeDirection { in, out };

struct DegreeHistogram {
    DegreeDirection direction = DegreeDirection::out;
    std::map<std::uint64_t, std::uint64_t> counts; // degree -> nodes

    std::uint64_t total() const;
};

struct NetworkSummary {
    std::uint64_t node_count = 0;
    std::uint64_t edge_count = 0;
    double density = 0.0;
    double avg_degree_undirected = 0.0;
    double clustering = 0.0;
    std::uint32_t max_distance = 0;
};

// avg_degree_undirected and clustering are computed on the undirected
// projection (self-loops dropped, opposite directions merged). Clustering is
// the mean local coefficient over all nodes; nodes of degree < 2 count as 0.
// Density is |E|/(|V|(|V|-1)) over edges that are not self-loops.
NetworkSummary summarize(const CirculationNetwork &net);

DegreeHistogram degree_distribution(const CirculationNetwork &net, DegreeDirection direction);

using DistanceHistogram = std::map<std::uint32_t, std::uint64_t>;

// With a subset, only its members are counted; every member must be a node.
DistanceHistogram distance_distribution(const CirculationNetwork &net);
DistanceHistogram distance_distribution(const CirculationNetwork &net,
                                        std::span<const std::string> subset);

} // namespace coinflow
