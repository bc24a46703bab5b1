#pragma once

#include "coinflow/circulation.hpp"

#include <filesystem>
#include <iosfwd>

namespace coinflow {

inline constexpr const char *nodes_file_name = "nodes.tsv";
inline constexpr const char *edges_file_name = "edges.tsv";

// "addr\tdistance" per node, address order.
void write_nodes(std::ostream &out, const CirculationNetwork &net);
// "from_addr\tto_addr" per edge, (from, to) order.
void write_edges(std::ostream &out, const CirculationNetwork &net);

void write_network(const std::filesystem::path &dir, const CirculationNetwork &net);

CirculationNetwork read_network(std::istream &nodes, std::istream &edges);
// Reads dir/nodes.tsv and dir/edges.tsv.
CirculationNetwork read_network(const std::filesystem::path &dir);

// One address per line; blank lines skipped.
std::vector<std::string> read_address_list(const std::filesystem::path &path);
void write_address_list(const std::filesystem::path &path, const std::vector<std::string> &addresses);

} // namespace coinflow
