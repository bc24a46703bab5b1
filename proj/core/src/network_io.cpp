#include "coinflow/network_io.hpp"
#include "coinflow/error.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace coinflow {

namespace {

std::ifstream open_in(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw error(errc::io_failure, "cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw error(errc::io_failure, "cannot write " + path.string());
    return out;
}

void strip_cr(std::string &line)
{
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
}

} // namespace

void write_nodes(std::ostream &out, const CirculationNetwork &net)
{
    for (std::size_t i = 0; i < net.nodes.size(); ++i)
        out << net.nodes[i] << '\t' << net.distance[i] << '\n';
}

void write_edges(std::ostream &out, const CirculationNetwork &net)
{
    for (const auto &e : net.edges)
        out << net.nodes[e.from] << '\t' << net.nodes[e.to] << '\n';
}

void write_network(const std::filesystem::path &dir, const CirculationNetwork &net)
{
    std::filesystem::create_directories(dir);
    auto nodes = open_out(dir / nodes_file_name);
    write_nodes(nodes, net);
    auto edges = open_out(dir / edges_file_name);
    write_edges(edges, net);
    if (!nodes || !edges)
        throw error(errc::io_failure, "write failed under " + dir.string());
}

CirculationNetwork read_network(std::istream &nodes_in, std::istream &edges_in)
{
    std::vector<std::pair<std::string, std::uint32_t>> nodes;
    std::vector<std::pair<std::string, std::string>> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(nodes_in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty())
            continue;
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos || tab == 0)
            throw malformed_line_error(line_no, "node line must be 'addr<TAB>distance'");
        std::uint32_t dist = 0;
        const char *first = line.data() + tab + 1;
        const char *last = line.data() + line.size();
        const auto [ptr, ec] = std::from_chars(first, last, dist);
        if (ec != std::errc{} || ptr != last || first == last)
            throw malformed_line_error(line_no, "bad distance in node line");
        nodes.emplace_back(line.substr(0, tab), dist);
    }
    line_no = 0;
    while (std::getline(edges_in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty())
            continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
            line.find('\t', tab + 1) != std::string::npos)
            throw malformed_line_error(line_no, "edge line must be 'from<TAB>to'");
        edges.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return make_network(std::move(nodes), edges);
}

CirculationNetwork read_network(const std::filesystem::path &dir)
{
    auto nodes = open_in(dir / nodes_file_name);
    auto edges = open_in(dir / edges_file_name);
    return read_network(nodes, edges);
}

std::vector<std::string> read_address_list(const std::filesystem::path &path)
{
    auto in = open_in(path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (!line.empty())
            out.push_back(line);
    }
    return out;
}

void write_address_list(const std::filesystem::path &path, const std::vector<std::string> &addresses)
{
    auto out = open_out(path);
    for (const auto &a : addresses)
        out << a << '\n';
    if (!out)
        throw error(errc::io_failure, "write failed for " + path.string());
}

} // namespace coinflow
