#include <algorithm>
#include <limits>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "kmatch/errors.hpp"
#include "kmatch/graph.hpp"
#include "text_io.hpp"

namespace kmatch {

void write_edge_list(std::ostream& os, const Graph& g)
{
    os << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const Edge& e : g.edges()) {
        os << e.u << ' ' << e.v << '\n';
    }
}

using detail::parse_pair;

Graph read_edge_list(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) {
        throw ParseError("empty edge list");
    }
    const auto [n, m] = parse_pair(line, 1);
    if (n > std::numeric_limits<Vertex>::max()) {
        throw ParseError("vertex count exceeds the 32-bit id range");
    }
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(m, 1u << 24)));
    for (std::uint64_t i = 0; i < m; ++i) {
        const std::size_t line_no = static_cast<std::size_t>(i) + 2;
        if (!std::getline(is, line)) {
            throw ParseError("expected " + std::to_string(m) + " edges, found " + std::to_string(i));
        }
        const auto [u, v] = parse_pair(line, line_no);
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (u >= n || v >= n) {
            throw ParseError(where + "vertex id out of range");
        }
        if (u == v) {
            throw ParseError(where + "self-loop");
        }
        if (u > v) {
            throw ParseError(where + "edge not normalized (u must be < v)");
        }
        const Edge e{static_cast<Vertex>(u), static_cast<Vertex>(v)};
        if (!edges.empty()) {
            if (edges.back() == e) {
                throw ParseError(where + "duplicate edge");
            }
            if (e < edges.back()) {
                throw ParseError(where + "edges not in ascending order");
            }
        }
        edges.push_back(e);
    }
    while (std::getline(is, line)) {
        if (!line.empty()) {
            throw ParseError("trailing content after " + std::to_string(m) + " edges");
        }
    }
    return Graph::from_sorted_edges(static_cast<std::size_t>(n), std::move(edges));
}

} // namespace kmatch
