#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

namespace kmatch {

using Vertex = std::uint32_t;

/// Undirected edge, always stored with u < v.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    /// Normalizes the endpoint order. Does not reject u == v; callers validate.
    static constexpr Edge between(Vertex a, Vertex b) noexcept
    {
        return a < b ? Edge{a, b} : Edge{b, a};
    }

    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Shortest-path length, or unreachable. Unreachable compares greater than
/// every finite value.
class Distance {
public:
    static constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

    constexpr Distance() = default;
    constexpr explicit Distance(std::uint32_t value) : value_(value) {}
    static constexpr Distance unreachable() { return Distance{}; }

    constexpr bool finite() const { return value_ != kUnreachable; }
    constexpr std::uint32_t value() const { return value_; }

    friend constexpr auto operator<=>(const Distance&, const Distance&) = default;

private:
    std::uint32_t value_ = kUnreachable;
};

std::ostream& operator<<(std::ostream& os, const Distance& d);

/// Immutable simple undirected graph on vertices 0..n-1 in compressed
/// adjacency form. Neighbor lists are sorted; the edge list is kept in
/// lexicographic order and its positions are the canonical edge indices.
class Graph {
public:
    Graph() = default;

    /// Builds a graph from an arbitrary edge list. Throws
    /// std::invalid_argument on self-loops, duplicates or ids >= n.
    static Graph from_edges(std::size_t n, std::vector<Edge> edges);

    /// Builds from an edge list that is already normalized, strictly
    /// ascending and in range. Used by the samplers and readers that
    /// have checked this themselves.
    static Graph from_sorted_edges(std::size_t n, std::vector<Edge> edges);

    std::size_t vertex_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    std::span<const Vertex> neighbors(Vertex v) const
    {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

    std::span<const Edge> edges() const noexcept { return edges_; }

    bool has_edge(Vertex a, Vertex b) const;
    bool has_edge(Edge e) const { return has_edge(e.u, e.v); }

    /// Position of e in edges(), if present.
    std::optional<std::size_t> edge_index(Edge e) const;

    friend bool operator==(const Graph& a, const Graph& b)
    {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<Vertex> adjacency_;
    std::vector<Edge> edges_;
};

// Convenience constructors used throughout tests and examples.
Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph complete_graph(std::size_t n);
Graph star_graph(std::size_t leaves);
Graph empty_graph(std::size_t n);

struct GnpParams {
    std::uint64_t n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
};

/// Samples G(n, p). Pairs are visited in lexicographic order (0,1), (0,2),
/// ..., (n-2,n-1); the gap to the next present pair is drawn as
/// floor(log(1-r) / log(1-p)) with r = Rng(seed).uniform01(). Same seed, same
/// graph. Throws std::invalid_argument if p is outside [0, 1] or n does not
/// fit a Vertex.
Graph sample_gnp(const GnpParams& params);

/// Breadth-first search limited to a radius, reusable across queries on the
/// same graph. Visited marks are epoch-stamped, so each query costs only the
/// size of the ball it explores.
class BoundedBfs {
public:
    explicit BoundedBfs(const Graph& g);

    /// Visits every vertex within `radius` of the sources (multi-source),
    /// calling visit(vertex, distance) once per vertex in nondecreasing
    /// distance order. Duplicate sources are visited once. If visit returns
    /// bool, returning false stops the search; run then returns false.
    template <typename Visit>
    bool run(std::span<const Vertex> sources, std::uint32_t radius, Visit&& visit)
    {
        auto call = [&](Vertex v, std::uint32_t depth) -> bool {
            if constexpr (std::is_same_v<std::invoke_result_t<Visit&, Vertex, std::uint32_t>, bool>) {
                return visit(v, depth);
            } else {
                visit(v, depth);
                return true;
            }
        };
        begin_epoch();
        frontier_.clear();
        for (Vertex s : sources) {
            if (mark(s)) {
                frontier_.push_back(s);
                if (!call(s, 0)) {
                    return false;
                }
            }
        }
        for (std::uint32_t depth = 1; depth <= radius && !frontier_.empty(); ++depth) {
            next_.clear();
            for (Vertex x : frontier_) {
                for (Vertex y : graph_->neighbors(x)) {
                    if (mark(y)) {
                        next_.push_back(y);
                        if (!call(y, depth)) {
                            return false;
                        }
                    }
                }
            }
            frontier_.swap(next_);
        }
        return true;
    }

    /// Shortest-path distance; Unreachable if none exists or if it exceeds cap.
    Distance distance(Vertex u, Vertex v, std::optional<std::uint32_t> cap = std::nullopt);

private:
    void begin_epoch();
    bool mark(Vertex v)
    {
        if (stamp_[v] == epoch_) {
            return false;
        }
        stamp_[v] = epoch_;
        return true;
    }

    const Graph* graph_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
    std::vector<Vertex> frontier_;
    std::vector<Vertex> next_;
};

/// BFS distance between two vertices. With a cap, any true distance above the
/// cap is reported as Unreachable. Throws std::out_of_range for bad ids.
Distance vertex_distance(const Graph& g, Vertex u, Vertex v,
                         std::optional<std::uint32_t> cap = std::nullopt);

/// Number of vertices on a shortest path between two edges: 0 for the same
/// edge, otherwise 1 + the least endpoint-to-endpoint vertex distance.
/// Throws std::invalid_argument if either edge is not in g.
Distance edge_distance(const Graph& g, Edge e, Edge f);

/// Partition of the vertex set by distance to a set S.
struct NeighborhoodLayers {
    /// layers[i] holds the vertices at distance exactly i, for 0 <= i <= k-1.
    std::vector<std::vector<Vertex>> layers;
    /// Vertices at distance >= k from S (including unreachable ones).
    std::vector<Vertex> far;
};

/// All vertex sets are returned sorted. k must be at least 2; S may be empty,
/// in which case every vertex is far.
NeighborhoodLayers neighborhood_layers(const Graph& g, std::span<const Vertex> sources,
                                       std::uint32_t k);

/// The vertices at distance at least k from every vertex of S, sorted.
std::vector<Vertex> far_vertex_set(const Graph& g, std::span<const Vertex> sources,
                                   std::uint32_t k);

/// Lexicographically least edge with both endpoints in S, if any.
std::optional<Edge> induced_edge_exists(const Graph& g, std::span<const Vertex> vertices);

class Rng;

/// `count` distinct vertices of 0..n-1 in uniformly random order. Throws
/// std::invalid_argument if count > n.
std::vector<Vertex> sample_distinct_vertices(std::size_t n, std::size_t count, Rng& rng);

// Edge-list text format: "n m\n" then m lines "u v\n", u < v, ascending.
void write_edge_list(std::ostream& os, const Graph& g);
Graph read_edge_list(std::istream& is);

} // namespace kmatch
