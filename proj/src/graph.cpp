#include "kmatch/graph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "kmatch/rng.hpp"

namespace kmatch {

std::ostream& operator<<(std::ostream& os, const Distance& d)
{
    if (d.finite()) {
        return os << d.value();
    }
    return os << "unreachable";
}

Graph Graph::from_edges(std::size_t n, std::vector<Edge> edges)
{
    for (Edge& e : edges) {
        if (e.u == e.v) {
            throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
        }
        if (e.u >= n || e.v >= n) {
            throw std::invalid_argument("vertex id out of range in edge (" + std::to_string(e.u) +
                                        ", " + std::to_string(e.v) + ")");
        }
        e = Edge::between(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
        throw std::invalid_argument("duplicate edge (" + std::to_string(dup->u) + ", " +
                                    std::to_string(dup->v) + ")");
    }
    return from_sorted_edges(n, std::move(edges));
}

Graph Graph::from_sorted_edges(std::size_t n, std::vector<Edge> edges)
{
    if (n > std::size_t{std::numeric_limits<Vertex>::max()}) {
        throw std::invalid_argument("vertex count exceeds the 32-bit id range");
    }
    Graph g;
    g.n_ = n;
    g.offsets_.assign(n + 1, 0);
    for (const Edge& e : edges) {
        ++g.offsets_[e.u + 1];
        ++g.offsets_[e.v + 1];
    }
    for (std::size_t v = 0; v < n; ++v) {
        g.offsets_[v + 1] += g.offsets_[v];
    }
    g.adjacency_.resize(2 * edges.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    // Lexicographic edge order fills every list in ascending order: the
    // smaller neighbors of v arrive from earlier rows before row v itself.
    for (const Edge& e : edges) {
        g.adjacency_[cursor[e.u]++] = e.v;
        g.adjacency_[cursor[e.v]++] = e.u;
    }
    g.edges_ = std::move(edges);
    return g;
}

bool Graph::has_edge(Vertex a, Vertex b) const
{
    if (a >= n_ || b >= n_ || a == b) {
        return false;
    }
    if (degree(a) > degree(b)) {
        std::swap(a, b);
    }
    auto nbrs = neighbors(a);
    return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

std::optional<std::size_t> Graph::edge_index(Edge e) const
{
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - edges_.begin());
}

Graph path_graph(std::size_t n)
{
    std::vector<Edge> edges;
    for (std::size_t v = 1; v < n; ++v) {
        edges.push_back({static_cast<Vertex>(v - 1), static_cast<Vertex>(v)});
    }
    return Graph::from_sorted_edges(n, std::move(edges));
}

Graph cycle_graph(std::size_t n)
{
    if (n < 3) {
        throw std::invalid_argument("a cycle needs at least 3 vertices");
    }
    std::vector<Edge> edges;
    for (std::size_t v = 1; v < n; ++v) {
        edges.push_back({static_cast<Vertex>(v - 1), static_cast<Vertex>(v)});
    }
    edges.push_back({0, static_cast<Vertex>(n - 1)});
    return Graph::from_edges(n, std::move(edges));
}

Graph complete_graph(std::size_t n)
{
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
        }
    }
    return Graph::from_sorted_edges(n, std::move(edges));
}

Graph star_graph(std::size_t leaves)
{
    std::vector<Edge> edges;
    for (std::size_t v = 1; v <= leaves; ++v) {
        edges.push_back({0, static_cast<Vertex>(v)});
    }
    return Graph::from_sorted_edges(leaves + 1, std::move(edges));
}

Graph empty_graph(std::size_t n)
{
    return Graph::from_sorted_edges(n, {});
}

Graph sample_gnp(const GnpParams& params)
{
    const double p = params.p;
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("edge probability must lie in [0, 1]");
    }
    if (params.n > std::uint64_t{std::numeric_limits<Vertex>::max()}) {
        throw std::invalid_argument("vertex count exceeds the 32-bit id range");
    }
    const auto n = static_cast<std::size_t>(params.n);
    std::vector<Edge> edges;
    if (n < 2 || p == 0.0) {
        return Graph::from_sorted_edges(n, std::move(edges));
    }
    if (p == 1.0) {
        return complete_graph(n);
    }

    const double total_pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    edges.reserve(static_cast<std::size_t>(total_pairs * p + 6.0 * std::sqrt(total_pairs * p) + 16.0));

    Rng rng(params.seed);
    const double log_q = std::log1p(-p);
    // (u, v) is the last visited pair; row u holds pairs (u, u+1..n-1).
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    const std::uint64_t nn = n;
    while (true) {
        const double gap = std::floor(std::log1p(-rng.uniform01()) / log_q);
        // A gap this large runs past every remaining pair.
        if (!(gap < total_pairs)) {
            break;
        }
        v += static_cast<std::uint64_t>(gap) + 1;
        while (v >= nn && u + 1 < nn) {
            v = v - nn + u + 2;
            ++u;
        }
        if (u + 1 >= nn || v >= nn) {
            break;
        }
        edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    }
    return Graph::from_sorted_edges(n, std::move(edges));
}

BoundedBfs::BoundedBfs(const Graph& g) : graph_(&g), stamp_(g.vertex_count(), 0) {}

void BoundedBfs::begin_epoch()
{
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
}

Distance BoundedBfs::distance(Vertex u, Vertex v, std::optional<std::uint32_t> cap)
{
    if (u == v) {
        return Distance{0};
    }
    const std::uint32_t radius = cap.value_or(Distance::kUnreachable - 1);
    begin_epoch();
    frontier_.assign(1, u);
    mark(u);
    for (std::uint32_t depth = 1; depth <= radius && !frontier_.empty(); ++depth) {
        next_.clear();
        for (Vertex x : frontier_) {
            for (Vertex y : graph_->neighbors(x)) {
                if (y == v) {
                    return Distance{depth};
                }
                if (mark(y)) {
                    next_.push_back(y);
                }
            }
        }
        frontier_.swap(next_);
    }
    return Distance::unreachable();
}

namespace {

void check_vertex(const Graph& g, Vertex v)
{
    if (v >= g.vertex_count()) {
        throw std::out_of_range("vertex " + std::to_string(v) + " not in graph with " +
                                std::to_string(g.vertex_count()) + " vertices");
    }
}

} // namespace

Distance vertex_distance(const Graph& g, Vertex u, Vertex v, std::optional<std::uint32_t> cap)
{
    check_vertex(g, u);
    check_vertex(g, v);
    BoundedBfs bfs(g);
    return bfs.distance(u, v, cap);
}

Distance edge_distance(const Graph& g, Edge e, Edge f)
{
    e = Edge::between(e.u, e.v);
    f = Edge::between(f.u, f.v);
    if (!g.has_edge(e) || !g.has_edge(f)) {
        throw std::invalid_argument("edge_distance: edge not present in graph");
    }
    if (e == f) {
        return Distance{0};
    }
    BoundedBfs bfs(g);
    Distance best = Distance::unreachable();
    const Vertex sources[] = {e.u, e.v};
    // One two-source search yields the least endpoint-to-endpoint distance.
    bfs.run(sources, Distance::kUnreachable - 1, [&](Vertex x, std::uint32_t depth) {
        if (x == f.u || x == f.v) {
            best = Distance{depth + 1};
            return false;
        }
        return true;
    });
    return best;
}

NeighborhoodLayers neighborhood_layers(const Graph& g, std::span<const Vertex> sources,
                                       std::uint32_t k)
{
    if (k < 2) {
        throw std::invalid_argument("neighborhood_layers requires k >= 2");
    }
    for (Vertex s : sources) {
        check_vertex(g, s);
    }
    NeighborhoodLayers out;
    out.layers.resize(k);
    std::vector<char> near(g.vertex_count(), 0);
    BoundedBfs bfs(g);
    bfs.run(sources, k - 1, [&](Vertex x, std::uint32_t depth) {
        out.layers[depth].push_back(x);
        near[x] = 1;
    });
    for (auto& layer : out.layers) {
        std::sort(layer.begin(), layer.end());
    }
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        if (!near[v]) {
            out.far.push_back(static_cast<Vertex>(v));
        }
    }
    return out;
}

std::vector<Vertex> far_vertex_set(const Graph& g, std::span<const Vertex> sources, std::uint32_t k)
{
    return neighborhood_layers(g, sources, k).far;
}

std::vector<Vertex> sample_distinct_vertices(std::size_t n, std::size_t count, Rng& rng)
{
    if (count > n) {
        throw std::invalid_argument("cannot draw " + std::to_string(count) +
                                    " distinct vertices from " + std::to_string(n));
    }
    std::vector<Vertex> out;
    out.reserve(count);
    if (2 * count > n) {
        // Dense draw: partial Fisher-Yates over the whole id range.
        std::vector<Vertex> ids(n);
        for (std::size_t v = 0; v < n; ++v) {
            ids[v] = static_cast<Vertex>(v);
        }
        for (std::size_t i = 0; i < count; ++i) {
            const auto j = i + static_cast<std::size_t>(rng.below(n - i));
            std::swap(ids[i], ids[j]);
            out.push_back(ids[i]);
        }
        return out;
    }
    std::vector<char> taken(n, 0);
    while (out.size() < count) {
        const auto v = static_cast<Vertex>(rng.below(n));
        if (!taken[v]) {
            taken[v] = 1;
            out.push_back(v);
        }
    }
    return out;
}

std::optional<Edge> induced_edge_exists(const Graph& g, std::span<const Vertex> vertices)
{
    std::vector<Vertex> sorted(vertices.begin(), vertices.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<char> member(g.vertex_count(), 0);
    for (Vertex v : sorted) {
        check_vertex(g, v);
        member[v] = 1;
    }
    for (Vertex u : sorted) {
        auto nbrs = g.neighbors(u);
        for (auto it = std::upper_bound(nbrs.begin(), nbrs.end(), u); it != nbrs.end(); ++it) {
            if (member[*it]) {
                return Edge{u, *it};
            }
        }
    }
    return std::nullopt;
}

} // namespace kmatch
