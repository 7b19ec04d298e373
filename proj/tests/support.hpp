#pragma once

// Independent reference implementations for tests. Nothing here calls the
// library's BFS, matching or sampling code.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "kmatch/graph.hpp"

namespace testing_support {

using kmatch::Edge;
using kmatch::Graph;
using kmatch::Vertex;

// Small xorshift generator, deliberately unrelated to kmatch::Rng.
class TinyRng {
public:
    explicit TinyRng(std::uint64_t seed) : state_(seed * 2685821657736338717ULL + 1) {}
    std::uint64_t next()
    {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 2685821657736338717ULL;
    }
    double unit() { return static_cast<double>(next() >> 11) / 9007199254740992.0; }
    std::size_t below(std::size_t bound) { return static_cast<std::size_t>(next() % bound); }

private:
    std::uint64_t state_;
};

inline Graph random_graph(std::size_t n, double p, TinyRng& rng)
{
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            if (rng.unit() < p) {
                edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
            }
        }
    }
    return Graph::from_edges(n, edges);
}

inline constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

// All-pairs distances by Floyd-Warshall on an adjacency matrix.
inline std::vector<std::vector<std::uint32_t>> all_pairs(const Graph& g)
{
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<std::uint32_t>> dist(n, std::vector<std::uint32_t>(n, kInf));
    for (std::size_t v = 0; v < n; ++v) {
        dist[v][v] = 0;
    }
    for (const Edge& e : g.edges()) {
        dist[e.u][e.v] = dist[e.v][e.u] = 1;
    }
    for (std::size_t w = 0; w < n; ++w) {
        for (std::size_t a = 0; a < n; ++a) {
            if (dist[a][w] == kInf) {
                continue;
            }
            for (std::size_t b = 0; b < n; ++b) {
                if (dist[w][b] != kInf && dist[a][w] + dist[w][b] < dist[a][b]) {
                    dist[a][b] = dist[a][w] + dist[w][b];
                }
            }
        }
    }
    return dist;
}

inline std::uint32_t endpoint_distance(const std::vector<std::vector<std::uint32_t>>& dist, Edge e, Edge f)
{
    return std::min({dist[e.u][f.u], dist[e.u][f.v], dist[e.v][f.u], dist[e.v][f.v]});
}

inline bool brute_is_k_matching(const std::vector<std::vector<std::uint32_t>>& dist, const std::vector<Edge>& m,
                                std::uint32_t k)
{
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            if (endpoint_distance(dist, m[i], m[j]) < k) {
                return false;
            }
        }
    }
    return true;
}

// Largest k-matching by trying every edge subset. Only for <= ~20 edges.
inline std::size_t brute_um_k(const Graph& g, std::uint32_t k)
{
    const auto dist = all_pairs(g);
    const auto edges = g.edges();
    const std::size_t m = edges.size();
    std::size_t best = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        const auto size = static_cast<std::size_t>(__builtin_popcountll(mask));
        if (size <= best) {
            continue;
        }
        std::vector<Edge> chosen;
        for (std::size_t i = 0; i < m; ++i) {
            if (mask >> i & 1) {
                chosen.push_back(edges[i]);
            }
        }
        if (brute_is_k_matching(dist, chosen, k)) {
            best = size;
        }
    }
    return best;
}

// Maximum ordinary matching by exhaustive recursion on the lowest free vertex.
inline std::size_t max_matching(const Graph& g)
{
    const std::size_t n = g.vertex_count();
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, std::size_t from) -> std::size_t {
        std::size_t v = from;
        while (v < n && used[v]) {
            ++v;
        }
        if (v >= n) {
            return 0;
        }
        used[v] = 1;
        std::size_t best = self(self, v + 1); // leave v unmatched
        for (Vertex w : g.neighbors(static_cast<Vertex>(v))) {
            if (!used[w]) {
                used[w] = 1;
                best = std::max(best, 1 + self(self, v + 1));
                used[w] = 0;
            }
        }
        used[v] = 0;
        return best;
    };
    return rec(rec, 0);
}

} // namespace testing_support
