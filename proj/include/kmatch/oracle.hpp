#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>

#include "kmatch/analytic.hpp"
#include "kmatch/graph.hpp"

// Exact probabilities over G(n, p) for tiny n, by enumerating every labeled
// graph. Results do not depend on the thread count: the mask space is cut
// into a fixed set of contiguous chunks, each summed in order with
// compensated summation, and the chunk sums are combined in chunk order.

namespace kmatch {

inline constexpr std::size_t kOracleMaxN = 6;

/// One labeled graph on n <= 6 vertices: bit i is the i-th pair of
/// (0,1), (0,2), ..., (n-2,n-1).
struct GraphMask {
    std::size_t n = 0;
    std::uint32_t bits = 0;

    static std::size_t slot_count(std::size_t n) { return n * (n - (n > 0)) / 2; }
    Graph to_graph() const;
};

using GraphPredicate = std::function<bool(const Graph&)>;

/// Sum of p^|E| (1-p)^(C(n,2)-|E|) over graphs satisfying the predicate.
/// Throws InstanceTooLarge for n > 6.
double exact_event_probability(std::size_t n, double p, const GraphPredicate& predicate,
                               unsigned threads = 1);

double exact_prob_distance_ge_k(std::size_t n, double p, std::uint32_t k, Vertex u, Vertex v,
                                unsigned threads = 1);

/// P[every edge of M is present and M is a k-matching]. Throws
/// PreconditionError if the edges of M share a vertex.
double exact_prob_k_matching(std::size_t n, double p, std::uint32_t k, std::span<const Edge> matching,
                             unsigned threads = 1);

/// Expected number of size-m k-matchings. m = 0 gives 1.
double exact_expected_Xm(std::size_t n, double p, std::uint32_t k, std::uint64_t m,
                         unsigned threads = 1);

/// Ordered pairs (M1, M2) of size-m matchings of K_n in which every edge of
/// either matching meets at most one edge of the other, classified by profile.
std::map<PairProfile, std::uint64_t> exact_pair_profile_table(std::size_t n, std::uint64_t m);

/// Distribution of the maximum k-matching size.
std::map<std::size_t, double> exact_umk_distribution(std::size_t n, double p, std::uint32_t k,
                                                     unsigned threads = 1);

/// All matchings of K_n with exactly m edges, each sorted, in lexicographic order.
std::vector<std::vector<Edge>> complete_graph_matchings(std::size_t n, std::uint64_t m);

} // namespace kmatch
