#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "kmatch/graph.hpp"

namespace kmatch {

/// A set of edges meant to be pairwise at endpoint distance >= k. Membership
/// in a particular graph is checked by the predicates, not stored.
struct KMatching {
    std::uint32_t k = 1;
    /// Normalized and sorted.
    std::vector<Edge> edges;

    std::size_t size() const noexcept { return edges.size(); }

    /// Endpoints of all member edges, sorted.
    std::vector<Vertex> vertices() const;

    /// Normalizes and sorts `edges` in place.
    void normalize();

    friend bool operator==(const KMatching&, const KMatching&) = default;
};

/// True iff every member is an edge of g and every two distinct members have
/// least endpoint distance >= k. Never throws on malformed membership.
bool is_k_matching(const Graph& g, const KMatching& m);

/// True iff no edge of g can be added: some endpoint of every other edge lies
/// within distance k-1 of a matched vertex. Throws PreconditionError if m is
/// not a k-matching of g.
bool is_maximal_k_matching(const Graph& g, const KMatching& m);

/// Claim-style structural check: the vertices at distance >= k from the
/// matching induce no edge. Throws PreconditionError unless m is maximal.
bool gamma_independence_check(const Graph& g, const KMatching& m);

/// Random greedy maximal k-matching: scan edges in a seeded uniform order and
/// keep each one compatible with everything kept so far.
KMatching greedy_k_matching(const Graph& g, std::uint32_t k, std::uint64_t seed);

struct GeneratorConfig {
    std::uint32_t k = 2;
    std::uint64_t seed = 0;
    /// Target size; defaults to floor of the analytic pair count s, clamped to >= 1.
    std::optional<std::uint64_t> s_override;
    /// Expected degree used for the default s; defaults to 2|E|/n.
    std::optional<double> expected_degree;
    /// Defaults to max(10 s, 1000).
    std::optional<std::uint64_t> max_repair_iterations;
};

struct GeneratorStats {
    std::uint64_t target_size = 0;
    std::uint64_t repairs = 0;
    std::uint64_t initial_invalid_pairs = 0;
};

/// Pair-and-repair generator. Draws 2s distinct uniform vertices and pairs
/// them in draw order; then, while some pair is invalid (a non-edge, or within
/// endpoint distance < k of another selected vertex), removes the
/// lowest-index invalid pair and inserts a uniformly random edge induced by
/// the vertices at distance >= k from everything still selected.
///
/// Returns a k-matching of size exactly s. Throws GeneratorStalled if the far
/// set induces no edge or the repair budget is exhausted, and
/// std::invalid_argument if 2s > n or k < 2.
KMatching generator_algorithm(const Graph& g, const GeneratorConfig& cfg,
                              GeneratorStats* stats = nullptr);

/// Target size used by generator_algorithm for this graph and config.
std::uint64_t generator_target_size(const Graph& g, const GeneratorConfig& cfg);

struct ExactResult {
    std::size_t size = 0;
    KMatching witness;
};

inline constexpr std::size_t kDefaultExactEdgeCap = 64;

/// Maximum k-matching by branch and bound over edges in index order. Throws
/// InstanceTooLarge when the graph has more than edge_cap edges.
ExactResult exact_um_k(const Graph& g, std::uint32_t k, std::size_t edge_cap = kDefaultExactEdgeCap);

// Matching text format: "k m\n" then m lines "u v\n", normalized and sorted.
void write_matching(std::ostream& os, const KMatching& m);
KMatching read_matching(std::istream& is);

} // namespace kmatch
