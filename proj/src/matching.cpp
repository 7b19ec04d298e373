#include "kmatch/matching.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "kmatch/analytic.hpp"
#include "kmatch/errors.hpp"
#include "kmatch/rng.hpp"
#include "text_io.hpp"

namespace kmatch {

std::vector<Vertex> KMatching::vertices() const
{
    std::vector<Vertex> out;
    out.reserve(2 * edges.size());
    for (const Edge& e : edges) {
        out.push_back(e.u);
        out.push_back(e.v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void KMatching::normalize()
{
    for (Edge& e : edges) {
        e = Edge::between(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
}

bool is_k_matching(const Graph& g, const KMatching& m)
{
    if (m.k < 1) {
        return false;
    }
    constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> owner(g.vertex_count(), kNone);
    for (std::size_t i = 0; i < m.edges.size(); ++i) {
        const Edge& e = m.edges[i];
        if (!g.has_edge(e)) {
            return false;
        }
        for (Vertex x : {e.u, e.v}) {
            // A vertex shared by two members: endpoint distance 0.
            if (owner[x] != kNone) {
                return false;
            }
            owner[x] = static_cast<std::uint32_t>(i);
        }
    }
    BoundedBfs bfs(g);
    for (std::size_t i = 0; i < m.edges.size(); ++i) {
        const Vertex ends[] = {m.edges[i].u, m.edges[i].v};
        const bool clear = bfs.run(ends, m.k - 1, [&](Vertex x, std::uint32_t) {
            return owner[x] == kNone || owner[x] == i;
        });
        if (!clear) {
            return false;
        }
    }
    return true;
}

namespace {

// Marks every vertex within distance k-1 of a matched vertex.
std::vector<char> blocked_vertices(const Graph& g, const KMatching& m)
{
    std::vector<char> blocked(g.vertex_count(), 0);
    const auto verts = m.vertices();
    BoundedBfs bfs(g);
    bfs.run(verts, m.k - 1, [&](Vertex x, std::uint32_t) { blocked[x] = 1; });
    return blocked;
}

} // namespace

bool is_maximal_k_matching(const Graph& g, const KMatching& m)
{
    if (!is_k_matching(g, m)) {
        throw PreconditionError("is_maximal_k_matching: input is not a k-matching of the graph");
    }
    const auto blocked = blocked_vertices(g, m);
    return std::none_of(g.edges().begin(), g.edges().end(),
                        [&](const Edge& e) { return !blocked[e.u] && !blocked[e.v]; });
}

bool gamma_independence_check(const Graph& g, const KMatching& m)
{
    if (!is_maximal_k_matching(g, m)) {
        throw PreconditionError("gamma_independence_check: matching is not maximal");
    }
    const auto verts = m.vertices();
    std::vector<Vertex> far;
    if (m.k >= 2) {
        far = far_vertex_set(g, verts, m.k);
    } else {
        std::vector<char> matched(g.vertex_count(), 0);
        for (Vertex v : verts) {
            matched[v] = 1;
        }
        for (std::size_t v = 0; v < g.vertex_count(); ++v) {
            if (!matched[v]) {
                far.push_back(static_cast<Vertex>(v));
            }
        }
    }
    return !induced_edge_exists(g, far).has_value();
}

KMatching greedy_k_matching(const Graph& g, std::uint32_t k, std::uint64_t seed)
{
    if (k < 1) {
        throw std::invalid_argument("greedy_k_matching requires k >= 1");
    }
    if (g.edge_count() > std::numeric_limits<std::uint32_t>::max()) {
        throw InstanceTooLarge("greedy_k_matching: more than 2^32-1 edges");
    }
    std::vector<std::uint32_t> order(g.edge_count());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = static_cast<std::uint32_t>(i);
    }
    Rng rng(seed);
    rng.shuffle(std::span<std::uint32_t>(order));

    KMatching out;
    out.k = k;
    std::vector<char> blocked(g.vertex_count(), 0);
    BoundedBfs bfs(g);
    const auto edges = g.edges();
    for (std::uint32_t idx : order) {
        const Edge e = edges[idx];
        if (blocked[e.u] || blocked[e.v]) {
            continue;
        }
        out.edges.push_back(e);
        const Vertex ends[] = {e.u, e.v};
        bfs.run(ends, k - 1, [&](Vertex x, std::uint32_t) { blocked[x] = 1; });
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

std::uint64_t generator_target_size(const Graph& g, const GeneratorConfig& cfg)
{
    if (cfg.s_override) {
        if (*cfg.s_override < 1) {
            throw std::invalid_argument("generator target size must be at least 1");
        }
        return *cfg.s_override;
    }
    const double n = static_cast<double>(g.vertex_count());
    const double d = cfg.expected_degree.value_or(
        n > 0 ? 2.0 * static_cast<double>(g.edge_count()) / n : 0.0);
    const double s = std::floor(generator_pair_count(AsymptoticParams::from_degree(n, d, cfg.k)));
    return s < 1.0 ? 1 : static_cast<std::uint64_t>(s);
}

KMatching generator_algorithm(const Graph& g, const GeneratorConfig& cfg, GeneratorStats* stats)
{
    if (cfg.k < 2) {
        throw std::invalid_argument("generator_algorithm requires k >= 2");
    }
    const std::uint64_t s = generator_target_size(g, cfg);
    const std::size_t n = g.vertex_count();
    if (2 * s > n) {
        throw std::invalid_argument("generator needs 2s = " + std::to_string(2 * s) +
                                    " distinct vertices but the graph has " + std::to_string(n));
    }
    const std::uint64_t budget = cfg.max_repair_iterations.value_or(std::max<std::uint64_t>(10 * s, 1000));
    if (budget < 1) {
        throw std::invalid_argument("max_repair_iterations must be at least 1");
    }

    Rng rng(cfg.seed);
    const auto drawn = sample_distinct_vertices(n, static_cast<std::size_t>(2 * s), rng);
    std::vector<std::pair<Vertex, Vertex>> pairs(s);
    for (std::size_t i = 0; i < s; ++i) {
        pairs[i] = {drawn[2 * i], drawn[2 * i + 1]};
    }

    // cover[v] = number of selected vertices within distance k-1 of v.
    std::vector<std::int32_t> cover(n, 0);
    BoundedBfs bfs(g);
    auto adjust = [&](Vertex x, std::int32_t delta) {
        const Vertex src[] = {x};
        bfs.run(src, cfg.k - 1, [&](Vertex y, std::uint32_t) { cover[y] += delta; });
    };
    for (Vertex v : drawn) {
        adjust(v, +1);
    }
    // An edge pair sees exactly its own two endpoints within distance k-1.
    auto valid = [&](const std::pair<Vertex, Vertex>& pr) {
        return g.has_edge(pr.first, pr.second) && cover[pr.first] == 2 && cover[pr.second] == 2;
    };

    GeneratorStats local;
    local.target_size = s;
    local.initial_invalid_pairs = static_cast<std::uint64_t>(
        std::count_if(pairs.begin(), pairs.end(), [&](const auto& pr) { return !valid(pr); }));

    const auto edges = g.edges();
    auto draw_far_edge = [&]() -> std::optional<Edge> {
        if (edges.empty()) {
            return std::nullopt;
        }
        for (int attempt = 0; attempt < 64; ++attempt) {
            const Edge e = edges[static_cast<std::size_t>(rng.below(edges.size()))];
            if (cover[e.u] == 0 && cover[e.v] == 0) {
                return e;
            }
        }
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (cover[edges[i].u] == 0 && cover[edges[i].v] == 0) {
                candidates.push_back(i);
            }
        }
        if (candidates.empty()) {
            return std::nullopt;
        }
        return edges[candidates[static_cast<std::size_t>(rng.below(candidates.size()))]];
    };

    // Valid pairs stay valid: a repaired pair is far from every selected
    // vertex, so the lowest invalid index never decreases.
    std::size_t cursor = 0;
    while (true) {
        while (cursor < pairs.size() && valid(pairs[cursor])) {
            ++cursor;
        }
        if (cursor == pairs.size()) {
            break;
        }
        if (local.repairs == budget) {
            throw GeneratorStalled("generator exceeded " + std::to_string(budget) + " repair iterations");
        }
        ++local.repairs;
        adjust(pairs[cursor].first, -1);
        adjust(pairs[cursor].second, -1);
        const auto e = draw_far_edge();
        if (!e) {
            throw GeneratorStalled("no edge is induced by the vertices at distance >= " +
                                   std::to_string(cfg.k) + " from the selected set");
        }
        pairs[cursor] = {e->u, e->v};
        adjust(e->u, +1);
        adjust(e->v, +1);
    }

    KMatching out;
    out.k = cfg.k;
    out.edges.reserve(pairs.size());
    for (const auto& [a, b] : pairs) {
        out.edges.push_back(Edge::between(a, b));
    }
    std::sort(out.edges.begin(), out.edges.end());
    if (stats) {
        *stats = local;
    }
    return out;
}

namespace {

class ExactSearch {
public:
    ExactSearch(const Graph& g, std::uint32_t k) : edges_(g.edges()), words_((edges_.size() + 63) / 64)
    {
        const std::size_t m = edges_.size();
        std::vector<std::vector<std::uint32_t>> incident(g.vertex_count());
        for (std::size_t i = 0; i < m; ++i) {
            incident[edges_[i].u].push_back(static_cast<std::uint32_t>(i));
            incident[edges_[i].v].push_back(static_cast<std::uint32_t>(i));
        }
        compatible_.assign(m, full_set());
        BoundedBfs bfs(g);
        for (std::size_t i = 0; i < m; ++i) {
            const Vertex ends[] = {edges_[i].u, edges_[i].v};
            // Any edge touching the (k-1)-ball of edge i is within endpoint distance k-1.
            bfs.run(ends, k - 1, [&](Vertex x, std::uint32_t) {
                for (std::uint32_t j : incident[x]) {
                    clear_bit(compatible_[i], j);
                }
            });
        }
    }

    ExactResult solve(std::uint32_t k)
    {
        std::vector<std::uint32_t> chosen;
        search(full_set(), chosen);
        ExactResult result;
        result.size = best_.size();
        result.witness.k = k;
        for (std::uint32_t i : best_) {
            result.witness.edges.push_back(edges_[i]);
        }
        std::sort(result.witness.edges.begin(), result.witness.edges.end());
        return result;
    }

private:
    using Bits = std::vector<std::uint64_t>;

    Bits full_set() const
    {
        Bits b(words_, ~std::uint64_t{0});
        if (const auto tail = edges_.size() % 64; tail != 0) {
            b.back() = (std::uint64_t{1} << tail) - 1;
        }
        return b;
    }

    static void clear_bit(Bits& b, std::size_t i) { b[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

    static std::size_t count(const Bits& b)
    {
        std::size_t c = 0;
        for (auto w : b) {
            c += static_cast<std::size_t>(std::popcount(w));
        }
        return c;
    }

    void search(const Bits& candidates, std::vector<std::uint32_t>& chosen)
    {
        const std::size_t remaining = count(candidates);
        if (remaining == 0) {
            if (chosen.size() > best_.size()) {
                best_ = chosen;
            }
            return;
        }
        if (chosen.size() + remaining <= best_.size()) {
            return;
        }
        std::size_t pivot = 0;
        for (std::size_t w = 0; w < words_; ++w) {
            if (candidates[w] != 0) {
                pivot = w * 64 + static_cast<std::size_t>(std::countr_zero(candidates[w]));
                break;
            }
        }
        Bits with(words_);
        for (std::size_t w = 0; w < words_; ++w) {
            with[w] = candidates[w] & compatible_[pivot][w];
        }
        chosen.push_back(static_cast<std::uint32_t>(pivot));
        search(with, chosen);
        chosen.pop_back();

        Bits without = candidates;
        clear_bit(without, pivot);
        search(without, chosen);
    }

    std::span<const Edge> edges_;
    std::size_t words_;
    std::vector<Bits> compatible_;
    std::vector<std::uint32_t> best_;
};

} // namespace

ExactResult exact_um_k(const Graph& g, std::uint32_t k, std::size_t edge_cap)
{
    if (k < 1) {
        throw std::invalid_argument("exact_um_k requires k >= 1");
    }
    if (g.edge_count() > edge_cap) {
        throw InstanceTooLarge("exact_um_k: " + std::to_string(g.edge_count()) +
                               " edges exceeds the cap of " + std::to_string(edge_cap));
    }
    ExactSearch search(g, k);
    return search.solve(k);
}

void write_matching(std::ostream& os, const KMatching& m)
{
    KMatching sorted = m;
    sorted.normalize();
    os << sorted.k << ' ' << sorted.edges.size() << '\n';
    for (const Edge& e : sorted.edges) {
        os << e.u << ' ' << e.v << '\n';
    }
}

KMatching read_matching(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) {
        throw ParseError("empty matching file");
    }
    const auto [k, m] = detail::parse_pair(line, 1);
    if (k < 1 || k > std::numeric_limits<std::uint32_t>::max()) {
        throw ParseError("line 1: k must be a positive 32-bit integer");
    }
    KMatching out;
    out.k = static_cast<std::uint32_t>(k);
    for (std::uint64_t i = 0; i < m; ++i) {
        const std::string where = "line " + std::to_string(i + 2) + ": ";
        if (!std::getline(is, line)) {
            throw ParseError("expected " + std::to_string(m) + " edges, found " + std::to_string(i));
        }
        const auto [u, v] = detail::parse_pair(line, static_cast<std::size_t>(i + 2));
        if (u >= v || v > std::numeric_limits<Vertex>::max()) {
            throw ParseError(where + "edge must satisfy u < v within the 32-bit id range");
        }
        const Edge e{static_cast<Vertex>(u), static_cast<Vertex>(v)};
        if (!out.edges.empty() && !(out.edges.back() < e)) {
            throw ParseError(where + "edges must be strictly ascending");
        }
        out.edges.push_back(e);
    }
    while (std::getline(is, line)) {
        if (!line.empty()) {
            throw ParseError("trailing content after " + std::to_string(m) + " edges");
        }
    }
    return out;
}

} // namespace kmatch
