#include "kmatch/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "kmatch/errors.hpp"
#include "kmatch/matching.hpp"

namespace kmatch {

namespace {

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x)
    {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + carry; }
};

void check_size(std::size_t n)
{
    if (n > kOracleMaxN) {
        throw InstanceTooLarge("oracle enumerates at most n = " + std::to_string(kOracleMaxN) +
                               " vertices (got " + std::to_string(n) + ")");
    }
}

void check_probability(double p)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("edge probability must lie in [0, 1]");
    }
}

std::vector<Edge> slot_edges(std::size_t n)
{
    std::vector<Edge> slots;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            slots.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
        }
    }
    return slots;
}

constexpr std::uint64_t kChunks = 64;

struct Outcome {
    std::size_t bucket = 0;
    double value = 0.0; // 0 contributes nothing
};

// Weighted sums over all graphs on n vertices, one per bucket.
template <typename Evaluate>
std::vector<double> measure(std::size_t n, double p, unsigned threads, std::size_t buckets,
                            Evaluate&& evaluate)
{
    check_size(n);
    check_probability(p);
    const std::size_t slots = GraphMask::slot_count(n);
    const std::uint64_t total = std::uint64_t{1} << slots;
    std::vector<double> weight(slots + 1);
    for (std::size_t e = 0; e <= slots; ++e) {
        weight[e] = std::pow(p, static_cast<double>(e)) * std::pow(1.0 - p, static_cast<double>(slots - e));
    }

    const std::uint64_t chunks = std::min(kChunks, total);
    std::vector<std::vector<CompensatedSum>> partial(chunks, std::vector<CompensatedSum>(buckets));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t c = next++; c < chunks; c = next++) {
            const std::uint64_t lo = c * total / chunks;
            const std::uint64_t hi = (c + 1) * total / chunks;
            for (std::uint64_t bits = lo; bits < hi; ++bits) {
                const GraphMask mask{n, static_cast<std::uint32_t>(bits)};
                const Outcome out = evaluate(mask.to_graph());
                if (out.value != 0.0) {
                    partial[c].at(out.bucket).add(out.value * weight[std::popcount(bits)]);
                }
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back(worker);
        }
    }

    std::vector<double> result(buckets);
    for (std::size_t b = 0; b < buckets; ++b) {
        CompensatedSum acc;
        for (const auto& chunk : partial) {
            acc.add(chunk[b].sum);
            acc.add(chunk[b].carry);
        }
        result[b] = acc.value();
    }
    return result;
}

void check_matching_vertices(std::size_t n, std::span<const Edge> matching)
{
    std::vector<char> used(n, 0);
    for (const Edge& e : matching) {
        if (e.u >= e.v || e.v >= n) {
            throw PreconditionError("matching edges must be normalized pairs of vertices below n");
        }
        if (used[e.u] || used[e.v]) {
            throw PreconditionError("matching edges overlap");
        }
        used[e.u] = used[e.v] = 1;
    }
}

void extend_matchings(std::span<const Edge> slots, std::size_t start, std::uint64_t m,
                      std::vector<Edge>& current, std::uint32_t used,
                      std::vector<std::vector<Edge>>& out)
{
    if (current.size() == m) {
        out.push_back(current);
        return;
    }
    for (std::size_t i = start; i < slots.size(); ++i) {
        const Edge e = slots[i];
        const std::uint32_t bits = (1u << e.u) | (1u << e.v);
        if (used & bits) {
            continue;
        }
        current.push_back(e);
        extend_matchings(slots, i + 1, m, current, used | bits, out);
        current.pop_back();
    }
}

} // namespace

Graph GraphMask::to_graph() const
{
    check_size(n);
    std::vector<Edge> edges;
    std::size_t slot = 0;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v, ++slot) {
            if (bits >> slot & 1u) {
                edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
            }
        }
    }
    return Graph::from_sorted_edges(n, std::move(edges));
}

double exact_event_probability(std::size_t n, double p, const GraphPredicate& predicate, unsigned threads)
{
    return measure(n, p, threads, 1, [&](const Graph& g) {
        return Outcome{0, predicate(g) ? 1.0 : 0.0};
    })[0];
}

double exact_prob_distance_ge_k(std::size_t n, double p, std::uint32_t k, Vertex u, Vertex v,
                                unsigned threads)
{
    check_size(n);
    if (u >= n || v >= n) {
        throw std::out_of_range("vertex id out of range");
    }
    return exact_event_probability(
        n, p,
        [&](const Graph& g) {
            BoundedBfs bfs(g);
            return bfs.distance(u, v) >= Distance{k};
        },
        threads);
}

double exact_prob_k_matching(std::size_t n, double p, std::uint32_t k, std::span<const Edge> matching,
                             unsigned threads)
{
    check_size(n);
    check_matching_vertices(n, matching);
    KMatching candidate{k, {matching.begin(), matching.end()}};
    candidate.normalize();
    return exact_event_probability(
        n, p, [&](const Graph& g) { return is_k_matching(g, candidate); }, threads);
}

std::vector<std::vector<Edge>> complete_graph_matchings(std::size_t n, std::uint64_t m)
{
    check_size(n);
    const auto slots = slot_edges(n);
    std::vector<std::vector<Edge>> out;
    std::vector<Edge> current;
    extend_matchings(slots, 0, m, current, 0, out);
    return out;
}

double exact_expected_Xm(std::size_t n, double p, std::uint32_t k, std::uint64_t m, unsigned threads)
{
    check_size(n);
    check_probability(p);
    if (m == 0) {
        return 1.0;
    }
    std::vector<KMatching> candidates;
    for (auto& edges : complete_graph_matchings(n, m)) {
        candidates.push_back(KMatching{k, std::move(edges)});
    }
    if (candidates.empty()) {
        return 0.0;
    }
    return measure(n, p, threads, 1, [&](const Graph& g) {
        std::size_t count = 0;
        for (const auto& c : candidates) {
            count += is_k_matching(g, c) ? 1 : 0;
        }
        return Outcome{0, static_cast<double>(count)};
    })[0];
}

std::map<PairProfile, std::uint64_t> exact_pair_profile_table(std::size_t n, std::uint64_t m)
{
    check_size(n);
    const auto matchings = complete_graph_matchings(n, m);

    // How the edges of `a` meet `b`. ok is false when some edge of `a`
    // touches two edges of `b`.
    struct Touch {
        bool ok = true;
        std::uint64_t shared = 0;
        std::uint64_t single = 0;
    };
    auto classify = [](const std::vector<Edge>& a, const std::vector<Edge>& b) {
        Touch t;
        for (const Edge& e : a) {
            std::size_t touching = 0;
            bool same = false;
            for (const Edge& f : b) {
                if (e == f) {
                    same = true;
                    ++touching;
                } else if (e.u == f.u || e.u == f.v || e.v == f.u || e.v == f.v) {
                    ++touching;
                }
            }
            if (touching > 1) {
                t.ok = false;
            } else if (same) {
                ++t.shared;
            } else if (touching == 1) {
                ++t.single;
            }
        }
        return t;
    };

    std::map<PairProfile, std::uint64_t> table;
    for (const auto& a : matchings) {
        for (const auto& b : matchings) {
            const Touch forward = classify(a, b);
            if (!forward.ok || !classify(b, a).ok) {
                continue;
            }
            const PairProfile profile{m - forward.shared - forward.single, forward.single, forward.shared};
            ++table[profile];
        }
    }
    return table;
}

std::map<std::size_t, double> exact_umk_distribution(std::size_t n, double p, std::uint32_t k,
                                                     unsigned threads)
{
    check_size(n);
    const std::size_t buckets = n / 2 + 1;
    const auto sums = measure(n, p, threads, buckets, [&](const Graph& g) {
        return Outcome{exact_um_k(g, k).size, 1.0};
    });
    std::map<std::size_t, double> out;
    for (std::size_t b = 0; b < buckets; ++b) {
        if (sums[b] != 0.0) {
            out[b] = sums[b];
        }
    }
    return out;
}

} // namespace kmatch
