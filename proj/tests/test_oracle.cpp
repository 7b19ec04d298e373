#include <doctest.h>

#include <cmath>

#include "kmatch/analytic.hpp"
#include "kmatch/errors.hpp"
#include "kmatch/oracle.hpp"
#include "kmatch/rng.hpp"

using namespace kmatch;
using doctest::Approx;

namespace {

constexpr double kTol = 1e-12;

std::vector<double> probability_grid()
{
    std::vector<double> grid;
    for (int i = 1; i <= 9; ++i) {
        grid.push_back(i / 10.0);
    }
    return grid;
}

} // namespace

TEST_CASE("graph masks decode in lexicographic slot order")
{
    CHECK(GraphMask::slot_count(0) == 0);
    CHECK(GraphMask::slot_count(4) == 6);
    const Graph g = GraphMask{4, 0b100001}.to_graph();
    CHECK(g.edges().size() == 2);
    CHECK(g.edges()[0] == Edge{0, 1});
    CHECK(g.edges()[1] == Edge{2, 3});
}

TEST_CASE("event probability examples")
{
    for (std::size_t n = 0; n <= 5; ++n) {
        CHECK(exact_event_probability(n, 0.37, [](const Graph&) { return true; }) == Approx(1.0).epsilon(kTol));
    }
    for (std::size_t n = 2; n <= 6; ++n) {
        CHECK(exact_event_probability(n, 0.37, [](const Graph& g) { return g.has_edge(0, 1); }) ==
              Approx(0.37).epsilon(kTol));
    }
    CHECK(exact_event_probability(3, 0.5, [](const Graph& g) { return g.edge_count() >= 1; }) ==
          Approx(0.875).epsilon(kTol));
    CHECK_THROWS_AS(exact_event_probability(7, 0.5, [](const Graph&) { return true; }), InstanceTooLarge);
    CHECK_THROWS_AS(exact_event_probability(3, 1.5, [](const Graph&) { return true; }), std::invalid_argument);
}

TEST_CASE("distance probabilities")
{
    CHECK(exact_prob_distance_ge_k(3, 0.5, 2, 0, 1) == Approx(0.5).epsilon(kTol));
    CHECK(exact_prob_distance_ge_k(3, 0.5, 3, 0, 1) == Approx(0.375).epsilon(kTol));
    CHECK_THROWS_AS(exact_prob_distance_ge_k(3, 0.5, 3, 0, 3), std::out_of_range);
}

TEST_CASE("distance at least 2 has probability exactly 1 - p")
{
    for (std::size_t n = 2; n <= 5; ++n) {
        for (double p : probability_grid()) {
            for (Vertex u = 0; u < n; ++u) {
                for (Vertex v = u + 1; v < n; ++v) {
                    CHECK(std::abs(exact_prob_distance_ge_k(n, p, 2, u, v) - (1 - p)) <= kTol);
                }
            }
        }
    }
}

TEST_CASE("vertex-pair probabilities lie in the Janson sandwich")
{
    for (std::size_t n = 2; n <= 5; ++n) {
        for (double p : probability_grid()) {
            for (std::uint32_t k : {2u, 3u}) {
                const auto jb = janson_vertex_pair(AsymptoticParams::from_probability(double(n), p, k));
                for (Vertex u = 0; u < n; ++u) {
                    for (Vertex v = u + 1; v < n; ++v) {
                        const double exact = exact_prob_distance_ge_k(n, p, k, u, v);
                        CHECK(exact >= jb.u - kTol);
                        CHECK(exact <= jb.u_exp_delta + kTol);
                    }
                }
            }
        }
    }
}

TEST_CASE("k-matching probabilities")
{
    const std::vector<Edge> one{{1, 3}};
    CHECK(exact_prob_k_matching(5, 0.3, 3, one) == Approx(0.3).epsilon(kTol));
    const std::vector<Edge> perfect{{0, 1}, {2, 3}};
    CHECK(exact_prob_k_matching(4, 0.5, 2, perfect) == Approx(0.015625).epsilon(kTol));
    for (double p : probability_grid()) {
        CHECK(std::abs(exact_prob_k_matching(4, p, 2, perfect) - p * p * std::pow(1 - p, 4)) <= kTol);
    }
    const std::vector<Edge> overlapping{{0, 1}, {1, 2}};
    CHECK_THROWS_AS(exact_prob_k_matching(4, 0.5, 2, overlapping), PreconditionError);
    CHECK(exact_prob_k_matching(4, 0.5, 2, {}) == Approx(1.0));
}

TEST_CASE("matching probabilities lie in the matching Janson sandwich")
{
    for (std::size_t n : {5u, 6u}) {
        for (double p : probability_grid()) {
            for (std::uint32_t k : {2u, 3u}) {
                const auto params = AsymptoticParams::from_probability(double(n), p, k);
                const auto jb = janson_matching(params, 2);
                const std::vector<Edge> m{{0, 1}, {2, 3}};
                const double conditional = exact_prob_k_matching(n, p, k, m) / (p * p);
                CHECK(conditional >= jb.u - kTol);
                CHECK(conditional <= jb.u_exp_delta + kTol);
            }
        }
    }
}

TEST_CASE("expected number of k-matchings")
{
    CHECK(exact_expected_Xm(3, 0.5, 2, 1) == Approx(1.5).epsilon(kTol));
    CHECK(exact_expected_Xm(4, 0.5, 2, 2) == Approx(0.046875).epsilon(kTol));
    CHECK(exact_expected_Xm(4, 0.5, 2, 0) == 1.0);
    CHECK(exact_expected_Xm(4, 0.5, 2, 3) == 0.0);
    CHECK(complete_graph_matchings(4, 2).size() == 3);
    CHECK(complete_graph_matchings(6, 3).size() == 15);
}

TEST_CASE("expected count = number of matchings times one matching's probability")
{
    for (std::size_t n = 2; n <= 6; ++n) {
        for (std::uint64_t m = 1; 2 * m <= n; ++m) {
            for (std::uint32_t k : {2u, 3u}) {
                const double p = 0.35;
                std::vector<Edge> first;
                for (Vertex i = 0; i < m; ++i) {
                    first.push_back({static_cast<Vertex>(2 * i), static_cast<Vertex>(2 * i + 1)});
                }
                const double expected =
                    std::exp(log_matching_count(double(n), m)) * exact_prob_k_matching(n, p, k, first);
                CHECK(exact_expected_Xm(n, p, k, m) == Approx(expected).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("pair profile tables")
{
    const auto four = exact_pair_profile_table(4, 1);
    CHECK(four.size() == 3);
    CHECK(four.at({0, 0, 1}) == 6);
    CHECK(four.at({1, 0, 0}) == 6);
    CHECK(four.at({0, 1, 0}) == 24);

    const auto two = exact_pair_profile_table(2, 1);
    CHECK(two.size() == 1);
    CHECK(two.at({0, 0, 1}) == 1);

    const auto five = exact_pair_profile_table(5, 1);
    CHECK(five.at({0, 0, 1}) == 10);
    CHECK(five.at({0, 1, 0}) == 60);
    CHECK(five.at({1, 0, 0}) == 30);
}

TEST_CASE("pair profile tables equal the closed-form counts")
{
    for (std::size_t n = 2; n <= 6; ++n) {
        for (std::uint64_t m = 1; m <= 2; ++m) {
            const auto table = exact_pair_profile_table(n, m);
            for (std::uint64_t r = 0; r <= m; ++r) {
                for (std::uint64_t cv = 0; r + cv <= m; ++cv) {
                    const PairProfile profile{r, cv, m - r - cv};
                    if (profile.span() > n) {
                        CHECK(table.count(profile) == 0);
                        continue;
                    }
                    const auto it = table.find(profile);
                    const std::uint64_t counted = it == table.end() ? 0 : it->second;
                    CHECK(pair_count_exact(n, profile) == counted);
                }
            }
        }
    }
}

TEST_CASE("second-moment main term against the exact ratio at n = 5, m = 1")
{
    const double n = 5, p = 0.4;
    const auto table = exact_pair_profile_table(5, 1);
    const double ex = exact_expected_Xm(5, p, 2, 1);
    // Each (M, M) pair contributes P[M is a k-matching] = p.
    const double exact_ratio = static_cast<double>(table.at({0, 0, 1})) * p / (ex * ex);
    CHECK(exact_ratio == Approx(0.25).epsilon(kTol));
    const auto params = AsymptoticParams::from_probability(n, p, 2);
    const double main = std::exp(second_moment_ratio_main_log(params, 1, {0, 0, 1}));
    // The main term uses n^2/2 in place of C(n, 2).
    CHECK(main == Approx(exact_ratio * (n - 1) / n).epsilon(kTol));
}

TEST_CASE("maximum k-matching size distribution")
{
    const auto two = exact_umk_distribution(2, 0.5, 3);
    CHECK(two.size() == 2);
    CHECK(two.at(0) == Approx(0.5));
    CHECK(two.at(1) == Approx(0.5));

    const auto three = exact_umk_distribution(3, 0.5, 2);
    CHECK(three.at(0) == Approx(0.125).epsilon(kTol));
    CHECK(three.at(1) == Approx(0.875).epsilon(kTol));

    for (std::size_t n = 0; n <= 6; ++n) {
        for (std::uint32_t k = 1; k <= 3; ++k) {
            double total = 0;
            for (const auto& [size, pr] : exact_umk_distribution(n, 0.3, k)) {
                total += pr;
            }
            CHECK(total == Approx(1.0).epsilon(kTol));
        }
    }
}

TEST_CASE("oracle results do not depend on the thread count")
{
    auto pred = [](const Graph& g) {
        BoundedBfs bfs(g);
        return bfs.distance(0, 5) >= Distance{3};
    };
    const double one = exact_event_probability(6, 0.23, pred, 1);
    const double four = exact_event_probability(6, 0.23, pred, 4);
    CHECK(one == four);
    CHECK(exact_umk_distribution(6, 0.4, 2, 1) == exact_umk_distribution(6, 0.4, 2, 3));
}

TEST_CASE("Monte Carlo frequencies agree with the oracle")
{
    const std::size_t n = 5;
    const double p = 0.3;
    const double exact = exact_prob_distance_ge_k(n, p, 3, 0, 1);
    const int draws = 20000;
    int hits = 0;
    for (int i = 0; i < draws; ++i) {
        const Graph g = sample_gnp({n, p, derive_seed(2024, static_cast<std::uint64_t>(i))});
        hits += vertex_distance(g, 0, 1) >= Distance{3} ? 1 : 0;
    }
    const double sigma = std::sqrt(exact * (1 - exact) / draws);
    CHECK(std::abs(hits / double(draws) - exact) <= 3 * sigma);
}
