#pragma once

#include <compare>
#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

// Closed-form size bounds, probability main terms and counting formulas for
// distance-k matchings in G(n, p). Natural logarithms throughout; nothing is
// floored here, callers floor when a value is used as a count.

namespace kmatch {

/// (n, d, p, k) with d = n p and p_d = d^(k-1) / n.
struct AsymptoticParams {
    double n = 0;
    double d = 0;
    double p = 0;
    std::uint32_t k = 2;
    double p_d = 0;

    static AsymptoticParams from_degree(double n, double d, std::uint32_t k);
    static AsymptoticParams from_probability(double n, double p, std::uint32_t k);
};

struct BoundSet {
    double upper = 0;            // k n ln d / (2 d^(k-1))
    double lower_maximal = 0;    // (k-1) n ln d / (4 d^(k-1))
    double generator_target = 0; // k n ln d / (4 d^(k-1))
    double m_star = 0;           // (k-1-eps) n ln d / (4 d^(k-1))
    double s = 0;                // n / (4 d^(k-1)) [k ln d - 3 ln(k ln d)]
    double far_target = 0;       // A = n / d^(k/2) (k ln d)^(3/2)

    friend bool operator==(const BoundSet&, const BoundSet&) = default;
};

/// Requires k >= 2, d > 1, p_d < 1 and eps in (0, k-1); throws RegimeError otherwise.
BoundSet bounds(const AsymptoticParams& params, double eps);

/// s alone. Only needs d > 1; may be negative for small d.
double generator_pair_count(const AsymptoticParams& params);

/// A alone. Only needs d > 1.
double far_set_target(const AsymptoticParams& params);

/// Normalizer n ln d / d^(k-1) used to report matching sizes.
double size_scale(const AsymptoticParams& params);

/// Main term of P[d(u,v) >= k]: 1 - p for k = 2 (exact), 1 - p_d for k >= 3.
double prob_distance_ge_k_main(const AsymptoticParams& params);

/// log of p^m (1-q)^(4 C(m,2)), q = p for k = 2 and q = p_d for k >= 3.
double prob_k_matching_main_log(const AsymptoticParams& params, std::uint64_t m);

/// log of the number of size-m matchings of K_n: n! / ((n-2m)! 2^m m!).
double log_matching_count(double n, std::uint64_t m);

/// log E[X_m] = log_matching_count + prob_k_matching_main_log. Throws
/// std::invalid_argument if 2m > n.
double expected_num_k_matchings_log(const AsymptoticParams& params, std::uint64_t m);

/// Per-edge exponent log(e d n / (2m)) - 2 (m-1) p_d of the first moment.
double first_moment_exponent(const AsymptoticParams& params, double m);

struct JansonBounds {
    double log_u = 0;
    double u = 0;
    /// Literal evaluation of the summation upper bound on the overlap sum,
    /// not the exact dependency sum.
    double delta_bound = 0;
    double u_exp_delta = 0;
};

/// Sandwich for P[d(u,v) >= k]: U = (1-p) prod_{i=2}^{k-1} (1-p^i)^{(n-2)...(n-i)}.
JansonBounds janson_vertex_pair(const AsymptoticParams& params);

/// Sandwich for P[no short path between any two edges of a size-m matching]:
/// U' = [(1-p) prod_{i=2}^{k-1} (1-p^i)^{(n-4)...(n-i-2)}]^(4 C(m,2)).
JansonBounds janson_matching(const AsymptoticParams& params, std::uint64_t m);

/// log f(x), f(x) = (2 pi x)^(-1/2) (e d n / 2x)^x (1-p_d)^(2x(x-1)).
double log_f_value(const AsymptoticParams& params, double x);
double f_value(const AsymptoticParams& params, double x);

/// g(x) = d/dx log f(x) = -1/(2x) + log(e d n / 2x) - 1 + (4x - 2) log(1-p_d).
double g_value(const AsymptoticParams& params, double x);

/// True iff log f is strictly increasing on grid_size uniform points of
/// [1, (k-1) n ln d / (4 d^(k-1))].
bool check_f_monotone(const AsymptoticParams& params, std::size_t grid_size);

/// Intersection pattern of two size-m matchings: r disjoint rest edges,
/// c_v shared single vertices, c_e shared edges.
struct PairProfile {
    std::uint64_t r = 0;
    std::uint64_t c_v = 0;
    std::uint64_t c_e = 0;

    std::uint64_t m() const noexcept { return r + c_v + c_e; }
    /// Distinct vertices spanned by the pair: 4r + 3c_v + 2c_e.
    std::uint64_t span() const noexcept { return 4 * r + 3 * c_v + 2 * c_e; }

    friend constexpr auto operator<=>(const PairProfile&, const PairProfile&) = default;
};

using BigInt = boost::multiprecision::cpp_int;

/// Exact number of ordered (r, c_v, c_e)-pairs of matchings in K_n:
/// n! / [(r!)^2 c_e! c_v! (n - 4r - 3c_v - 2c_e)!] * 2^(-2r - c_e).
/// Throws std::invalid_argument when the profile spans more than n vertices.
BigInt pair_count_exact(std::uint64_t n, const PairProfile& profile);

/// log of the second-moment ratio main term
/// (m!)^2 n^(-2c_e-c_v) / [(r!)^2 c_e! c_v!] * 2^(2c_v+c_e) * p^(-c_e)
///   * (1-p_d)^((4c_e + c_v - (2c_e+c_v)^2) / 2).
double second_moment_ratio_main_log(const AsymptoticParams& params, std::uint64_t m,
                                    const PairProfile& profile);

/// Largest m with m * 2^(m+1) <= n. Throws std::invalid_argument for n < 4.
std::uint64_t solve_appendix_m(std::uint64_t n);

/// (1 - (2n / d^(k-1)) log(2m/n)) x - 4 x^2.
double claim_a3_quadratic(const AsymptoticParams& params, std::uint64_t m, double x);

/// Location of the maximum of claim_a3_quadratic.
double claim_a3_vertex(const AsymptoticParams& params, std::uint64_t m);

} // namespace kmatch
