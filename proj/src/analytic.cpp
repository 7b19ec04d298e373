#include "kmatch/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kmatch/errors.hpp"

namespace kmatch {

namespace {

void require_degree(const AsymptoticParams& params)
{
    if (!(params.d > 1.0)) {
        throw RegimeError("expected degree d must exceed 1 (got " + std::to_string(params.d) + ")");
    }
}

void require_pd_below_one(const AsymptoticParams& params)
{
    if (!(params.p_d < 1.0)) {
        throw RegimeError("p_d = d^(k-1)/n must be below 1 (got " + std::to_string(params.p_d) + ")");
    }
}

void require_k_at_least_two(const AsymptoticParams& params)
{
    if (params.k < 2) {
        throw RegimeError("k must be at least 2");
    }
}

double degree_power(const AsymptoticParams& params)
{
    return std::pow(params.d, static_cast<double>(params.k) - 1.0);
}

// a (a-1) ... (a-count+1), or 0 once a factor reaches zero.
double falling(double a, std::uint32_t count)
{
    double product = 1.0;
    for (std::uint32_t j = 0; j < count; ++j) {
        const double factor = a - j;
        if (factor <= 0.0) {
            return 0.0;
        }
        product *= factor;
    }
    return product;
}

double binomial_small(std::uint32_t n, std::uint32_t r)
{
    double c = 1.0;
    for (std::uint32_t i = 1; i <= r; ++i) {
        c = c * (n - r + i) / i;
    }
    return c;
}

// log[(1-p) prod_{i=2}^{k-1} (1-p^i)^{(base)(base-1)...(base-i+2)}]
double log_path_avoidance(double p, std::uint32_t k, double base)
{
    double total = std::log1p(-p);
    for (std::uint32_t i = 2; i + 1 <= k; ++i) {
        const double paths = falling(base, i - 1);
        if (paths > 0.0) {
            total += paths * std::log1p(-std::pow(p, i));
        }
    }
    return total;
}

// sum_{li=2}^{k-1} lead * n^(li-1) p^li * sum_{lj=li}^{k-1} sum_{t=1}^{li-1}
//     C(li, t) * inner * n^(lj-t-1) p^(lj-t)
double overlap_bound(double n, double p, std::uint32_t k, double lead, double inner)
{
    double total = 0.0;
    for (std::uint32_t li = 2; li + 1 <= k; ++li) {
        const double outer = lead * std::pow(n, li - 1.0) * std::pow(p, li);
        double nested = 0.0;
        for (std::uint32_t lj = li; lj + 1 <= k; ++lj) {
            for (std::uint32_t t = 1; t + 1 <= li; ++t) {
                nested += binomial_small(li, t) * inner * std::pow(n, static_cast<double>(lj) - t - 1.0) *
                          std::pow(p, static_cast<double>(lj) - t);
            }
        }
        total += outer * nested;
    }
    return total;
}

} // namespace

AsymptoticParams AsymptoticParams::from_degree(double n, double d, std::uint32_t k)
{
    if (!(n >= 1.0)) {
        throw std::invalid_argument("n must be at least 1");
    }
    if (!(d >= 0.0 && d <= n)) {
        throw std::invalid_argument("expected degree must lie in [0, n]");
    }
    if (k < 1) {
        throw std::invalid_argument("k must be at least 1");
    }
    AsymptoticParams params;
    params.n = n;
    params.d = d;
    params.p = d / n;
    params.k = k;
    params.p_d = std::pow(d, static_cast<double>(k) - 1.0) / n;
    return params;
}

AsymptoticParams AsymptoticParams::from_probability(double n, double p, std::uint32_t k)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("edge probability must lie in [0, 1]");
    }
    auto params = from_degree(n, n * p, k);
    params.p = p;
    return params;
}

double size_scale(const AsymptoticParams& params)
{
    require_degree(params);
    return params.n * std::log(params.d) / degree_power(params);
}

double generator_pair_count(const AsymptoticParams& params)
{
    require_k_at_least_two(params);
    require_degree(params);
    const double kl = params.k * std::log(params.d);
    return params.n / (4.0 * degree_power(params)) * (kl - 3.0 * std::log(kl));
}

double far_set_target(const AsymptoticParams& params)
{
    require_k_at_least_two(params);
    require_degree(params);
    const double kl = params.k * std::log(params.d);
    return params.n / std::pow(params.d, params.k / 2.0) * std::pow(kl, 1.5);
}

BoundSet bounds(const AsymptoticParams& params, double eps)
{
    require_k_at_least_two(params);
    require_degree(params);
    require_pd_below_one(params);
    if (!(eps > 0.0 && eps < params.k - 1.0)) {
        throw RegimeError("eps must lie in (0, k-1)");
    }
    const double scale = size_scale(params);
    BoundSet b;
    b.upper = params.k * scale / 2.0;
    b.lower_maximal = (params.k - 1.0) * scale / 4.0;
    b.generator_target = params.k * scale / 4.0;
    b.m_star = (params.k - 1.0 - eps) * scale / 4.0;
    b.s = generator_pair_count(params);
    b.far_target = far_set_target(params);
    return b;
}

double prob_distance_ge_k_main(const AsymptoticParams& params)
{
    require_k_at_least_two(params);
    if (params.k == 2) {
        return 1.0 - params.p;
    }
    require_pd_below_one(params);
    return 1.0 - params.p_d;
}

double prob_k_matching_main_log(const AsymptoticParams& params, std::uint64_t m)
{
    require_k_at_least_two(params);
    if (m < 1) {
        throw std::invalid_argument("matching size must be at least 1");
    }
    const double q = params.k == 2 ? params.p : params.p_d;
    if (!(q < 1.0)) {
        throw RegimeError("pair-avoidance probability vanishes (q >= 1)");
    }
    const double md = static_cast<double>(m);
    const double pairs = 2.0 * md * (md - 1.0); // 4 C(m, 2)
    const double penalty = pairs == 0.0 ? 0.0 : pairs * std::log1p(-q);
    return md * std::log(params.p) + penalty;
}

double log_matching_count(double n, std::uint64_t m)
{
    const double md = static_cast<double>(m);
    if (2.0 * md > n) {
        throw std::invalid_argument("a matching of size " + std::to_string(m) + " needs more than n vertices");
    }
    return std::lgamma(n + 1.0) - std::lgamma(n - 2.0 * md + 1.0) - md * std::numbers::ln2 -
           std::lgamma(md + 1.0);
}

double expected_num_k_matchings_log(const AsymptoticParams& params, std::uint64_t m)
{
    const double count = log_matching_count(params.n, m);
    if (m == 0) {
        return count;
    }
    return count + prob_k_matching_main_log(params, m);
}

double first_moment_exponent(const AsymptoticParams& params, double m)
{
    if (!(m > 0.0)) {
        throw std::invalid_argument("m must be positive");
    }
    return 1.0 + std::log(params.d * params.n / (2.0 * m)) - 2.0 * (m - 1.0) * params.p_d;
}

JansonBounds janson_vertex_pair(const AsymptoticParams& params)
{
    require_k_at_least_two(params);
    JansonBounds b;
    b.log_u = log_path_avoidance(params.p, params.k, params.n - 2.0);
    b.u = std::exp(b.log_u);
    b.delta_bound = overlap_bound(params.n, params.p, params.k, 1.0, 1.0);
    b.u_exp_delta = std::exp(b.log_u + b.delta_bound);
    return b;
}

JansonBounds janson_matching(const AsymptoticParams& params, std::uint64_t m)
{
    require_k_at_least_two(params);
    if (m < 1) {
        throw std::invalid_argument("matching size must be at least 1");
    }
    const double md = static_cast<double>(m);
    const double pairs = 2.0 * md * (md - 1.0); // 4 C(m, 2)
    JansonBounds b;
    b.log_u = pairs == 0.0 ? 0.0 : pairs * log_path_avoidance(params.p, params.k, params.n - 4.0);
    b.u = std::exp(b.log_u);
    b.delta_bound = overlap_bound(params.n, params.p, params.k, pairs, 2.0 * md);
    b.u_exp_delta = std::exp(b.log_u + b.delta_bound);
    return b;
}

double log_f_value(const AsymptoticParams& params, double x)
{
    if (!(x >= 1.0)) {
        throw std::invalid_argument("f is defined for x >= 1");
    }
    require_pd_below_one(params);
    if (!(params.d > 0.0)) {
        throw RegimeError("f needs d > 0");
    }
    return -0.5 * std::log(2.0 * std::numbers::pi * x) +
           x * (1.0 + std::log(params.d * params.n / (2.0 * x))) +
           2.0 * x * (x - 1.0) * std::log1p(-params.p_d);
}

double f_value(const AsymptoticParams& params, double x)
{
    return std::exp(log_f_value(params, x));
}

double g_value(const AsymptoticParams& params, double x)
{
    if (!(x >= 1.0)) {
        throw std::invalid_argument("g is defined for x >= 1");
    }
    require_pd_below_one(params);
    if (!(params.d > 0.0)) {
        throw RegimeError("g needs d > 0");
    }
    return -1.0 / (2.0 * x) + std::log(params.d * params.n / (2.0 * x)) +
           (4.0 * x - 2.0) * std::log1p(-params.p_d);
}

bool check_f_monotone(const AsymptoticParams& params, std::size_t grid_size)
{
    require_k_at_least_two(params);
    if (grid_size < 2) {
        throw std::invalid_argument("grid needs at least 2 points");
    }
    const double hi = (params.k - 1.0) * size_scale(params) / 4.0;
    if (!(hi > 1.0)) {
        throw RegimeError("monotonicity range [1, (k-1) n ln d / (4 d^(k-1))] is empty");
    }
    double previous = log_f_value(params, 1.0);
    for (std::size_t i = 1; i < grid_size; ++i) {
        const double x = 1.0 + (hi - 1.0) * static_cast<double>(i) / static_cast<double>(grid_size - 1);
        const double current = log_f_value(params, x);
        if (!(current > previous)) {
            return false;
        }
        previous = current;
    }
    return true;
}

BigInt pair_count_exact(std::uint64_t n, const PairProfile& profile)
{
    if (profile.span() > n) {
        throw std::invalid_argument("profile needs " + std::to_string(profile.span()) +
                                    " vertices but n = " + std::to_string(n));
    }
    BigInt numerator = 1;
    for (std::uint64_t j = 0; j < profile.span(); ++j) {
        numerator *= n - j;
    }
    auto factorial = [](std::uint64_t x) {
        BigInt f = 1;
        for (std::uint64_t i = 2; i <= x; ++i) {
            f *= i;
        }
        return f;
    };
    const BigInt r_fact = factorial(profile.r);
    BigInt denominator = r_fact * r_fact * factorial(profile.c_e) * factorial(profile.c_v);
    denominator <<= static_cast<unsigned>(2 * profile.r + profile.c_e);
    BigInt remainder;
    BigInt quotient;
    boost::multiprecision::divide_qr(numerator, denominator, quotient, remainder);
    if (remainder != 0) {
        throw std::logic_error("pair count is not integral");
    }
    return quotient;
}

double second_moment_ratio_main_log(const AsymptoticParams& params, std::uint64_t m,
                                    const PairProfile& profile)
{
    require_k_at_least_two(params);
    if (profile.m() != m) {
        throw std::invalid_argument("profile does not sum to m");
    }
    require_pd_below_one(params);
    const double r = static_cast<double>(profile.r);
    const double cv = static_cast<double>(profile.c_v);
    const double ce = static_cast<double>(profile.c_e);
    const double md = static_cast<double>(m);
    const double shared = 2.0 * ce + cv;
    double value = 2.0 * std::lgamma(md + 1.0) - shared * std::log(params.n) - 2.0 * std::lgamma(r + 1.0) -
                   std::lgamma(ce + 1.0) - std::lgamma(cv + 1.0) + (2.0 * cv + ce) * std::numbers::ln2;
    if (ce > 0.0) {
        value -= ce * std::log(params.p);
    }
    const double exponent = (4.0 * ce + cv - shared * shared) / 2.0;
    if (exponent != 0.0) {
        value += exponent * std::log1p(-params.p_d);
    }
    return value;
}

std::uint64_t solve_appendix_m(std::uint64_t n)
{
    if (n < 4) {
        throw std::invalid_argument("solve_appendix_m requires n >= 4");
    }
    auto fits = [n](std::uint64_t m) {
        return m + 1 < 64 && m <= (n >> (m + 1));
    };
    // m * 2^(m+1) is increasing, so the admissible m form a prefix.
    std::uint64_t lo = 1;
    std::uint64_t hi = 64;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (fits(mid)) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return lo;
}

double claim_a3_quadratic(const AsymptoticParams& params, std::uint64_t m, double x)
{
    return claim_a3_vertex(params, m) * 8.0 * x - 4.0 * x * x;
}

double claim_a3_vertex(const AsymptoticParams& params, std::uint64_t m)
{
    if (m < 1) {
        throw std::invalid_argument("m must be at least 1");
    }
    if (!(params.d > 0.0)) {
        throw RegimeError("claim_a3 needs d > 0");
    }
    const double coefficient =
        1.0 - 2.0 * params.n / degree_power(params) * std::log(2.0 * static_cast<double>(m) / params.n);
    return coefficient / 8.0;
}

} // namespace kmatch
