#include "kmatch/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "kmatch/analytic.hpp"
#include "kmatch/errors.hpp"
#include "kmatch/experiments.hpp"
#include "kmatch/graph.hpp"
#include "kmatch/matching.hpp"
#include "kmatch/oracle.hpp"

namespace kmatch {

std::uint64_t parse_count(std::string_view text)
{
    std::uint64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (auto [ptr, ec] = std::from_chars(first, last, value); ec == std::errc{} && ptr == last) {
        return value;
    }
    double real = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, real);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw std::invalid_argument("'" + std::string(text) + "' is not a count");
    }
    // 2^64 is exactly representable; anything at or above it overflows.
    if (!(real >= 0.0) || real >= 18446744073709551616.0 || std::floor(real) != real) {
        throw std::invalid_argument("'" + std::string(text) + "' is not a non-negative integer");
    }
    return static_cast<std::uint64_t>(real);
}

namespace {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct GraphArgs {
    std::string n_text;
    double d = 0;
    double p = 0;
    std::uint64_t seed = 0;
    std::uint32_t k = 2;
    std::string input;
    CLI::Option* n_opt = nullptr;
    CLI::Option* d_opt = nullptr;
    CLI::Option* p_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* input_opt = nullptr;

    std::uint64_t n() const
    {
        if (!n_opt || n_opt->count() == 0) {
            throw UsageError("--n is required");
        }
        return parse_count(n_text);
    }
    bool has_d() const { return d_opt && d_opt->count() > 0; }
    bool has_p() const { return p_opt && p_opt->count() > 0; }
    bool has_input() const { return input_opt && input_opt->count() > 0; }
    std::uint64_t required_seed() const
    {
        if (!seed_opt || seed_opt->count() == 0) {
            throw UsageError("--seed is required for randomized subcommands");
        }
        return seed;
    }
    void require_density() const
    {
        if (!has_d() && !has_p()) {
            throw UsageError("one of --d or --p is required");
        }
    }
    double probability() const
    {
        require_density();
        if (has_p()) {
            return p;
        }
        const auto count = n();
        return count == 0 ? 0.0 : d / static_cast<double>(count);
    }
    AsymptoticParams params() const
    {
        require_density();
        const auto count = static_cast<double>(n());
        return has_p() ? AsymptoticParams::from_probability(count, p, k)
                       : AsymptoticParams::from_degree(count, d, k);
    }
};

void add_size(CLI::App* sub, GraphArgs& a)
{
    a.n_opt = sub->add_option("--n", a.n_text, "Number of vertices; accepts scientific notation such as 1e6");
}

void add_density(CLI::App* sub, GraphArgs& a)
{
    a.d_opt = sub->add_option("--d", a.d, "Expected degree d; the edge probability is d/n");
    a.p_opt = sub->add_option("--p", a.p, "Edge probability p of G(n, p)");
    a.d_opt->excludes(a.p_opt);
}

void add_k(CLI::App* sub, GraphArgs& a, std::string_view what)
{
    sub->add_option("--k", a.k, std::string(what))->capture_default_str()->check(CLI::PositiveNumber);
}

void add_seed(CLI::App* sub, GraphArgs& a)
{
    a.seed_opt = sub->add_option("--seed", a.seed, "64-bit seed; required, the same seed reproduces the run");
}

void add_threads(CLI::App* sub, unsigned& threads)
{
    sub->add_option("--threads", threads, "Worker threads (default: number of cores)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

void print_kv(std::ostream& out, std::string_view key, const auto& value)
{
    out << fmt::format("{}: {}\n", key, value);
}

std::ifstream open_input(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open " + path);
    }
    return in;
}

Graph load_or_sample(const GraphArgs& a)
{
    if (a.has_input()) {
        auto in = open_input(a.input);
        return read_edge_list(in);
    }
    const auto n = a.n();
    return sample_gnp({n, a.probability(), a.required_seed()});
}

void write_to(const std::string& path, const std::function<void(std::ostream&)>& body)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    body(out);
    if (!out.flush()) {
        throw std::runtime_error("failed writing " + path);
    }
}

std::vector<Edge> parse_edge_list_arg(const std::string& text)
{
    std::vector<Edge> edges;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            throw UsageError("matching edges are written u-v, separated by commas");
        }
        const auto u = parse_count(std::string_view(item).substr(0, dash));
        const auto v = parse_count(std::string_view(item).substr(dash + 1));
        if (u == v || u > std::numeric_limits<Vertex>::max() || v > std::numeric_limits<Vertex>::max()) {
            throw UsageError("bad matching edge '" + item + "'");
        }
        edges.push_back(Edge::between(static_cast<Vertex>(u), static_cast<Vertex>(v)));
    }
    return edges;
}

struct ExperimentArgs {
    GraphArgs graph;
    std::uint64_t trials = 1;
    std::string algorithm = "greedy";
    std::string out_path;
    std::string format = "csv";
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t s = 0;
    CLI::Option* s_opt = nullptr;
    CLI::Option* out_opt = nullptr;
    std::size_t exact_cap = kDefaultExactEdgeCap;
    bool timing = false;

    TrialConfig config() const
    {
        TrialConfig cfg;
        cfg.n = graph.n();
        graph.require_density();
        if (graph.has_d()) {
            cfg.d = graph.d;
        } else {
            cfg.p = graph.p;
        }
        cfg.k = graph.k;
        cfg.trials = trials;
        cfg.base_seed = graph.required_seed();
        cfg.algorithm = parse_algorithm(algorithm);
        if (out_opt->count() > 0) {
            cfg.output_path = out_path;
        }
        cfg.threads = threads;
        if (s_opt->count() > 0) {
            cfg.s_override = s;
        }
        cfg.exact_edge_cap = exact_cap;
        cfg.timing = timing;
        return cfg;
    }
};

void add_experiment_options(CLI::App* sub, ExperimentArgs& a, bool with_algorithm, std::string_view count_help)
{
    add_size(sub, a.graph);
    add_density(sub, a.graph);
    add_k(sub, a.graph, "Distance parameter k");
    add_seed(sub, a.graph);
    sub->add_option("--trials,--samples", a.trials, std::string(count_help))
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    if (with_algorithm) {
        sub->add_option("--algorithm", a.algorithm, "Matching algorithm: greedy, generator or exact")
            ->capture_default_str()
            ->check(CLI::IsMember({"greedy", "generator", "exact"}));
        sub->add_option("--exact-cap", a.exact_cap, "Largest edge count the exact search accepts")
            ->capture_default_str();
    }
    a.s_opt = sub->add_option("--s", a.s,
                              with_algorithm ? "Generator target size (default: floor of the analytic s)"
                                             : "Half the size of the random vertex set S (default: floor of s)");
    a.out_opt = sub->add_option("--out", a.out_path, "Write records here instead of standard output");
    sub->add_option("--format", a.format, "Record format: csv or json")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    add_threads(sub, a.threads);
    sub->add_flag("--timing", a.timing, "Fill the runtime_ms column (makes output run-dependent)");
}

void print_optional_stats(std::ostream& out, std::string_view key, const std::optional<Stats>& s)
{
    if (s) {
        print_kv(out, fmt::format("{}_mean", key), s->mean);
        print_kv(out, fmt::format("{}_std", key), s->stddev);
        print_kv(out, fmt::format("{}_min", key), s->min);
        print_kv(out, fmt::format("{}_max", key), s->max);
    }
}

void print_summary(std::ostream& out, const ExperimentResult& r)
{
    const auto& s = r.summary;
    print_kv(out, "experiment", to_string(r.experiment));
    print_kv(out, "trials", s.trials);
    print_kv(out, "successes", s.successes);
    print_kv(out, "success_rate", s.success_rate);
    print_optional_stats(out, "size", s.size);
    if (s.size_scale) {
        print_kv(out, "size_scale", *s.size_scale);
    }
    print_optional_stats(out, "size_ratio", s.size_ratio);
    if (s.far_target) {
        print_kv(out, "far_target", *s.far_target);
    }
    print_optional_stats(out, "far_ratio", s.far_ratio);
    if (s.induced_edge_frequency) {
        print_kv(out, "induced_edge_frequency", *s.induced_edge_frequency);
    }
    for (std::size_t i = 0; i < s.layer_ratio.size(); ++i) {
        print_optional_stats(out, fmt::format("layer_ratio_{}", i), s.layer_ratio[i]);
    }
}

void finish_experiment(std::ostream& out, const ExperimentArgs& a, const ExperimentResult& r)
{
    const auto format = parse_format(a.format);
    if (r.config.output_path) {
        emit(r, format, std::filesystem::path(*r.config.output_path));
        print_summary(out, r);
    } else {
        emit(r, format, out);
    }
}

void print_matching_result(std::ostream& out, const Graph& g, const KMatching& m)
{
    print_kv(out, "n", g.vertex_count());
    print_kv(out, "edges", g.edge_count());
    print_kv(out, "k", m.k);
    print_kv(out, "size", m.size());
    print_kv(out, "valid", is_k_matching(g, m) ? "true" : "false");
}

} // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Distance-k matchings in sparse random graphs G(n, p)", "kmatch"};
    app.require_subcommand(1);

    GraphArgs gen_args;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "Sample G(n, p) and write it as an edge list");
    add_size(gen, gen_args);
    add_density(gen, gen_args);
    add_seed(gen, gen_args);
    auto* gen_out_opt = gen->add_option("--out", gen_out, "Output edge-list file (default: standard output)");

    struct AlgoArgs {
        GraphArgs graph;
        std::string out_path;
        CLI::Option* out_opt = nullptr;
        std::uint64_t s = 0;
        CLI::Option* s_opt = nullptr;
        std::size_t cap = kDefaultExactEdgeCap;
    };
    AlgoArgs greedy_args, generator_args, exact_args;
    auto make_algo = [&](const char* name, const char* help, AlgoArgs& a) {
        auto* sub = app.add_subcommand(name, help);
        add_size(sub, a.graph);
        add_density(sub, a.graph);
        add_k(sub, a.graph, "Distance parameter k: member edges keep endpoint distance >= k");
        add_seed(sub, a.graph);
        a.graph.input_opt = sub->add_option("--input", a.graph.input, "Read the graph from an edge-list file");
        a.graph.input_opt->excludes(a.graph.n_opt)->excludes(a.graph.d_opt)->excludes(a.graph.p_opt);
        a.out_opt = sub->add_option("--out", a.out_path, "Also write the matching to this file");
        return sub;
    };
    auto* greedy = make_algo("greedy", "Random greedy maximal k-matching", greedy_args);
    auto* generator = make_algo("generator", "Randomized pair-repair generator for a k-matching of size s",
                                generator_args);
    generator_args.s_opt = generator->add_option(
        "--s", generator_args.s, "Target size (default: floor of s computed from n and d, at least 1)");
    auto* exact = make_algo("exact", "Maximum k-matching by branch and bound (small graphs)", exact_args);
    exact->add_option("--cap", exact_args.cap, "Refuse graphs with more edges than this")->capture_default_str();

    GraphArgs bounds_args;
    double eps = 0.5;
    bool bounds_json = false;
    auto* bounds_cmd = app.add_subcommand("bounds", "Print the analytic size bounds at (n, d, k)");
    add_size(bounds_cmd, bounds_args);
    add_density(bounds_cmd, bounds_args);
    add_k(bounds_cmd, bounds_args, "Distance parameter k (>= 2)");
    bounds_cmd->add_option("--eps", eps, "Slack eps in (0, k-1) for the first-moment threshold m*")
        ->capture_default_str();
    bounds_cmd->add_flag("--json", bounds_json, "Print one JSON object instead of key: value lines");

    GraphArgs oracle_args;
    std::string event = "dist";
    std::uint32_t oracle_u = 0, oracle_v = 1;
    std::uint64_t oracle_m = 1;
    std::string oracle_matching;
    unsigned oracle_threads = std::max(1u, std::thread::hardware_concurrency());
    auto* oracle = app.add_subcommand("oracle", "Exact probabilities by enumerating every graph on n <= 6 vertices");
    add_size(oracle, oracle_args);
    oracle_args.p_opt = oracle->add_option("--p", oracle_args.p, "Edge probability p of G(n, p)");
    add_k(oracle, oracle_args, "Distance parameter k");
    oracle
        ->add_option("--event", event,
                     "dist: P[d(u,v) >= k]; kmatching: P[--matching is a k-matching]; "
                     "expected: E[number of size-m k-matchings]; umk: distribution of the maximum "
                     "k-matching size; pairs: ordered matching-pair profile counts in K_n")
        ->capture_default_str()
        ->check(CLI::IsMember({"dist", "kmatching", "expected", "umk", "pairs"}));
    oracle->add_option("--u", oracle_u, "First vertex for dist")->capture_default_str();
    oracle->add_option("--v", oracle_v, "Second vertex for dist")->capture_default_str();
    oracle->add_option("--m", oracle_m, "Matching size for expected and pairs")->capture_default_str();
    oracle->add_option("--matching", oracle_matching, "Edges for kmatching, e.g. 0-1,2-3");
    add_threads(oracle, oracle_threads);

    ExperimentArgs experiment_args, t51_args, layers_args;
    auto* experiment = app.add_subcommand("experiment", "Seeded matching trials on fresh G(n, p) samples");
    add_experiment_options(experiment, experiment_args, true, "Number of trials");
    auto* t51 = app.add_subcommand("theorem51", "Far-set size and induced edges for 2s random vertices");
    add_experiment_options(t51, t51_args, false, "Number of samples");
    auto* layers = app.add_subcommand("layers", "Distance-layer growth around 2s random vertices (k >= 3)");
    add_experiment_options(layers, layers_args, false, "Number of samples");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) {
            const Graph g = load_or_sample(gen_args);
            if (gen_out_opt->count() > 0) {
                write_to(gen_out, [&](std::ostream& os) { write_edge_list(os, g); });
                print_kv(out, "n", g.vertex_count());
                print_kv(out, "edges", g.edge_count());
            } else {
                write_edge_list(out, g);
            }
        } else if (greedy->parsed()) {
            const Graph g = load_or_sample(greedy_args.graph);
            const KMatching m = greedy_k_matching(g, greedy_args.graph.k, greedy_args.graph.required_seed());
            print_matching_result(out, g, m);
            print_kv(out, "maximal", is_maximal_k_matching(g, m) ? "true" : "false");
            if (greedy_args.out_opt->count() > 0) {
                write_to(greedy_args.out_path, [&](std::ostream& os) { write_matching(os, m); });
            }
        } else if (generator->parsed()) {
            const Graph g = load_or_sample(generator_args.graph);
            GeneratorConfig cfg;
            cfg.k = generator_args.graph.k;
            cfg.seed = generator_args.graph.required_seed();
            if (generator_args.s_opt->count() > 0) {
                cfg.s_override = generator_args.s;
            }
            if (generator_args.graph.has_d()) {
                cfg.expected_degree = generator_args.graph.d;
            }
            GeneratorStats stats;
            const KMatching m = generator_algorithm(g, cfg, &stats);
            print_matching_result(out, g, m);
            print_kv(out, "target", stats.target_size);
            print_kv(out, "repairs", stats.repairs);
            print_kv(out, "initial_invalid_pairs", stats.initial_invalid_pairs);
            if (generator_args.out_opt->count() > 0) {
                write_to(generator_args.out_path, [&](std::ostream& os) { write_matching(os, m); });
            }
        } else if (exact->parsed()) {
            const Graph g = load_or_sample(exact_args.graph);
            const ExactResult r = exact_um_k(g, exact_args.graph.k, exact_args.cap);
            print_matching_result(out, g, r.witness);
            if (exact_args.out_opt->count() > 0) {
                write_to(exact_args.out_path, [&](std::ostream& os) { write_matching(os, r.witness); });
            }
        } else if (bounds_cmd->parsed()) {
            const auto params = bounds_args.params();
            const BoundSet b = bounds(params, eps);
            if (bounds_json) {
                const nlohmann::json doc{{"n", params.n},
                                         {"d", params.d},
                                         {"p", params.p},
                                         {"k", params.k},
                                         {"p_d", params.p_d},
                                         {"eps", eps},
                                         {"upper", b.upper},
                                         {"lower_maximal", b.lower_maximal},
                                         {"generator_target", b.generator_target},
                                         {"m_star", b.m_star},
                                         {"s", b.s},
                                         {"A", b.far_target}};
                out << doc.dump() << '\n';
            } else {
                print_kv(out, "n", params.n);
                print_kv(out, "d", params.d);
                print_kv(out, "p", params.p);
                print_kv(out, "k", params.k);
                print_kv(out, "p_d", params.p_d);
                print_kv(out, "eps", eps);
                print_kv(out, "upper", b.upper);
                print_kv(out, "lower_maximal", b.lower_maximal);
                print_kv(out, "generator_target", b.generator_target);
                print_kv(out, "m_star", b.m_star);
                print_kv(out, "s", b.s);
                print_kv(out, "A", b.far_target);
            }
        } else if (oracle->parsed()) {
            const auto n = static_cast<std::size_t>(oracle_args.n());
            const std::uint32_t k = oracle_args.k;
            const bool needs_p = event != "pairs";
            if (needs_p && !oracle_args.has_p()) {
                throw UsageError("--p is required for this event");
            }
            const double p = oracle_args.p;
            nlohmann::json doc{{"event", event}, {"n", n}};
            if (needs_p) {
                doc["p"] = p;
                doc["k"] = k;
            }
            if (event == "dist") {
                doc["u"] = oracle_u;
                doc["v"] = oracle_v;
                doc["value"] = exact_prob_distance_ge_k(n, p, k, oracle_u, oracle_v, oracle_threads);
            } else if (event == "kmatching") {
                const auto edges = parse_edge_list_arg(oracle_matching);
                doc["matching"] = oracle_matching;
                doc["value"] = exact_prob_k_matching(n, p, k, edges, oracle_threads);
            } else if (event == "expected") {
                doc["m"] = oracle_m;
                doc["value"] = exact_expected_Xm(n, p, k, oracle_m, oracle_threads);
            } else if (event == "umk") {
                nlohmann::json dist = nlohmann::json::object();
                for (const auto& [size, prob] : exact_umk_distribution(n, p, k, oracle_threads)) {
                    dist[std::to_string(size)] = prob;
                }
                doc["value"] = dist;
            } else {
                doc["m"] = oracle_m;
                nlohmann::json table = nlohmann::json::array();
                for (const auto& [profile, count] : exact_pair_profile_table(n, oracle_m)) {
                    table.push_back({{"r", profile.r},
                                     {"c_v", profile.c_v},
                                     {"c_e", profile.c_e},
                                     {"count", count},
                                     {"formula", pair_count_exact(n, profile).str()}});
                }
                doc["value"] = table;
            }
            out << doc.dump() << '\n';
        } else if (experiment->parsed()) {
            const auto r = run_trials(experiment_args.config());
            finish_experiment(out, experiment_args, r);
        } else if (t51->parsed()) {
            const auto r = verify_theorem_5_1(t51_args.config());
            finish_experiment(out, t51_args, r);
        } else if (layers->parsed()) {
            const auto r = verify_layer_growth(layers_args.config());
            finish_experiment(out, layers_args, r);
        }
    } catch (const GeneratorStalled& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const InstanceTooLarge& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace kmatch
