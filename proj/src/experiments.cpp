#include "kmatch/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "kmatch/errors.hpp"
#include "kmatch/rng.hpp"

namespace kmatch {

using nlohmann::json;

std::string_view to_string(Algorithm a)
{
    switch (a) {
    case Algorithm::greedy: return "greedy";
    case Algorithm::generator: return "generator";
    case Algorithm::exact: return "exact";
    }
    return "?";
}

std::string_view to_string(Experiment e)
{
    switch (e) {
    case Experiment::matching: return "matching";
    case Experiment::theorem51: return "theorem51";
    case Experiment::layers: return "layers";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name)
{
    for (Algorithm a : {Algorithm::greedy, Algorithm::generator, Algorithm::exact}) {
        if (to_string(a) == name) {
            return a;
        }
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

Experiment parse_experiment(std::string_view name)
{
    for (Experiment e : {Experiment::matching, Experiment::theorem51, Experiment::layers}) {
        if (to_string(e) == name) {
            return e;
        }
    }
    throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

OutputFormat parse_format(std::string_view name)
{
    if (name == "csv") {
        return OutputFormat::csv;
    }
    if (name == "json") {
        return OutputFormat::json;
    }
    throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected csv or json)");
}

double TrialConfig::edge_probability() const
{
    if (p) {
        return *p;
    }
    return n == 0 ? 0.0 : d.value_or(0.0) / static_cast<double>(n);
}

double TrialConfig::expected_degree() const
{
    if (d) {
        return *d;
    }
    return static_cast<double>(n) * p.value_or(0.0);
}

AsymptoticParams TrialConfig::params() const
{
    if (n == 0) {
        throw RegimeError("asymptotic quantities need n >= 1");
    }
    auto out = AsymptoticParams::from_degree(static_cast<double>(n), expected_degree(), k);
    out.p = edge_probability();
    return out;
}

void TrialConfig::validate() const
{
    if (d.has_value() == p.has_value()) {
        throw std::invalid_argument("exactly one of d and p must be given");
    }
    if (n > std::numeric_limits<Vertex>::max()) {
        throw std::invalid_argument("n exceeds the 32-bit vertex id range");
    }
    const double prob = edge_probability();
    if (!(prob >= 0.0 && prob <= 1.0)) {
        throw std::invalid_argument("edge probability must lie in [0, 1]");
    }
    if (k < 1) {
        throw std::invalid_argument("k must be at least 1");
    }
    if (trials < 1) {
        throw std::invalid_argument("trials must be at least 1");
    }
    if (threads < 1) {
        throw std::invalid_argument("threads must be at least 1");
    }
    if (algorithm == Algorithm::generator && k < 2) {
        throw std::invalid_argument("the generator needs k >= 2");
    }
    if (algorithm == Algorithm::exact) {
        const double nd = static_cast<double>(n);
        const double expected_edges = nd * (nd - 1.0) / 2.0 * prob;
        if (expected_edges > static_cast<double>(exact_edge_cap)) {
            throw InstanceTooLarge(fmt::format("exact search expects {} edges per graph, cap is {}",
                                               expected_edges, exact_edge_cap));
        }
    }
}

std::optional<Stats> Stats::of(const std::vector<double>& values)
{
    if (values.empty()) {
        return std::nullopt;
    }
    Stats s;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    double total = 0.0;
    for (double v : values) {
        total += v;
    }
    s.mean = total / static_cast<double>(values.size());
    // Rounding can push the mean of equal values a hair outside [min, max].
    s.mean = std::clamp(s.mean, s.min, s.max);
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) {
            sq += (v - s.mean) * (v - s.mean);
        }
        s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return s;
}

namespace {

template <typename Run>
std::vector<TrialRecord> run_indexed(std::uint64_t count, unsigned threads, Run&& run)
{
    std::vector<TrialRecord> records(count);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t i = next++; i < count; i = next++) {
            records[i] = run(i);
        }
    };
    const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, threads), count));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back(worker);
        }
    }
    return records;
}

Graph trial_graph(const TrialConfig& cfg, std::uint64_t seed)
{
    return sample_gnp({cfg.n, cfg.edge_probability(), seed});
}

std::optional<double> try_size_scale(const TrialConfig& cfg)
{
    if (cfg.n == 0 || !(cfg.expected_degree() > 1.0)) {
        return std::nullopt;
    }
    return size_scale(cfg.params());
}

} // namespace

std::uint64_t sample_pair_count(const TrialConfig& cfg)
{
    std::uint64_t s = 0;
    if (cfg.s_override) {
        s = *cfg.s_override;
    } else {
        const double value = generator_pair_count(cfg.params());
        s = value >= 1.0 ? static_cast<std::uint64_t>(std::floor(value)) : 0;
    }
    if (s < 1) {
        throw RegimeError("pair count s is below 1 at these parameters; pass an explicit s");
    }
    if (2 * s > cfg.n) {
        throw PreconditionError(fmt::format("2s = {} exceeds n = {}", 2 * s, cfg.n));
    }
    return s;
}

TrialSummary summarize(Experiment experiment, const TrialConfig& cfg, const std::vector<TrialRecord>& records)
{
    TrialSummary out;
    out.trials = records.size();
    std::vector<double> sizes;
    for (const auto& r : records) {
        if (r.succeeded) {
            ++out.successes;
            if (r.matching_size) {
                sizes.push_back(static_cast<double>(*r.matching_size));
            }
        }
    }
    out.success_rate = out.trials == 0 ? 0.0 : static_cast<double>(out.successes) / static_cast<double>(out.trials);
    out.size = Stats::of(sizes);
    out.size_scale = try_size_scale(cfg);
    if (out.size_scale && !sizes.empty()) {
        std::vector<double> ratios;
        for (double s : sizes) {
            ratios.push_back(s / *out.size_scale);
        }
        out.size_ratio = Stats::of(ratios);
    }
    if (cfg.k >= 2 && cfg.n > 0) {
        try {
            out.bounds = bounds(cfg.params(), 0.5);
        } catch (const RegimeError&) {
        }
    }

    if (experiment == Experiment::theorem51) {
        if (cfg.k >= 2 && cfg.n > 0 && cfg.expected_degree() > 1.0) {
            out.far_target = far_set_target(cfg.params());
        }
        std::vector<double> far_ratios;
        std::uint64_t measured = 0;
        std::uint64_t with_edge = 0;
        for (const auto& r : records) {
            if (out.far_target && r.far_set_size) {
                far_ratios.push_back(static_cast<double>(*r.far_set_size) / *out.far_target);
            }
            if (r.induced_edge) {
                ++measured;
                with_edge += *r.induced_edge ? 1 : 0;
            }
        }
        out.far_ratio = Stats::of(far_ratios);
        if (measured > 0) {
            out.induced_edge_frequency = static_cast<double>(with_edge) / static_cast<double>(measured);
        }
    }

    if (experiment == Experiment::layers && !records.empty()) {
        const std::size_t width = records.front().layer_ratios.size();
        for (std::size_t i = 0; i < width; ++i) {
            std::vector<double> column;
            for (const auto& r : records) {
                if (i < r.layer_ratios.size()) {
                    column.push_back(r.layer_ratios[i]);
                }
            }
            out.layer_ratio.push_back(*Stats::of(column));
        }
    }
    return out;
}

ExperimentResult run_trials(const TrialConfig& cfg)
{
    cfg.validate();
    auto run = [&](std::uint64_t i) {
        TrialRecord rec;
        rec.trial_index = i;
        rec.seed = derive_seed(cfg.base_seed, i);
        const Graph g = trial_graph(cfg, rec.seed);
        const std::uint64_t algo_seed = derive_seed(rec.seed, 1);
        const auto start = std::chrono::steady_clock::now();
        try {
            switch (cfg.algorithm) {
            case Algorithm::greedy: {
                const KMatching m = greedy_k_matching(g, cfg.k, algo_seed);
                rec.succeeded = is_k_matching(g, m) && is_maximal_k_matching(g, m);
                rec.matching_size = m.size();
                break;
            }
            case Algorithm::generator: {
                GeneratorConfig gen;
                gen.k = cfg.k;
                gen.seed = algo_seed;
                gen.s_override = cfg.s_override;
                gen.expected_degree = cfg.expected_degree();
                GeneratorStats stats;
                const KMatching m = generator_algorithm(g, gen, &stats);
                rec.succeeded = is_k_matching(g, m) && m.size() == stats.target_size;
                rec.matching_size = m.size();
                break;
            }
            case Algorithm::exact: {
                const ExactResult r = exact_um_k(g, cfg.k, cfg.exact_edge_cap);
                rec.succeeded = is_k_matching(g, r.witness) && r.witness.size() == r.size;
                rec.matching_size = r.size;
                break;
            }
            }
        } catch (const GeneratorStalled&) {
            rec.succeeded = false;
        } catch (const InstanceTooLarge&) {
            rec.succeeded = false;
        }
        if (!rec.succeeded) {
            rec.matching_size.reset();
        }
        if (cfg.timing) {
            rec.runtime_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        }
        return rec;
    };
    ExperimentResult result;
    result.experiment = Experiment::matching;
    result.config = cfg;
    result.records = run_indexed(cfg.trials, cfg.threads, run);
    result.summary = summarize(result.experiment, cfg, result.records);
    return result;
}

namespace {

template <typename Measure>
ExperimentResult sample_sets(Experiment experiment, const TrialConfig& cfg, std::optional<std::uint64_t> samples,
                             Measure&& measure)
{
    TrialConfig effective = cfg;
    if (samples) {
        effective.trials = *samples;
    }
    effective.validate();
    if (effective.k < 2) {
        throw RegimeError("far sets and layers need k >= 2");
    }
    const std::uint64_t s = sample_pair_count(effective);
    auto run = [&](std::uint64_t i) {
        TrialRecord rec;
        rec.trial_index = i;
        rec.seed = derive_seed(effective.base_seed, i);
        const Graph g = trial_graph(effective, rec.seed);
        Rng rng(derive_seed(rec.seed, 1));
        const auto start = std::chrono::steady_clock::now();
        const auto sources = sample_distinct_vertices(g.vertex_count(), 2 * s, rng);
        measure(g, sources, s, rec);
        rec.succeeded = true;
        if (effective.timing) {
            rec.runtime_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        }
        return rec;
    };
    ExperimentResult result;
    result.experiment = experiment;
    result.config = effective;
    result.records = run_indexed(effective.trials, effective.threads, run);
    result.summary = summarize(experiment, effective, result.records);
    return result;
}

} // namespace

ExperimentResult verify_theorem_5_1(const TrialConfig& cfg, std::optional<std::uint64_t> samples)
{
    return sample_sets(Experiment::theorem51, cfg, samples,
                       [&](const Graph& g, const std::vector<Vertex>& sources, std::uint64_t, TrialRecord& rec) {
                           const auto far = far_vertex_set(g, sources, cfg.k);
                           rec.far_set_size = far.size();
                           rec.induced_edge = induced_edge_exists(g, far).has_value();
                       });
}

ExperimentResult verify_layer_growth(const TrialConfig& cfg, std::optional<std::uint64_t> samples)
{
    if (cfg.k < 3) {
        throw RegimeError("layer growth needs k >= 3");
    }
    const double d = cfg.expected_degree();
    return sample_sets(Experiment::layers, cfg, samples,
                       [&](const Graph& g, const std::vector<Vertex>& sources, std::uint64_t s, TrialRecord& rec) {
                           const auto layers = neighborhood_layers(g, sources, cfg.k);
                           for (std::uint32_t i = 0; i + 2 <= cfg.k; ++i) {
                               const auto size = static_cast<double>(layers.layers[i].size());
                               const double expected = 2.0 * static_cast<double>(s) * std::pow(d, i);
                               rec.layer_ratios.push_back(size == 0.0 ? 0.0 : size / expected);
                           }
                       });
}

std::vector<std::string> csv_header(std::uint32_t k)
{
    std::vector<std::string> cols{"trial_index", "seed",      "n",           "d",          "p",
                                  "k",           "algorithm", "matching_size", "succeeded", "runtime_ms",
                                  "far_set_size", "induced_edge"};
    for (std::uint32_t i = 0; i + 2 <= k; ++i) {
        cols.push_back(fmt::format("layer_ratio_{}", i));
    }
    return cols;
}

namespace {

template <typename T>
std::string cell(const std::optional<T>& v)
{
    if (!v) {
        return {};
    }
    if constexpr (std::is_same_v<T, bool>) {
        return *v ? "true" : "false";
    } else {
        return fmt::format("{}", *v);
    }
}

void emit_csv(const ExperimentResult& result, std::ostream& os)
{
    const auto& cfg = result.config;
    const auto header = csv_header(cfg.k);
    os << fmt::format("{}\n", fmt::join(header, ","));
    const std::string algorithm(result.experiment == Experiment::matching ? to_string(cfg.algorithm)
                                                                          : to_string(result.experiment));
    const std::size_t layer_columns = header.size() - 12;
    for (const auto& r : result.records) {
        std::vector<std::string> row{
            fmt::format("{}", r.trial_index),
            fmt::format("{}", r.seed),
            fmt::format("{}", cfg.n),
            fmt::format("{}", cfg.expected_degree()),
            fmt::format("{}", cfg.edge_probability()),
            fmt::format("{}", cfg.k),
            algorithm,
            cell(r.matching_size),
            r.succeeded ? "true" : "false",
            cell(r.runtime_ms),
            cell(r.far_set_size),
            cell(r.induced_edge),
        };
        for (std::size_t i = 0; i < layer_columns; ++i) {
            row.push_back(i < r.layer_ratios.size() ? fmt::format("{}", r.layer_ratios[i]) : std::string{});
        }
        os << fmt::format("{}\n", fmt::join(row, ","));
    }
}

template <typename T>
json opt(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> get_opt(const json& j, const char* key)
{
    const auto& v = j.at(key);
    if (v.is_null()) {
        return std::nullopt;
    }
    return v.get<T>();
}

json stats_json(const std::optional<Stats>& s)
{
    if (!s) {
        return nullptr;
    }
    return {{"mean", s->mean}, {"std", s->stddev}, {"min", s->min}, {"max", s->max}};
}

std::optional<Stats> stats_from(const json& j)
{
    if (j.is_null()) {
        return std::nullopt;
    }
    return Stats{j.at("mean").get<double>(), j.at("std").get<double>(), j.at("min").get<double>(),
                 j.at("max").get<double>()};
}

json config_json(const TrialConfig& c)
{
    return {{"n", c.n},
            {"d", opt(c.d)},
            {"p", opt(c.p)},
            {"k", c.k},
            {"trials", c.trials},
            {"base_seed", c.base_seed},
            {"algorithm", to_string(c.algorithm)},
            {"output_path", opt(c.output_path)},
            {"threads", c.threads},
            {"s_override", opt(c.s_override)},
            {"exact_edge_cap", c.exact_edge_cap},
            {"timing", c.timing}};
}

TrialConfig config_from(const json& j)
{
    TrialConfig c;
    c.n = j.at("n").get<std::uint64_t>();
    c.d = get_opt<double>(j, "d");
    c.p = get_opt<double>(j, "p");
    c.k = j.at("k").get<std::uint32_t>();
    c.trials = j.at("trials").get<std::uint64_t>();
    c.base_seed = j.at("base_seed").get<std::uint64_t>();
    c.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    c.output_path = get_opt<std::string>(j, "output_path");
    c.threads = j.at("threads").get<unsigned>();
    c.s_override = get_opt<std::uint64_t>(j, "s_override");
    c.exact_edge_cap = j.at("exact_edge_cap").get<std::size_t>();
    c.timing = j.at("timing").get<bool>();
    return c;
}

json record_json(const TrialRecord& r)
{
    return {{"trial_index", r.trial_index},
            {"seed", r.seed},
            {"matching_size", opt(r.matching_size)},
            {"runtime_ms", opt(r.runtime_ms)},
            {"succeeded", r.succeeded},
            {"far_set_size", opt(r.far_set_size)},
            {"induced_edge", opt(r.induced_edge)},
            {"layer_ratios", r.layer_ratios}};
}

TrialRecord record_from(const json& j)
{
    TrialRecord r;
    r.trial_index = j.at("trial_index").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.matching_size = get_opt<std::uint64_t>(j, "matching_size");
    r.runtime_ms = get_opt<double>(j, "runtime_ms");
    r.succeeded = j.at("succeeded").get<bool>();
    r.far_set_size = get_opt<std::uint64_t>(j, "far_set_size");
    r.induced_edge = get_opt<bool>(j, "induced_edge");
    r.layer_ratios = j.at("layer_ratios").get<std::vector<double>>();
    return r;
}

json bounds_json(const std::optional<BoundSet>& b)
{
    if (!b) {
        return nullptr;
    }
    return {{"upper", b->upper},   {"lower_maximal", b->lower_maximal}, {"generator_target", b->generator_target},
            {"m_star", b->m_star}, {"s", b->s},                         {"far_target", b->far_target}};
}

std::optional<BoundSet> bounds_from(const json& j)
{
    if (j.is_null()) {
        return std::nullopt;
    }
    BoundSet b;
    b.upper = j.at("upper").get<double>();
    b.lower_maximal = j.at("lower_maximal").get<double>();
    b.generator_target = j.at("generator_target").get<double>();
    b.m_star = j.at("m_star").get<double>();
    b.s = j.at("s").get<double>();
    b.far_target = j.at("far_target").get<double>();
    return b;
}

json summary_json(const TrialSummary& s)
{
    json layers = json::array();
    for (const auto& l : s.layer_ratio) {
        layers.push_back(stats_json(l));
    }
    return {{"trials", s.trials},
            {"successes", s.successes},
            {"success_rate", s.success_rate},
            {"size", stats_json(s.size)},
            {"size_scale", opt(s.size_scale)},
            {"size_ratio", stats_json(s.size_ratio)},
            {"bounds", bounds_json(s.bounds)},
            {"far_target", opt(s.far_target)},
            {"far_ratio", stats_json(s.far_ratio)},
            {"induced_edge_frequency", opt(s.induced_edge_frequency)},
            {"layer_ratio", layers}};
}

TrialSummary summary_from(const json& j)
{
    TrialSummary s;
    s.trials = j.at("trials").get<std::uint64_t>();
    s.successes = j.at("successes").get<std::uint64_t>();
    s.success_rate = j.at("success_rate").get<double>();
    s.size = stats_from(j.at("size"));
    s.size_scale = get_opt<double>(j, "size_scale");
    s.size_ratio = stats_from(j.at("size_ratio"));
    s.bounds = bounds_from(j.at("bounds"));
    s.far_target = get_opt<double>(j, "far_target");
    s.far_ratio = stats_from(j.at("far_ratio"));
    s.induced_edge_frequency = get_opt<double>(j, "induced_edge_frequency");
    for (const auto& l : j.at("layer_ratio")) {
        s.layer_ratio.push_back(*stats_from(l));
    }
    return s;
}

} // namespace

void emit(const ExperimentResult& result, OutputFormat format, std::ostream& os)
{
    if (format == OutputFormat::csv) {
        emit_csv(result, os);
        return;
    }
    json records = json::array();
    for (const auto& r : result.records) {
        records.push_back(record_json(r));
    }
    const json doc{{"experiment", to_string(result.experiment)},
                   {"config", config_json(result.config)},
                   {"records", records},
                   {"summary", summary_json(result.summary)}};
    os << doc.dump(2) << '\n';
}

void emit(const ExperimentResult& result, OutputFormat format, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    emit(result, format, out);
    if (!out.flush()) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

ExperimentResult parse_json(std::istream& is)
{
    try {
        const json doc = json::parse(is);
        ExperimentResult result;
        result.experiment = parse_experiment(doc.at("experiment").get<std::string>());
        result.config = config_from(doc.at("config"));
        for (const auto& r : doc.at("records")) {
            result.records.push_back(record_from(r));
        }
        result.summary = summary_from(doc.at("summary"));
        return result;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed experiment JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("malformed experiment JSON: ") + e.what());
    }
}

} // namespace kmatch
