#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kmatch/analytic.hpp"
#include "kmatch/matching.hpp"

// Seeded Monte Carlo runs over G(n, p). Trial i samples its graph with seed
// derive_seed(base_seed, i) and runs its algorithm with
// derive_seed(graph_seed, 1), so records never depend on the thread count.

namespace kmatch {

enum class Algorithm { greedy, generator, exact };
enum class Experiment { matching, theorem51, layers };
enum class OutputFormat { csv, json };

std::string_view to_string(Algorithm a);
std::string_view to_string(Experiment e);
Algorithm parse_algorithm(std::string_view name);
Experiment parse_experiment(std::string_view name);
OutputFormat parse_format(std::string_view name);

struct TrialConfig {
    std::uint64_t n = 0;
    /// Exactly one of d and p is set.
    std::optional<double> d;
    std::optional<double> p;
    std::uint32_t k = 2;
    std::uint64_t trials = 1;
    std::uint64_t base_seed = 0;
    Algorithm algorithm = Algorithm::greedy;
    std::optional<std::string> output_path;
    unsigned threads = 1;
    /// Generator target size, or |S| / 2 for the far-set and layer runs.
    std::optional<std::uint64_t> s_override;
    std::size_t exact_edge_cap = kDefaultExactEdgeCap;
    /// Fill runtime_ms. Off by default so reruns are byte-identical.
    bool timing = false;

    double edge_probability() const;
    double expected_degree() const;
    AsymptoticParams params() const;
    /// Throws std::invalid_argument on an inconsistent config.
    void validate() const;

    friend bool operator==(const TrialConfig&, const TrialConfig&) = default;
};

struct TrialRecord {
    std::uint64_t trial_index = 0;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> matching_size;
    std::optional<double> runtime_ms;
    bool succeeded = false;
    std::optional<std::uint64_t> far_set_size;
    std::optional<bool> induced_edge;
    /// |Gamma_i(S)| / (2 s d^i) for i = 0..k-2; empty when not measured.
    std::vector<double> layer_ratios;

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct Stats {
    double mean = 0;
    double stddev = 0; // sample standard deviation, 0 for one value
    double min = 0;
    double max = 0;

    static std::optional<Stats> of(const std::vector<double>& values);
    friend bool operator==(const Stats&, const Stats&) = default;
};

struct TrialSummary {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double success_rate = 0;
    std::optional<Stats> size;
    /// size / (n ln d / d^(k-1)), when d > 1.
    std::optional<double> size_scale;
    std::optional<Stats> size_ratio;
    /// Bound references at eps = 0.5, when the regime allows them.
    std::optional<BoundSet> bounds;
    std::optional<double> far_target;
    std::optional<Stats> far_ratio;
    std::optional<double> induced_edge_frequency;
    std::vector<Stats> layer_ratio;

    friend bool operator==(const TrialSummary&, const TrialSummary&) = default;
};

struct ExperimentResult {
    Experiment experiment = Experiment::matching;
    TrialConfig config;
    std::vector<TrialRecord> records;
    TrialSummary summary;

    friend bool operator==(const ExperimentResult&, const ExperimentResult&) = default;
};

/// Recomputes the summary from the records alone.
TrialSummary summarize(Experiment experiment, const TrialConfig& cfg,
                       const std::vector<TrialRecord>& records);

/// Runs cfg.trials matching trials. Every counted matching has passed
/// is_k_matching (and maximality for greedy, size = s for the generator);
/// generator stalls are recorded as failures.
ExperimentResult run_trials(const TrialConfig& cfg);

/// Per sample: 2s uniform vertices S, the far set Gamma_{>=k}(S), its size
/// and whether it induces an edge. Uses cfg.trials as the sample count
/// unless samples is given. Throws RegimeError when s < 1.
ExperimentResult verify_theorem_5_1(const TrialConfig& cfg, std::optional<std::uint64_t> samples = {});

/// Per sample: |Gamma_i(S)| / (2 s d^i) for i = 0..k-2 (0 for an empty
/// layer). Requires k >= 3.
ExperimentResult verify_layer_growth(const TrialConfig& cfg, std::optional<std::uint64_t> samples = {});

/// Size of S / 2 used by the far-set and layer runs.
std::uint64_t sample_pair_count(const TrialConfig& cfg);

void emit(const ExperimentResult& result, OutputFormat format, std::ostream& os);
void emit(const ExperimentResult& result, OutputFormat format, const std::filesystem::path& path);

/// Inverse of emit(..., OutputFormat::json, ...). Throws ParseError.
ExperimentResult parse_json(std::istream& is);

std::vector<std::string> csv_header(std::uint32_t k);

} // namespace kmatch
