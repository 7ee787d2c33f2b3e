#pragma once

#include "setpart/moments.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace setpart {

/// Thrown for filesystem failures so the CLI can map them to their own
/// exit code.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Generator { stam, conditional_pipeline };
std::string generator_name(Generator g);
Generator parse_generator(const std::string& name);

enum class Normalization { exact, asymptotic };
std::string normalization_name(Normalization n);
Normalization parse_normalization(const std::string& name);

/// Exact normalization where closed forms exist (levels, blocks, boxes),
/// asymptotic for dimension and crossings.
Normalization default_normalization(Stat stat);

struct ExperimentConfig {
    int n = 0;
    Stat statistic = Stat::levels;
    long long sample_count = 0; // >= 100
    std::uint64_t seed = 0;
    Generator generator = Generator::stam;
    Normalization normalization = Normalization::exact;
    int bins = 0;               // 0 = Freedman-Diaconis; explicit values must be >= 10
    std::string output_path;    // empty = no files written
};

struct Histogram {
    std::vector<double> edges;     // bins + 1 ascending edges
    std::vector<long long> counts; // counts sum to sample_count
};

struct EmpiricalSummary {
    long long sample_count = 0;
    double norm_mean = 0.0; // standardization constants actually used
    double norm_sd = 0.0;
    double sample_mean = 0.0;     // of the standardized values
    double sample_variance = 0.0; // unbiased, of the standardized values
    double ks_distance = 0.0;     // standardized sample against Phi
    // KS of the sample studentized by its own mean/sd: pure shape
    // normality, insensitive to the drift of the normalization formulas.
    double ks_shape = 0.0;
    Histogram histogram;
    std::vector<double> sorted_standardized; // ascending; the Q-Q sample quantiles
};

/// Runs the seeded Monte Carlo experiment: draws partitions, standardizes
/// the chosen statistic, and computes the normality diagnostics. Sample i
/// always uses RNG substream i of the seed, so the result is a pure
/// function of the config no matter how many OpenMP threads execute it.
/// When cfg.output_path is set, writes config.json, summary.json,
/// histogram.csv and qq.csv there.
EmpiricalSummary run_experiment(const ExperimentConfig& cfg);

/// Writes histogram.csv (bin_left, bin_right, count,
/// normal_density_at_center) and qq.csv (theoretical_quantile,
/// sample_quantile) under dir. Numbers carry 17 significant digits, so
/// reruns are byte-identical.
void emit_histogram_qq(const EmpiricalSummary& summary, const std::string& dir);

/// Uniformity check: draws partitions of [n], tallies them against the
/// lexicographic RGS index, and runs the chi-square test over all B_n
/// cells. n is capped so the cell table stays enumerable.
struct UniformityResult {
    int n = 0;
    long long samples = 0;
    double statistic = 0.0;
    long long dof = 0;
    double p_value = 0.0;
};

UniformityResult uniformity_experiment(int n, long long samples, std::uint64_t seed,
                                       Generator generator);

/// Balls-in-boxes concentration experiment at m = round(n/alpha_n):
/// distribution of |span_sum - (n m - 2 m^2)| / m^{3/2} over seeded
/// trials, plus the empty-box summary.
struct ConcentrationResult {
    long long n = 0;
    long long m = 0;
    long long trials = 0;
    double center = 0.0; // n m - 2 m^2
    double scale = 0.0;  // m^{3/2}
    double p50 = 0.0;    // median of the normalized deviations
    double p95 = 0.0;
    double empty_mean = 0.0;
    double empty_variance = 0.0;
};

ConcentrationResult concentration_experiment(long long n, long long trials, std::uint64_t seed);

/// Draws via the three-step pipeline (Stam -> profile -> conditional) and
/// verifies sum(x_trace) == crossings on every draw.
struct DecompositionCheck {
    int n = 0;
    long long samples = 0;
    long long mismatches = 0;
};

DecompositionCheck crossing_decomposition_check(int n, long long samples, std::uint64_t seed);

} // namespace setpart
