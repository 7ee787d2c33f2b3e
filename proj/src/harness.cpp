#include "setpart/harness.hpp"

#include "setpart/sampler.hpp"
#include "setpart/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

namespace setpart {

std::string generator_name(Generator g) {
    return g == Generator::stam ? "stam" : "pipeline";
}

Generator parse_generator(const std::string& name) {
    if (name == "stam") return Generator::stam;
    if (name == "pipeline" || name == "conditional_pipeline") return Generator::conditional_pipeline;
    throw std::invalid_argument("unknown generator: " + name);
}

std::string normalization_name(Normalization n) {
    return n == Normalization::exact ? "exact" : "asymptotic";
}

Normalization parse_normalization(const std::string& name) {
    if (name == "exact") return Normalization::exact;
    if (name == "asymptotic") return Normalization::asymptotic;
    throw std::invalid_argument("unknown normalization: " + name);
}

Normalization default_normalization(Stat stat) {
    switch (stat) {
        case Stat::dimension:
        case Stat::crossings: return Normalization::asymptotic;
        default: return Normalization::exact;
    }
}

namespace {

MomentReport normalization_moments(const ExperimentConfig& cfg) {
    if (cfg.normalization == Normalization::exact) {
        switch (cfg.statistic) {
            case Stat::levels: {
                const BellTable table(cfg.n);
                return levels_moments_exact(cfg.n, table);
            }
            case Stat::blocks: {
                const BellTable table(cfg.n + 2);
                return blocks_moments_exact(cfg.n, table);
            }
            case Stat::boxes: {
                const BellTable table(cfg.n + 2);
                return m_moments_exact(cfg.n, table);
            }
            default:
                throw std::invalid_argument("no exact moment formula for " + stat_name(cfg.statistic) +
                                            "; use asymptotic normalization");
        }
    }
    switch (cfg.statistic) {
        case Stat::levels: return levels_moments_asymptotic(cfg.n);
        case Stat::dimension: return dim_moments_asymptotic(cfg.n);
        case Stat::crossings: return cr_moments_asymptotic(cfg.n);
        case Stat::blocks: return blocks_moments_asymptotic(cfg.n);
        case Stat::boxes: return m_moments_asymptotic(cfg.n);
    }
    throw std::logic_error("normalization_moments: bad enum");
}

double stat_value(Stat stat, const PartitionStats& s, long long m) {
    switch (stat) {
        case Stat::levels: return s.levels;
        case Stat::dimension: return static_cast<double>(s.dimension);
        case Stat::crossings: return static_cast<double>(s.crossings);
        case Stat::blocks: return s.blocks;
        case Stat::boxes: return static_cast<double>(m);
    }
    throw std::logic_error("stat_value: bad enum");
}

// One Monte Carlo draw of the configured statistic, on substream `index`.
double draw_value(const ExperimentConfig& cfg, const MuSampler& mu, StatsKernel& kernel,
                  std::vector<int>& boxes, std::uint64_t index) {
    Xoshiro256pp rng = Xoshiro256pp::substream(cfg.seed, index);
    const long long m = stam_assignment(mu, rng, boxes);
    if (cfg.generator == Generator::stam) {
        const PartitionStats s = kernel.from_assignment(boxes, static_cast<int>(m));
        return stat_value(cfg.statistic, s, m);
    }
    const auto base = SetPartition::from_assignment(boxes, static_cast<int>(m));
    const auto draw = conditional_sample(min_max_profile(base), rng);
    const PartitionStats s = partition_stats(draw.partition);
    return stat_value(cfg.statistic, s, m);
}

Histogram build_histogram(const std::vector<double>& sorted, int requested_bins) {
    const auto n = static_cast<long long>(sorted.size());
    const double lo = sorted.front();
    const double hi = sorted.back();
    int bins = requested_bins;
    if (bins == 0) {
        // Freedman-Diaconis width, clamped to a sane bin count.
        const double iqr = sorted[static_cast<std::size_t>(0.75 * (n - 1))] -
                           sorted[static_cast<std::size_t>(0.25 * (n - 1))];
        const double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
        bins = width > 0.0 && hi > lo ? static_cast<int>(std::ceil((hi - lo) / width)) : 10;
        bins = std::clamp(bins, 10, 400);
    }
    Histogram h;
    h.edges.resize(bins + 1);
    h.counts.assign(bins, 0);
    const double span = hi > lo ? hi - lo : 1.0;
    for (int i = 0; i <= bins; ++i)
        h.edges[i] = lo + span * static_cast<double>(i) / static_cast<double>(bins);
    h.edges.back() = lo + span;
    for (double v : sorted) {
        auto idx = static_cast<long long>((v - lo) / span * bins);
        idx = std::clamp(idx, 0ll, static_cast<long long>(bins) - 1);
        ++h.counts[idx];
    }
    return h;
}

void require_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

class CsvWriter {
  public:
    explicit CsvWriter(const std::filesystem::path& path) : path_(path), out_(path) {
        if (!out_) throw IoError("cannot open " + path.string() + " for writing");
    }

    void line(const std::string& text) {
        out_ << text << '\n';
        if (!out_) throw IoError("write failed on " + path_.string());
    }

    void close() {
        out_.close();
        if (!out_) throw IoError("close failed on " + path_.string());
    }

  private:
    std::filesystem::path path_;
    std::ofstream out_;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_config_json(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
    CsvWriter out(dir / "config.json");
    out.line("{");
    out.line("  \"n\": " + std::to_string(cfg.n) + ",");
    out.line("  \"statistic\": \"" + stat_name(cfg.statistic) + "\",");
    out.line("  \"sample_count\": " + std::to_string(cfg.sample_count) + ",");
    out.line("  \"seed\": " + std::to_string(cfg.seed) + ",");
    out.line("  \"generator\": \"" + generator_name(cfg.generator) + "\",");
    out.line("  \"normalization\": \"" + normalization_name(cfg.normalization) + "\",");
    out.line("  \"bins\": " + std::to_string(cfg.bins) + ",");
    out.line("  \"output_path\": \"" + cfg.output_path + "\"");
    out.line("}");
    out.close();
}

void write_summary_json(const EmpiricalSummary& s, const std::filesystem::path& dir) {
    CsvWriter out(dir / "summary.json");
    out.line("{");
    out.line("  \"sample_count\": " + std::to_string(s.sample_count) + ",");
    out.line("  \"norm_mean\": " + fmt17(s.norm_mean) + ",");
    out.line("  \"norm_sd\": " + fmt17(s.norm_sd) + ",");
    out.line("  \"sample_mean\": " + fmt17(s.sample_mean) + ",");
    out.line("  \"sample_variance\": " + fmt17(s.sample_variance) + ",");
    out.line("  \"ks_distance\": " + fmt17(s.ks_distance) + ",");
    out.line("  \"ks_shape\": " + fmt17(s.ks_shape) + ",");
    out.line("  \"bins\": " + std::to_string(s.histogram.counts.size()));
    out.line("}");
    out.close();
}

} // namespace

void emit_histogram_qq(const EmpiricalSummary& summary, const std::string& dir) {
    const std::filesystem::path base(dir);
    require_dir(base);
    {
        CsvWriter out(base / "histogram.csv");
        out.line("bin_left,bin_right,count,normal_density_at_center");
        const auto& h = summary.histogram;
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            const double center = 0.5 * (h.edges[i] + h.edges[i + 1]);
            out.line(fmt17(h.edges[i]) + "," + fmt17(h.edges[i + 1]) + "," +
                     std::to_string(h.counts[i]) + "," + fmt17(normal_pdf(center)));
        }
        out.close();
    }
    {
        CsvWriter out(base / "qq.csv");
        out.line("theoretical_quantile,sample_quantile");
        const auto n = static_cast<double>(summary.sorted_standardized.size());
        for (std::size_t i = 0; i < summary.sorted_standardized.size(); ++i) {
            const double q = normal_quantile((static_cast<double>(i) + 0.5) / n);
            out.line(fmt17(q) + "," + fmt17(summary.sorted_standardized[i]));
        }
        out.close();
    }
}

EmpiricalSummary run_experiment(const ExperimentConfig& cfg) {
    if (cfg.n < 1) throw std::invalid_argument("run_experiment: n must be >= 1");
    if (cfg.sample_count < 100) throw std::invalid_argument("run_experiment: sample_count must be >= 100");
    if (cfg.bins != 0 && cfg.bins < 10) throw std::invalid_argument("run_experiment: bins must be >= 10");

    const MomentReport norm = normalization_moments(cfg);
    const double sd = std::sqrt(std::max(norm.variance, 0.0));
    const MuSampler mu(cfg.n);

    std::vector<double> values(cfg.sample_count);
    std::atomic<bool> failed{false};
#pragma omp parallel
    {
        StatsKernel kernel;
        std::vector<int> boxes;
#pragma omp for schedule(static)
        for (long long i = 0; i < cfg.sample_count; ++i) {
            if (failed.load(std::memory_order_relaxed)) continue;
            try {
                values[i] = draw_value(cfg, mu, kernel, boxes, static_cast<std::uint64_t>(i));
            } catch (...) {
                failed.store(true, std::memory_order_relaxed);
            }
        }
    }
    if (failed.load()) throw std::runtime_error("run_experiment: a sample draw failed");

    EmpiricalSummary summary;
    summary.sample_count = cfg.sample_count;
    summary.norm_mean = norm.mean;
    summary.norm_sd = sd;

    std::vector<double> z(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        z[i] = sd > 0.0 ? (values[i] - norm.mean) / sd : 0.0;

    // Deterministic single-threaded reduction, in sample-index order.
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= static_cast<double>(z.size());
    double ss = 0.0;
    for (double v : z) ss += (v - mean) * (v - mean);
    summary.sample_mean = mean;
    summary.sample_variance = ss / static_cast<double>(z.size() - 1);

    std::sort(z.begin(), z.end());
    summary.ks_distance = ks_normal(z);
    summary.histogram = build_histogram(z, cfg.bins);

    const double sample_sd = std::sqrt(summary.sample_variance);
    if (sample_sd > 0.0) {
        std::vector<double> studentized(z.size());
        for (std::size_t i = 0; i < z.size(); ++i)
            studentized[i] = (z[i] - mean) / sample_sd; // z is sorted, order preserved
        summary.ks_shape = ks_normal(studentized);
    } else {
        summary.ks_shape = summary.ks_distance;
    }
    summary.sorted_standardized = std::move(z);

    if (!cfg.output_path.empty()) {
        const std::filesystem::path dir(cfg.output_path);
        require_dir(dir);
        write_config_json(cfg, dir);
        write_summary_json(summary, dir);
        emit_histogram_qq(summary, cfg.output_path);
    }
    return summary;
}

UniformityResult uniformity_experiment(int n, long long samples, std::uint64_t seed,
                                       Generator generator) {
    if (n < 1 || n > 10)
        throw std::invalid_argument("uniformity_experiment: n must be in [1, 10] (cell table is enumerated)");
    // Index every partition by its RGS, in lexicographic order.
    std::map<std::vector<int>, int> index;
    {
        RgsEnumerator en(n);
        Rgs rgs;
        while (en.next(rgs)) index.emplace(rgs.a, static_cast<int>(index.size()));
    }
    std::vector<long long> counts(index.size(), 0);
    const MuSampler mu(n);
#pragma omp parallel
    {
        std::vector<long long> local(counts.size(), 0);
        std::vector<int> boxes;
#pragma omp for schedule(static)
        for (long long i = 0; i < samples; ++i) {
            Xoshiro256pp rng = Xoshiro256pp::substream(seed, static_cast<std::uint64_t>(i));
            const long long m = stam_assignment(mu, rng, boxes);
            auto partition = SetPartition::from_assignment(boxes, static_cast<int>(m));
            if (generator == Generator::conditional_pipeline)
                partition = conditional_sample(min_max_profile(partition), rng).partition;
            ++local[index.at(partition.to_rgs().a)];
        }
#pragma omp critical
        for (std::size_t c = 0; c < counts.size(); ++c) counts[c] += local[c];
    }
    const ChiSquareResult chi = chi_square_uniform(counts, samples);
    return UniformityResult{n, samples, chi.statistic, chi.dof, chi.p_value};
}

ConcentrationResult concentration_experiment(long long n, long long trials, std::uint64_t seed) {
    if (n < 2 || trials < 1)
        throw std::invalid_argument("concentration_experiment: need n >= 2, trials >= 1");
    ConcentrationResult result;
    result.n = n;
    result.trials = trials;
    const double alpha = solve_alpha(n).alpha;
    result.m = std::max(1ll, static_cast<long long>(std::llround(static_cast<double>(n) / alpha)));
    const double m = static_cast<double>(result.m);
    result.center = static_cast<double>(n) * m - 2.0 * m * m;
    result.scale = m * std::sqrt(m);

    std::vector<double> deviations(trials);
    std::vector<double> empties(trials);
#pragma omp parallel for schedule(static)
    for (long long t = 0; t < trials; ++t) {
        Xoshiro256pp rng = Xoshiro256pp::substream(seed, static_cast<std::uint64_t>(t));
        const BallsTrace trace = balls_process(n, result.m, rng);
        deviations[t] = std::abs(static_cast<double>(trace.span_sum) - result.center) / result.scale;
        empties[t] = static_cast<double>(trace.empty_end);
    }
    std::sort(deviations.begin(), deviations.end());
    result.p50 = deviations[static_cast<std::size_t>(0.50 * (trials - 1))];
    result.p95 = deviations[static_cast<std::size_t>(0.95 * (trials - 1))];

    double mean = 0.0;
    for (double e : empties) mean += e;
    mean /= static_cast<double>(trials);
    double ss = 0.0;
    for (double e : empties) ss += (e - mean) * (e - mean);
    result.empty_mean = mean;
    result.empty_variance = trials > 1 ? ss / static_cast<double>(trials - 1) : 0.0;
    return result;
}

DecompositionCheck crossing_decomposition_check(int n, long long samples, std::uint64_t seed) {
    if (n < 1 || samples < 1)
        throw std::invalid_argument("crossing_decomposition_check: need n >= 1, samples >= 1");
    const MuSampler mu(n);
    std::atomic<long long> mismatches{0};
#pragma omp parallel
    {
        std::vector<int> boxes;
#pragma omp for schedule(static)
        for (long long i = 0; i < samples; ++i) {
            Xoshiro256pp rng = Xoshiro256pp::substream(seed, static_cast<std::uint64_t>(i));
            const long long m = stam_assignment(mu, rng, boxes);
            const auto base = SetPartition::from_assignment(boxes, static_cast<int>(m));
            const auto draw = conditional_sample(min_max_profile(base), rng);
            long long trace_sum = 0;
            for (int x : draw.x_trace) trace_sum += x;
            if (trace_sum != crossings(draw.partition)) ++mismatches;
        }
    }
    return DecompositionCheck{n, samples, mismatches.load()};
}

} // namespace setpart
