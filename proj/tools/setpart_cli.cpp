// Command line front end: every subcommand is a thin wrapper over the
// library and is a pure function of its flags and seed.

#include "setpart/bell.hpp"
#include "setpart/harness.hpp"
#include "setpart/moments.hpp"
#include "setpart/partition.hpp"
#include "setpart/sampler.hpp"
#include "setpart/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

constexpr const char* kVersion = "setpart 1.0.0";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string rgs_string(const setpart::Rgs& rgs) {
    std::string out;
    for (std::size_t i = 0; i < rgs.a.size(); ++i) {
        if (i) out += '-';
        out += std::to_string(rgs.a[i]);
    }
    return out;
}

void set_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

void run_bell(int max_n) {
    // One extra entry so every row can carry its forward ratio.
    const setpart::BellTable table(max_n + 1);
    std::printf("n,bell,alpha,ratio_next\n");
    for (int n = 0; n <= max_n; ++n) {
        const auto alpha = setpart::solve_alpha(n);
        const double ratio = mpq_class(table.ratio(n, 1)).get_d();
        std::printf("%d,%s,%s,%s\n", n, table.value(n).get_str().c_str(),
                    fmt17(alpha.alpha).c_str(), fmt17(ratio).c_str());
    }
}

void run_enumerate(int n, bool stats) {
    setpart::RgsEnumerator en(n);
    setpart::Rgs rgs;
    if (stats) {
        std::printf("rgs,levels,dimension,crossings,blocks\n");
        while (en.next(rgs)) {
            const auto p = setpart::SetPartition::from_rgs(rgs);
            const auto s = setpart::partition_stats(p);
            std::printf("%s,%d,%lld,%lld,%d\n", rgs_string(rgs).c_str(), s.levels, s.dimension,
                        s.crossings, s.blocks);
        }
    } else {
        std::printf("rgs\n");
        while (en.next(rgs)) std::printf("%s\n", rgs_string(rgs).c_str());
    }
}

void run_sample(int n, long long count, std::uint64_t seed, const std::string& emit) {
    const setpart::MuSampler mu(n);
    if (emit == "rgs") {
        std::printf("index,rgs\n");
        for (long long i = 0; i < count; ++i) {
            auto rng = setpart::Xoshiro256pp::substream(seed, static_cast<std::uint64_t>(i));
            const auto draw = setpart::stam_sample(mu, rng);
            std::printf("%lld,%s\n", i, rgs_string(draw.partition.to_rgs()).c_str());
        }
        return;
    }
    std::printf("index,m,empty_boxes,levels,dimension,crossings,blocks\n");
    setpart::StatsKernel kernel;
    std::vector<int> boxes;
    for (long long i = 0; i < count; ++i) {
        auto rng = setpart::Xoshiro256pp::substream(seed, static_cast<std::uint64_t>(i));
        const long long m = setpart::stam_assignment(mu, rng, boxes);
        const auto s = kernel.from_assignment(boxes, static_cast<int>(m));
        std::printf("%lld,%lld,%lld,%d,%lld,%lld,%d\n", i, m, m - s.blocks, s.levels, s.dimension,
                    s.crossings, s.blocks);
    }
}

void run_moments(int n, const std::string& stat_str, bool exact, bool asymptotic) {
    const setpart::Stat stat = setpart::parse_stat(stat_str);
    const bool use_exact =
        exact || (!asymptotic && setpart::default_normalization(stat) == setpart::Normalization::exact);
    setpart::MomentReport report;
    if (use_exact) {
        switch (stat) {
            case setpart::Stat::levels: {
                const setpart::BellTable table(n);
                report = setpart::levels_moments_exact(n, table);
                break;
            }
            case setpart::Stat::blocks: {
                const setpart::BellTable table(n + 2);
                report = setpart::blocks_moments_exact(n, table);
                break;
            }
            case setpart::Stat::boxes: {
                const setpart::BellTable table(n + 2);
                report = setpart::m_moments_exact(n, table);
                break;
            }
            default:
                throw std::invalid_argument("no exact closed form for " + stat_str +
                                            "; pass --asymptotic");
        }
    } else {
        switch (stat) {
            case setpart::Stat::levels: report = setpart::levels_moments_asymptotic(n); break;
            case setpart::Stat::dimension: report = setpart::dim_moments_asymptotic(n); break;
            case setpart::Stat::crossings: report = setpart::cr_moments_asymptotic(n); break;
            case setpart::Stat::blocks: report = setpart::blocks_moments_asymptotic(n); break;
            case setpart::Stat::boxes: report = setpart::m_moments_asymptotic(n); break;
        }
    }
    nlohmann::ordered_json j;
    j["n"] = report.n;
    j["statistic"] = setpart::stat_name(report.stat);
    j["kind"] = report.kind == setpart::MomentKind::exact ? "exact" : "asymptotic";
    j["mean"] = report.mean;
    j["variance"] = report.variance;
    if (report.mean_exact) j["mean_exact"] = report.mean_exact->get_str();
    if (report.variance_exact) j["variance_exact"] = report.variance_exact->get_str();
    std::cout << j.dump(2) << "\n";
}

void apply_config_file(const std::string& path, setpart::ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw setpart::IoError("cannot open config file " + path);
    nlohmann::json j;
    in >> j;
    if (j.contains("n")) cfg.n = j["n"].get<int>();
    if (j.contains("statistic")) cfg.statistic = setpart::parse_stat(j["statistic"].get<std::string>());
    if (j.contains("sample_count")) cfg.sample_count = j["sample_count"].get<long long>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("generator")) cfg.generator = setpart::parse_generator(j["generator"].get<std::string>());
    if (j.contains("normalization"))
        cfg.normalization = setpart::parse_normalization(j["normalization"].get<std::string>());
    else
        cfg.normalization = setpart::default_normalization(cfg.statistic);
    if (j.contains("bins")) cfg.bins = j["bins"].get<int>();
    if (j.contains("output_path")) cfg.output_path = j["output_path"].get<std::string>();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uniform random set partitions: exact Bell arithmetic, samplers, and "
                 "normality experiments"};
    app.option_defaults()->always_capture_default();
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // bell
    int bell_max_n = 0;
    auto* bell = app.add_subcommand("bell", "Print n, B_n, alpha_n, B_{n+1}/B_n as CSV");
    bell->add_option("--max-n", bell_max_n, "Largest n in the table (rows 0..max-n)")
        ->required()
        ->check(CLI::Range(0, setpart::BellTable::kDefaultCap - 1));

    // enumerate
    int enum_n = 0;
    bool enum_stats = false;
    auto* enumerate = app.add_subcommand("enumerate", "List every partition of [n] in RGS order");
    enumerate->add_option("--n", enum_n, "Ground set size (1..14)")->required()->check(CLI::Range(1, 14));
    enumerate->add_flag("--stats", enum_stats, "Also print levels, dimension, crossings, blocks");

    // sample
    int sample_n = 0;
    long long sample_count = 1;
    std::uint64_t sample_seed = 0;
    std::string sample_emit = "stats";
    auto* sample = app.add_subcommand("sample", "Stream uniform random partitions as CSV");
    sample->add_option("--n", sample_n, "Ground set size")->required()->check(CLI::PositiveNumber);
    sample->add_option("--count", sample_count, "Number of draws")->required()->check(CLI::PositiveNumber);
    sample->add_option("--seed", sample_seed, "Master seed (default 0)");
    sample->add_option("--emit", sample_emit, "Row format: stats (default) or rgs")
        ->check(CLI::IsMember({"stats", "rgs"}));

    // moments
    int mom_n = 0;
    std::string mom_stat;
    bool mom_exact = false, mom_asym = false;
    auto* moments = app.add_subcommand("moments", "Print a moment report as JSON");
    moments->add_option("--n", mom_n, "Ground set size")->required()->check(CLI::PositiveNumber);
    moments->add_option("--stat", mom_stat, "levels|dimension|crossings|blocks|boxes")->required();
    auto* flag_exact = moments->add_flag("--exact", mom_exact, "Exact rational formulas");
    moments->add_flag("--asymptotic", mom_asym, "Leading-order formulas")->excludes(flag_exact);

    // clt
    setpart::ExperimentConfig clt_cfg;
    std::string clt_stat, clt_gen, clt_norm, clt_config;
    int clt_threads = 0;
    auto* clt = app.add_subcommand("clt", "Monte Carlo normality experiment; writes CSV/JSON artifacts");
    auto* o_n = clt->add_option("--n", clt_cfg.n, "Ground set size");
    auto* o_stat = clt->add_option("--stat", clt_stat, "levels|dimension|crossings|blocks|boxes");
    auto* o_samples = clt->add_option("--samples", clt_cfg.sample_count, "Sample count (>= 100)");
    auto* o_seed = clt->add_option("--seed", clt_cfg.seed, "Master seed");
    auto* o_out = clt->add_option("--out", clt_cfg.output_path, "Output directory");
    auto* o_gen = clt->add_option("--generator", clt_gen, "stam (default) or pipeline")
                      ->check(CLI::IsMember({"stam", "pipeline"}));
    auto* o_norm = clt->add_option("--normalization", clt_norm, "exact or asymptotic (default per stat)")
                       ->check(CLI::IsMember({"exact", "asymptotic"}));
    auto* o_bins = clt->add_option("--bins", clt_cfg.bins, "Histogram bins (>= 10; 0 = auto)");
    clt->add_option("--threads", clt_threads, "OpenMP threads (0 = library default)");
    clt->add_option("--config", clt_config, "JSON config file; explicit flags override its values");

    // uniformity
    int uni_n = 0;
    long long uni_samples = 0;
    std::uint64_t uni_seed = 0;
    std::string uni_gen = "stam";
    auto* uniformity = app.add_subcommand("uniformity", "Chi-square test against uniform over all partitions");
    uniformity->add_option("--n", uni_n, "Ground set size (1..10)")->required()->check(CLI::Range(1, 10));
    uniformity->add_option("--samples", uni_samples, "Number of draws")->required()->check(CLI::PositiveNumber);
    uniformity->add_option("--seed", uni_seed, "Master seed");
    uniformity->add_option("--generator", uni_gen, "stam (default) or pipeline")
        ->check(CLI::IsMember({"stam", "pipeline"}));

    // lemma41
    long long lem_n = 0, lem_trials = 0;
    std::uint64_t lem_seed = 0;
    auto* lemma41 = app.add_subcommand("lemma41",
                                       "Span-sum concentration of the balls process at m = round(n/alpha)");
    lemma41->add_option("--n", lem_n, "Number of balls")->required()->check(CLI::Range(2ll, 100000000ll));
    lemma41->add_option("--trials", lem_trials, "Number of trials")->required()->check(CLI::PositiveNumber);
    lemma41->add_option("--seed", lem_seed, "Master seed");

    // conditional-check
    int cc_n = 0;
    long long cc_samples = 0;
    std::uint64_t cc_seed = 0;
    auto* ccheck = app.add_subcommand("conditional-check",
                                      "Verify the per-element crossing decomposition on pipeline draws");
    ccheck->add_option("--n", cc_n, "Ground set size")->required()->check(CLI::PositiveNumber);
    ccheck->add_option("--samples", cc_samples, "Number of draws")->required()->check(CLI::PositiveNumber);
    ccheck->add_option("--seed", cc_seed, "Master seed");

    // balls
    long long balls_n = 0, balls_m = 0, balls_trials = 0;
    std::uint64_t balls_seed = 0;
    auto* balls = app.add_subcommand("balls", "Raw balls-in-boxes trials as CSV");
    balls->add_option("--n", balls_n, "Number of balls")->required()->check(CLI::PositiveNumber);
    balls->add_option("--m", balls_m, "Number of boxes")->required()->check(CLI::PositiveNumber);
    balls->add_option("--trials", balls_trials, "Number of trials")->required()->check(CLI::PositiveNumber);
    balls->add_option("--seed", balls_seed, "Master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (bell->parsed()) {
            run_bell(bell_max_n);
        } else if (enumerate->parsed()) {
            run_enumerate(enum_n, enum_stats);
        } else if (sample->parsed()) {
            run_sample(sample_n, sample_count, sample_seed, sample_emit);
        } else if (moments->parsed()) {
            run_moments(mom_n, mom_stat, mom_exact, mom_asym);
        } else if (clt->parsed()) {
            if (!clt_config.empty()) {
                setpart::ExperimentConfig file_cfg;
                apply_config_file(clt_config, file_cfg);
                if (!*o_n) clt_cfg.n = file_cfg.n;
                if (!*o_samples) clt_cfg.sample_count = file_cfg.sample_count;
                if (!*o_seed) clt_cfg.seed = file_cfg.seed;
                if (!*o_out) clt_cfg.output_path = file_cfg.output_path;
                if (!*o_bins) clt_cfg.bins = file_cfg.bins;
                clt_cfg.statistic = file_cfg.statistic;
                clt_cfg.generator = file_cfg.generator;
                clt_cfg.normalization = file_cfg.normalization;
            } else {
                if (!*o_n || !*o_samples || !*o_out || !*o_stat)
                    throw std::invalid_argument("clt requires --n, --stat, --samples and --out (or --config)");
            }
            if (*o_stat) clt_cfg.statistic = setpart::parse_stat(clt_stat);
            if (*o_gen) clt_cfg.generator = setpart::parse_generator(clt_gen);
            if (*o_norm)
                clt_cfg.normalization = setpart::parse_normalization(clt_norm);
            else if (clt_config.empty())
                clt_cfg.normalization = setpart::default_normalization(clt_cfg.statistic);
            if (clt_cfg.output_path.empty())
                throw std::invalid_argument("clt requires an output directory (--out or config output_path)");
            set_threads(clt_threads);
            const auto summary = setpart::run_experiment(clt_cfg);
            nlohmann::ordered_json j;
            j["n"] = clt_cfg.n;
            j["statistic"] = setpart::stat_name(clt_cfg.statistic);
            j["sample_count"] = summary.sample_count;
            j["seed"] = clt_cfg.seed;
            j["generator"] = setpart::generator_name(clt_cfg.generator);
            j["normalization"] = setpart::normalization_name(clt_cfg.normalization);
            j["norm_mean"] = summary.norm_mean;
            j["norm_sd"] = summary.norm_sd;
            j["sample_mean"] = summary.sample_mean;
            j["sample_variance"] = summary.sample_variance;
            j["ks_distance"] = summary.ks_distance;
            j["ks_shape"] = summary.ks_shape;
            j["out"] = clt_cfg.output_path;
            std::cout << j.dump(2) << "\n";
        } else if (uniformity->parsed()) {
            const auto r = setpart::uniformity_experiment(uni_n, uni_samples, uni_seed,
                                                          setpart::parse_generator(uni_gen));
            nlohmann::ordered_json j;
            j["n"] = r.n;
            j["samples"] = r.samples;
            j["seed"] = uni_seed;
            j["generator"] = uni_gen;
            j["chi_square"] = r.statistic;
            j["dof"] = r.dof;
            j["p_value"] = r.p_value;
            std::cout << j.dump(2) << "\n";
        } else if (lemma41->parsed()) {
            const auto r = setpart::concentration_experiment(lem_n, lem_trials, lem_seed);
            nlohmann::ordered_json j;
            j["n"] = r.n;
            j["m"] = r.m;
            j["trials"] = r.trials;
            j["seed"] = lem_seed;
            j["center"] = r.center;
            j["scale"] = r.scale;
            j["normalized_deviation_p50"] = r.p50;
            j["normalized_deviation_p95"] = r.p95;
            j["empty_mean"] = r.empty_mean;
            j["empty_variance"] = r.empty_variance;
            std::cout << j.dump(2) << "\n";
        } else if (ccheck->parsed()) {
            const auto r = setpart::crossing_decomposition_check(cc_n, cc_samples, cc_seed);
            nlohmann::ordered_json j;
            j["n"] = r.n;
            j["samples"] = r.samples;
            j["seed"] = cc_seed;
            j["mismatches"] = r.mismatches;
            std::cout << j.dump(2) << "\n";
            if (r.mismatches != 0) return 1;
        } else if (balls->parsed()) {
            std::printf("trial,d_n,e_n,s_n\n");
            for (long long t = 0; t < balls_trials; ++t) {
                auto rng = setpart::Xoshiro256pp::substream(balls_seed, static_cast<std::uint64_t>(t));
                const auto trace = setpart::balls_process(balls_n, balls_m, rng);
                std::printf("%lld,%lld,%lld,%lld\n", t, trace.span_sum, trace.empty_end,
                            trace.sum_waits);
            }
        }
    } catch (const setpart::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
