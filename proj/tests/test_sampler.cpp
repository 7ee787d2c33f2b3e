#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "setpart/bell.hpp"
#include "setpart/partition.hpp"
#include "setpart/sampler.hpp"
#include "setpart/stats.hpp"

#include <cmath>
#include <map>

using namespace setpart;

TEST_CASE("sample_m at n = 1 hits 1/e") {
    const MuSampler mu(1);
    CHECK(mu.window_lo() == 1);
    Xoshiro256pp rng(101);
    const long long draws = 1000000;
    long long ones = 0;
    for (long long i = 0; i < draws; ++i) {
        const long long m = mu.sample(rng);
        CHECK(m >= 1);
        if (m == 1) ++ones;
    }
    const double p = 1.0 / std::exp(1.0);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
    CHECK(std::abs(static_cast<double>(ones) / draws - p) <= 4.0 * se);
}

TEST_CASE("sample_m matches the exact mean at n = 50") {
    const BellTable table(52);
    const double mean_exact = table.ratio(50, 1).get_d();
    const double var_exact = table.ratio(50, 2).get_d() - mean_exact * mean_exact;

    const MuSampler mu(50);
    Xoshiro256pp rng(2077);
    const long long draws = 200000;
    double sum = 0.0;
    for (long long i = 0; i < draws; ++i) sum += static_cast<double>(mu.sample(rng));
    const double mc_mean = sum / static_cast<double>(draws);
    const double se = std::sqrt(var_exact / static_cast<double>(draws));
    CHECK(std::abs(mc_mean - mean_exact) <= 4.0 * se);
}

TEST_CASE("window truncation loses less than 1e-12 of the mass") {
    const BellTable table(202);
    for (int n : {1, 10, 50, 200}) {
        const MuSampler mu(n);
        double window_mass = 0.0;
        for (long long m = mu.window_lo(); m <= mu.window_hi(); ++m)
            window_mass += std::exp(mu_log_weight(n, m, table));
        CHECK(window_mass >= 1.0 - 1e-12);
        CHECK(window_mass <= 1.0 + 1e-9);
    }
}

TEST_CASE("one-shot sampler wrapper works") {
    Xoshiro256pp rng(5);
    CHECK(sample_m(1, rng) >= 1);
    CHECK_THROWS_AS(MuSampler(0), std::invalid_argument);
}

TEST_CASE("stam at n = 1 is the unique partition") {
    const MuSampler mu(1);
    Xoshiro256pp rng(9);
    for (int i = 0; i < 200; ++i) {
        const auto draw = stam_sample(mu, rng);
        CHECK(draw.partition.block_count() == 1);
        CHECK(draw.empty_boxes == draw.m - 1);
    }
}

TEST_CASE("stam draws are uniform at n = 3") {
    const MuSampler mu(3);
    std::map<std::vector<int>, long long> counts;
    const long long draws = 50000;
    for (long long i = 0; i < draws; ++i) {
        Xoshiro256pp rng = Xoshiro256pp::substream(31337, i);
        counts[stam_sample(mu, rng).partition.to_rgs().a] += 1;
    }
    CHECK(counts.size() == 5);
    std::vector<long long> cells;
    for (const auto& [rgs, c] : counts) cells.push_back(c);
    const auto chi = chi_square_uniform(cells, draws);
    CHECK(chi.dof == 4);
    CHECK(chi.p_value > 1e-3);
}

TEST_CASE("stam draws are uniform at n = 5") {
    const MuSampler mu(5);
    std::map<std::vector<int>, long long> counts;
    const long long draws = 104000; // 2000 per cell
    std::vector<int> boxes;
    for (long long i = 0; i < draws; ++i) {
        Xoshiro256pp rng = Xoshiro256pp::substream(525252, i);
        const long long m = stam_assignment(mu, rng, boxes);
        counts[SetPartition::from_assignment(boxes, static_cast<int>(m)).to_rgs().a] += 1;
    }
    CHECK(counts.size() == 52);
    std::vector<long long> cells;
    for (const auto& [rgs, c] : counts) cells.push_back(c);
    const auto chi = chi_square_uniform(cells, draws);
    CHECK(chi.p_value > 1e-3);
}

TEST_CASE("empty boxes look independent of the partition at n = 50") {
    // Contingency table of empty-box count vs levels over seeded draws;
    // Pearson independence statistic on pooled cells.
    const MuSampler mu(50);
    Xoshiro256pp rng(4242);
    const long long draws = 100000;
    std::map<std::pair<int, int>, long long> table;
    StatsKernel kernel;
    std::vector<int> boxes;
    for (long long i = 0; i < draws; ++i) {
        const long long m = stam_assignment(mu, rng, boxes);
        const auto s = kernel.from_assignment(boxes, static_cast<int>(m));
        const int empties = std::min<int>(static_cast<int>(m) - s.blocks, 3); // 0,1,2,3+
        const int lv = std::min(s.levels, 5);                                 // 0..4,5+
        ++table[{empties, lv}];
    }
    std::map<int, long long> row_sums, col_sums;
    for (const auto& [key, c] : table) {
        row_sums[key.first] += c;
        col_sums[key.second] += c;
    }
    double stat = 0.0;
    for (const auto& [r, rs] : row_sums)
        for (const auto& [c, cs] : col_sums) {
            const double expected = static_cast<double>(rs) * static_cast<double>(cs) / draws;
            CHECK(expected >= 5.0);
            const auto it = table.find({r, c});
            const double observed = it == table.end() ? 0.0 : static_cast<double>(it->second);
            stat += (observed - expected) * (observed - expected) / expected;
        }
    const auto dof = static_cast<double>((row_sums.size() - 1) * (col_sums.size() - 1));
    const double p = regularized_gamma_q(dof / 2.0, stat / 2.0);
    CHECK(p > 1e-3);
}

TEST_CASE("min/max profile of the canonical example") {
    const SetPartition p(7, {{1, 3, 5}, {2, 4}, {6}, {7}});
    const auto prof = min_max_profile(p);
    CHECK(prof.mins == std::vector<int>{1, 2, 6, 7});
    CHECK(prof.maxes == std::vector<int>{4, 5, 6, 7});
    CHECK(prof.a == std::vector<int>{0, 1, 2, 2, 1, 0, 0});
}

TEST_CASE("all singletons have an all-zero profile") {
    const SetPartition p(4, {{1}, {2}, {3}, {4}});
    const auto prof = min_max_profile(p);
    CHECK(prof.mins == std::vector<int>{1, 2, 3, 4});
    CHECK(prof.maxes == prof.mins);
    CHECK(prof.a == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("profile identities hold exhaustively") {
    for (int n = 1; n <= 8; ++n) {
        enumerate_partitions(n, [&](const SetPartition& p) {
            const auto prof = min_max_profile(p);
            REQUIRE(prof.mins.front() == 1);
            REQUIRE(prof.maxes.back() == n);
            std::vector<char> is_min(n + 1, 0);
            for (int m : prof.mins) is_min[m] = 1;

            long long span_sum = 0;
            for (const auto& b : p.blocks()) span_sum += b.back() - b.front();
            long long a_total = 0, a_at_mins = 0;
            for (int k = 1; k <= n; ++k) {
                a_total += prof.a[k - 1];
                if (!is_min[k]) CHECK(prof.a[k - 1] >= 1);
                else a_at_mins += prof.a[k - 1];
            }
            // sum_k (a_k - 1) = sum_blocks (max - min) - n.
            CHECK(a_total - n == span_sum - n);
            // a_k at block starts counts the pairs of blocks whose spans
            // overlap (the later block opens inside the earlier one).
            long long overlaps = 0;
            for (std::size_t i = 0; i < p.blocks().size(); ++i)
                for (std::size_t j = 0; j < p.blocks().size(); ++j) {
                    if (i == j) continue;
                    const auto &bi = p.blocks()[i], &bj = p.blocks()[j];
                    if (bi.front() < bj.front() && bj.front() <= bi.back()) ++overlaps;
                }
            CHECK(a_at_mins == overlaps);
        });
    }
}

TEST_CASE("conditional draws split evenly over the profile fiber") {
    const SetPartition seed_partition(4, {{1, 3}, {2, 4}});
    const auto prof = min_max_profile(seed_partition);

    // Enumeration filter: partitions of [4] with mins {1,2}, maxes {3,4}.
    std::vector<std::vector<int>> fiber;
    enumerate_partitions(4, [&](const SetPartition& p) {
        const auto q = min_max_profile(p);
        if (q.mins == prof.mins && q.maxes == prof.maxes) fiber.push_back(p.to_rgs().a);
    });
    CHECK(fiber.size() == 2);

    std::map<std::vector<int>, long long> counts;
    const long long draws = 100000;
    for (long long i = 0; i < draws; ++i) {
        Xoshiro256pp rng = Xoshiro256pp::substream(88, i);
        const auto draw = conditional_sample(prof, rng);
        const auto q = min_max_profile(draw.partition);
        REQUIRE(q.mins == prof.mins);
        REQUIRE(q.maxes == prof.maxes);
        ++counts[draw.partition.to_rgs().a];
    }
    CHECK(counts.size() == 2);
    const double p_hat = static_cast<double>(counts.begin()->second) / draws;
    const double se = std::sqrt(0.25 / static_cast<double>(draws));
    CHECK(std::abs(p_hat - 0.5) <= 4.0 * se);
}

TEST_CASE("conditional draws are uniform over a larger fiber") {
    // Profile of 14|25|36: three interleaved blocks.
    const SetPartition seed_partition(6, {{1, 4}, {2, 5}, {3, 6}});
    const auto prof = min_max_profile(seed_partition);

    std::map<std::vector<int>, int> fiber_index;
    enumerate_partitions(6, [&](const SetPartition& p) {
        const auto q = min_max_profile(p);
        if (q.mins == prof.mins && q.maxes == prof.maxes)
            fiber_index.emplace(p.to_rgs().a, static_cast<int>(fiber_index.size()));
    });
    REQUIRE(fiber_index.size() == 6); // 3 choices at k=4 times 2 at k=5

    std::vector<long long> counts(fiber_index.size(), 0);
    const long long draws = 60000;
    for (long long i = 0; i < draws; ++i) {
        Xoshiro256pp rng = Xoshiro256pp::substream(929292, i);
        const auto draw = conditional_sample(prof, rng);
        ++counts[fiber_index.at(draw.partition.to_rgs().a)];
    }
    const auto chi = chi_square_uniform(counts, draws);
    CHECK(chi.p_value > 1e-3);
}

TEST_CASE("per-element crossing contributions are uniform on their ranges") {
    // Same profile: at k = 4 there are three open blocks, at k = 5 two.
    const SetPartition seed_partition(6, {{1, 4}, {2, 5}, {3, 6}});
    const auto prof = min_max_profile(seed_partition);
    const long long draws = 60000;
    std::vector<long long> x4(3, 0), x5(2, 0);
    for (long long i = 0; i < draws; ++i) {
        Xoshiro256pp rng = Xoshiro256pp::substream(939393, i);
        const auto draw = conditional_sample(prof, rng);
        ++x4[draw.x_trace[3]];
        ++x5[draw.x_trace[4]];
        CHECK(draw.x_trace[0] == 0); // block minima contribute nothing
        CHECK(draw.x_trace[1] == 0);
        CHECK(draw.x_trace[2] == 0);
    }
    CHECK(chi_square_uniform(x4, draws).p_value > 1e-3);
    CHECK(chi_square_uniform(x5, draws).p_value > 1e-3);
}

TEST_CASE("profiles with inconsistent open-block counts are rejected") {
    const SetPartition p(4, {{1, 3}, {2, 4}});
    auto prof = min_max_profile(p);
    prof.a[2] = 5; // claims five open blocks at k = 3
    Xoshiro256pp rng(2);
    CHECK_THROWS_AS(conditional_sample(prof, rng), std::invalid_argument);
}

TEST_CASE("single-block profile is deterministic with a zero trace") {
    const SetPartition p(6, {{1, 2, 3, 4, 5, 6}});
    const auto prof = min_max_profile(p);
    Xoshiro256pp rng(3);
    const auto draw = conditional_sample(prof, rng);
    CHECK(draw.partition == p);
    for (int x : draw.x_trace) CHECK(x == 0);
}

TEST_CASE("trace sums to the crossing number exactly") {
    for (int n : {10, 50, 200}) {
        const MuSampler mu(n);
        std::vector<int> boxes;
        for (long long i = 0; i < 1000; ++i) {
            Xoshiro256pp rng = Xoshiro256pp::substream(1000 + n, i);
            const long long m = stam_assignment(mu, rng, boxes);
            const auto base = SetPartition::from_assignment(boxes, static_cast<int>(m));
            const auto draw = conditional_sample(min_max_profile(base), rng);
            long long sum = 0;
            for (int x : draw.x_trace) sum += x;
            CHECK(sum == crossings_ref(draw.partition));
        }
    }
}

TEST_CASE("inconsistent profiles are rejected") {
    MinMaxProfile prof;
    prof.n = 3;
    prof.mins = {1};
    prof.maxes = {2}; // closes the only block before 3 arrives
    prof.a = {0, 1, 0};
    Xoshiro256pp rng(1);
    CHECK_THROWS_AS(conditional_sample(prof, rng), std::invalid_argument);
}

TEST_CASE("balls process degenerate cases") {
    Xoshiro256pp rng(17);
    const auto trace = balls_process(9, 1, rng);
    CHECK(trace.span_sum == 9);
    CHECK(trace.empty_end == 0);
    CHECK(trace.waits == std::vector<long long>{1});
    CHECK(trace.sum_waits == 1);
    CHECK_THROWS_AS(balls_process(0, 1, rng), std::invalid_argument);
    CHECK_THROWS_AS(balls_process(1, 0, rng), std::invalid_argument);
}

TEST_CASE("fill times are strictly increasing and bounded") {
    Xoshiro256pp rng(23);
    const auto trace = balls_process(500, 40, rng);
    REQUIRE(!trace.waits.empty());
    CHECK(trace.waits.front() == 1);
    for (std::size_t i = 0; i + 1 < trace.waits.size(); ++i)
        CHECK(trace.waits[i] < trace.waits[i + 1]);
    CHECK(trace.span_sum <= 500 * 40);
}

TEST_CASE("sum of fill times averages m^2 when every box fills") {
    const long long m = 25, n = 4000, trials = 3000;
    double sum = 0.0;
    for (long long t = 0; t < trials; ++t) {
        Xoshiro256pp rng = Xoshiro256pp::substream(60, t);
        const auto trace = balls_process(n, m, rng);
        REQUIRE(trace.empty_end == 0); // overwhelmingly likely at this n
        sum += static_cast<double>(trace.sum_waits);
    }
    const double mean = sum / static_cast<double>(trials);
    const double sd = std::sqrt(static_cast<double>(m * m * (m - 1)) / 2.0);
    const double se = sd / std::sqrt(static_cast<double>(trials));
    CHECK(std::abs(mean - static_cast<double>(m * m)) <= 4.0 * se);
}

TEST_CASE("empty boxes match the binomial occupancy mean") {
    const long long n = 10000;
    const double alpha = solve_alpha(n).alpha;
    const auto m = static_cast<long long>(std::llround(static_cast<double>(n) / alpha));
    const long long trials = 4000;
    double sum = 0.0, sum_sq = 0.0;
    for (long long t = 0; t < trials; ++t) {
        Xoshiro256pp rng = Xoshiro256pp::substream(61, t);
        const auto trace = balls_process(n, m, rng);
        sum += static_cast<double>(trace.empty_end);
        sum_sq += static_cast<double>(trace.empty_end) * static_cast<double>(trace.empty_end);
    }
    const double mean = sum / static_cast<double>(trials);
    const double var = sum_sq / static_cast<double>(trials) - mean * mean;
    const double expected =
        static_cast<double>(m) * std::pow(1.0 - 1.0 / static_cast<double>(m), static_cast<double>(n));
    const double se = std::sqrt(var / static_cast<double>(trials));
    CHECK(std::abs(mean - expected) <= 4.0 * se);
    // Poisson-likeness: dispersion near 1.
    CHECK(var / mean > 0.7);
    CHECK(var / mean < 1.3);
}

TEST_CASE("identical seeds give identical draws") {
    const MuSampler mu(40);
    Xoshiro256pp rng_a(987), rng_b(987);
    for (int i = 0; i < 50; ++i) {
        const auto a = stam_sample(mu, rng_a);
        const auto b = stam_sample(mu, rng_b);
        CHECK(a.m == b.m);
        CHECK(a.assignment == b.assignment);
        CHECK(a.partition == b.partition);
    }
}
