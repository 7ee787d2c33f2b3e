#include "setpart/sampler.hpp"

#include "setpart/bell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace setpart {

MuSampler::MuSampler(long long n) : n_(n) {
    if (n < 1) throw std::invalid_argument("MuSampler: n must be >= 1");
    const double alpha = solve_alpha(n).alpha;
    const double mean = static_cast<double>(n) / alpha + 0.5 * alpha / ((1.0 + alpha) * (1.0 + alpha));
    const double sd = std::sqrt(static_cast<double>(n)) / alpha;
    lo_ = std::max(1ll, static_cast<long long>(std::floor(mean - 15.0 * sd)));
    const long long hi = std::max(lo_ + 1, static_cast<long long>(std::ceil(mean + 15.0 * sd)));

    std::vector<double> logw(hi - lo_ + 1);
    double max_logw = -HUGE_VAL;
    for (long long m = lo_; m <= hi; ++m) {
        logw[m - lo_] = mu_log_weight(n, m);
        max_logw = std::max(max_logw, logw[m - lo_]);
    }
    cdf_.resize(logw.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < logw.size(); ++i) {
        acc += std::exp(logw[i] - max_logw);
        cdf_[i] = acc;
    }
    for (auto& c : cdf_) c /= acc;
    cdf_.back() = 1.0;
}

long long MuSampler::sample(Xoshiro256pp& rng) const {
    const double u = rng.unit();
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    return lo_ + (it - cdf_.begin());
}

long long sample_m(long long n, Xoshiro256pp& rng) {
    return MuSampler(n).sample(rng);
}

long long stam_assignment(const MuSampler& mu, Xoshiro256pp& rng, std::vector<int>& boxes) {
    const long long m = mu.sample(rng);
    boxes.resize(mu.n());
    for (auto& b : boxes) b = static_cast<int>(rng.below(static_cast<std::uint64_t>(m)));
    return m;
}

StamDraw stam_sample(const MuSampler& mu, Xoshiro256pp& rng) {
    StamDraw draw;
    draw.n = mu.n();
    draw.m = stam_assignment(mu, rng, draw.assignment);
    draw.partition = SetPartition::from_assignment(draw.assignment, static_cast<int>(draw.m));
    draw.empty_boxes = draw.m - draw.partition.block_count();
    return draw;
}

MinMaxProfile min_max_profile(const SetPartition& p) {
    MinMaxProfile prof;
    prof.n = p.n();
    prof.mins.reserve(p.block_count());
    prof.maxes.reserve(p.block_count());
    for (const auto& b : p.blocks()) {
        prof.mins.push_back(b.front());
        prof.maxes.push_back(b.back());
    }
    std::sort(prof.maxes.begin(), prof.maxes.end()); // mins already ascending
    // a_k = #{blocks with min < k <= max} by a difference sweep.
    std::vector<int> diff(p.n() + 2, 0);
    for (const auto& b : p.blocks()) {
        if (b.front() + 1 <= b.back()) {
            ++diff[b.front() + 1];
            --diff[b.back() + 1];
        }
    }
    prof.a.resize(p.n());
    int open = 0;
    for (int k = 1; k <= p.n(); ++k) {
        open += diff[k];
        prof.a[k - 1] = open;
    }
    return prof;
}

ConditionalDraw conditional_sample(const MinMaxProfile& profile, Xoshiro256pp& rng) {
    const int n = profile.n;
    if (n < 1) throw std::invalid_argument("conditional_sample: empty profile");
    std::vector<char> is_min(n + 1, 0), is_max(n + 1, 0);
    for (int m : profile.mins) is_min.at(m) = 1;
    for (int m : profile.maxes) is_max.at(m) = 1;

    std::vector<std::vector<int>> blocks;
    blocks.reserve(profile.mins.size());
    // Open blocks ordered by their last element, ascending. Appending the
    // receiving block keeps the order because its last element becomes k.
    std::vector<int> open;
    ConditionalDraw draw;
    draw.x_trace.assign(n, 0);

    for (int k = 1; k <= n; ++k) {
        if (is_min[k]) {
            blocks.push_back({k});
            if (!is_max[k]) open.push_back(static_cast<int>(blocks.size()) - 1);
            continue;
        }
        const int open_count = static_cast<int>(open.size());
        if (open_count == 0)
            throw std::invalid_argument("conditional_sample: profile leaves element " +
                                        std::to_string(k) + " without an open block");
        if (!profile.a.empty() && profile.a[k - 1] != open_count)
            throw std::invalid_argument("conditional_sample: profile a_" + std::to_string(k) +
                                        " = " + std::to_string(profile.a[k - 1]) +
                                        " disagrees with the " + std::to_string(open_count) +
                                        " open blocks");
        const int pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(open_count)));
        const int block_id = open[pick];
        // Crossings contributed at k: one per open block whose preceding
        // element is larger than that of the chosen block.
        draw.x_trace[k - 1] = open_count - 1 - pick;
        blocks[block_id].push_back(k);
        open.erase(open.begin() + pick);
        if (!is_max[k]) open.push_back(block_id);
    }
    if (!open.empty())
        throw std::invalid_argument("conditional_sample: profile leaves blocks unclosed");
    draw.partition = SetPartition(n, std::move(blocks));
    return draw;
}

BallsTrace balls_process(long long n, long long m, Xoshiro256pp& rng) {
    if (n < 1 || m < 1) throw std::invalid_argument("balls_process: need n >= 1, m >= 1");
    BallsTrace trace;
    trace.n = n;
    trace.m = m;
    std::vector<long long> box_min(m, 0), box_max(m, 0);
    long long filled = 0;
    for (long long t = 1; t <= n; ++t) {
        const auto b = static_cast<long long>(rng.below(static_cast<std::uint64_t>(m)));
        if (box_min[b] == 0) {
            box_min[b] = t;
            trace.waits.push_back(t);
            ++filled;
        }
        box_max[b] = t;
    }
    trace.empty_end = m - filled;
    for (long long w : trace.waits) trace.sum_waits += w;
    for (long long b = 0; b < m; ++b)
        if (box_min[b] != 0) trace.span_sum += box_max[b] - box_min[b] + 1;
    return trace;
}

} // namespace setpart
