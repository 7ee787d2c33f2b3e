#pragma once

#include "setpart/partition.hpp"
#include "setpart/rng.hpp"

#include <cstdint>
#include <vector>

namespace setpart {

/// Samples the box-count law mu_n(m) proportional to m^n/m! by inverse
/// CDF over a window of +-15 standard deviations around the mean (both
/// from the usual normal limit for mu_n). The truncated mass is far below
/// 1e-12; weights inside the window are exact up to log-space rounding.
/// Immutable after construction, shareable across threads.
class MuSampler {
  public:
    explicit MuSampler(long long n);

    long long sample(Xoshiro256pp& rng) const;

    long long n() const { return n_; }
    long long window_lo() const { return lo_; }
    long long window_hi() const { return lo_ + static_cast<long long>(cdf_.size()) - 1; }

  private:
    long long n_;
    long long lo_;
    std::vector<double> cdf_;
};

/// One-shot convenience wrapper; builds the window each call. Use a
/// MuSampler directly when drawing many times for the same n.
long long sample_m(long long n, Xoshiro256pp& rng);

/// One draw of Stam's algorithm: choose M from mu_n, drop n labelled
/// balls uniformly into M boxes, read off the induced partition. The
/// partition is uniform on the set partitions of [n].
struct StamDraw {
    long long n = 0;
    long long m = 0;               // box count drawn from mu_n
    std::vector<int> assignment;   // element i+1 -> box in [0, m)
    SetPartition partition;
    long long empty_boxes = 0;     // m - block count
};

StamDraw stam_sample(const MuSampler& mu, Xoshiro256pp& rng);

/// Hot-path variant: fills `boxes` with the assignment and returns m,
/// skipping partition construction. Feed the result to StatsKernel.
long long stam_assignment(const MuSampler& mu, Xoshiro256pp& rng, std::vector<int>& boxes);

/// Block-minimum and block-maximum sets of a partition plus the open-block
/// counts a_k = #{blocks with min < k <= max}.
struct MinMaxProfile {
    int n = 0;
    std::vector<int> mins;   // ascending; contains 1
    std::vector<int> maxes;  // ascending; contains n
    std::vector<int> a;      // a[k-1] = a_k, k = 1..n
};

MinMaxProfile min_max_profile(const SetPartition& p);

/// Uniform partition conditioned on a min/max profile, built by scanning
/// k = 1..n: minima open blocks, every other k joins a uniformly random
/// open block, and maxima close the block they join. x_trace records, for
/// each non-minimum k, how many open blocks had a larger element
/// immediately preceding k than the block k joined; the sum of the trace
/// is exactly the crossing number of the resulting partition.
struct ConditionalDraw {
    SetPartition partition;
    std::vector<int> x_trace; // one entry per element, 0 at block minima
};

ConditionalDraw conditional_sample(const MinMaxProfile& profile, Xoshiro256pp& rng);

/// Drops balls 1..n uniformly into m boxes and records the occupancy
/// history used by the concentration experiments.
struct BallsTrace {
    long long n = 0;
    long long m = 0;
    std::vector<long long> waits; // fill times of the boxes that did fill, ascending
    long long empty_end = 0;      // boxes still empty after ball n
    long long sum_waits = 0;
    long long span_sum = 0;       // sum over nonempty boxes of (max - min + 1)
};

BallsTrace balls_process(long long n, long long m, Xoshiro256pp& rng);

} // namespace setpart
