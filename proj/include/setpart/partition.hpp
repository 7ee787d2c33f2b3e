#pragma once

#include <functional>
#include <span>
#include <vector>

namespace setpart {

/// Restricted growth sequence: a_1 = 0 and a_{i+1} <= 1 + max(a_1..a_i).
/// Bijective coding of set partitions; a_i + 1 is the block index of
/// element i when blocks are numbered by first appearance.
struct Rgs {
    std::vector<int> a;

    int n() const { return static_cast<int>(a.size()); }
    static bool valid(std::span<const int> a);
    bool operator==(const Rgs&) const = default;
};

/// Partition of {1..n} in canonical form: each block strictly increasing,
/// blocks ordered by their minimum. Immutable once built.
class SetPartition {
  public:
    /// Empty placeholder (n = 0); every factory below returns a valid
    /// partition with n >= 1.
    SetPartition() = default;

    /// Validates and canonicalizes an arbitrary block family.
    SetPartition(int n, std::vector<std::vector<int>> blocks);

    static SetPartition from_rgs(const Rgs& rgs);

    /// Builds from a box assignment (values in [0, box_count)), as produced
    /// by dropping labelled balls into boxes. Only "same box" matters.
    static SetPartition from_assignment(std::span<const int> boxes, int box_count);

    Rgs to_rgs() const;

    int n() const { return n_; }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }

    /// Size of the block containing element i (1-based).
    int block_size_of(int element) const;

    /// x_i = 1-based index of the block containing i; equals the RGS value
    /// plus one.
    std::vector<int> block_index_sequence() const;

    bool operator==(const SetPartition&) const = default;

  private:
    int n_ = 0;
    std::vector<std::vector<int>> blocks_;
};

/// Pair of consecutive elements of one block (lo < hi, nothing of the
/// block strictly between them).
struct Arc {
    int lo;
    int hi;
    bool operator==(const Arc&) const = default;
};

/// Number of positions i with x_{i+1} = x_i, i.e. adjacent elements in the
/// same block.
int levels(const SetPartition& p);

/// Sum over blocks of (max - min + 1).
long long dimension_index(const SetPartition& p);

/// All arcs, ordered by lo.
std::vector<Arc> arcs(const SetPartition& p);

/// Number of arc pairs (i,j), (i',j') with i < i' < j < j'.
/// Fenwick-tree sweep, O(arcs * log n).
long long crossings(const SetPartition& p);

/// Quadratic brute force over arc pairs; reference implementation for
/// testing the sweep.
long long crossings_ref(const SetPartition& p);

struct PartitionStats {
    int levels = 0;
    long long dimension = 0;
    long long crossings = 0;
    int blocks = 0;
};

/// All four statistics of a canonical partition (crossings via the sweep).
PartitionStats partition_stats(const SetPartition& p);

/// Same statistics computed straight off a box assignment without building
/// a SetPartition. This is the hot path of the Monte Carlo kernels; one
/// instance per thread, reused across samples.
class StatsKernel {
  public:
    PartitionStats from_assignment(std::span<const int> boxes, int box_count);

  private:
    std::vector<int> fenwick_;
    std::vector<int> box_min_, box_max_, box_prev_;
    std::vector<int> touched_;
};

/// Streams every restricted growth sequence of length n in lexicographic
/// order. |stream| = B_n.
class RgsEnumerator {
  public:
    static constexpr int kDefaultCap = 14;

    explicit RgsEnumerator(int n, int cap = kDefaultCap);

    /// Fills `out` with the next sequence; false when exhausted.
    bool next(Rgs& out);

  private:
    int n_;
    bool first_ = true;
    bool done_ = false;
    std::vector<int> a_;
    std::vector<int> max_prefix_;
};

/// Visits every partition of [n] exactly once, in lexicographic RGS order.
void enumerate_partitions(int n, const std::function<void(const SetPartition&)>& visit,
                          int cap = RgsEnumerator::kDefaultCap);

} // namespace setpart
