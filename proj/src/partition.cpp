#include "setpart/partition.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace setpart {

bool Rgs::valid(std::span<const int> a) {
    if (a.empty() || a[0] != 0) return false;
    int max_seen = 0;
    for (std::size_t i = 1; i < a.size(); ++i) {
        if (a[i] < 0 || a[i] > max_seen + 1) return false;
        max_seen = std::max(max_seen, a[i]);
    }
    return true;
}

SetPartition::SetPartition(int n, std::vector<std::vector<int>> blocks) {
    if (n < 1) throw std::invalid_argument("SetPartition: n must be >= 1");
    std::vector<char> seen(n + 1, 0);
    for (auto& b : blocks) {
        if (b.empty()) throw std::invalid_argument("SetPartition: empty block");
        std::sort(b.begin(), b.end());
        for (std::size_t i = 0; i < b.size(); ++i) {
            const int e = b[i];
            if (e < 1 || e > n) throw std::invalid_argument("SetPartition: element out of range");
            if ((i > 0 && b[i - 1] == e) || seen[e])
                throw std::invalid_argument("SetPartition: duplicate element " + std::to_string(e));
            seen[e] = 1;
        }
    }
    for (int e = 1; e <= n; ++e)
        if (!seen[e]) throw std::invalid_argument("SetPartition: element " + std::to_string(e) + " missing");
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    n_ = n;
    blocks_ = std::move(blocks);
}

SetPartition SetPartition::from_rgs(const Rgs& rgs) {
    if (!Rgs::valid(rgs.a)) throw std::invalid_argument("from_rgs: growth condition violated");
    SetPartition p;
    p.n_ = rgs.n();
    const int block_count = *std::max_element(rgs.a.begin(), rgs.a.end()) + 1;
    p.blocks_.resize(block_count);
    for (int i = 0; i < rgs.n(); ++i) p.blocks_[rgs.a[i]].push_back(i + 1);
    return p;
}

SetPartition SetPartition::from_assignment(std::span<const int> boxes, int box_count) {
    const int n = static_cast<int>(boxes.size());
    if (n < 1) throw std::invalid_argument("from_assignment: need at least one element");
    if (box_count < 1) throw std::invalid_argument("from_assignment: need at least one box");
    SetPartition p;
    p.n_ = n;
    // Blocks keyed by order of first appearance; elements arrive ascending,
    // so the result is already canonical.
    std::vector<int> slot(box_count, -1);
    for (int i = 0; i < n; ++i) {
        const int b = boxes[i];
        if (b < 0 || b >= box_count) throw std::invalid_argument("from_assignment: box out of range");
        if (slot[b] < 0) {
            slot[b] = static_cast<int>(p.blocks_.size());
            p.blocks_.emplace_back();
        }
        p.blocks_[slot[b]].push_back(i + 1);
    }
    return p;
}

Rgs SetPartition::to_rgs() const {
    Rgs rgs;
    rgs.a.resize(n_);
    for (std::size_t b = 0; b < blocks_.size(); ++b)
        for (int e : blocks_[b]) rgs.a[e - 1] = static_cast<int>(b);
    return rgs;
}

int SetPartition::block_size_of(int element) const {
    if (element < 1 || element > n_)
        throw std::out_of_range("block_size_of: element " + std::to_string(element) + " not in [1, n]");
    for (const auto& b : blocks_)
        if (std::binary_search(b.begin(), b.end(), element)) return static_cast<int>(b.size());
    return 0; // unreachable for a valid partition
}

std::vector<int> SetPartition::block_index_sequence() const {
    std::vector<int> x(n_);
    for (std::size_t b = 0; b < blocks_.size(); ++b)
        for (int e : blocks_[b]) x[e - 1] = static_cast<int>(b) + 1;
    return x;
}

int levels(const SetPartition& p) {
    const auto x = p.block_index_sequence();
    int count = 0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (x[i] == x[i + 1]) ++count;
    return count;
}

long long dimension_index(const SetPartition& p) {
    long long d = 0;
    for (const auto& b : p.blocks()) d += b.back() - b.front() + 1;
    return d;
}

std::vector<Arc> arcs(const SetPartition& p) {
    std::vector<Arc> out;
    out.reserve(p.n() - p.block_count());
    for (const auto& b : p.blocks())
        for (std::size_t i = 0; i + 1 < b.size(); ++i) out.push_back({b[i], b[i + 1]});
    std::sort(out.begin(), out.end(), [](const Arc& a, const Arc& b) { return a.lo < b.lo; });
    return out;
}

namespace {

inline void fenwick_add(std::vector<int>& t, int i, int v) {
    for (; i < static_cast<int>(t.size()); i += i & -i) t[i] += v;
}

inline long long fenwick_prefix(const std::vector<int>& t, int i) {
    long long s = 0;
    for (; i > 0; i -= i & -i) s += t[i];
    return s;
}

// Arcs must be fed in ascending hi order. For each arc (lo, hi) the
// number of earlier arcs (l, h) with l < lo < h equals the prefix sum at
// lo when every processed arc deposits +1 at l and -1 at h. Left and
// right endpoints are distinct across arcs, which makes the boundary
// cases exact.
struct CrossingSweep {
    std::vector<int>& fenwick;
    long long total = 0;

    void feed(int lo, int hi) {
        total += fenwick_prefix(fenwick, lo);
        fenwick_add(fenwick, lo, 1);
        fenwick_add(fenwick, hi, -1);
    }
};

} // namespace

long long crossings(const SetPartition& p) {
    std::vector<int> prev_in_block(p.n() + 1, 0);
    for (const auto& b : p.blocks())
        for (std::size_t i = 0; i + 1 < b.size(); ++i) prev_in_block[b[i + 1]] = b[i];
    std::vector<int> fenwick(p.n() + 1, 0);
    CrossingSweep sweep{fenwick};
    for (int hi = 1; hi <= p.n(); ++hi)
        if (prev_in_block[hi] > 0) sweep.feed(prev_in_block[hi], hi);
    return sweep.total;
}

long long crossings_ref(const SetPartition& p) {
    const auto a = arcs(p);
    long long total = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const Arc &x = a[i], &y = a[j];
            if (x.lo < y.lo && y.lo < x.hi && x.hi < y.hi) ++total;
            if (y.lo < x.lo && x.lo < y.hi && y.hi < x.hi) ++total;
        }
    return total;
}

PartitionStats partition_stats(const SetPartition& p) {
    return PartitionStats{levels(p), dimension_index(p), crossings(p), p.block_count()};
}

PartitionStats StatsKernel::from_assignment(std::span<const int> boxes, int box_count) {
    const int n = static_cast<int>(boxes.size());
    if (static_cast<int>(fenwick_.size()) < n + 1) fenwick_.resize(n + 1);
    std::fill(fenwick_.begin(), fenwick_.begin() + n + 1, 0);
    if (static_cast<int>(box_min_.size()) < box_count) {
        box_min_.resize(box_count);
        box_max_.resize(box_count);
        box_prev_.resize(box_count);
    }
    std::fill(box_prev_.begin(), box_prev_.begin() + box_count, 0);
    touched_.clear();

    PartitionStats stats;
    CrossingSweep sweep{fenwick_};
    for (int k = 1; k <= n; ++k) {
        const int b = boxes[k - 1];
        if (k >= 2 && b == boxes[k - 2]) ++stats.levels;
        if (box_prev_[b] == 0) {
            ++stats.blocks;
            box_min_[b] = k;
            touched_.push_back(b);
        } else {
            sweep.feed(box_prev_[b], k);
        }
        box_prev_[b] = k;
        box_max_[b] = k;
    }
    for (int b : touched_) stats.dimension += box_max_[b] - box_min_[b] + 1;
    stats.crossings = sweep.total;
    return stats;
}

RgsEnumerator::RgsEnumerator(int n, int cap) : n_(n) {
    if (n < 1) throw std::invalid_argument("RgsEnumerator: n must be >= 1");
    if (n > cap)
        throw std::invalid_argument("RgsEnumerator: n " + std::to_string(n) +
                                    " exceeds cap " + std::to_string(cap));
    a_.assign(n, 0);
    max_prefix_.assign(n, 0);
}

bool RgsEnumerator::next(Rgs& out) {
    if (done_) return false;
    if (first_) {
        first_ = false;
        out.a = a_;
        return true;
    }
    // Rightmost position that can still grow: a_i may rise to at most
    // 1 + max(a_1..a_{i-1}).
    int i = n_ - 1;
    while (i >= 1 && a_[i] > max_prefix_[i - 1]) --i;
    if (i < 1) {
        done_ = true;
        return false;
    }
    ++a_[i];
    max_prefix_[i] = std::max(max_prefix_[i - 1], a_[i]);
    for (int j = i + 1; j < n_; ++j) {
        a_[j] = 0;
        max_prefix_[j] = max_prefix_[i];
    }
    out.a = a_;
    return true;
}

void enumerate_partitions(int n, const std::function<void(const SetPartition&)>& visit, int cap) {
    RgsEnumerator en(n, cap);
    Rgs rgs;
    while (en.next(rgs)) visit(SetPartition::from_rgs(rgs));
}

} // namespace setpart
