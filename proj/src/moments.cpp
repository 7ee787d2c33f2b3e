#include "setpart/moments.hpp"

#include <stdexcept>

namespace setpart {

std::string stat_name(Stat s) {
    switch (s) {
        case Stat::levels: return "levels";
        case Stat::dimension: return "dimension";
        case Stat::crossings: return "crossings";
        case Stat::blocks: return "blocks";
        case Stat::boxes: return "boxes";
    }
    throw std::logic_error("stat_name: bad enum");
}

Stat parse_stat(const std::string& name) {
    if (name == "levels") return Stat::levels;
    if (name == "dimension") return Stat::dimension;
    if (name == "crossings") return Stat::crossings;
    if (name == "blocks") return Stat::blocks;
    if (name == "boxes") return Stat::boxes;
    throw std::invalid_argument("unknown statistic: " + name);
}

namespace {

MomentReport exact_report(long long n, Stat stat, mpq_class mean, mpq_class variance) {
    MomentReport r;
    r.n = n;
    r.stat = stat;
    r.kind = MomentKind::exact;
    r.mean = mean.get_d();
    r.variance = variance.get_d();
    r.mean_exact = std::move(mean);
    r.variance_exact = std::move(variance);
    return r;
}

MomentReport asymptotic_report(long long n, Stat stat, double mean, double variance) {
    MomentReport r;
    r.n = n;
    r.stat = stat;
    r.kind = MomentKind::asymptotic;
    r.mean = mean;
    r.variance = variance;
    return r;
}

} // namespace

MomentReport levels_moments_exact(int n, const BellTable& table) {
    if (n < 1) throw std::invalid_argument("levels_moments_exact: n must be >= 1");
    const mpq_class r1 = table.ratio(n, -1);                       // B_{n-1}/B_n
    const mpq_class mean = (n - 1) * r1;
    mpq_class variance = mean - mean * mean;
    if (n >= 2) {
        // Law of total variance for L | M ~ Binomial(n-1, 1/M):
        // VAR = (n-1) E(1/M) + (n-1)(n-2) E(1/M^2) - (n-1)^2 E(1/M)^2.
        const mpq_class r2 = table.ratio(n, -2); // B_{n-2}/B_n = E(1/M^2)
        variance = (n - 1) * r1 + mpq_class((n - 1) * (n - 2)) * r2 - mpq_class((n - 1)) * (n - 1) * r1 * r1;
    }
    return exact_report(n, Stat::levels, mean, variance);
}

MomentReport m_moments_exact(int n, const BellTable& table) {
    const mpq_class mean = table.ratio(n, 1);
    const mpq_class variance = table.ratio(n, 2) - mean * mean;
    return exact_report(n, Stat::boxes, mean, variance);
}

mpq_class m_moment_power(int n, int d, const BellTable& table) {
    return table.ratio(n, d);
}

MomentReport blocks_moments_exact(int n, const BellTable& table) {
    const MomentReport m = m_moments_exact(n, table);
    return exact_report(n, Stat::blocks, *m.mean_exact - 1, *m.variance_exact - 1);
}

MomentReport dim_moments_asymptotic(long long n) {
    if (n < 1) throw std::invalid_argument("dim_moments_asymptotic: n must be >= 1");
    const double a = solve_alpha(n).alpha;
    const double nn = static_cast<double>(n);
    const double mean = (a - 2.0) / (a * a) * nn * nn;
    const double variance = (a * a - 7.0 * a + 17.0) / (a * a * a * (a + 1.0)) * nn * nn * nn;
    return asymptotic_report(n, Stat::dimension, mean, variance);
}

MomentReport cr_moments_asymptotic(long long n) {
    if (n < 1) throw std::invalid_argument("cr_moments_asymptotic: n must be >= 1");
    const double a = solve_alpha(n).alpha;
    const double nn = static_cast<double>(n);
    const double mean = (2.0 * a - 5.0) / (4.0 * a * a) * nn * nn;
    const double variance = (3.0 * a * a - 22.0 * a + 56.0) / (9.0 * a * a * a * (a + 1.0)) * nn * nn * nn;
    return asymptotic_report(n, Stat::crossings, mean, variance);
}

MomentReport levels_moments_asymptotic(long long n) {
    if (n < 1) throw std::invalid_argument("levels_moments_asymptotic: n must be >= 1");
    const double a = solve_alpha(n).alpha;
    return asymptotic_report(n, Stat::levels, a, a);
}

MomentReport m_moments_asymptotic(long long n) {
    if (n < 1) throw std::invalid_argument("m_moments_asymptotic: n must be >= 1");
    const double a = solve_alpha(n).alpha;
    const double nn = static_cast<double>(n);
    const double mean = nn / a + 0.5 * a / ((1.0 + a) * (1.0 + a));
    return asymptotic_report(n, Stat::boxes, mean, nn / (a * a));
}

MomentReport blocks_moments_asymptotic(long long n) {
    MomentReport r = m_moments_asymptotic(n);
    r.stat = Stat::blocks;
    r.mean -= 1.0;
    return r;
}

} // namespace setpart
