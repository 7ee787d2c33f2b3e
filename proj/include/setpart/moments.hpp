#pragma once

#include "setpart/bell.hpp"

#include <gmpxx.h>

#include <optional>
#include <string>

namespace setpart {

enum class Stat { levels, dimension, crossings, blocks, boxes };

/// CLI/JSON name of a statistic ("boxes" is the box count M of the
/// two-stage generator, before empty boxes are deleted).
std::string stat_name(Stat s);
Stat parse_stat(const std::string& name);

enum class MomentKind { exact, asymptotic };

struct MomentReport {
    long long n = 0;
    Stat stat = Stat::levels;
    MomentKind kind = MomentKind::exact;
    double mean = 0.0;
    double variance = 0.0;
    // Present for exact reports only.
    std::optional<mpq_class> mean_exact;
    std::optional<mpq_class> variance_exact;
};

/// E(L) = (n-1) B_{n-1}/B_n and the matching variance, as exact
/// rationals.
MomentReport levels_moments_exact(int n, const BellTable& table);

/// Moments of the box count M: E(M) = B_{n+1}/B_n,
/// VAR(M) = B_{n+2}/B_n - (B_{n+1}/B_n)^2.
MomentReport m_moments_exact(int n, const BellTable& table);

/// E(M^d) = B_{n+d}/B_n, d may be negative (needs n+d >= 0).
mpq_class m_moment_power(int n, int d, const BellTable& table);

/// Moments of the number of blocks of a uniform partition. The box count
/// M exceeds the block count by an independent Poisson(1) empty-box
/// count, so mean and variance are the M values minus one.
MomentReport blocks_moments_exact(int n, const BellTable& table);

/// Leading-order mean ((alpha-2)/alpha^2) n^2 and variance
/// ((alpha^2 - 7 alpha + 17)/(alpha^3 (alpha+1))) n^3 of the dimension
/// index.
MomentReport dim_moments_asymptotic(long long n);

/// Leading-order mean ((2 alpha - 5)/(4 alpha^2)) n^2 and variance
/// ((3 alpha^2 - 22 alpha + 56)/(9 alpha^3 (alpha+1))) n^3 of the
/// crossing number.
MomentReport cr_moments_asymptotic(long long n);

/// Leading order for levels: mean = variance = alpha_n.
MomentReport levels_moments_asymptotic(long long n);

/// Leading order for the box count / block count (the latter shifted by
/// the unit empty-box mean).
MomentReport m_moments_asymptotic(long long n);
MomentReport blocks_moments_asymptotic(long long n);

} // namespace setpart
