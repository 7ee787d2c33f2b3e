#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace setpart {

/// Exact Bell numbers B_0..B_max_n computed with the Bell triangle.
/// Immutable after construction; safe to share across threads.
class BellTable {
  public:
    static constexpr int kDefaultCap = 5000;

    /// Builds B_0..B_max_n. Refuses max_n above `cap` so a typo cannot
    /// eat the machine (B_5000 already has ~12000 digits).
    explicit BellTable(int max_n, int cap = kDefaultCap);

    int max_n() const { return static_cast<int>(values_.size()) - 1; }

    /// B_n. Throws std::out_of_range outside the table.
    const mpz_class& value(int n) const;

    /// Exact ratio B_{n+k}/B_n, canonicalized. k may be negative.
    mpq_class ratio(int n, int k) const;

    /// log(B_n), natural base, accurate to double precision.
    double log_value(int n) const;

  private:
    std::vector<mpz_class> values_;
};

/// Positive root of u*e^u = n+1 together with its achieved residual.
struct AlphaValue {
    long long n;
    double alpha;
    double residual; // alpha*exp(alpha) - (n+1)
};

/// Solves u*e^u = n+1 by Newton iteration on u + log u - log(n+1).
/// The residual satisfies |alpha*e^alpha - (n+1)| <= 1e-12 * (n+1).
AlphaValue solve_alpha(long long n);

/// (n+k)! / (n! * alpha_n^k), evaluated in log space. Refuses |k| > n/2,
/// where the fixed-k expansion it approximates stops being meaningful.
double bell_ratio_asymptotic(long long n, long long k);

/// Unnormalized log weight n*log(m) - log(m!). Callers normalize over a
/// window.
double mu_log_weight(long long n, long long m);

/// Normalized log weight: n*log(m) - log(m!) - 1 - log(B_n).
double mu_log_weight(long long n, long long m, const BellTable& table);

/// Partial sum (1/e) * sum_{m<=terms} m^n/m! evaluated in log space;
/// converges to B_n as terms grows. The m = 0 term (0^0 = 1) is included
/// so the n = 0 value is 1.
double dobinski_partial(int n, int terms);

/// log(B_n) via the same truncated sum, without a table. Good to ~1e-14
/// relative even where B_n overflows double.
double dobinski_log_bell(long long n);

} // namespace setpart
