#include "setpart/bell.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace setpart {

BellTable::BellTable(int max_n, int cap) {
    if (max_n < 0) throw std::invalid_argument("BellTable: max_n must be >= 0");
    if (max_n > cap)
        throw std::invalid_argument("BellTable: max_n " + std::to_string(max_n) +
                                    " exceeds cap " + std::to_string(cap));
    values_.reserve(max_n + 1);
    values_.emplace_back(1); // B_0
    if (max_n == 0) return;

    // Bell triangle: row k has k entries, starts with the previous row's
    // last entry, and ends with B_k.
    std::vector<mpz_class> prev{1}; // row 1
    values_.push_back(prev.back()); // B_1
    for (int k = 2; k <= max_n; ++k) {
        std::vector<mpz_class> row(k);
        row[0] = prev.back();
        for (int i = 1; i < k; ++i) row[i] = row[i - 1] + prev[i - 1];
        values_.push_back(row.back());
        prev = std::move(row);
    }
}

const mpz_class& BellTable::value(int n) const {
    if (n < 0 || n > max_n())
        throw std::out_of_range("BellTable: index " + std::to_string(n) +
                                " outside table [0, " + std::to_string(max_n()) + "]");
    return values_[n];
}

mpq_class BellTable::ratio(int n, int k) const {
    mpq_class q(value(n + k), value(n));
    q.canonicalize();
    return q;
}

double BellTable::log_value(int n) const {
    signed long exp2;
    const double mant = mpz_get_d_2exp(&exp2, value(n).get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * M_LN2;
}

AlphaValue solve_alpha(long long n) {
    if (n < 0) throw std::invalid_argument("solve_alpha: n must be >= 0");
    const double target = std::log(static_cast<double>(n) + 1.0);
    // Newton on f(u) = u + log(u) - target. f is increasing and concave on
    // u > 0, so after one step the iterates approach the root from below
    // and never leave the domain.
    double u = target - std::log(std::log(static_cast<double>(n) + 2.0) + 1.0);
    if (u < 0.2) u = 0.2;
    for (int it = 0; it < 100; ++it) {
        const double f = u + std::log(u) - target;
        const double step = f * u / (u + 1.0);
        u -= step;
        if (std::abs(f) <= 1e-15 * (1.0 + std::abs(target))) break;
    }
    const double residual = u * std::exp(u) - (static_cast<double>(n) + 1.0);
    return AlphaValue{n, u, residual};
}

double bell_ratio_asymptotic(long long n, long long k) {
    if (n < 1) throw std::invalid_argument("bell_ratio_asymptotic: n must be >= 1");
    if (std::llabs(k) > n / 2)
        throw std::invalid_argument("bell_ratio_asymptotic: |k| > n/2 is outside the fixed-k regime");
    const double alpha = solve_alpha(n).alpha;
    const double log_ratio = std::lgamma(static_cast<double>(n + k) + 1.0) -
                             std::lgamma(static_cast<double>(n) + 1.0) -
                             static_cast<double>(k) * std::log(alpha);
    return std::exp(log_ratio);
}

double mu_log_weight(long long n, long long m) {
    if (n < 0 || m < 1) throw std::invalid_argument("mu_log_weight: need n >= 0, m >= 1");
    return static_cast<double>(n) * std::log(static_cast<double>(m)) -
           std::lgamma(static_cast<double>(m) + 1.0);
}

double mu_log_weight(long long n, long long m, const BellTable& table) {
    return mu_log_weight(n, m) - 1.0 - table.log_value(static_cast<int>(n));
}

namespace {

// log of sum_{m in [lo, hi]} exp(n*log m - log m!), via log-sum-exp.
double log_dobinski_sum(long long n, long long lo, long long hi) {
    double max_term = -HUGE_VAL;
    for (long long m = lo; m <= hi; ++m)
        max_term = std::max(max_term, mu_log_weight(n, m));
    double acc = 0.0;
    for (long long m = lo; m <= hi; ++m)
        acc += std::exp(mu_log_weight(n, m) - max_term);
    return max_term + std::log(acc);
}

} // namespace

double dobinski_partial(int n, int terms) {
    if (n < 0 || terms < 1) throw std::invalid_argument("dobinski_partial: need n >= 0, terms >= 1");
    double log_sum = log_dobinski_sum(n, 1, terms);
    if (n == 0) {
        // m = 0 contributes 0^0/0! = 1.
        log_sum = std::log1p(std::exp(-log_sum)) + log_sum;
    }
    return std::exp(log_sum - 1.0);
}

double dobinski_log_bell(long long n) {
    if (n < 0) throw std::invalid_argument("dobinski_log_bell: n must be >= 0");
    if (n == 0) return 0.0;
    const double alpha = solve_alpha(n).alpha;
    const double mean = static_cast<double>(n) / alpha;
    const double half_width = 60.0 * (std::sqrt(static_cast<double>(n)) / alpha + 1.0);
    const long long lo = std::max(1ll, static_cast<long long>(mean - half_width));
    const long long hi = static_cast<long long>(mean + half_width) + 1;
    return log_dobinski_sum(n, lo, hi) - 1.0;
}

} // namespace setpart
