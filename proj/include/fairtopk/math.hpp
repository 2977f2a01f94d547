#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairtopk {

// Compensated (Kahan) accumulator. CDF rows are built by summing many small
// pmf terms; plain accumulation drifts above the 1e-12 contract for wide
// supports.
class KahanSum {
public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

// Largest population for which every binomial coefficient C(n, k), and every
// partial sum of hypergeometric numerators, is an exact integer in double
// (C(55, 27) < 2^53). Within this range tail probabilities are correctly
// rounded rationals, so algebraically equal tails compare bit-identically.
inline constexpr std::int64_t exact_choose_limit = 55;

inline std::uint64_t exact_choose(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t c = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        // c * (n - k + i) stays below 2^63 for n <= exact_choose_limit and the
        // division is exact: the running value is C(n - k + i, i).
        c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return c;
}

inline double log_choose(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

// log P(Y = y) for Y hypergeometric(total n, protected n_p, draws k), written
// in the draw-symmetric form C(k, y) C(n-k, n_p-y) / C(n, n_p) so that the
// (k, y) <-> (n-k, n_p-y) mirror evaluates the same two addends (addition is
// commutative in IEEE, so mirrored pmf values are bit-identical).
inline double log_hyper_pmf(std::int64_t n, std::int64_t np, std::int64_t k, std::int64_t y) {
    if (y < 0 || y > np || k - y < 0 || k - y > n - np)
        return -std::numeric_limits<double>::infinity();
    return log_choose(k, y) + log_choose(n - k, np - y) - log_choose(n, np);
}

inline std::int64_t hyper_support_min(std::int64_t n, std::int64_t np, std::int64_t k) {
    return std::max<std::int64_t>(0, k - (n - np));
}

inline std::int64_t hyper_support_max(std::int64_t np, std::int64_t k) {
    return std::min(np, k);
}

// Mode of the hypergeometric pmf: floor((k+1)(np+1)/(n+2)), clamped to the
// support. Ratio recurrences start here so they never walk up from an
// underflowed tail term.
inline std::int64_t hyper_mode(std::int64_t n, std::int64_t np, std::int64_t k) {
    std::int64_t m = ((k + 1) * (np + 1)) / (n + 2);
    m = std::max(m, hyper_support_min(n, np, k));
    m = std::min(m, hyper_support_max(np, k));
    return m;
}

// pmf(y+1) / pmf(y)
inline double hyper_ratio_up(std::int64_t n, std::int64_t np, std::int64_t k, std::int64_t y) {
    return (static_cast<double>(np - y) * static_cast<double>(k - y)) /
           (static_cast<double>(y + 1) * static_cast<double>(n - np - k + y + 1));
}

inline double hyper_pmf(std::int64_t n, std::int64_t np, std::int64_t k, std::int64_t y) {
    if (y < hyper_support_min(n, np, k) || y > hyper_support_max(np, k)) return 0.0;
    if (n <= exact_choose_limit) {
        return static_cast<double>(exact_choose(np, y) * exact_choose(n - np, k - y)) /
               static_cast<double>(exact_choose(n, k));
    }
    return std::exp(log_hyper_pmf(n, np, k, y));
}

// P(Y <= y). The large-n route sums the ratio recurrence downward from y with
// a tail cutoff that is only applied on the monotone side of the mode.
inline double hyper_cdf(std::int64_t n, std::int64_t np, std::int64_t k, std::int64_t y) {
    const std::int64_t lo = hyper_support_min(n, np, k);
    const std::int64_t hi = hyper_support_max(np, k);
    if (y < lo) return 0.0;
    if (y >= hi) return 1.0;
    if (n <= exact_choose_limit) {
        std::uint64_t num = 0;
        for (std::int64_t t = lo; t <= y; ++t)
            num += exact_choose(np, t) * exact_choose(n - np, k - t);
        return static_cast<double>(num) / static_cast<double>(exact_choose(n, k));
    }
    const std::int64_t mode = hyper_mode(n, np, k);
    if (y >= mode) {
        // complement is the shorter, better-conditioned sum
        KahanSum upper;
        double term = std::exp(log_hyper_pmf(n, np, k, y + 1));
        for (std::int64_t t = y + 1; t <= hi; ++t) {
            upper.add(term);
            if (t < hi) {
                term *= hyper_ratio_up(n, np, k, t);
                if (t > mode && term * static_cast<double>(hi - t) < upper.value() * 1e-18)
                    break;
            }
        }
        return 1.0 - upper.value();
    }
    KahanSum acc;
    double term = std::exp(log_hyper_pmf(n, np, k, y));
    for (std::int64_t t = y; t >= lo; --t) {
        acc.add(term);
        if (t > lo) {
            term /= hyper_ratio_up(n, np, k, t - 1);
            if (term * static_cast<double>(t - lo) < acc.value() * 1e-18) break;
        }
    }
    return acc.value();
}

// P(Y >= y), computed from its own exact numerator (not 1 - cdf) so mirrored
// tails stay bit-identical in the exact range.
inline double hyper_upper(std::int64_t n, std::int64_t np, std::int64_t k, std::int64_t y) {
    const std::int64_t lo = hyper_support_min(n, np, k);
    const std::int64_t hi = hyper_support_max(np, k);
    if (y <= lo) return 1.0;
    if (y > hi) return 0.0;
    if (n <= exact_choose_limit) {
        std::uint64_t num = 0;
        for (std::int64_t t = y; t <= hi; ++t)
            num += exact_choose(np, t) * exact_choose(n - np, k - t);
        return static_cast<double>(num) / static_cast<double>(exact_choose(n, k));
    }
    const std::int64_t mode = hyper_mode(n, np, k);
    if (y <= mode) {
        KahanSum lower;
        double term = std::exp(log_hyper_pmf(n, np, k, y - 1));
        for (std::int64_t t = y - 1; t >= lo; --t) {
            lower.add(term);
            if (t > lo) {
                term /= hyper_ratio_up(n, np, k, t - 1);
                if (t < mode && term * static_cast<double>(t - lo) < lower.value() * 1e-18)
                    break;
            }
        }
        return 1.0 - lower.value();
    }
    KahanSum acc;
    double term = std::exp(log_hyper_pmf(n, np, k, y));
    for (std::int64_t t = y; t <= hi; ++t) {
        acc.add(term);
        if (t < hi) {
            term *= hyper_ratio_up(n, np, k, t);
            if (term * static_cast<double>(hi - t) < acc.value() * 1e-18) break;
        }
    }
    return acc.value();
}

// min{y in support : P(Y <= y) >= gamma}; bisection on the monotone cdf.
inline std::int64_t hyper_quantile(std::int64_t n, std::int64_t np, std::int64_t k, double gamma) {
    const std::int64_t lo = hyper_support_min(n, np, k);
    const std::int64_t hi = hyper_support_max(np, k);
    std::int64_t a = lo, b = hi;
    while (a < b) {
        const std::int64_t mid = a + (b - a) / 2;
        if (hyper_cdf(n, np, k, mid) >= gamma)
            b = mid;
        else
            a = mid + 1;
    }
    return a;
}

inline double binomial_pmf(std::int64_t k, double p, std::int64_t y) {
    if (y < 0 || y > k) return 0.0;
    if (p <= 0.0) return y == 0 ? 1.0 : 0.0;
    if (p >= 1.0) return y == k ? 1.0 : 0.0;
    const double logp = log_choose(k, y) + static_cast<double>(y) * std::log(p) +
                        static_cast<double>(k - y) * std::log1p(-p);
    return std::exp(logp);
}

}  // namespace detail
}  // namespace fairtopk
