#pragma once

// Independent reference implementations used only by the tests. Everything
// here is built from first principles (Pascal's triangle, exhaustive
// enumeration of arrangements, long double arithmetic) and shares no code
// with the library, so agreement between the two is meaningful evidence.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace oracle {

// C(n, k) by Pascal's rule, exact in uint64 for the sizes tests use.
inline std::uint64_t choose(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
    return row[static_cast<std::size_t>(k)];
}

inline long double hyper_pmf(int n, int np, int k, int y) {
    if (y < 0 || y > np || k - y < 0 || k - y > n - np) return 0.0L;
    return static_cast<long double>(choose(np, y)) * static_cast<long double>(choose(n - np, k - y)) /
           static_cast<long double>(choose(n, k));
}

inline long double hyper_cdf(int n, int np, int k, int y) {
    long double acc = 0.0L;
    for (int t = 0; t <= y; ++t) acc += hyper_pmf(n, np, k, t);
    return acc > 1.0L ? 1.0L : acc;
}

inline long double hyper_upper(int n, int np, int k, int y) {
    long double acc = 0.0L;
    for (int t = y; t <= k; ++t) acc += hyper_pmf(n, np, k, t);
    return acc > 1.0L ? 1.0L : acc;
}

// All distinct arrangements of np ones among n slots, each equally likely
// under fair selection. Generated in lexicographic order.
inline std::vector<std::vector<std::uint8_t>> arrangements(int n, int np) {
    std::vector<std::uint8_t> g(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < np; ++i) g[static_cast<std::size_t>(i)] = 1;
    std::sort(g.begin(), g.end());
    std::vector<std::vector<std::uint8_t>> all;
    do {
        all.push_back(g);
    } while (std::next_permutation(g.begin(), g.end()));
    return all;
}

// z = min over prefixes 1..k of the lower tail of the fair-draw law.
inline long double z_of(const std::vector<std::uint8_t>& g, int np, int k) {
    const int n = static_cast<int>(g.size());
    long double z = 1.0L;
    int y = 0;
    for (int j = 1; j <= k; ++j) {
        y += g[static_cast<std::size_t>(j - 1)];
        const long double c = hyper_cdf(n, np, j, y);
        if (c < z) z = c;
    }
    return z;
}

struct ZDistribution {
    std::vector<long double> atoms;        // ascending
    std::vector<std::int64_t> counts;      // multiplicity per atom
    std::int64_t total = 0;

    long double cdf(long double v) const {
        std::int64_t c = 0;
        for (std::size_t i = 0; i < atoms.size() && atoms[i] <= v; ++i) c += counts[i];
        return static_cast<long double>(c) / static_cast<long double>(total);
    }
};

inline ZDistribution z_distribution(int n, int np, int k) {
    std::map<long double, std::int64_t> hist;
    for (const auto& g : arrangements(n, np)) hist[z_of(g, np, k)] += 1;
    ZDistribution d;
    for (const auto& [z, c] : hist) {
        d.atoms.push_back(z);
        d.counts.push_back(c);
        d.total += c;
    }
    return d;
}

// sup{gamma : P(Z <= gamma) <= alpha}, realized over the exact distribution:
// the largest of {atoms <= alpha} union {alpha} whose cdf stays within alpha.
inline long double exact_alpha_c(const ZDistribution& d, long double alpha) {
    long double best = -1.0L;
    if (d.cdf(alpha) <= alpha) best = alpha;
    for (std::size_t i = 0; i < d.atoms.size(); ++i) {
        if (d.atoms[i] > alpha) break;
        if (d.cdf(d.atoms[i]) <= alpha && d.atoms[i] > best) best = d.atoms[i];
    }
    if (best < 0.0L) throw std::runtime_error("exact_alpha_c: no admissible level");
    return best;
}

// Law of the protected count after k weighted one-by-one draws, by summing
// the probability of every arrangement as a product of conditional draws.
inline std::vector<long double> weighted_pmf(int n, int np, int k, long double omega) {
    std::vector<long double> pmf(static_cast<std::size_t>(k) + 1, 0.0L);
    for (const auto& g : arrangements(n, np)) {
        long double p = 1.0L;
        int y = 0;
        for (int j = 0; j < n; ++j) {
            const int rem_p = np - y;
            const int rem_q = (n - np) - (j - y);
            long double take;
            if (rem_p == 0)
                take = 0.0L;
            else if (rem_q == 0)
                take = 1.0L;
            else
                take = omega * rem_p / (omega * rem_p + static_cast<long double>(rem_q));
            p *= g[static_cast<std::size_t>(j)] ? take : 1.0L - take;
            y += g[static_cast<std::size_t>(j)];
        }
        int yk = 0;
        for (int j = 0; j < k; ++j) yk += g[static_cast<std::size_t>(j)];
        pmf[static_cast<std::size_t>(yk)] += p;
    }
    return pmf;
}

// Same arrangement-tree construction for the coin-flip-with-fill draw: each
// draw is protected with probability f unless a group has run out.
inline std::vector<long double> finite_binomial_pmf(int n, int np, int k, long double f) {
    std::vector<long double> pmf(static_cast<std::size_t>(k) + 1, 0.0L);
    for (const auto& g : arrangements(n, np)) {
        long double p = 1.0L;
        int y = 0;
        for (int j = 0; j < n; ++j) {
            const int rem_p = np - y;
            const int rem_q = (n - np) - (j - y);
            long double take;
            if (rem_p == 0)
                take = 0.0L;
            else if (rem_q == 0)
                take = 1.0L;
            else
                take = f;
            p *= g[static_cast<std::size_t>(j)] ? take : 1.0L - take;
            y += g[static_cast<std::size_t>(j)];
        }
        int yk = 0;
        for (int j = 0; j < k; ++j) yk += g[static_cast<std::size_t>(j)];
        pmf[static_cast<std::size_t>(yk)] += p;
    }
    return pmf;
}

inline long double binom_pmf(int k, long double p, int y) {
    if (y < 0 || y > k) return 0.0L;
    long double v = static_cast<long double>(choose(k, y));
    for (int i = 0; i < y; ++i) v *= p;
    for (int i = 0; i < k - y; ++i) v *= (1.0L - p);
    return v;
}

}  // namespace oracle
