#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairtopk/math.hpp"
#include "fairtopk/population.hpp"

namespace fairtopk {

struct LawOptions {
    // Above this population size the hypergeometric law switches from the DP
    // kernel to the log-gamma closed form.
    std::int64_t dp_population_limit = 10'000;
};

// Law of Y_k, the protected count among the first k draws.
struct CountDistribution {
    std::int64_t prefix_length = 0;
    std::int64_t support_min = 0;
    std::vector<double> pmf;  // pmf[i] = P(Y = support_min + i)
    std::vector<double> cdf;  // cdf[i] = P(Y <= support_min + i)

    std::int64_t support_max() const {
        return support_min + static_cast<std::int64_t>(pmf.size()) - 1;
    }

    double pmf_at(std::int64_t y) const {
        if (y < support_min || y > support_max()) return 0.0;
        return pmf[static_cast<std::size_t>(y - support_min)];
    }

    double cdf_at(std::int64_t y) const {
        if (y < support_min) return 0.0;
        if (y >= support_max()) return 1.0;
        return cdf[static_cast<std::size_t>(y - support_min)];
    }

    // min{y in support : P(Y <= y) >= gamma}
    std::int64_t quantile(double gamma) const {
        if (!(gamma > 0.0 && gamma <= 1.0))
            throw std::invalid_argument("CountDistribution::quantile: gamma must lie in (0, 1], got " +
                                        std::to_string(gamma));
        for (std::size_t i = 0; i < cdf.size(); ++i)
            if (cdf[i] >= gamma) return support_min + static_cast<std::int64_t>(i);
        return support_max();
    }
};

namespace detail {

inline void check_prefix(const PopulationSpec& pop, std::int64_t k, const char* where) {
    pop.validate();
    if (k < 1 || k > pop.total)
        throw std::invalid_argument(std::string(where) + ": prefix length " + std::to_string(k) +
                                    " outside [1, " + std::to_string(pop.total) + "]");
}

// Forward DP over (draws j, protected y). state[y] = P(Y_j = y); transitions
// supplied by the model. Infeasible states keep exactly zero mass, so the
// support never needs explicit clamping.
inline std::vector<double> dp_final_state(const NullModel& model, const PopulationSpec& pop,
                                          std::int64_t k) {
    const std::int64_t cap = std::min(k, pop.protected_count);
    std::vector<double> state(static_cast<std::size_t>(cap) + 1, 0.0);
    std::vector<double> next(state.size(), 0.0);
    state[0] = 1.0;
    for (std::int64_t j = 0; j < k; ++j) {
        std::fill(next.begin(), next.end(), 0.0);
        const std::int64_t ymax = std::min(j, cap);
        for (std::int64_t y = std::max<std::int64_t>(0, j - (pop.total - pop.protected_count));
             y <= ymax; ++y) {
            const double p = state[static_cast<std::size_t>(y)];
            if (p == 0.0) continue;
            const double t = transition_probability(model, pop, j, y);
            if (t != 0.0) next[static_cast<std::size_t>(y + 1)] += p * t;
            if (t != 1.0) next[static_cast<std::size_t>(y)] += p * (1.0 - t);
        }
        state.swap(next);
    }
    return state;
}

inline CountDistribution from_state(const std::vector<double>& state, const PopulationSpec& pop,
                                    std::int64_t k) {
    CountDistribution d;
    d.prefix_length = k;
    d.support_min = hyper_support_min(pop.total, pop.protected_count, k);
    const std::int64_t hi = hyper_support_max(pop.protected_count, k);
    d.pmf.reserve(static_cast<std::size_t>(hi - d.support_min) + 1);
    d.cdf.reserve(d.pmf.capacity());
    KahanSum acc;
    for (std::int64_t y = d.support_min; y <= hi; ++y) {
        const double p = y < static_cast<std::int64_t>(state.size())
                             ? state[static_cast<std::size_t>(y)]
                             : 0.0;
        d.pmf.push_back(p);
        acc.add(p);
        d.cdf.push_back(acc.value());
    }
    return d;
}

}  // namespace detail

inline CountDistribution count_distribution(const NullModel& model, const PopulationSpec& pop,
                                            std::int64_t k, const LawOptions& opts = {}) {
    detail::check_prefix(pop, k, "count_distribution");
    model.validate();
    if (model.kind == ModelKind::hypergeometric && pop.total > opts.dp_population_limit) {
        CountDistribution d;
        d.prefix_length = k;
        d.support_min = detail::hyper_support_min(pop.total, pop.protected_count, k);
        const std::int64_t hi = detail::hyper_support_max(pop.protected_count, k);
        const std::int64_t mode = detail::hyper_mode(pop.total, pop.protected_count, k);
        d.pmf.assign(static_cast<std::size_t>(hi - d.support_min) + 1, 0.0);
        double term = detail::hyper_pmf(pop.total, pop.protected_count, k, mode);
        for (std::int64_t y = mode; y >= d.support_min && term > 0.0; --y) {
            d.pmf[static_cast<std::size_t>(y - d.support_min)] = term;
            if (y > d.support_min)
                term /= detail::hyper_ratio_up(pop.total, pop.protected_count, k, y - 1);
        }
        term = detail::hyper_pmf(pop.total, pop.protected_count, k, mode);
        for (std::int64_t y = mode; y < hi && term > 0.0; ++y) {
            term *= detail::hyper_ratio_up(pop.total, pop.protected_count, k, y);
            d.pmf[static_cast<std::size_t>(y + 1 - d.support_min)] = term;
        }
        KahanSum acc;
        d.cdf.reserve(d.pmf.size());
        for (double p : d.pmf) {
            acc.add(p);
            d.cdf.push_back(acc.value());
        }
        return d;
    }
    return detail::from_state(detail::dp_final_state(model, pop, k), pop, k);
}

// Scalar lower-tail probability P(Y_k <= y). The hypergeometric model routes
// to the closed form (exact integers for small populations, log-gamma above),
// which also serves populations far beyond the DP range.
inline double cdf(const NullModel& model, const PopulationSpec& pop, std::int64_t k,
                  std::int64_t y, const LawOptions& opts = {}) {
    detail::check_prefix(pop, k, "cdf");
    model.validate();
    if (model.kind == ModelKind::hypergeometric)
        return detail::hyper_cdf(pop.total, pop.protected_count, k, y);
    return count_distribution(model, pop, k, opts).cdf_at(y);
}

inline std::int64_t quantile(const NullModel& model, const PopulationSpec& pop, std::int64_t k,
                             double gamma, const LawOptions& opts = {}) {
    detail::check_prefix(pop, k, "quantile");
    model.validate();
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::invalid_argument("quantile: gamma must lie in (0, 1], got " +
                                    std::to_string(gamma));
    if (model.kind == ModelKind::hypergeometric)
        return detail::hyper_quantile(pop.total, pop.protected_count, k, gamma);
    return count_distribution(model, pop, k, opts).quantile(gamma);
}

}  // namespace fairtopk
