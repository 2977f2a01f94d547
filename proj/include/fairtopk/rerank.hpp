#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairtopk/audit.hpp"
#include "fairtopk/population.hpp"
#include "fairtopk/sampling.hpp"

namespace fairtopk {

enum class RerankMode { promote, demote };

// Minimum protected counts that keep every prefix test at level alpha_c
// accepting: min_protected[i-1] = min{y : P(Y_i <= y) > alpha_c}.
struct RerankPlan {
    double alpha_c = 0.0;
    std::vector<std::int64_t> min_protected;
};

inline RerankPlan min_protected_table(const PopulationSpec& pop, const NullModel& model,
                                      double alpha_c, std::int64_t k) {
    detail::check_prefix(pop, k, "min_protected_table");
    model.validate();
    if (!(alpha_c >= 0.0 && alpha_c < 1.0))
        throw std::invalid_argument("min_protected_table: alpha_c must lie in [0, 1), got " +
                                    std::to_string(alpha_c));
    // the same DP rows the audit evaluates z against, so threshold ties
    // resolve identically in both places
    const auto table = PrefixCdfTable::analytical(model, pop, k);
    RerankPlan plan;
    plan.alpha_c = alpha_c;
    plan.min_protected.reserve(static_cast<std::size_t>(k));
    for (std::int64_t j = 1; j <= k; ++j) {
        std::int64_t m = table.row_max(j);
        for (std::int64_t y = table.row_min(j); y <= table.row_max(j); ++y) {
            if (table.lower(j, y) > alpha_c) {
                m = y;
                break;
            }
        }
        plan.min_protected.push_back(m);
    }
    return plan;
}

struct RerankResult {
    Ranking ranking;
    std::int64_t swap_count = 0;                    // block rotations applied
    std::vector<std::int64_t> positions_adjusted;   // 1-based positions that received a promotion
    std::vector<std::int64_t> order;                // order[pos] = original 0-based index
    RerankPlan plan;                                // demote mode: plan of the flipped problem
    AdjustedAlpha adjusted_alpha;                   // filled by rerank(), not apply_min_protected
};

// Enforce the plan by promotions only: whenever a prefix falls below its
// minimum protected count, the nearest protected item further down moves up
// into that position and the skipped-over items shift down one slot. Relative
// order inside each group is preserved, which makes the result the
// lexicographically best (utility-maximal) ranking satisfying the plan.
inline RerankResult apply_min_protected(const Ranking& ranking, const PopulationSpec& pop,
                                        const RerankPlan& plan) {
    ranking.validate_against(pop);
    const std::int64_t k = static_cast<std::int64_t>(plan.min_protected.size());
    detail::check_prefix(pop, k, "apply_min_protected");

    RerankResult res;
    res.ranking = ranking;
    res.plan = plan;
    res.order.resize(static_cast<std::size_t>(ranking.size()));
    std::iota(res.order.begin(), res.order.end(), 0);

    auto& g = res.ranking.groups;
    const bool with_ids = !res.ranking.ids.empty();
    std::int64_t y = 0;
    std::int64_t hunt = 0;  // next-protected scan position; never moves backwards
    for (std::int64_t i = 0; i < k; ++i) {
        const std::uint8_t here = g[static_cast<std::size_t>(i)];
        y += here;
        const std::int64_t need = plan.min_protected[static_cast<std::size_t>(i)];
        if (y >= need) continue;
        // one promotion raises this prefix count by exactly one, and that is
        // all a single position can absorb; plans from min_protected_table
        // rise in steps of at most one, so this suffices for them
        if (here == 1 || need > y + 1)
            throw std::domain_error("apply_min_protected: position " + std::to_string(i + 1) +
                                    " requires " + std::to_string(need) +
                                    " protected items but the prefix can reach at most " +
                                    std::to_string(y + 1 - here));

        hunt = std::max(hunt, i + 1);
        while (hunt < ranking.size() && g[static_cast<std::size_t>(hunt)] != 1) ++hunt;
        if (hunt == ranking.size())
            throw std::domain_error("apply_min_protected: position " + std::to_string(i + 1) +
                                    " requires " + std::to_string(need) +
                                    " protected items but only " + std::to_string(y) +
                                    " are reachable");

        std::rotate(g.begin() + i, g.begin() + hunt, g.begin() + hunt + 1);
        if (with_ids)
            std::rotate(res.ranking.ids.begin() + i, res.ranking.ids.begin() + hunt,
                        res.ranking.ids.begin() + hunt + 1);
        std::rotate(res.order.begin() + i, res.order.begin() + hunt,
                    res.order.begin() + hunt + 1);
        // the rotated-over block held no protected items, so the count at i
        // gains exactly the promoted one and later prefixes only gain
        y += 1;
        res.swap_count += 1;
        res.positions_adjusted.push_back(i + 1);
        hunt += 1;
    }
    return res;
}

// Minimal re-ranking at family level cfg.alpha. Promote mode raises protected
// items that sit too low; demote mode is the mirror image (protected items
// that sit too high move down), realized by running promote on the
// group-flipped problem.
inline RerankResult rerank(const Ranking& ranking, const PopulationSpec& pop,
                           const NullModel& model, const TestConfig& cfg,
                           RerankMode mode = RerankMode::promote) {
    ranking.validate_against(pop);
    const std::int64_t k = detail::resolve_k(cfg, pop.total, "rerank");
    const AdjustedAlpha adj = adjust_alpha(pop, model, k, cfg);

    if (mode == RerankMode::promote) {
        const auto plan = min_protected_table(pop, model, adj.alpha_c, k);
        RerankResult res = apply_min_protected(ranking, pop, plan);
        res.adjusted_alpha = adj;
        return res;
    }

    // The flipped problem needs at least j - max{y : P(Y_j >= y) > alpha_c}
    // non-protected items in prefix j. Those upper tails must come from the
    // original problem's table, the very rows the audit evaluates; the
    // flipped problem's own lower tails agree only up to rounding, and a
    // one-ulp slip across alpha_c would demote too little.
    const auto table = PrefixCdfTable::analytical(model, pop, k);
    RerankPlan plan;
    plan.alpha_c = adj.alpha_c;
    plan.min_protected.reserve(static_cast<std::size_t>(k));
    for (std::int64_t j = 1; j <= k; ++j) {
        std::int64_t ymax = table.row_min(j);  // upper(j, row_min) is exactly 1
        for (std::int64_t y = table.row_max(j); y >= table.row_min(j); --y) {
            if (table.upper(j, y) > adj.alpha_c) {
                ymax = y;
                break;
            }
        }
        plan.min_protected.push_back(j - ymax);
    }
    // exact arithmetic keeps the steps at most one; guard the envelope anyway
    for (std::size_t i = plan.min_protected.size(); i-- > 1;)
        plan.min_protected[i - 1] =
            std::max(plan.min_protected[i - 1], plan.min_protected[i] - 1);

    PopulationSpec fpop{pop.total, pop.total - pop.protected_count};
    Ranking flipped = ranking;
    for (auto& b : flipped.groups) b = static_cast<std::uint8_t>(1 - b);
    RerankResult res = apply_min_protected(flipped, fpop, plan);
    for (auto& b : res.ranking.groups) b = static_cast<std::uint8_t>(1 - b);
    res.adjusted_alpha = adj;
    return res;
}

}  // namespace fairtopk
