#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fairtopk {

// Finite candidate pool: n candidates of which n_p belong to the protected
// group. Rankings drawn from the pool are permutations, so group counts are
// fixed, not sampled.
struct PopulationSpec {
    std::int64_t total = 0;
    std::int64_t protected_count = 0;

    double proportion() const {
        return static_cast<double>(protected_count) / static_cast<double>(total);
    }

    void validate() const {
        if (total < 1)
            throw std::invalid_argument("PopulationSpec: total must be >= 1, got " +
                                        std::to_string(total));
        if (protected_count < 0 || protected_count > total)
            throw std::invalid_argument("PopulationSpec: protected_count " +
                                        std::to_string(protected_count) +
                                        " outside [0, " + std::to_string(total) + "]");
    }
};

// Desired representation rho in (0, 1) for the weighted model's first draw.
struct TargetQuota {
    double rho = 0.5;

    void validate() const {
        if (!(rho > 0.0 && rho < 1.0))
            throw std::invalid_argument("TargetQuota: rho must lie in (0, 1), got " +
                                        std::to_string(rho));
    }
};

enum class ModelKind {
    hypergeometric,
    finite_binomial,
    weighted_hypergeometric,
};

// Null model for the protected count within a prefix. All three laws share
// the same draw-by-draw formulation; they differ only in the probability that
// the next draw is protected.
struct NullModel {
    ModelKind kind = ModelKind::hypergeometric;
    double fairness_probability = 0.0;  // f, finite_binomial only
    double odds_ratio = 1.0;            // omega, weighted only

    static NullModel hypergeometric() { return {}; }

    static NullModel finite_binomial(double f) {
        NullModel m;
        m.kind = ModelKind::finite_binomial;
        m.fairness_probability = f;
        return m;
    }

    static NullModel weighted(double omega) {
        NullModel m;
        m.kind = ModelKind::weighted_hypergeometric;
        m.odds_ratio = omega;
        return m;
    }

    void validate() const {
        if (kind == ModelKind::finite_binomial &&
            !(fairness_probability >= 0.0 && fairness_probability <= 1.0))
            throw std::invalid_argument("NullModel: fairness probability must lie in [0, 1], got " +
                                        std::to_string(fairness_probability));
        if (kind == ModelKind::weighted_hypergeometric && !(odds_ratio > 0.0))
            throw std::invalid_argument("NullModel: odds ratio must be > 0, got " +
                                        std::to_string(odds_ratio));
    }
};

// P(draw j+1 is protected | j drawn so far, y of them protected).
inline double transition_probability(const NullModel& model, const PopulationSpec& pop,
                                     std::int64_t drawn, std::int64_t protected_drawn) {
    pop.validate();
    model.validate();
    const std::int64_t n = pop.total;
    const std::int64_t np = pop.protected_count;
    if (drawn < 0 || drawn >= n)
        throw std::invalid_argument("transition_probability: drawn=" + std::to_string(drawn) +
                                    " outside [0, " + std::to_string(n - 1) + "]");
    if (protected_drawn < 0 || protected_drawn > np)
        throw std::invalid_argument("transition_probability: protected_drawn=" +
                                    std::to_string(protected_drawn) + " exceeds n_p=" +
                                    std::to_string(np));
    if (drawn - protected_drawn < 0 || drawn - protected_drawn > n - np)
        throw std::invalid_argument("transition_probability: non-protected drawn=" +
                                    std::to_string(drawn - protected_drawn) + " exceeds " +
                                    std::to_string(n - np));

    const std::int64_t rem_p = np - protected_drawn;
    const std::int64_t rem_q = (n - np) - (drawn - protected_drawn);
    switch (model.kind) {
        case ModelKind::hypergeometric:
            return static_cast<double>(rem_p) / static_cast<double>(n - drawn);
        case ModelKind::finite_binomial:
            if (rem_p == 0) return 0.0;
            if (rem_q == 0) return 1.0;
            return model.fairness_probability;
        case ModelKind::weighted_hypergeometric: {
            const double wp = model.odds_ratio * static_cast<double>(rem_p);
            const double denom = wp + static_cast<double>(rem_q);
            return denom == 0.0 ? 0.0 : wp / denom;
        }
    }
    return 0.0;
}

// Odds ratio omega making the weighted model's first draw hit the quota rho:
// omega = (rho / (1 - rho)) * ((1 - p) / p) with p the protected proportion.
inline double odds_ratio_for_target(const PopulationSpec& pop, const TargetQuota& quota) {
    pop.validate();
    quota.validate();
    if (pop.protected_count == 0 || pop.protected_count == pop.total)
        throw std::invalid_argument(
            "odds_ratio_for_target: population is single-group (protected_count=" +
            std::to_string(pop.protected_count) + " of " + std::to_string(pop.total) +
            "), no finite odds ratio reaches rho");
    const double p = pop.proportion();
    return (quota.rho / (1.0 - quota.rho)) * ((1.0 - p) / p);
}

inline double first_draw_probability(const NullModel& model, const PopulationSpec& pop) {
    return transition_probability(model, pop, 0, 0);
}

}  // namespace fairtopk
