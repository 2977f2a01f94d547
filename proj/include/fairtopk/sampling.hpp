#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fairtopk/population.hpp"
#include "fairtopk/rng.hpp"

namespace fairtopk {

// Ordered candidates, best first. groups[i] = 1 marks the protected group.
// ids are optional display labels; when present they parallel groups.
struct Ranking {
    std::vector<std::uint8_t> groups;
    std::vector<std::string> ids;

    std::int64_t size() const { return static_cast<std::int64_t>(groups.size()); }

    std::int64_t protected_total() const {
        std::int64_t c = 0;
        for (auto g : groups) c += g;
        return c;
    }

    void validate_against(const PopulationSpec& pop) const {
        if (size() != pop.total)
            throw std::invalid_argument("Ranking: length " + std::to_string(size()) +
                                        " does not match population total " +
                                        std::to_string(pop.total));
        if (!ids.empty() && ids.size() != groups.size())
            throw std::invalid_argument("Ranking: ids/groups length mismatch");
        for (std::size_t i = 0; i < groups.size(); ++i)
            if (groups[i] > 1)
                throw std::invalid_argument("Ranking: group at position " + std::to_string(i + 1) +
                                            " is not binary");
        const std::int64_t ones = protected_total();
        if (ones != pop.protected_count)
            throw std::invalid_argument("Ranking: contains " + std::to_string(ones) +
                                        " protected candidates, population says " +
                                        std::to_string(pop.protected_count));
    }
};

namespace detail {

// Draws the first `prefix` groups of a null-model ranking into out[0..prefix).
// Reusable workspace: one instance per worker thread, no allocation per draw.
//
// Generating a prefix consumes exactly the stream prefix that full-length
// generation would, so truncated draws agree with sample_ranking.
class RankingSampler {
public:
    RankingSampler(const NullModel& model, const PopulationSpec& pop, std::int64_t prefix)
        : model_(model), pop_(pop), prefix_(prefix) {
        pop.validate();
        model.validate();
        if (prefix < 1 || prefix > pop.total)
            throw std::invalid_argument("RankingSampler: prefix " + std::to_string(prefix) +
                                        " outside [1, " + std::to_string(pop.total) + "]");
        if (model.kind == ModelKind::hypergeometric)
            scratch_.resize(static_cast<std::size_t>(pop.total));
    }

    std::int64_t prefix() const { return prefix_; }

    void sample(const SeedSpec& seed, std::uint8_t* out) {
        auto rng = substream_rng(seed);
        switch (model_.kind) {
            case ModelKind::hypergeometric:
                sample_hyper(rng, out);
                break;
            case ModelKind::finite_binomial:
            case ModelKind::weighted_hypergeometric:
                sample_sequential(rng, out);
                break;
        }
    }

private:
    // partial Fisher-Yates over the group multiset; the first `prefix_`
    // entries after k swap steps already have their final values
    void sample_hyper(Xoshiro256StarStar& rng, std::uint8_t* out) {
        const auto n = static_cast<std::size_t>(pop_.total);
        const auto np = static_cast<std::size_t>(pop_.protected_count);
        for (std::size_t i = 0; i < n; ++i) scratch_[i] = i < np ? 1 : 0;
        const auto steps = static_cast<std::size_t>(prefix_);
        for (std::size_t i = 0; i < steps && i < n - 1; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
            std::swap(scratch_[i], scratch_[j]);
        }
        for (std::size_t i = 0; i < steps; ++i) out[i] = scratch_[i];
    }

    void sample_sequential(Xoshiro256StarStar& rng, std::uint8_t* out) {
        std::int64_t rem_p = pop_.protected_count;
        std::int64_t rem_q = pop_.total - pop_.protected_count;
        for (std::int64_t i = 0; i < prefix_; ++i) {
            bool take_protected;
            if (rem_p == 0) {
                take_protected = false;
            } else if (rem_q == 0) {
                take_protected = true;
            } else if (model_.kind == ModelKind::finite_binomial) {
                take_protected = rng.next_double() < model_.fairness_probability;
            } else {
                const double wp = model_.odds_ratio * static_cast<double>(rem_p);
                take_protected = rng.next_double() < wp / (wp + static_cast<double>(rem_q));
            }
            out[i] = take_protected ? 1 : 0;
            (take_protected ? rem_p : rem_q) -= 1;
        }
    }

    NullModel model_;
    PopulationSpec pop_;
    std::int64_t prefix_;
    std::vector<std::uint8_t> scratch_;
};

}  // namespace detail

inline Ranking sample_ranking(const NullModel& model, const PopulationSpec& pop,
                              const SeedSpec& seed) {
    detail::RankingSampler sampler(model, pop, pop.total);
    Ranking r;
    r.groups.resize(static_cast<std::size_t>(pop.total));
    sampler.sample(seed, r.groups.data());
    return r;
}

// count rankings from substreams master_seed/0 .. master_seed/count-1
inline std::vector<Ranking> sample_batch(const NullModel& model, const PopulationSpec& pop,
                                         std::int64_t count, std::uint64_t master_seed) {
    if (count < 0)
        throw std::invalid_argument("sample_batch: count must be >= 0, got " +
                                    std::to_string(count));
    detail::RankingSampler sampler(model, pop, pop.total);
    std::vector<Ranking> batch(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        auto& r = batch[static_cast<std::size_t>(i)];
        r.groups.resize(static_cast<std::size_t>(pop.total));
        sampler.sample(SeedSpec{master_seed, static_cast<std::uint64_t>(i)}, r.groups.data());
    }
    return batch;
}

}  // namespace fairtopk
