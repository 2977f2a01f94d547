#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fairtopk/distribution.hpp"
#include "fairtopk/math.hpp"
#include "fairtopk/population.hpp"
#include "fairtopk/sampling.hpp"

namespace fairtopk {

enum class TestSide { lower, upper, two_sided };
enum class CdfMode { analytical, empirical };

struct TestConfig {
    double alpha = 0.1;
    std::int64_t k = 0;  // 0: use the full ranking length
    TestSide side = TestSide::lower;
    std::int64_t n_e = 1'000'000;
    CdfMode cdf_mode = CdfMode::analytical;
    std::uint64_t seed = 0;
    int workers = 1;

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("TestConfig: alpha must lie in (0, 1), got " +
                                        std::to_string(alpha));
        if (n_e < 1)
            throw std::invalid_argument("TestConfig: n_e must be >= 1, got " +
                                        std::to_string(n_e));
        if (workers < 1)
            throw std::invalid_argument("TestConfig: workers must be >= 1, got " +
                                        std::to_string(workers));
    }
};

inline std::vector<std::int64_t> prefix_counts(const Ranking& ranking, std::int64_t k) {
    if (k < 1 || k > ranking.size())
        throw std::invalid_argument("prefix_counts: k=" + std::to_string(k) + " outside [1, " +
                                    std::to_string(ranking.size()) + "]");
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k));
    std::int64_t y = 0;
    for (std::int64_t j = 0; j < k; ++j) {
        y += ranking.groups[static_cast<std::size_t>(j)];
        counts[static_cast<std::size_t>(j)] = y;
    }
    return counts;
}

// Lower and upper tail probabilities of the null protected-count law for
// every prefix length 1..k. One forward DP sweep builds every row; z values
// for a sampled ranking then cost one lookup per position.
class PrefixCdfTable {
public:
    static PrefixCdfTable analytical(const NullModel& model, const PopulationSpec& pop,
                                     std::int64_t k) {
        detail::check_prefix(pop, k, "PrefixCdfTable");
        model.validate();
        PrefixCdfTable t(pop, k);
        const std::int64_t cap = std::min(k, pop.protected_count);
        std::vector<double> state(static_cast<std::size_t>(cap) + 1, 0.0);
        std::vector<double> next(state.size(), 0.0);
        state[0] = 1.0;
        for (std::int64_t j = 0; j < k; ++j) {
            std::fill(next.begin(), next.end(), 0.0);
            const std::int64_t ymax = std::min(j, cap);
            for (std::int64_t y = t.support_lo(pop, j); y <= ymax; ++y) {
                const double p = state[static_cast<std::size_t>(y)];
                if (p == 0.0) continue;
                const double tr = transition_probability(model, pop, j, y);
                if (tr != 0.0) next[static_cast<std::size_t>(y + 1)] += p * tr;
                if (tr != 1.0) next[static_cast<std::size_t>(y)] += p * (1.0 - tr);
            }
            state.swap(next);
            t.push_row_from_pmf(state, j + 1);
        }
        return t;
    }

    // rows are empirical tail fractions of per-position histogram counts,
    // self-inclusive on both sides: lower = #{z <= y}/n_e, upper = #{z >= y}/n_e
    static PrefixCdfTable empirical(const PopulationSpec& pop, std::int64_t k,
                                    const std::vector<std::vector<std::int64_t>>& counts,
                                    std::int64_t n_e) {
        detail::check_prefix(pop, k, "PrefixCdfTable");
        PrefixCdfTable t(pop, k);
        for (std::int64_t j = 1; j <= k; ++j) {
            const auto& row = counts[static_cast<std::size_t>(j - 1)];
            t.lo_.push_back(t.support_lo(pop, j));
            std::int64_t cum = 0;
            for (std::size_t i = 0; i < row.size(); ++i) {
                cum += row[i];
                t.lower_.push_back(static_cast<double>(cum) / static_cast<double>(n_e));
            }
            cum = 0;
            const std::size_t base = t.upper_.size();
            t.upper_.resize(base + row.size());
            for (std::size_t i = row.size(); i-- > 0;) {
                cum += row[i];
                t.upper_[base + i] = static_cast<double>(cum) / static_cast<double>(n_e);
            }
            t.off_.push_back(t.lower_.size());
        }
        return t;
    }

    std::int64_t prefix_limit() const { return k_; }
    std::int64_t row_min(std::int64_t j) const { return lo_[static_cast<std::size_t>(j - 1)]; }

    std::int64_t row_max(std::int64_t j) const {
        const auto i = static_cast<std::size_t>(j - 1);
        return lo_[i] + static_cast<std::int64_t>(off_[i + 1] - off_[i]) - 1;
    }

    // P(Y_j <= y)
    double lower(std::int64_t j, std::int64_t y) const {
        const auto i = static_cast<std::size_t>(j - 1);
        if (y < lo_[i]) return 0.0;
        if (y > row_max(j)) return 1.0;
        return lower_[off_[i] + static_cast<std::size_t>(y - lo_[i])];
    }

    // P(Y_j >= y)
    double upper(std::int64_t j, std::int64_t y) const {
        const auto i = static_cast<std::size_t>(j - 1);
        if (y < lo_[i]) return 1.0;
        if (y > row_max(j)) return 0.0;
        return upper_[off_[i] + static_cast<std::size_t>(y - lo_[i])];
    }

    double pvalue(TestSide side, std::int64_t j, std::int64_t y) const {
        switch (side) {
            case TestSide::lower: return lower(j, y);
            case TestSide::upper: return upper(j, y);
            case TestSide::two_sided: return std::min(lower(j, y), upper(j, y));
        }
        return 1.0;
    }

private:
    PrefixCdfTable(const PopulationSpec& pop, std::int64_t k) : k_(k), pop_(pop) {
        lo_.reserve(static_cast<std::size_t>(k));
        off_.reserve(static_cast<std::size_t>(k) + 1);
        off_.push_back(0);
    }

    std::int64_t support_lo(const PopulationSpec& pop, std::int64_t j) const {
        return std::max<std::int64_t>(0, j - (pop.total - pop.protected_count));
    }

    // state is the full 0..cap DP vector for prefix j; mass outside the
    // support [lo_j, hi_j] is exactly zero
    void push_row_from_pmf(const std::vector<double>& state, std::int64_t j) {
        const std::int64_t lo = support_lo(pop_, j);
        const std::int64_t hi = std::min(j, pop_.protected_count);
        lo_.push_back(lo);
        KahanSum up;
        std::vector<double> tmp(static_cast<std::size_t>(hi - lo + 1));
        for (std::int64_t y = hi; y >= lo; --y) {
            up.add(state[static_cast<std::size_t>(y)]);
            tmp[static_cast<std::size_t>(y - lo)] = std::min(1.0, up.value());
        }
        tmp.front() = 1.0;  // P(Y_j >= lo_j) is certain
        KahanSum down;
        for (std::int64_t y = lo; y <= hi; ++y) {
            down.add(state[static_cast<std::size_t>(y)]);
            lower_.push_back(y == hi ? 1.0 : std::min(1.0, down.value()));
        }
        for (double v : tmp) upper_.push_back(v);
        off_.push_back(lower_.size());
    }

    std::int64_t k_;
    PopulationSpec pop_;
    std::vector<std::int64_t> lo_;
    std::vector<std::size_t> off_;
    std::vector<double> lower_;
    std::vector<double> upper_;
};

namespace detail {

inline double z_from_groups(const PrefixCdfTable& table, TestSide side,
                            const std::uint8_t* groups, std::int64_t k) {
    double z = 1.0;
    std::int64_t y = 0;
    for (std::int64_t j = 1; j <= k; ++j) {
        y += groups[j - 1];
        z = std::min(z, table.pvalue(side, j, y));
    }
    return z;
}

// fn(worker_index, begin, end) over contiguous chunks; chunk boundaries never
// influence per-index results, so output is independent of the worker count
template <class Fn>
inline void run_chunks(std::int64_t total, int workers, Fn&& fn) {
    if (total <= 0) return;
    const int w = std::max(1, workers);
    if (w == 1 || total < 4096) {
        fn(0, static_cast<std::int64_t>(0), total);
        return;
    }
    const std::int64_t chunk = (total + w - 1) / w;
    std::vector<std::thread> threads;
    for (int i = 0; i < w; ++i) {
        const std::int64_t b = static_cast<std::int64_t>(i) * chunk;
        if (b >= total) break;
        const std::int64_t e = std::min(total, b + chunk);
        threads.emplace_back([&fn, i, b, e] { fn(i, b, e); });
    }
    for (auto& t : threads) t.join();
}

inline std::vector<std::vector<std::int64_t>> prefix_histograms(
    const NullModel& model, const PopulationSpec& pop, std::int64_t k, std::int64_t n_e,
    std::uint64_t master_seed, int workers) {
    const int w = std::max(1, workers);
    std::vector<std::vector<std::vector<std::int64_t>>> partial(
        static_cast<std::size_t>(w));
    for (auto& hists : partial) {
        hists.resize(static_cast<std::size_t>(k));
        for (std::int64_t j = 1; j <= k; ++j) {
            const std::int64_t lo = hyper_support_min(pop.total, pop.protected_count, j);
            const std::int64_t hi = hyper_support_max(pop.protected_count, j);
            hists[static_cast<std::size_t>(j - 1)].assign(static_cast<std::size_t>(hi - lo + 1),
                                                          0);
        }
    }
    run_chunks(n_e, w, [&](int wi, std::int64_t b, std::int64_t e) {
        RankingSampler sampler(model, pop, k);
        std::vector<std::uint8_t> buf(static_cast<std::size_t>(k));
        auto& hists = partial[static_cast<std::size_t>(wi)];
        for (std::int64_t i = b; i < e; ++i) {
            sampler.sample(SeedSpec{master_seed, static_cast<std::uint64_t>(i)}, buf.data());
            std::int64_t y = 0;
            for (std::int64_t j = 1; j <= k; ++j) {
                y += buf[static_cast<std::size_t>(j - 1)];
                const std::int64_t lo = hyper_support_min(pop.total, pop.protected_count, j);
                hists[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(y - lo)] += 1;
            }
        }
    });
    auto merged = std::move(partial[0]);
    for (std::size_t wi = 1; wi < partial.size(); ++wi)
        for (std::size_t j = 0; j < merged.size(); ++j)
            for (std::size_t i = 0; i < merged[j].size(); ++i)
                merged[j][i] += partial[wi][j][i];
    return merged;
}

}  // namespace detail

// Sorted Monte Carlo sample of the family statistic Z under the null.
struct NullZSample {
    TestSide side = TestSide::lower;
    CdfMode mode = CdfMode::analytical;
    std::int64_t n_e = 0;
    std::uint64_t master_seed = 0;
    std::vector<double> sorted_z;

    std::int64_t count_at_most(double v) const {
        return static_cast<std::int64_t>(
            std::upper_bound(sorted_z.begin(), sorted_z.end(), v) - sorted_z.begin());
    }

    double fraction_at_most(double v) const {
        return static_cast<double>(count_at_most(v)) / static_cast<double>(sorted_z.size());
    }
};

// Tail table plus null z sample for one (model, pop, k, config). Building it
// once and reusing it across many rankings amortizes the Monte Carlo cost.
struct NullCalibration {
    PrefixCdfTable table;
    NullZSample sample;

    double observed_z(const Ranking& ranking) const {
        return detail::z_from_groups(table, sample.side, ranking.groups.data(),
                                     table.prefix_limit());
    }

    double score(double z) const { return sample.fraction_at_most(z); }
};

inline NullCalibration calibrate_null(const PopulationSpec& pop, const NullModel& model,
                                      std::int64_t k, const TestConfig& cfg) {
    detail::check_prefix(pop, k, "calibrate_null");
    model.validate();
    cfg.validate();

    PrefixCdfTable table =
        cfg.cdf_mode == CdfMode::analytical
            ? PrefixCdfTable::analytical(model, pop, k)
            : PrefixCdfTable::empirical(
                  pop, k,
                  detail::prefix_histograms(model, pop, k, cfg.n_e, cfg.seed, cfg.workers),
                  cfg.n_e);

    NullZSample sample;
    sample.side = cfg.side;
    sample.mode = cfg.cdf_mode;
    sample.n_e = cfg.n_e;
    sample.master_seed = cfg.seed;
    sample.sorted_z.resize(static_cast<std::size_t>(cfg.n_e));
    detail::run_chunks(cfg.n_e, cfg.workers, [&](int, std::int64_t b, std::int64_t e) {
        detail::RankingSampler sampler(model, pop, k);
        std::vector<std::uint8_t> buf(static_cast<std::size_t>(k));
        for (std::int64_t i = b; i < e; ++i) {
            sampler.sample(SeedSpec{cfg.seed, static_cast<std::uint64_t>(i)}, buf.data());
            sample.sorted_z[static_cast<std::size_t>(i)] =
                detail::z_from_groups(table, cfg.side, buf.data(), k);
        }
    });
    std::sort(sample.sorted_z.begin(), sample.sorted_z.end());
    return {std::move(table), std::move(sample)};
}

struct AdjustedAlpha {
    double alpha = 0.0;
    double alpha_c = 0.0;        // adjusted per-test level, in (0, alpha]
    double achieved_fwer = 0.0;  // empirical fraction of null z values <= alpha_c
    std::int64_t n_e = 0;
    bool resolution_warning = false;  // n_e * alpha < 10: too few samples to place alpha_c
};

namespace detail {

// Largest candidate gamma, over observed z atoms at most alpha plus alpha
// itself, whose empirical fraction of z values <= gamma stays <= alpha.
// Realizes sup{gamma : P(Z <= gamma) <= alpha} on the empirical measure; when
// no z value lands at or below alpha the rejection probability there is zero
// and the rule returns alpha itself.
inline std::pair<double, double> select_alpha_c(const std::vector<double>& z, double alpha) {
    const auto B = static_cast<std::int64_t>(z.size());
    auto count_at_most = [&](double v) {
        return static_cast<std::int64_t>(std::upper_bound(z.begin(), z.end(), v) - z.begin());
    };
    auto admissible = [&](std::int64_t c) {
        return static_cast<double>(c) / static_cast<double>(B) <= alpha;
    };

    double best = -1.0;
    const std::int64_t c_alpha = count_at_most(alpha);
    if (admissible(c_alpha)) best = alpha;

    std::int64_t allowed = static_cast<std::int64_t>(alpha * static_cast<double>(B));
    while (allowed > 0 && !admissible(allowed)) --allowed;
    while (allowed < B && admissible(allowed + 1)) ++allowed;

    const std::int64_t m = std::min(c_alpha, allowed);
    if (m >= 1) {
        const double v = z[static_cast<std::size_t>(m - 1)];
        if (admissible(count_at_most(v))) {
            best = std::max(best, v);
        } else {
            // the atom at v spills past the budget; the atom below it fits
            const auto pos = static_cast<std::int64_t>(
                std::lower_bound(z.begin(), z.end(), v) - z.begin());
            if (pos >= 1) best = std::max(best, z[static_cast<std::size_t>(pos - 1)]);
        }
    }
    if (best < 0.0) {
        // even the smallest atom overshoots: step just below it, where the
        // empirical rejection fraction is exactly zero
        best = std::nextafter(z.front(), 0.0);
    }
    const double achieved = static_cast<double>(count_at_most(best)) / static_cast<double>(B);
    return {best, achieved};
}

inline AdjustedAlpha adjusted_from_sample(const NullZSample& sample, double alpha) {
    AdjustedAlpha a;
    a.alpha = alpha;
    a.n_e = sample.n_e;
    a.resolution_warning =
        static_cast<double>(sample.n_e) * alpha < 10.0;
    const auto [alpha_c, achieved] = select_alpha_c(sample.sorted_z, alpha);
    a.alpha_c = alpha_c;
    a.achieved_fwer = achieved;
    return a;
}

inline std::int64_t resolve_k(const TestConfig& cfg, std::int64_t n, const char* where) {
    const std::int64_t k = cfg.k == 0 ? n : cfg.k;
    if (k < 1 || k > n)
        throw std::invalid_argument(std::string(where) + ": k=" + std::to_string(cfg.k) +
                                    " outside [1, " + std::to_string(n) + "]");
    return k;
}

}  // namespace detail

// Monte Carlo adjusted per-test significance level for the family of prefix
// tests j = 1..k at family level cfg.alpha.
inline AdjustedAlpha adjust_alpha(const PopulationSpec& pop, const NullModel& model,
                                  std::int64_t k, const TestConfig& cfg) {
    const auto cal = calibrate_null(pop, model, k, cfg);
    return detail::adjusted_from_sample(cal.sample, cfg.alpha);
}

struct SingleTestResult {
    TestSide side = TestSide::lower;
    double p_value = 1.0;
    bool reject = false;
    std::int64_t protected_in_prefix = 0;
};

// One prefix test at position k. Lower side: p = F_k(y); upper side:
// p = P(Y_k >= y); two-sided: p = min(1, 2 min(lower, upper)), i.e. the
// acceptance region is {y : F_k(y) > alpha/2 and P(Y_k >= y) > alpha/2}.
inline SingleTestResult single_test(const Ranking& ranking, const PopulationSpec& pop,
                                    const NullModel& model, std::int64_t k, TestSide side,
                                    double alpha) {
    ranking.validate_against(pop);
    detail::check_prefix(pop, k, "single_test");
    model.validate();
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("single_test: alpha must lie in (0, 1), got " +
                                    std::to_string(alpha));

    std::int64_t y = 0;
    for (std::int64_t j = 0; j < k; ++j) y += ranking.groups[static_cast<std::size_t>(j)];

    const bool hyper = model.kind == ModelKind::hypergeometric;
    const LawOptions opts;
    auto lower_tail = [&](std::int64_t v) {
        return hyper ? detail::hyper_cdf(pop.total, pop.protected_count, k, v)
                     : cdf(model, pop, k, v, opts);
    };
    auto upper_tail = [&](std::int64_t v) {
        if (hyper) return detail::hyper_upper(pop.total, pop.protected_count, k, v);
        const auto d = count_distribution(model, pop, k, opts);
        if (v <= d.support_min) return 1.0;
        if (v > d.support_max()) return 0.0;
        KahanSum acc;
        for (std::int64_t t = d.support_max(); t >= v; --t) acc.add(d.pmf_at(t));
        return std::min(1.0, acc.value());
    };

    SingleTestResult r;
    r.side = side;
    r.protected_in_prefix = y;
    switch (side) {
        case TestSide::lower:
            r.p_value = lower_tail(y);
            break;
        case TestSide::upper:
            r.p_value = upper_tail(y);
            break;
        case TestSide::two_sided:
            r.p_value = std::min(1.0, 2.0 * std::min(lower_tail(y), upper_tail(y)));
            break;
    }
    r.reject = r.p_value <= alpha;
    return r;
}

// z statistic of the observed ranking: min over j <= k of F_j(y_j).
inline double z_statistic(const Ranking& ranking, const PopulationSpec& pop,
                          const NullModel& model, std::int64_t k) {
    ranking.validate_against(pop);
    detail::check_prefix(pop, k, "z_statistic");
    const auto table = PrefixCdfTable::analytical(model, pop, k);
    return detail::z_from_groups(table, TestSide::lower, ranking.groups.data(), k);
}

// Probabilistic fairness score: fraction of n_e null rankings whose z is at
// most the observed ranking's z (ties count).
inline double fairness_score(const Ranking& ranking, const PopulationSpec& pop,
                             const NullModel& model, const TestConfig& cfg) {
    ranking.validate_against(pop);
    const std::int64_t k = detail::resolve_k(cfg, pop.total, "fairness_score");
    const auto cal = calibrate_null(pop, model, k, cfg);
    return cal.score(cal.observed_z(ranking));
}

struct AuditReport {
    TestSide side = TestSide::lower;
    double alpha = 0.0;
    std::int64_t k = 0;
    std::vector<double> per_prefix_pvalues;  // side-aware, index j-1 for prefix j
    double z_statistic = 1.0;                // min of per_prefix_pvalues
    double fairness_score = 1.0;
    AdjustedAlpha adjusted_alpha;
    bool pass = true;  // fails iff fairness_score < alpha
    std::optional<std::int64_t> first_failing_prefix;  // smallest j with p_j <= alpha_c
};

inline AuditReport multi_test(const Ranking& ranking, const PopulationSpec& pop,
                              const NullModel& model, const TestConfig& cfg) {
    ranking.validate_against(pop);
    const std::int64_t k = detail::resolve_k(cfg, pop.total, "multi_test");
    const auto cal = calibrate_null(pop, model, k, cfg);

    AuditReport rep;
    rep.side = cfg.side;
    rep.alpha = cfg.alpha;
    rep.k = k;
    rep.per_prefix_pvalues.reserve(static_cast<std::size_t>(k));
    double z = 1.0;
    std::int64_t y = 0;
    for (std::int64_t j = 1; j <= k; ++j) {
        y += ranking.groups[static_cast<std::size_t>(j - 1)];
        const double p = cal.table.pvalue(cfg.side, j, y);
        rep.per_prefix_pvalues.push_back(p);
        z = std::min(z, p);
    }
    rep.z_statistic = z;
    rep.fairness_score = cal.score(z);
    rep.adjusted_alpha = detail::adjusted_from_sample(cal.sample, cfg.alpha);
    rep.pass = !(rep.fairness_score < cfg.alpha);
    for (std::int64_t j = 1; j <= k; ++j) {
        if (rep.per_prefix_pvalues[static_cast<std::size_t>(j - 1)] <= rep.adjusted_alpha.alpha_c) {
            rep.first_failing_prefix = j;
            break;
        }
    }
    return rep;
}

struct ConfidenceBand {
    double alpha = 0.0;
    std::vector<std::int64_t> lower;   // index j-1: quantile(alpha/2) of Y_j
    std::vector<std::int64_t> upper;   // index j-1: quantile(1 - alpha/2) of Y_j
    std::vector<double> lower_share;   // lower[j-1] / j
    std::vector<double> upper_share;   // upper[j-1] / j
};

// Central band of the null protected count for every prefix 1..n.
inline ConfidenceBand confidence_band(const PopulationSpec& pop, const NullModel& model,
                                      double alpha) {
    pop.validate();
    model.validate();
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("confidence_band: alpha must lie in (0, 1), got " +
                                    std::to_string(alpha));
    const auto table = PrefixCdfTable::analytical(model, pop, pop.total);
    ConfidenceBand band;
    band.alpha = alpha;
    for (std::int64_t j = 1; j <= pop.total; ++j) {
        std::int64_t lo = table.row_max(j);
        for (std::int64_t v = table.row_min(j); v <= table.row_max(j); ++v) {
            if (table.lower(j, v) >= alpha / 2.0) {
                lo = v;
                break;
            }
        }
        std::int64_t hi = table.row_max(j);
        for (std::int64_t v = table.row_min(j); v <= table.row_max(j); ++v) {
            if (table.lower(j, v) >= 1.0 - alpha / 2.0) {
                hi = v;
                break;
            }
        }
        band.lower.push_back(lo);
        band.upper.push_back(hi);
        band.lower_share.push_back(static_cast<double>(lo) / static_cast<double>(j));
        band.upper_share.push_back(static_cast<double>(hi) / static_cast<double>(j));
    }
    return band;
}

struct BoundaryCurves {
    double p = 0.0;  // protected proportion
    std::vector<double> x;      // prefix share k/n, uniform grid over (0, 1]
    std::vector<double> upper;  // limit of the upper band share at x
    std::vector<double> lower;  // limit of the lower band share at x
};

// Large-n limits of the confidence band in share coordinates:
// upper(x) = 1 for x <= p, else p/x; lower(x) = 0 for x <= 1-p,
// else 1 - (1-p)/x.
inline BoundaryCurves boundary_curves(double p, std::int64_t grid_size) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("boundary_curves: p must lie in (0, 1), got " +
                                    std::to_string(p));
    if (grid_size < 2)
        throw std::invalid_argument("boundary_curves: grid_size must be >= 2, got " +
                                    std::to_string(grid_size));
    BoundaryCurves c;
    c.p = p;
    for (std::int64_t i = 1; i <= grid_size; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(grid_size);
        c.x.push_back(x);
        c.upper.push_back(x <= p ? 1.0 : p / x);
        c.lower.push_back(x <= 1.0 - p ? 0.0 : 1.0 - (1.0 - p) / x);
    }
    return c;
}

// Monte Carlo sample size from the DKW inequality: the empirical fairness
// score is within 10^-delta of truth with probability 1 - beta.
inline std::int64_t required_samples(double delta, double beta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("required_samples: delta must be > 0, got " +
                                    std::to_string(delta));
    if (!(beta > 0.0 && beta < 2.0))
        throw std::invalid_argument("required_samples: beta must lie in (0, 2), got " +
                                    std::to_string(beta));
    return static_cast<std::int64_t>(
        std::ceil(std::log(2.0 / beta) * std::pow(10.0, 2.0 * delta) / 2.0));
}

}  // namespace fairtopk
