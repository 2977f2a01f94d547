#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

#include "fairtopk/audit.hpp"
#include "fairtopk/population.hpp"
#include "fairtopk/rerank.hpp"

namespace fairtopk {

// Reports use nlohmann::json with its default object ordering (keys sorted),
// so equal inputs serialize to byte-identical output.
using njson = nlohmann::json;

inline constexpr std::string_view report_schema = "fairtopk-report/1";

// FNV-1a 64-bit digest of the raw input bytes, hex encoded. Ties a report to
// the exact file it was computed from.
inline std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[h & 0xF];
        h >>= 4;
    }
    return std::string(buf, 16);
}

inline std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::hypergeometric: return "hypergeometric";
        case ModelKind::finite_binomial: return "finite_binomial";
        case ModelKind::weighted_hypergeometric: return "weighted_hypergeometric";
    }
    return "unknown";
}

inline std::string to_string(TestSide side) {
    switch (side) {
        case TestSide::lower: return "lower";
        case TestSide::upper: return "upper";
        case TestSide::two_sided: return "two_sided";
    }
    return "unknown";
}

inline std::string to_string(CdfMode mode) {
    return mode == CdfMode::analytical ? "analytical" : "empirical";
}

inline njson to_json(const PopulationSpec& pop) {
    return njson{{"total", pop.total}, {"protected", pop.protected_count}};
}

inline njson to_json(const NullModel& model) {
    njson j{{"kind", to_string(model.kind)}};
    if (model.kind == ModelKind::finite_binomial)
        j["fairness_probability"] = model.fairness_probability;
    if (model.kind == ModelKind::weighted_hypergeometric) j["odds_ratio"] = model.odds_ratio;
    return j;
}

inline njson to_json(const TestConfig& cfg, std::int64_t resolved_k) {
    return njson{{"alpha", cfg.alpha},       {"k", resolved_k},
                 {"side", to_string(cfg.side)}, {"n_e", cfg.n_e},
                 {"cdf_mode", to_string(cfg.cdf_mode)}, {"seed", cfg.seed}};
}

inline njson to_json(const AdjustedAlpha& adj) {
    return njson{{"alpha", adj.alpha},
                 {"alpha_c", adj.alpha_c},
                 {"achieved_fwer", adj.achieved_fwer},
                 {"n_e", adj.n_e},
                 {"resolution_warning", adj.resolution_warning}};
}

inline njson to_json(const AuditReport& rep) {
    njson j{{"side", to_string(rep.side)},
            {"alpha", rep.alpha},
            {"k", rep.k},
            {"per_prefix_pvalues", rep.per_prefix_pvalues},
            {"z_statistic", rep.z_statistic},
            {"fairness_score", rep.fairness_score},
            {"adjusted_alpha", to_json(rep.adjusted_alpha)},
            {"pass", rep.pass}};
    if (rep.first_failing_prefix)
        j["first_failing_prefix"] = *rep.first_failing_prefix;
    else
        j["first_failing_prefix"] = nullptr;
    return j;
}

inline njson make_audit_report(const PopulationSpec& pop, const NullModel& model,
                               const TestConfig& cfg, const AuditReport& rep,
                               const std::string& input_digest) {
    return njson{{"schema", std::string(report_schema)},
                 {"command", "audit"},
                 {"input_digest", {{"algorithm", "fnv1a64"}, {"value", input_digest}}},
                 {"population", to_json(pop)},
                 {"model", to_json(model)},
                 {"config", to_json(cfg, rep.k)},
                 {"result", to_json(rep)}};
}

inline njson make_alpha_report(const PopulationSpec& pop, const NullModel& model,
                               const TestConfig& cfg, std::int64_t k, const AdjustedAlpha& adj) {
    return njson{{"schema", std::string(report_schema)},
                 {"command", "alpha"},
                 {"population", to_json(pop)},
                 {"model", to_json(model)},
                 {"config", to_json(cfg, k)},
                 {"result", to_json(adj)}};
}

inline njson make_rerank_report(const PopulationSpec& pop, const NullModel& model,
                                const TestConfig& cfg, std::int64_t k, RerankMode mode,
                                const AdjustedAlpha& adj, const RerankResult& res,
                                const std::string& input_digest) {
    return njson{{"schema", std::string(report_schema)},
                 {"command", "rerank"},
                 {"input_digest", {{"algorithm", "fnv1a64"}, {"value", input_digest}}},
                 {"population", to_json(pop)},
                 {"model", to_json(model)},
                 {"config", to_json(cfg, k)},
                 {"mode", mode == RerankMode::promote ? "promote" : "demote"},
                 {"result",
                  {{"adjusted_alpha", to_json(adj)},
                   {"swap_count", res.swap_count},
                   {"positions_adjusted", res.positions_adjusted},
                   {"order", res.order}}}};
}

}  // namespace fairtopk
