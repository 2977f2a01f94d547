#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fairtopk/audit.hpp"
#include "fairtopk/csv.hpp"
#include "fairtopk/population.hpp"
#include "fairtopk/rerank.hpp"
#include "fairtopk/report.hpp"
#include "fairtopk/sampling.hpp"

namespace fairtopk {
namespace cli {

namespace detail {

struct ModelArgs {
    std::string name = "hyper";
    double f = 0.5;
    double omega = 1.0;
    double rho = 0.5;
    CLI::Option* f_opt = nullptr;
    CLI::Option* omega_opt = nullptr;
    CLI::Option* rho_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", name, "Null model: hyper, binom, or weighted")
            ->check(CLI::IsMember({"hyper", "binom", "weighted"}))
            ->capture_default_str();
        f_opt = cmd->add_option("--f", f, "Per-draw protected probability (binom model)");
        omega_opt = cmd->add_option("--omega", omega, "Protected odds ratio (weighted model)");
        rho_opt = cmd->add_option(
            "--rho", rho,
            "Target protected share; derives the odds ratio from the population (weighted model)");
        omega_opt->excludes(rho_opt);
        rho_opt->excludes(omega_opt);
    }

    NullModel resolve(const PopulationSpec& pop) const {
        if (name == "hyper") {
            if (f_opt->count() || omega_opt->count() || rho_opt->count())
                throw std::runtime_error("--f/--omega/--rho do not apply to --model hyper");
            return NullModel::hypergeometric();
        }
        if (name == "binom") {
            if (omega_opt->count() || rho_opt->count())
                throw std::runtime_error("--omega/--rho do not apply to --model binom");
            if (!f_opt->count()) throw std::runtime_error("--model binom requires --f");
            return NullModel::finite_binomial(f);
        }
        if (f_opt->count()) throw std::runtime_error("--f does not apply to --model weighted");
        if (omega_opt->count()) return NullModel::weighted(omega);
        if (rho_opt->count())
            return NullModel::weighted(odds_ratio_for_target(pop, TargetQuota{rho}));
        throw std::runtime_error("--model weighted requires --omega or --rho");
    }
};

struct TestArgs {
    double alpha = 0.1;
    std::int64_t k = 0;
    std::int64_t ne = 1'000'000;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string side = "lower";
    std::string cdf_mode = "analytical";

    void attach(CLI::App* cmd, bool with_side) {
        cmd->add_option("--alpha", alpha, "Family significance level")->capture_default_str();
        cmd->add_option("--k", k, "Prefix length under test (0 = full ranking)")
            ->capture_default_str();
        cmd->add_option("--ne", ne, "Monte Carlo null sample count")->capture_default_str();
        cmd->add_option("--seed", seed, "Master RNG seed")->capture_default_str();
        cmd->add_option("--workers", workers, "Worker threads for Monte Carlo runs")
            ->capture_default_str();
        if (with_side)
            cmd->add_option("--side", side, "Test side: lower, upper, or two-sided")
                ->check(CLI::IsMember({"lower", "upper", "two-sided"}))
                ->capture_default_str();
        cmd->add_option("--cdf-mode", cdf_mode,
                        "Per-prefix tail source: analytical or empirical")
            ->check(CLI::IsMember({"analytical", "empirical"}))
            ->capture_default_str();
    }

    TestConfig config() const {
        TestConfig cfg;
        cfg.alpha = alpha;
        cfg.k = k;
        cfg.n_e = ne;
        cfg.seed = seed;
        cfg.workers = workers;
        cfg.side = side == "lower"   ? TestSide::lower
                   : side == "upper" ? TestSide::upper
                                     : TestSide::two_sided;
        cfg.cdf_mode = cdf_mode == "analytical" ? CdfMode::analytical : CdfMode::empirical;
        return cfg;
    }
};

inline std::string read_input(const std::string& path, std::istream& in) {
    std::ostringstream ss;
    if (path == "-") {
        ss << in.rdbuf();
        return ss.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open input file '" + path + "'");
    ss << f.rdbuf();
    return ss.str();
}

inline void emit(const std::string& text, const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
    f << text;
}

inline RowOrder parse_order(const std::string& order) {
    return order == "by-score" ? RowOrder::by_score : RowOrder::as_given;
}

}  // namespace detail

// Entry point shared by the binary and the tests. Exit codes: 0 success (and
// audit pass), 1 audit verdict fail, 2 usage/parse/input errors.
inline int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
                       std::ostream& err) {
    CLI::App app{"Statistical group-fairness auditing for top-k rankings"};
    app.name("fairtopk");
    app.require_subcommand(1);

    // audit
    auto* audit_cmd =
        app.add_subcommand("audit", "Audit a ranking against a null model of fair selection");
    std::string audit_input, audit_out, audit_order = "as-given";
    detail::ModelArgs audit_model;
    detail::TestArgs audit_test;
    audit_cmd->add_option("--input,-i", audit_input, "Ranking CSV (id,group[,score]); - for stdin")
        ->required();
    audit_cmd->add_option("--order", audit_order, "Row order: as-given or by-score")
        ->check(CLI::IsMember({"as-given", "by-score"}))
        ->capture_default_str();
    audit_cmd->add_option("--out,-o", audit_out, "Write the JSON report here instead of stdout");
    audit_model.attach(audit_cmd);
    audit_test.attach(audit_cmd, true);

    // alpha
    auto* alpha_cmd = app.add_subcommand(
        "alpha", "Adjusted per-prefix significance level for a family of prefix tests");
    std::int64_t alpha_total = 0, alpha_protected = 0;
    std::string alpha_out;
    detail::ModelArgs alpha_model;
    detail::TestArgs alpha_test;
    alpha_cmd->add_option("--total", alpha_total, "Population size")->required();
    alpha_cmd->add_option("--protected", alpha_protected, "Protected item count")->required();
    alpha_cmd->add_option("--out,-o", alpha_out, "Write the JSON report here instead of stdout");
    alpha_model.attach(alpha_cmd);
    alpha_test.attach(alpha_cmd, true);

    // rerank
    auto* rerank_cmd = app.add_subcommand(
        "rerank", "Minimally reorder a ranking so every prefix meets the adjusted level");
    std::string rerank_input, rerank_out, rerank_report, rerank_order = "as-given";
    bool rerank_demote = false;
    detail::ModelArgs rerank_model;
    detail::TestArgs rerank_test;
    rerank_cmd
        ->add_option("--input,-i", rerank_input, "Ranking CSV (id,group[,score]); - for stdin")
        ->required();
    rerank_cmd->add_option("--order", rerank_order, "Row order: as-given or by-score")
        ->check(CLI::IsMember({"as-given", "by-score"}))
        ->capture_default_str();
    rerank_cmd->add_option("--out,-o", rerank_out, "Write the reordered CSV here instead of stdout");
    rerank_cmd->add_option("--report", rerank_report, "Also write a JSON rerank report here");
    rerank_cmd->add_flag("--demote", rerank_demote,
                         "Move overrepresented protected items down instead of promoting");
    rerank_model.attach(rerank_cmd);
    rerank_test.attach(rerank_cmd, true);

    // bands
    auto* bands_cmd = app.add_subcommand(
        "bands", "Per-prefix acceptance band of the null protected count (CSV)");
    std::int64_t bands_total = 0, bands_protected = 0;
    double bands_alpha = 0.1;
    std::string bands_out;
    detail::ModelArgs bands_model;
    bands_cmd->add_option("--total", bands_total, "Population size")->required();
    bands_cmd->add_option("--protected", bands_protected, "Protected item count")->required();
    bands_cmd->add_option("--alpha", bands_alpha, "Band significance level")
        ->capture_default_str();
    bands_cmd->add_option("--out,-o", bands_out, "Write the CSV here instead of stdout");
    bands_model.attach(bands_cmd);

    // boundaries
    auto* bound_cmd = app.add_subcommand(
        "boundaries", "Large-population limit curves of the band in share coordinates (CSV)");
    double bound_p = 0.0;
    std::int64_t bound_grid = 1000;
    std::string bound_out;
    bound_cmd->add_option("--p", bound_p, "Protected proportion")->required();
    bound_cmd->add_option("--grid", bound_grid, "Grid points over (0, 1]")
        ->capture_default_str();
    bound_cmd->add_option("--out,-o", bound_out, "Write the CSV here instead of stdout");

    // simulate
    auto* sim_cmd = app.add_subcommand(
        "simulate", "Sample null rankings and summarize protected counts per position");
    std::int64_t sim_total = 0, sim_protected = 0, sim_count = 1000, sim_k = 0;
    std::uint64_t sim_seed = 0;
    std::string sim_out, sim_csv;
    detail::ModelArgs sim_model;
    sim_cmd->add_option("--total", sim_total, "Population size")->required();
    sim_cmd->add_option("--protected", sim_protected, "Protected item count")->required();
    sim_cmd->add_option("--count", sim_count, "Rankings to sample")->capture_default_str();
    sim_cmd->add_option("--k", sim_k, "Prefix length to record (0 = full)")
        ->capture_default_str();
    sim_cmd->add_option("--seed", sim_seed, "Master RNG seed")->capture_default_str();
    sim_cmd->add_option("--out,-o", sim_out, "Write the JSON summary here instead of stdout");
    sim_cmd->add_option("--csv", sim_csv, "Also write the per-position table as CSV here");
    sim_model.attach(sim_cmd);

    // samples
    auto* samples_cmd = app.add_subcommand(
        "samples", "Monte Carlo sample count for a target score accuracy (DKW bound)");
    double samples_delta = 0.0, samples_beta = 0.0;
    samples_cmd
        ->add_option("--delta", samples_delta, "Score accurate to within 10^-delta")
        ->required();
    samples_cmd->add_option("--beta", samples_beta, "Failure probability of the guarantee")
        ->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(std::move(rev));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (audit_cmd->parsed()) {
            const std::string bytes = detail::read_input(audit_input, in);
            const std::string source = audit_input == "-" ? "stdin" : audit_input;
            std::istringstream ss(bytes);
            auto table = parse_ranking_csv(ss, source);
            table = apply_order(std::move(table), detail::parse_order(audit_order), source);
            const Ranking ranking = table.to_ranking();
            const PopulationSpec pop = table.population();
            const NullModel model = audit_model.resolve(pop);
            const TestConfig cfg = audit_test.config();
            const AuditReport rep = multi_test(ranking, pop, model, cfg);
            const njson j = make_audit_report(pop, model, cfg, rep, fnv1a64_hex(bytes));
            detail::emit(j.dump(2) + "\n", audit_out, out);
            return rep.pass ? 0 : 1;
        }

        if (alpha_cmd->parsed()) {
            const PopulationSpec pop{alpha_total, alpha_protected};
            const NullModel model = alpha_model.resolve(pop);
            const TestConfig cfg = alpha_test.config();
            const std::int64_t k = fairtopk::detail::resolve_k(cfg, pop.total, "alpha");
            const AdjustedAlpha adj = adjust_alpha(pop, model, k, cfg);
            const njson j = make_alpha_report(pop, model, cfg, k, adj);
            detail::emit(j.dump(2) + "\n", alpha_out, out);
            return 0;
        }

        if (rerank_cmd->parsed()) {
            const std::string bytes = detail::read_input(rerank_input, in);
            const std::string source = rerank_input == "-" ? "stdin" : rerank_input;
            std::istringstream ss(bytes);
            auto table = parse_ranking_csv(ss, source);
            table = apply_order(std::move(table), detail::parse_order(rerank_order), source);
            const Ranking ranking = table.to_ranking();
            const PopulationSpec pop = table.population();
            const NullModel model = rerank_model.resolve(pop);
            // demotion enforces upper-tail thresholds, so unless the caller
            // picks a side explicitly, calibrate on the matching tail
            if (rerank_demote && rerank_cmd->count("--side") == 0) rerank_test.side = "upper";
            const TestConfig cfg = rerank_test.config();
            const RerankMode mode = rerank_demote ? RerankMode::demote : RerankMode::promote;
            const RerankResult res = rerank(ranking, pop, model, cfg, mode);
            std::ostringstream body;
            write_ranking_csv(body, table, &res.order);
            detail::emit(body.str(), rerank_out, out);
            if (!rerank_report.empty()) {
                const std::int64_t k = fairtopk::detail::resolve_k(cfg, pop.total, "rerank");
                const njson j = make_rerank_report(pop, model, cfg, k, mode, res.adjusted_alpha,
                                                   res, fnv1a64_hex(bytes));
                detail::emit(j.dump(2) + "\n", rerank_report, out);
            }
            return 0;
        }

        if (bands_cmd->parsed()) {
            const PopulationSpec pop{bands_total, bands_protected};
            const NullModel model = bands_model.resolve(pop);
            const ConfidenceBand band = confidence_band(pop, model, bands_alpha);
            std::ostringstream body;
            body << "position,lower,upper,lower_share,upper_share\n";
            for (std::size_t i = 0; i < band.lower.size(); ++i) {
                body << (i + 1) << ',' << band.lower[i] << ',' << band.upper[i] << ','
                     << fairtopk::detail::format_double(band.lower_share[i]) << ','
                     << fairtopk::detail::format_double(band.upper_share[i]) << '\n';
            }
            detail::emit(body.str(), bands_out, out);
            return 0;
        }

        if (bound_cmd->parsed()) {
            const BoundaryCurves curves = boundary_curves(bound_p, bound_grid);
            std::ostringstream body;
            body << "x,lower,upper\n";
            for (std::size_t i = 0; i < curves.x.size(); ++i) {
                body << fairtopk::detail::format_double(curves.x[i]) << ','
                     << fairtopk::detail::format_double(curves.lower[i]) << ','
                     << fairtopk::detail::format_double(curves.upper[i]) << '\n';
            }
            detail::emit(body.str(), bound_out, out);
            return 0;
        }

        if (sim_cmd->parsed()) {
            const PopulationSpec pop{sim_total, sim_protected};
            const NullModel model = sim_model.resolve(pop);
            if (sim_count < 1) throw std::runtime_error("--count must be >= 1");
            const std::int64_t k = sim_k == 0 ? pop.total : sim_k;
            fairtopk::detail::RankingSampler sampler(model, pop, k);
            std::vector<std::uint8_t> buf(static_cast<std::size_t>(k));
            std::vector<std::int64_t> sum(static_cast<std::size_t>(k), 0);
            std::vector<std::int64_t> sumsq(static_cast<std::size_t>(k), 0);
            for (std::int64_t i = 0; i < sim_count; ++i) {
                sampler.sample(SeedSpec{sim_seed, static_cast<std::uint64_t>(i)}, buf.data());
                std::int64_t y = 0;
                for (std::int64_t j = 0; j < k; ++j) {
                    y += buf[static_cast<std::size_t>(j)];
                    sum[static_cast<std::size_t>(j)] += y;
                    sumsq[static_cast<std::size_t>(j)] += y * y;
                }
            }
            std::vector<double> mean(static_cast<std::size_t>(k));
            std::vector<double> sd(static_cast<std::size_t>(k));
            std::vector<double> share(static_cast<std::size_t>(k));
            for (std::int64_t j = 0; j < k; ++j) {
                const auto i = static_cast<std::size_t>(j);
                const double m = static_cast<double>(sum[i]) / static_cast<double>(sim_count);
                const double v =
                    static_cast<double>(sumsq[i]) / static_cast<double>(sim_count) - m * m;
                mean[i] = m;
                sd[i] = std::sqrt(std::max(0.0, v));
                share[i] = m / static_cast<double>(j + 1);
            }
            if (!sim_csv.empty()) {
                std::ostringstream body;
                body << "position,mean_protected,sd_protected,mean_share\n";
                for (std::int64_t j = 0; j < k; ++j) {
                    const auto i = static_cast<std::size_t>(j);
                    body << (j + 1) << ',' << fairtopk::detail::format_double(mean[i]) << ','
                         << fairtopk::detail::format_double(sd[i]) << ','
                         << fairtopk::detail::format_double(share[i]) << '\n';
                }
                detail::emit(body.str(), sim_csv, out);
            }
            const njson j{{"schema", "fairtopk-simulate/1"},
                          {"population", to_json(pop)},
                          {"model", to_json(model)},
                          {"count", sim_count},
                          {"seed", sim_seed},
                          {"prefix", k},
                          {"mean_protected", mean},
                          {"sd_protected", sd},
                          {"mean_share", share}};
            detail::emit(j.dump(2) + "\n", sim_out, out);
            return 0;
        }

        if (samples_cmd->parsed()) {
            const std::int64_t n = required_samples(samples_delta, samples_beta);
            const njson j{{"delta", samples_delta}, {"beta", samples_beta}, {"n_e", n}};
            out << j.dump(2) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        err << "fairtopk: error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
    return run_command(args, std::cin, out, err);
}

}  // namespace cli
}  // namespace fairtopk
