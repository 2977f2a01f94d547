#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "fairtopk/audit.hpp"
#include "fairtopk/rng.hpp"
#include "fairtopk/sampling.hpp"

#include "oracles.hpp"

using namespace fairtopk;

TEST_CASE("seed mixer reproduces the reference stream", "[rng]") {
    SplitMix64 sm(0);
    CHECK(sm.next() == 0xE220A8397B1DCDAFULL);
    CHECK(sm.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(sm.next() == 0x06C45D188009454FULL);
}

TEST_CASE("stream generator reproduces the reference sequence", "[rng]") {
    Xoshiro256StarStar rng(12345);
    CHECK(rng.next() == 0xBE6A36374160D49BULL);
    CHECK(rng.next() == 0x214AAA0637A688C6ULL);
    CHECK(rng.next() == 0xF69D16DE9954D388ULL);
    CHECK(rng.next() == 0x0C60048C4E96E033ULL);
    CHECK(rng.next() == 0x8E2076AEED51C648ULL);

    Xoshiro256StarStar again(12345);
    CHECK(again.next_double() ==
          static_cast<double>(0xBE6A36374160D49BULL >> 11) * 0x1.0p-53);
}

TEST_CASE("unit doubles stay in [0, 1) and bounded draws stay in range", "[rng]") {
    Xoshiro256StarStar rng(99);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 7ULL, 100ULL, 1ULL << 40}) {
        for (int i = 0; i < 2000; ++i) CHECK(rng.next_below(bound) < bound);
    }
}

TEST_CASE("bounded draws are unbiased across residues", "[rng][stats]") {
    Xoshiro256StarStar rng(2024);
    const int draws = 300000;
    std::array<int, 3> freq{};
    for (int i = 0; i < draws; ++i) freq[rng.next_below(3)] += 1;
    for (const int c : freq)
        CHECK(static_cast<double>(c) / draws == Catch::Approx(1.0 / 3.0).margin(0.01));
}

TEST_CASE("substreams are reproducible and mutually distinct", "[rng]") {
    auto a = substream_rng(SeedSpec{42, 7});
    auto b = substream_rng(SeedSpec{42, 7});
    for (int i = 0; i < 64; ++i) CHECK(a.next() == b.next());

    auto c = substream_rng(SeedSpec{42, 8});
    auto d = substream_rng(SeedSpec{43, 7});
    Xoshiro256StarStar base = substream_rng(SeedSpec{42, 7});
    int same_c = 0, same_d = 0;
    for (int i = 0; i < 64; ++i) {
        const auto v = base.next();
        same_c += v == c.next();
        same_d += v == d.next();
    }
    CHECK(same_c == 0);
    CHECK(same_d == 0);
}

TEST_CASE("sampled rankings preserve group counts and replay exactly", "[samplers]") {
    const PopulationSpec pop{50, 18};
    for (const auto& model : {NullModel::hypergeometric(), NullModel::finite_binomial(0.4),
                              NullModel::weighted(2.2)}) {
        const auto r1 = sample_ranking(model, pop, SeedSpec{7, 3});
        const auto r2 = sample_ranking(model, pop, SeedSpec{7, 3});
        REQUIRE(r1.size() == 50);
        CHECK(r1.groups == r2.groups);
        CHECK(r1.protected_total() == 18);

        const auto r3 = sample_ranking(model, pop, SeedSpec{7, 4});
        CHECK(r1.groups != r3.groups);
    }
}

TEST_CASE("degenerate coin flips order one group before the other", "[samplers]") {
    const PopulationSpec pop{5, 2};
    const auto all_first = sample_ranking(NullModel::finite_binomial(1.0), pop, SeedSpec{1, 1});
    CHECK(all_first.groups == std::vector<std::uint8_t>{1, 1, 0, 0, 0});
    const auto all_last = sample_ranking(NullModel::finite_binomial(0.0), pop, SeedSpec{1, 1});
    CHECK(all_last.groups == std::vector<std::uint8_t>{0, 0, 0, 1, 1});
}

TEST_CASE("a huge odds ratio pushes every protected item to the top", "[samplers][stats]") {
    const PopulationSpec pop{10, 3};
    const auto model = NullModel::weighted(1e9);
    detail::RankingSampler sampler(model, pop, 3);
    std::uint8_t buf[3];
    int all_protected = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        sampler.sample(SeedSpec{5, static_cast<std::uint64_t>(i)}, buf);
        all_protected += (buf[0] == 1 && buf[1] == 1 && buf[2] == 1);
    }
    CHECK(static_cast<double>(all_protected) / draws >= 0.999);
}

TEST_CASE("fair draws hit every arrangement uniformly", "[samplers][stats]") {
    const PopulationSpec pop{6, 3};
    const int draws = 60000;
    std::map<std::vector<std::uint8_t>, int> freq;
    detail::RankingSampler sampler(NullModel::hypergeometric(), pop, 6);
    std::vector<std::uint8_t> buf(6);
    for (int i = 0; i < draws; ++i) {
        sampler.sample(SeedSpec{11, static_cast<std::uint64_t>(i)}, buf.data());
        freq[buf] += 1;
    }
    REQUIRE(freq.size() == 20);  // C(6, 3) distinct arrangements
    for (const auto& [arr, count] : freq)
        CHECK(static_cast<double>(count) / draws == Catch::Approx(0.05).margin(0.006));
}

TEST_CASE("fair-draw prefix means match the fair share", "[samplers][stats]") {
    const PopulationSpec pop{100, 30};
    detail::RankingSampler sampler(NullModel::hypergeometric(), pop, 50);
    std::vector<std::uint8_t> buf(50);
    const int draws = 100000;
    std::int64_t total = 0;
    for (int i = 0; i < draws; ++i) {
        sampler.sample(SeedSpec{23, static_cast<std::uint64_t>(i)}, buf.data());
        for (const auto b : buf) total += b;
    }
    // E[Y_50] = 50 * 30 / 100 = 15
    CHECK(static_cast<double>(total) / draws == Catch::Approx(15.0).margin(0.15));
}

TEST_CASE("per-position empirical laws stay inside the DKW envelope", "[samplers][stats][slow]") {
    // 200k draws, fixed seeds; envelope 0.006 is ~7 sigma at these sizes
    const std::int64_t draws = 200000;
    const double envelope = 0.006;

    auto check_pool = [&](const NullModel& model, const PopulationSpec& pop,
                          auto&& exact_pmf_fn) {
        const auto n = pop.total;
        const auto hists =
            fairtopk::detail::prefix_histograms(model, pop, n, draws, 777, 1);
        for (std::int64_t j = 1; j <= n; ++j) {
            const auto exact = exact_pmf_fn(static_cast<int>(j));
            const auto lo = fairtopk::detail::hyper_support_min(n, pop.protected_count, j);
            long double exact_cum = 0.0L;
            std::int64_t emp_cum = 0;
            for (std::size_t i = 0; i < hists[static_cast<std::size_t>(j - 1)].size(); ++i) {
                const auto y = lo + static_cast<std::int64_t>(i);
                exact_cum += exact[static_cast<std::size_t>(y)];
                emp_cum += hists[static_cast<std::size_t>(j - 1)][i];
                const double diff = std::abs(static_cast<double>(emp_cum) / draws -
                                             static_cast<double>(exact_cum));
                CHECK(diff <= envelope);
            }
        }
    };

    for (int n = 1; n <= 6; ++n) {
        for (int np = 0; np <= n; ++np) {
            const PopulationSpec pop{n, np};
            check_pool(NullModel::hypergeometric(), pop, [&](int j) {
                std::vector<long double> pmf(static_cast<std::size_t>(j) + 1, 0.0L);
                for (int y = 0; y <= j; ++y)
                    pmf[static_cast<std::size_t>(y)] = oracle::hyper_pmf(n, np, j, y);
                return pmf;
            });
        }
    }
    {
        const PopulationSpec pop{6, 2};
        check_pool(NullModel::finite_binomial(0.35), pop,
                   [&](int j) { return oracle::finite_binomial_pmf(6, 2, j, 0.35L); });
    }
    {
        const PopulationSpec pop{6, 3};
        check_pool(NullModel::weighted(2.5), pop,
                   [&](int j) { return oracle::weighted_pmf(6, 3, j, 2.5L); });
    }
}

TEST_CASE("prefix draws are prefixes of full draws", "[samplers]") {
    const PopulationSpec pop{30, 11};
    for (const auto& model : {NullModel::hypergeometric(), NullModel::finite_binomial(0.4),
                              NullModel::weighted(0.7)}) {
        detail::RankingSampler full(model, pop, 30);
        detail::RankingSampler part(model, pop, 9);
        std::vector<std::uint8_t> fbuf(30), pbuf(9);
        for (std::uint64_t i = 0; i < 100; ++i) {
            full.sample(SeedSpec{3, i}, fbuf.data());
            part.sample(SeedSpec{3, i}, pbuf.data());
            CHECK(std::equal(pbuf.begin(), pbuf.end(), fbuf.begin()));
        }
    }
}

TEST_CASE("batch sampling is elementwise identical to per-substream draws", "[samplers]") {
    const PopulationSpec pop{25, 9};
    const auto model = NullModel::weighted(1.8);
    const auto batch = sample_batch(model, pop, 40, 91);
    REQUIRE(batch.size() == 40);
    for (std::uint64_t i = 0; i < 40; ++i) {
        const auto single = sample_ranking(model, pop, SeedSpec{91, i});
        CHECK(batch[i].groups == single.groups);
    }
    CHECK_THROWS_AS(sample_batch(model, pop, -1, 0), std::invalid_argument);
}
