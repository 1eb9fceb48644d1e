#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lookdown/enumerate.hpp"
#include "lookdown/experiments.hpp"
#include "lookdown/gw.hpp"
#include "lookdown/sbo.hpp"
#include "lookdown/stats.hpp"

using namespace lookdown;

TEST_CASE("descendant table on a single root") {
    ModelSpec spec = validate_spec({1, 2}, {{2}});
    Genealogy g = sample_forward(spec, SeedSpec{0});
    DescendantTable t = descendant_table(g, 0, 1);
    REQUIRE(t.count(1, 0) == 2);
    REQUIRE(t.frequency(1, 0, spec) == 1);
    REQUIRE(t.censored(0));
}

TEST_CASE("deterministic doubling keeps every frequency at 1/X_n") {
    ModelSpec spec = synchronous_spec(2, 2, 5);
    Genealogy g = sample_forward(spec, SeedSpec{3});
    for (int n = 0; n < 4; ++n) {
        DescendantTable t = descendant_table(g, n, 5);
        for (int m = n + 1; m <= 5; ++m)
            for (int i = 0; i < g.size(n); ++i)
                REQUIRE(t.frequency(m, i, spec) == Rational(1, spec.sizes[static_cast<std::size_t>(n)]));
    }
}

TEST_CASE("lookdown extinction times decrease with rank") {
    ModelSpec spec = moran_spec(3, 30);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Genealogy g = build_lookdown(spec, SeedSpec{seed});
        DescendantTable t = descendant_table(g, 0, 30);
        auto tau = [&](int i) {
            return t.censored(i) ? std::numeric_limits<long long>::max()
                                 : static_cast<long long>(t.extinction[static_cast<std::size_t>(i)]);
        };
        for (int i = 0; i + 1 < 3; ++i) REQUIRE(tau(i) >= tau(i + 1));
    }
}

TEST_CASE("ancestral partition one step down is the sibling partition") {
    ModelSpec spec = validate_spec({3, 5, 4}, {{3, 2, 0}, {2, 1, 1, 0, 0}});
    Genealogy g = build_lookdown(spec, SeedSpec{7});
    GenerationPartition xi = ancestral_partition(g, 0, 1);
    auto kids = g.children(0);
    std::vector<std::vector<int>> nonempty;
    for (auto& c : kids)
        if (!c.empty()) nonempty.push_back(c);
    REQUIRE(xi == make_partition(nonempty, 5));
}

TEST_CASE("one root makes one ancestral block") {
    ModelSpec spec = validate_spec({1, 2, 4}, {{2}, {2, 2}});
    Genealogy g = sample_forward(spec, SeedSpec{1});
    GenerationPartition xi = ancestral_partition(g, 0, 2);
    REQUIRE(xi.block_count() == 1);
    REQUIRE(xi.blocks[0].size() == 4);
}

TEST_CASE("concentration of a small partition") {
    ConcentrationReport rep = concentration(make_partition({{0, 1}, {2}}, 3));
    REQUIRE(rep.c == Rational(1, 3));
    REQUIRE(rep.expected_sb_block == Rational(5, 3));
}

TEST_CASE("concentration edge cases") {
    REQUIRE(concentration(make_partition({{0, 1, 2, 3}}, 4)).c == 1);
    REQUIRE(concentration(make_partition({{0}, {1}, {2}, {3}, {4}}, 5)).c == 0);
    REQUIRE_THROWS_AS(concentration(make_partition({{0}}, 1)), Error);
}

TEST_CASE("size-biased block-size identity and lower bound on random partitions") {
    SeedSpec seed{555};
    for (int trial = 0; trial < 1000; ++trial) {
        Stream shape = substream(seed, "conc", static_cast<std::uint64_t>(trial));
        int ground = 2 + shape.uniform_int(30);
        GenerationPartition p = random_partition(ground, 1 + shape.uniform_int(ground), shape);
        ConcentrationReport rep = concentration(p);
        Rational direct = 0;  // E|B_I| = sum |B|^2 / |A|
        for (auto& b : p.blocks)
            direct += Rational(static_cast<long long>(b.size()) * static_cast<long long>(b.size()), ground);
        REQUIRE(rep.expected_sb_block == direct);
        REQUIRE(rep.c >= rep.lower_bound);
        REQUIRE(rep.c >= 0);
        REQUIRE(rep.c <= 1);
    }
}

TEST_CASE("coalescent scale closed forms") {
    ModelSpec a = validate_spec({3, 3}, {{2, 1, 0}});
    CoalescentScale sa = coalescent_scale(a);
    REQUIRE(sa.s[0] == Rational(1, 3));
    REQUIRE(sa.s_trunc[0] == Rational(1, 3));

    ModelSpec b = validate_spec({2, 4}, {{3, 1}});
    CoalescentScale sb = coalescent_scale(b);
    REQUIRE(sb.s[0] == Rational(1, 2));
    REQUIRE(sb.s_trunc[0] == Rational(1, 6));

    CoalescentScale sm = coalescent_scale(moran_spec(4, 6));
    for (auto& s : sm.s) REQUIRE(s == Rational(1, 6));
    REQUIRE(sm.t[6] == 1);
}

TEST_CASE("truncated increments never exceed the full ones") {
    SeedSpec seed{808};
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        Genealogy g = sample_gw(make_offspring({Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)}),
                                derive_seed(seed, "scale-gw", trial), 6);
        if (g.generations() < 2) continue;
        CoalescentScale sc = coalescent_scale(g.spec);
        for (std::size_t n = 0; n < sc.s.size(); ++n) {
            REQUIRE(sc.s_trunc[n] <= sc.s[n]);
            int max_litter = g.spec.litters[n].front();
            if (max_litter <= 2) REQUIRE(sc.s_trunc[n] == sc.s[n]);
            if (max_litter > 2) REQUIRE(sc.s_trunc[n] < sc.s[n]);
        }
        for (std::size_t n = 0; n + 1 < sc.t.size(); ++n) REQUIRE(sc.t[n] <= sc.t[n + 1]);
    }
}

TEST_CASE("synchronous doubling scale matches 1/(2 X_n - 1)") {
    ModelSpec spec = synchronous_spec(2, 2, 8);
    CoalescentScale sc = coalescent_scale(spec);
    for (int n = 0; n < 8; ++n)
        REQUIRE(sc.s[static_cast<std::size_t>(n)] ==
                Rational(1, 2ll * spec.sizes[static_cast<std::size_t>(n)] - 1));
}

TEST_CASE("doubling family scale approaches one quarter") {
    AsynchronousFamily fam = doubling_family(21);
    CoalescentScale sc = asynchronous_scale(fam);
    for (int n = 0; n <= 20; ++n) {
        long long b = 1ll << n;
        long long x1 = 1ll << (n + 1);
        REQUIRE(sc.s[static_cast<std::size_t>(n)] == Rational(b * (b - 1), x1 * (x1 - 1)));
    }
    REQUIRE(std::abs(to_double(sc.s[20]) - 0.25) < 1e-5);
    REQUIRE(to_double(sc.t[21]) > 4.0);
}

TEST_CASE("pairwise coalescence accumulates across generations") {
    std::vector<Rational> s{Rational(1, 3), Rational(1, 3)};
    REQUIRE(coalescence_from_increments(s, 0, 2) == Rational(5, 9));
    REQUIRE(coalescence_from_increments(s, 0, 1) == s[0]);

    // pass-through generations contribute factor one
    ModelSpec plain = validate_spec({2, 2, 2, 2}, {{2, 0}, {1, 1}, {1, 1}});
    REQUIRE(pairwise_coalescence_probability(plain, 0, 3) ==
            pairwise_coalescence_probability(plain, 0, 1));
}

TEST_CASE("small populations with a real litter coalesce at rate 1/X_n^2 or better") {
    SeedSpec seed{31337};
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
        Stream shape = substream(seed, "smallpop", trial);
        int x0 = 2 + shape.uniform_int(5);
        Genealogy g = sample_gw(make_offspring({Rational(1, 6), Rational(2, 6), Rational(2, 6), Rational(1, 6)}),
                                derive_seed(seed, "smallpop-gw", trial), 4);
        (void)x0;
        CoalescentScale sc = coalescent_scale(g.spec);
        for (std::size_t n = 0; n < sc.s.size(); ++n) {
            if (g.spec.litters[n].front() > 1) {
                long long xn = g.spec.sizes[n];
                REQUIRE(sc.s[n] >= Rational(1, xn * xn));
            }
        }
    }
    CoalescentScale sm = coalescent_scale(moran_spec(5, 3));
    REQUIRE(sm.s[0] >= Rational(1, 25));
}

TEST_CASE("monte carlo coalescence matches the closed form on moran(4)") {
    ModelSpec spec = moran_spec(4, 3);
    Rational exact = pairwise_coalescence_probability(spec, 0, 3);
    REQUIRE(exact == Rational(91, 216));
    EstimateWithCI est = monte_carlo_coalescence(spec, 0, 3, 20000, SeedSpec{4242});
    REQUIRE(std::abs(est.estimate - to_double(exact)) < 4 * est.se);
}

TEST_CASE("monte carlo coalescence is one with a single root") {
    ModelSpec spec = validate_spec({1, 2, 4}, {{2}, {2, 2}});
    EstimateWithCI est = monte_carlo_coalescence(spec, 0, 2, 200, SeedSpec{7});
    REQUIRE(est.estimate == 1.0);
}

TEST_CASE("pass-through generations leave the monte carlo estimate in range") {
    ModelSpec padded = validate_spec({2, 2, 2, 2}, {{2, 0}, {1, 1}, {1, 1}});
    Rational exact = pairwise_coalescence_probability(padded, 0, 3);
    EstimateWithCI est = monte_carlo_coalescence(padded, 0, 3, 20000, SeedSpec{99});
    REQUIRE(std::abs(est.estimate - to_double(exact)) < 4 * std::max(est.se, 1e-9));
}

TEST_CASE("forward frequencies are martingales (monte carlo)") {
    ModelSpec spec = moran_spec(6, 8);
    const long long reps = 2000;
    // running mean of x_{m+1}(v) - x_m(v) for every v in V_0 and m < 8
    std::vector<std::vector<double>> sums(8, std::vector<double>(6, 0.0));
    std::vector<std::vector<double>> sqs(8, std::vector<double>(6, 0.0));
    for (long long rep = 0; rep < reps; ++rep) {
        Genealogy g = sample_forward(spec, derive_seed(SeedSpec{60}, "mart", static_cast<std::uint64_t>(rep)));
        DescendantTable t = descendant_table(g, 0, 8);
        for (int m = 0; m < 8; ++m)
            for (int v = 0; v < 6; ++v) {
                double inc = to_double(t.frequency(m + 1, v, spec)) - to_double(t.frequency(m, v, spec));
                sums[static_cast<std::size_t>(m)][static_cast<std::size_t>(v)] += inc;
                sqs[static_cast<std::size_t>(m)][static_cast<std::size_t>(v)] += inc * inc;
            }
    }
    for (int m = 0; m < 8; ++m)
        for (int v = 0; v < 6; ++v) {
            double mean = sums[static_cast<std::size_t>(m)][static_cast<std::size_t>(v)] / reps;
            double var = sqs[static_cast<std::size_t>(m)][static_cast<std::size_t>(v)] / reps - mean * mean;
            double se = std::sqrt(std::max(var, 1e-12) / reps);
            REQUIRE(std::abs(mean) < 4 * se);
        }
}

TEST_CASE("lookdown descendant counts are a size-biased ordering of ancestral block sizes") {
    ModelSpec spec = validate_spec({2, 3, 3}, {{2, 1}, {2, 1, 0}});
    // exact joint law of the descendant-count tuple over generation 0
    std::map<std::vector<int>, Rational> lookdown_law;
    std::map<std::vector<int>, Rational> size_law;  // sorted multiset of nonzero counts
    for_each_genealogy(spec, SamplerKind::lookdown, [&](const Genealogy& g, const Rational& p) {
        DescendantTable t = descendant_table(g, 0, 2);
        std::vector<int> tuple{static_cast<int>(t.count(2, 0)), static_cast<int>(t.count(2, 1))};
        lookdown_law[tuple] += p;
        std::vector<int> sizes;
        for (int c : tuple)
            if (c > 0) sizes.push_back(c);
        std::sort(sizes.begin(), sizes.end(), std::greater<>());
        size_law[sizes] += p;
    });

    std::map<std::vector<int>, Rational> reference;
    for (auto& [sizes, mass] : size_law) {
        auto orders = exact_sbo_distribution(multiset_from_ints(sizes));
        for (auto& [order, q] : orders) {
            std::vector<int> tuple;
            for (int pos : order) tuple.push_back(sizes[static_cast<std::size_t>(pos)]);
            while (tuple.size() < 2) tuple.push_back(0);
            reference[tuple] += mass * q;
        }
    }
    REQUIRE(lookdown_law == reference);
}

TEST_CASE("base-path mean frequency identity, exact on an enumerable spec") {
    ModelSpec spec = validate_spec({2, 3, 3}, {{2, 1}, {2, 1, 0}});
    Rational p02 = pairwise_coalescence_probability(spec, 0, 2);
    REQUIRE(p02 == Rational(5, 9));
    Rational lhs = exact_mean_frequency(spec, 0, 0, 2);
    REQUIRE(lhs == Rational(19, 27));
    REQUIRE(lhs == Rational(1, 3) + (Rational(1) - Rational(1, 3)) * p02);
}

TEST_CASE("sibling and ancestral concentration estimate the scale (monte carlo)") {
    ModelSpec spec = moran_spec(4, 5);
    CoalescentScale sc = coalescent_scale(spec);
    Rational p03 = pairwise_coalescence_probability(spec, 0, 3);
    const long long reps = 4000;
    double sum_sib = 0.0, sum_anc = 0.0, sq_sib = 0.0, sq_anc = 0.0;
    for (long long rep = 0; rep < reps; ++rep) {
        Genealogy g = sample_completely_neutral(spec, derive_seed(SeedSpec{5150}, "conc-mc",
                                                                  static_cast<std::uint64_t>(rep)));
        double c_sib = to_double(concentration(ancestral_partition(g, 0, 1)).c);
        double c_anc = to_double(concentration(ancestral_partition(g, 0, 3)).c);
        sum_sib += c_sib;
        sq_sib += c_sib * c_sib;
        sum_anc += c_anc;
        sq_anc += c_anc * c_anc;
    }
    double mean_sib = sum_sib / reps, mean_anc = sum_anc / reps;
    double se_sib = std::sqrt(std::max(sq_sib / reps - mean_sib * mean_sib, 1e-12) / reps);
    double se_anc = std::sqrt(std::max(sq_anc / reps - mean_anc * mean_anc, 1e-12) / reps);
    REQUIRE(std::abs(mean_sib - to_double(sc.s[0])) < 4 * se_sib);
    REQUIRE(std::abs(mean_anc - to_double(p03)) < 4 * se_anc);
}
