#include <catch2/catch_amalgamated.hpp>

#include "lookdown/sbo.hpp"

using namespace lookdown;

TEST_CASE("sequential product law on a pair") {
    auto law = exact_sbo_distribution(multiset_from_ints({2, 1}));
    REQUIRE(law.at({0, 1}) == Rational(2, 3));
    REQUIRE(law.at({1, 0}) == Rational(1, 3));

    auto law31 = exact_sbo_distribution(multiset_from_ints({3, 1}));
    REQUIRE(law31.at({0, 1}) == Rational(3, 4));
    REQUIRE(law31.at({1, 0}) == Rational(1, 4));
}

TEST_CASE("equal weights order uniformly") {
    auto law = exact_sbo_distribution(multiset_from_ints({1, 1, 1}));
    REQUIRE(law.size() == 6);
    for (auto& [order, p] : law) REQUIRE(p == Rational(1, 6));
}

TEST_CASE("zero-mass multisets degenerate to uniform order and value zero") {
    auto law = exact_sbo_distribution(multiset_from_ints({0, 0}));
    REQUIRE(law.size() == 2);
    for (auto& [order, p] : law) REQUIRE(p == Rational(1, 2));

    Stream stream(5, "sbo-zero", 0);
    for (int i = 0; i < 20; ++i)
        REQUIRE(size_biased_sample(multiset_from_ints({0, 0}), stream) == 0);
}

TEST_CASE("singleton sample returns its value") {
    Stream stream(5, "sbo-single", 0);
    REQUIRE(size_biased_sample(multiset_from_ints({5}), stream) == 5);
    REQUIRE_THROWS_AS(size_biased_sample(WeightedMultiset{}, stream), Error);
}

TEST_CASE("size-biased draws hit each position at its weight share") {
    WeightedMultiset s = multiset_from_ints({2, 1, 1});
    Stream stream(99, "sbo-mc", 0);
    const int reps = 40000;
    int big = 0;
    for (int i = 0; i < reps; ++i)
        if (size_biased_index(s, stream) == 0) ++big;
    double freq = static_cast<double>(big) / reps;
    double se = std::sqrt(0.25 / reps);
    REQUIRE(std::abs(freq - 0.5) < 4 * se);
}

TEST_CASE("discovery order on a two-block partition") {
    GenerationPartition p = make_partition({{0, 1}, {2}}, 3);
    auto law = discovery_law_exact(p);
    REQUIRE(law.at({0, 1}) == Rational(2, 3));
    REQUIRE(law.at({1, 0}) == Rational(1, 3));
    REQUIRE(scramble_law_exact(p) == law);
}

TEST_CASE("singleton partitions order uniformly, single blocks are deterministic") {
    auto law = discovery_law_exact(make_partition({{0}, {1}, {2}}, 3));
    REQUIRE(law.size() == 6);
    for (auto& [order, p] : law) REQUIRE(p == Rational(1, 6));

    auto one = scramble_law_exact(make_partition({{0, 1, 2}}, 3));
    REQUIRE(one.size() == 1);
    REQUIRE(one.begin()->second == 1);
}

TEST_CASE("both algorithms realize the sequential product law") {
    SeedSpec seed{2024};
    for (int trial = 0; trial < 12; ++trial) {
        Stream shape = substream(seed, "sbo-shape", static_cast<std::uint64_t>(trial));
        int ground = 2 + shape.uniform_int(6);  // 2..7
        int max_blocks = 1 + shape.uniform_int(ground);
        GenerationPartition p = random_partition(ground, max_blocks, shape);

        auto discovery = discovery_law_exact(p);
        auto scrambled = scramble_law_exact(p);
        auto product = exact_sbo_distribution(multiset_from_ints(p.block_sizes()));
        REQUIRE(discovery == product);
        REQUIRE(scrambled == product);
    }
}

TEST_CASE("first coordinate of the ordering is a size-biased sample") {
    for (auto values : {std::vector<int>{3, 1, 1}, {2, 2, 1}, {4, 3, 2, 1}}) {
        WeightedMultiset s = multiset_from_ints(values);
        auto law = exact_sbo_distribution(s);
        std::map<int, Rational> first;
        for (auto& [order, p] : law) first[order.front()] += p;
        Rational total = s.total();
        for (std::size_t i = 0; i < values.size(); ++i)
            REQUIRE(first[static_cast<int>(i)] == s.values[i] / total);
    }
}

TEST_CASE("the first size-biased draw dominates a uniform draw") {
    for (auto values : {std::vector<int>{3, 1, 1}, {2, 2, 1}, {5}, {4, 1}, {7, 6, 1, 1, 1}}) {
        WeightedMultiset s = multiset_from_ints(values);
        auto law = exact_sbo_distribution(s);
        std::map<int, Rational> first;
        for (auto& [order, p] : law) first[order.front()] += p;
        for (int threshold : values) {
            Rational sb_tail = 0, uniform_tail = 0;
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (values[i] >= threshold) {
                    sb_tail += first[static_cast<int>(i)];
                    uniform_tail += Rational(1, static_cast<long long>(values.size()));
                }
            }
            REQUIRE(sb_tail >= uniform_tail);
        }
    }
}

TEST_CASE("ordering oracle refuses oversized inputs") {
    std::vector<int> big(10, 1);
    REQUIRE_THROWS_AS(exact_sbo_distribution(multiset_from_ints(big)), Error);
}
