#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <vector>

#include "xbar/errors.hpp"
#include "xbar/schedule.hpp"

using namespace xbar;

TEST_CASE("full activation is a single group of every row") {
    const ActivationSchedule s = make_groups(8, 1, Strategy::Full);
    REQUIRE(s.groups.size() == 1);
    CHECK(s.groups[0] == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
    CHECK_THROWS_AS(make_groups(8, 2, Strategy::Full), ValidationError);
}

TEST_CASE("consecutive grouping slices the array into adjacent blocks") {
    const ActivationSchedule s = make_groups(8, 2, Strategy::ConsecutivePWA);
    REQUIRE(s.groups.size() == 2);
    CHECK(s.groups[0] == std::vector<int>{0, 1, 2, 3});
    CHECK(s.groups[1] == std::vector<int>{4, 5, 6, 7});
}

TEST_CASE("strided grouping interleaves rows across groups") {
    const ActivationSchedule s = make_groups(8, 2, Strategy::StridedDPWA);
    REQUIRE(s.groups.size() == 2);
    CHECK(s.groups[0] == std::vector<int>{0, 2, 4, 6});
    CHECK(s.groups[1] == std::vector<int>{1, 3, 5, 7});

    const ActivationSchedule s4 = make_groups(128, 4, Strategy::StridedDPWA);
    REQUIRE(s4.groups.size() == 4);
    for (int g = 0; g < 4; ++g)
        for (std::size_t k = 0; k < s4.groups[g].size(); ++k)
            CHECK(s4.groups[g][k] == g + static_cast<int>(k) * 4);
}

TEST_CASE("groups always partition the row set") {
    for (Strategy st : {Strategy::ConsecutivePWA, Strategy::StridedDPWA}) {
        for (int groups : {1, 2, 4, 8, 16}) {
            const ActivationSchedule s = make_groups(128, groups, st);
            std::vector<int> seen(128, 0);
            for (const auto& g : s.groups)
                for (int r : g) {
                    REQUIRE(r >= 0);
                    REQUIRE(r < 128);
                    ++seen[r];
                }
            for (int r = 0; r < 128; ++r) CHECK(seen[r] == 1);
        }
    }
}

TEST_CASE("strided groups balance any contiguous agglomeration") {
    // Rows 96..127 heavy (as after a sort): strided groups split them evenly,
    // consecutive groups concentrate them into one group.
    const int heavy_lo = 96;
    const auto heavies_in = [&](const std::vector<int>& g) {
        int k = 0;
        for (int r : g)
            if (r >= heavy_lo) ++k;
        return k;
    };
    const ActivationSchedule strided = make_groups(128, 4, Strategy::StridedDPWA);
    for (const auto& g : strided.groups) CHECK(heavies_in(g) == 8);

    const ActivationSchedule consec = make_groups(128, 4, Strategy::ConsecutivePWA);
    int max_heavy = 0;
    for (const auto& g : consec.groups) max_heavy = std::max(max_heavy, heavies_in(g));
    CHECK(max_heavy == 32);
}

TEST_CASE("group construction validates shape") {
    CHECK_THROWS_AS(make_groups(0, 1, Strategy::Full), ValidationError);
    CHECK_THROWS_AS(make_groups(8, 0, Strategy::ConsecutivePWA), ValidationError);
    CHECK_THROWS_AS(make_groups(8, 3, Strategy::ConsecutivePWA), ValidationError);
    CHECK_THROWS_AS(make_groups(8, 16, Strategy::StridedDPWA), ValidationError);
}

TEST_CASE("masked inputs keep only the group's rows") {
    const ActivationSchedule s = make_groups(8, 2, Strategy::StridedDPWA);
    const std::vector<std::uint8_t> x{1, 1, 0, 1, 1, 1, 1, 1};
    const std::vector<std::uint8_t> m0 = masked_inputs(x, s, 0);
    CHECK(m0 == std::vector<std::uint8_t>{1, 0, 0, 0, 1, 0, 1, 0});
    const std::vector<std::uint8_t> m1 = masked_inputs(x, s, 1);
    CHECK(m1 == std::vector<std::uint8_t>{0, 1, 0, 1, 0, 1, 0, 1});

    // Union of masked vectors reproduces x for any partition.
    for (int r = 0; r < 8; ++r) CHECK(static_cast<int>(m0[r]) + m1[r] == x[r]);

    CHECK_THROWS_AS(masked_inputs(x, s, 2), ValidationError);
    CHECK_THROWS_AS(masked_inputs(std::vector<std::uint8_t>(4, 1), s, 0), ValidationError);
}

TEST_CASE("accumulation is an exact elementwise sum") {
    const std::vector<std::vector<long long>> cycles{
        {1, 2, 3},
        {10, 20, 30},
        {100, 200, 300},
    };
    CHECK(accumulate(cycles) == std::vector<long long>{111, 222, 333});

    CHECK_THROWS_AS(accumulate({{1, 2}, {1, 2, 3}}), ValidationError);
    CHECK_THROWS_AS(accumulate({}), ValidationError);
}

TEST_CASE("strategy names round-trip") {
    for (Strategy st : {Strategy::Full, Strategy::ConsecutivePWA, Strategy::StridedDPWA})
        CHECK(strategy_from_name(strategy_name(st)) == st);
    CHECK_THROWS_AS(strategy_from_name("bogus"), ValidationError);
}
