#include <gtest/gtest.h>

#include "segcover/oracle.hpp"

using namespace segcover;

TEST(Generators, PlantedIsCoveredByPlant)
{
    for (int k = 1; k <= 4; ++k)
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto p = gen_planted_coverable(k, 30, seed, 3.0);
            EXPECT_EQ(p.segments.size(), 30u);
            EXPECT_EQ(p.plant.size(), static_cast<std::size_t>(k));
            EXPECT_TRUE(verify_covering(p.segments, p.plant, 0.0));
        }
    auto a = gen_planted_coverable(3, 10, 7, 2.0), b = gen_planted_coverable(3, 10, 7, 2.0);
    EXPECT_EQ(a.segments[4].a, b.segments[4].a);
    EXPECT_THROW(gen_planted_coverable(5, 3, 0, 1.0), std::invalid_argument);
}

TEST(Generators, OnePerSideTouchesEachSide)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto p = gen_planted_one_per_side(40, seed);
        ASSERT_EQ(p.plant.size(), 4u);
        EXPECT_TRUE(verify_covering(p.segments, p.plant, 0.0));
        Rect bb = bounding_box(p.segments);
        const auto& L = p.plant.squares[0];
        const auto& T = p.plant.squares[1];
        const auto& B = p.plant.squares[2];
        const auto& R = p.plant.squares[3];
        EXPECT_DOUBLE_EQ(L.rect().x_min, bb.x_min);
        EXPECT_DOUBLE_EQ(T.rect().y_max, bb.y_max);
        EXPECT_DOUBLE_EQ(B.rect().y_min, bb.y_min);
        EXPECT_DOUBLE_EQ(R.rect().x_max, bb.x_max);
        EXPECT_GT(L.rect().y_min, bb.y_min);
        EXPECT_LT(L.rect().y_max, bb.y_max);
        EXPECT_GT(T.rect().x_min, bb.x_min);
        EXPECT_LT(T.rect().x_max, bb.x_max);
    }
}

TEST(Generators, SeparatedPointsAreFar)
{
    for (int k = 1; k <= 4; ++k) {
        auto s = gen_separated_points(k, 3, 0.2, 4);
        ASSERT_EQ(s.size(), static_cast<std::size_t>(k + 1 + 4));
        for (int i = 0; i <= k; ++i)
            for (int j = 0; j < i; ++j) EXPECT_GT(cheb(s[i].a, s[j].a), 1.2);
    }
}

TEST(Generators, RandomWalk)
{
    auto T = gen_random_walk(500, 1);
    EXPECT_LE(T.num_vertices(), 500u);
    EXPECT_GE(T.num_vertices(), 499u);
    EXPECT_EQ(T.vertex(0), (Point{0, 0}));
    auto U = gen_random_walk(500, 1);
    EXPECT_EQ(T.vertex(321), U.vertex(321));
}

TEST(OracleLongest, StraightLine)
{
    // a diagonal: the longest 1-coverable piece is the unit-square diagonal
    Trajectory T({{0, 0}, {3, 3}});
    auto r1 = oracle_longest(T, 1, 301, 301);
    EXPECT_NEAR(r1.length, std::sqrt(2.0), 0.03);
    auto r2 = oracle_longest(T, 2, 301, 301);
    EXPECT_NEAR(r2.length, 2 * std::sqrt(2.0), 0.03);
    // a short trajectory is covered whole
    Trajectory S({{0, 0}, {0.5, 0.5}, {0.2, 0.9}});
    auto r = oracle_longest(S, 1, 50, 50);
    EXPECT_NEAR(r.length, S.length(), 1e-12);
    EXPECT_EQ(r.start, S.start());
    EXPECT_THROW(oracle_longest(S, 3, 10, 10), std::invalid_argument);
}

TEST(OracleLongest, ResultIsCoverableAndGrowsWithSamples)
{
    auto T = gen_random_walk(60, 4, 0.4);
    double prev = 0;
    for (std::size_t s : {50u, 200u, 800u}) {
        for (int k : {1, 2}) {
            auto r = oracle_longest(T, k, s, s);
            EXPECT_TRUE(coverable_k(T.extract(r.start, r.end), k)) << "k=" << k;
            EXPECT_NEAR(T.arc(r.end) - T.arc(r.start), r.length, 1e-9);
        }
        auto r = oracle_longest(T, 2, s, s);
        EXPECT_GE(r.length, prev * 0.97);
        prev = r.length;
    }
}

TEST(GridOracle, Examples)
{
    std::vector<Segment> one{{{0, 0}, {1, 1}}};
    EXPECT_EQ(oracle_decide_grid(one, 1, 0.1), GridVerdict::yes);
    std::vector<Segment> wide{{{0, 0}, {1.5, 0}}};
    EXPECT_EQ(oracle_decide_grid(wide, 1, 0.05), GridVerdict::no);
    EXPECT_EQ(oracle_decide_grid(wide, 2, 0.05), GridVerdict::yes);
    std::vector<Segment> near{{{0, 0}, {1 + 1e-4, 0}}};
    EXPECT_EQ(oracle_decide_grid(near, 1, 0.01), GridVerdict::boundary);
    EXPECT_EQ(oracle_decide_grid(std::vector<Segment>{}, 1, 0.1), GridVerdict::yes);
    EXPECT_THROW(oracle_decide_grid(one, 1, 0), std::invalid_argument);
    EXPECT_STREQ(to_string(GridVerdict::boundary), "boundary");
}

TEST(GridOracle, PlantedAndSeparated)
{
    for (int k = 1; k <= 3; ++k)
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            auto p = gen_planted_coverable(k, 6, seed, 2.0);
            EXPECT_NE(oracle_decide_grid(p.segments, k, 0.05), GridVerdict::no);
            auto s = gen_separated_points(k, seed);
            EXPECT_EQ(oracle_decide_grid(s, k, 0.02), GridVerdict::no);
        }
}
