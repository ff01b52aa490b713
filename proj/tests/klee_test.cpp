#include <gtest/gtest.h>

#include <map>
#include <set>

#include "test_support.hpp"
#include "welltris/klee.hpp"
#include "welltris/oracle.hpp"

namespace welltris {
namespace {

AxisBox rect(Coord x0, Coord x1, Coord y0, Coord y1) { return AxisBox{{Interval{x0, x1}, Interval{y0, y1}}}; }

std::vector<Volume> all_ranks(Volume u) {
    std::vector<Volume> r;
    for (Volume i = 1; i <= u; ++i) r.push_back(i);
    return r;
}

TEST(Measure, Examples) {
    EXPECT_EQ(measure({}, full_space(2, 3)), Volume{64});
    const std::vector<AxisBox> two{rect(0, 2, 0, 4), rect(1, 3, 0, 4)};
    EXPECT_EQ(measure(two, full_space(2, 2)), Volume{4});
    EXPECT_EQ(oracle::union_volume_ie(two, full_space(2, 2)), Volume{12});
    const std::vector<AxisBox> all{rect(0, 4, 0, 4)};
    EXPECT_EQ(measure(all, full_space(2, 2)), Volume{0});
}

TEST(Measure, BoxesBeyondSpaceAreClipped) {
    const AxisBox space = rect(2, 6, 2, 6);
    const std::vector<AxisBox> boxes{rect(0, 4, 0, 8)};
    EXPECT_EQ(measure(boxes, space), Volume{8});
}

TEST(Measure, MatchesInclusionExclusionOnRandomInstances) {
    testing::TestRng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t d = testing::uniform_size(rng, 1, 4);
        const int L = static_cast<int>(testing::uniform_size(rng, 1, 4));
        const auto boxes = testing::random_boxes(rng, d, L, testing::uniform_size(rng, 0, 12));
        const AxisBox space = full_space(d, L);
        ASSERT_EQ(measure(boxes, space), space.volume() - oracle::union_volume_ie(boxes, space));
    }
}

TEST(Measure, MatchesGridOnManyDyadicBoxes) {
    testing::TestRng rng(33);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t d = testing::uniform_size(rng, 1, 4);
        const int L = static_cast<int>(testing::uniform_size(rng, 1, 3));
        std::vector<std::size_t> dims(d);
        for (std::size_t i = 0; i < d; ++i) dims[i] = i;
        std::vector<AxisBox> boxes;
        const std::size_t count = testing::uniform_size(rng, 0, 40);
        for (std::size_t i = 0; i < count; ++i) {
            const auto all = enumerate_containing_dyadic(testing::random_point(rng, d, L), L, dims);
            boxes.push_back(dyadic_to_axis(all[testing::uniform_size(rng, 0, all.size() - 1)]));
        }
        const AxisBox space = full_space(d, L);
        const auto want = oracle::uncovered_points(boxes, space);
        ASSERT_EQ(measure(boxes, space), Volume{want.size()});
        std::vector<Volume> ranks = all_ranks(want.size());
        const auto got = sample(boxes, space, ranks).points;
        ASSERT_EQ(std::set<Point>(got.begin(), got.end()), std::set<Point>(want.begin(), want.end()));
    }
}

TEST(Measure, WideLatticeUsesFullRange) {
    // 4 dims of 30 bits: the uncovered volume needs more than 64 bits.
    const AxisBox space = full_space(4, 30);
    EXPECT_EQ(measure({}, space), Volume{1} << 120);
    const Coord n = Coord{1} << 30;
    const std::vector<AxisBox> half{AxisBox{{Interval{0, n / 2}, Interval{0, n}, Interval{0, n}, Interval{0, n}}}};
    EXPECT_EQ(measure(half, space), Volume{1} << 119);
}

TEST(Sample, FullRankListIsUncoveredSet) {
    testing::TestRng rng(37);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = testing::uniform_size(rng, 1, 3);
        const int L = static_cast<int>(testing::uniform_size(rng, 1, 3));
        const auto boxes = testing::random_boxes(rng, d, L, testing::uniform_size(rng, 0, 10));
        const AxisBox space = full_space(d, L);
        const auto want = oracle::uncovered_points(boxes, space);
        const auto ranks = all_ranks(want.size());
        const SampleResult got = sample(boxes, space, ranks);
        ASSERT_EQ(got.count, Volume{want.size()});
        ASSERT_EQ(got.points.size(), want.size());
        ASSERT_EQ(std::set<Point>(got.points.begin(), got.points.end()), std::set<Point>(want.begin(), want.end()));
    }
}

TEST(Sample, EmptyRanksCountOnly) {
    const std::vector<AxisBox> two{rect(0, 2, 0, 4), rect(1, 3, 0, 4)};
    const SampleResult r = sample(two, full_space(2, 2), {});
    EXPECT_EQ(r.count, Volume{4});
    EXPECT_TRUE(r.points.empty());
}

TEST(Sample, PartialRanks) {
    const std::vector<AxisBox> two{rect(0, 2, 0, 4), rect(1, 3, 0, 4)};
    const auto everything = sample(two, full_space(2, 2), all_ranks(4)).points;
    const std::vector<Volume> some{1, 2, 3};
    const auto got = sample(two, full_space(2, 2), some).points;
    ASSERT_EQ(got.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(got[i], everything[i]);
    for (const auto& p : got) EXPECT_EQ(p[0], 3u);
}

TEST(Sample, RepeatedRanksRepeatPoints) {
    const std::vector<Volume> ranks{2, 2, 2};
    const auto got = sample({}, full_space(1, 2), ranks).points;
    EXPECT_EQ(got, (std::vector<Point>{Point{1}, Point{1}, Point{1}}));
}

TEST(Sample, BadRanksThrow) {
    const std::vector<AxisBox> two{rect(0, 2, 0, 4), rect(1, 3, 0, 4)};
    const std::vector<Volume> high{5};
    EXPECT_THROW(sample(two, full_space(2, 2), high), ConsistencyError);
    const std::vector<Volume> zero{0};
    EXPECT_THROW(sample(two, full_space(2, 2), zero), ConsistencyError);
    const std::vector<Volume> unsorted{3, 1};
    EXPECT_THROW(sample(two, full_space(2, 2), unsorted), ConsistencyError);
}

TEST(DrawUniformUncovered, SinglePoint) {
    const std::vector<AxisBox> boxes{rect(0, 4, 0, 3), rect(0, 2, 3, 4), rect(3, 4, 3, 4)};
    Rng rng(1);
    const UncoveredDraw draw = draw_uniform_uncovered(boxes, full_space(2, 2), 50, rng);
    EXPECT_EQ(draw.uncovered, Volume{1});
    ASSERT_EQ(draw.points.size(), 50u);
    for (const auto& p : draw.points) EXPECT_EQ(p, (Point{2, 3}));
}

TEST(DrawUniformUncovered, CoverageComplete) {
    const std::vector<AxisBox> all{rect(0, 4, 0, 4)};
    Rng rng(1);
    const UncoveredDraw draw = draw_uniform_uncovered(all, full_space(2, 2), 10, rng);
    EXPECT_TRUE(draw.coverage_complete());
    EXPECT_TRUE(draw.points.empty());
}

TEST(DrawUniformUncovered, Deterministic) {
    testing::TestRng gen(41);
    const auto boxes = testing::random_boxes(gen, 3, 3, 6);
    Rng a(99);
    Rng b(99);
    EXPECT_EQ(draw_uniform_uncovered(boxes, full_space(3, 3), 100, a).points,
              draw_uniform_uncovered(boxes, full_space(3, 3), 100, b).points);
}

TEST(DrawUniformUncovered, ChiSquareUniform) {
    const std::vector<AxisBox> boxes{rect(0, 5, 0, 3), rect(2, 8, 4, 8), rect(6, 8, 0, 8), rect(0, 2, 6, 8)};
    const AxisBox space = full_space(2, 3);
    const auto uncovered = oracle::uncovered_points(boxes, space);
    ASSERT_GE(uncovered.size(), 8u);
    ASSERT_LE(uncovered.size(), 32u);
    std::map<Point, std::size_t> index;
    for (std::size_t i = 0; i < uncovered.size(); ++i) index[uncovered[i]] = i;
    Rng rng(2024);
    const UncoveredDraw draw = draw_uniform_uncovered(boxes, space, 10000, rng);
    std::vector<std::size_t> counts(uncovered.size(), 0);
    for (const auto& p : draw.points) {
        ASSERT_TRUE(index.contains(p));
        ++counts[index[p]];
    }
    EXPECT_LT(testing::chi_square_uniform(counts), testing::chi_square_critical(counts.size() - 1, 0.01));
}

TEST(UniformRank, Range) {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const Volume r = uniform_rank(rng, 7);
        ASSERT_GE(r, Volume{1});
        ASSERT_LE(r, Volume{7});
    }
    const Volume big = (Volume{1} << 100) + 3;
    for (int i = 0; i < 100; ++i) ASSERT_LE(uniform_rank(rng, big), big);
    EXPECT_EQ(uniform_rank(rng, 1), Volume{1});
}

TEST(Cell, ToParentUndoesRemovals) {
    Cell c;
    c.removed = {SlabRemoval{0, 2, 4}, SlabRemoval{0, 1, 2}};
    Point p{3};
    c.to_parent(p);
    // Undo the second removal (1 -> shifts points >= 1 by 1), then the first (>= 2 by 2).
    EXPECT_EQ(p, (Point{6}));
    Point q{0};
    c.to_parent(q);
    EXPECT_EQ(q, (Point{0}));
}

}  // namespace
}  // namespace welltris
