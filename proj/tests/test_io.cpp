#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "segcover/cover.hpp"
#include "segcover/io.hpp"
#include "segcover/oracle.hpp"

using namespace segcover;
using namespace segcover::io;

namespace {

ParseError code_of(const std::string& text)
{
    try {
        parse_instance(text);
    } catch (const InputError& e) {
        return e.code;
    }
    ADD_FAILURE() << "no error for " << text;
    return ParseError::io;
}

} // namespace

TEST(Io, ParsesBothFormats)
{
    auto t = parse_instance(R"({"trajectory":[[0,0],[1,0],[1,1]]})");
    ASSERT_TRUE(t.trajectory);
    EXPECT_EQ(t.trajectory->num_vertices(), 3u);
    EXPECT_EQ(t.segments.size(), 2u);

    auto s = parse_instance(R"({"segments":[[[0,0],[1,1]]]})");
    EXPECT_FALSE(s.trajectory);
    ASSERT_EQ(s.segments.size(), 1u);
    EXPECT_EQ(s.segments[0], (Segment{{0, 0}, {1, 1}}));
}

TEST(Io, DistinctErrors)
{
    try {
        parse_instance(R"({"trajectory":[[0,0]]})");
        FAIL();
    } catch (const InputError& e) {
        EXPECT_EQ(e.code, ParseError::too_few_vertices);
        EXPECT_STREQ(e.what(), "trajectory needs ≥2 vertices");
    }
    EXPECT_EQ(code_of(R"({"trajectory":[]})"), ParseError::too_few_vertices);
    EXPECT_EQ(code_of(R"({"trajectory":[[1,1],[1,1]]})"), ParseError::too_few_vertices);
    EXPECT_EQ(code_of(R"({"trajectory":[[0,0],[1,)"), ParseError::malformed_json);
    EXPECT_EQ(code_of(R"({"trajectory":[[0,0],[1e999,0]]})"), ParseError::non_finite);
    EXPECT_EQ(code_of(R"({"trajectory":[[0,0],[1,2,3]]})"), ParseError::bad_shape);
    EXPECT_EQ(code_of(R"({"segments":[[[0,0]]]})"), ParseError::bad_shape);
    EXPECT_EQ(code_of(R"({"points":[]})"), ParseError::bad_shape);
    EXPECT_EQ(code_of(R"([1,2])"), ParseError::bad_shape);
}

TEST(Io, ReportsDroppedEdges)
{
    auto t = parse_instance(R"({"trajectory":[[0,0],[0,0],[1,0],[1,0],[1,1]]})");
    EXPECT_EQ(t.dropped, 2u);
    EXPECT_EQ(t.trajectory->num_edges(), 2u);
}

TEST(Io, Positions)
{
    Trajectory T({{0, 0}, {1, 0}, {1, 1}, {2, 1}});
    EXPECT_EQ(parse_pos("1:0.25", T), (TrajPos{1, 0.25}));
    EXPECT_EQ(parse_pos("2:1", T), (TrajPos{2, 1.0}));
    for (const char* bad : {"1", "3:0", "1:1.5", "x:0.5", "1:0.5z", "-1:0"}) {
        try {
            parse_pos(bad, T);
            ADD_FAILURE() << bad;
        } catch (const InputError& e) {
            EXPECT_EQ(e.code, ParseError::bad_position) << bad;
        }
    }
    EXPECT_EQ(pos_string({3, 0.25}), "3:0.25");
}

TEST(Io, TwelveDigitsAndStableDumps)
{
    EXPECT_EQ(round12(0.1 + 0.2), 0.3);
    EXPECT_EQ(round12(1.0 / 3.0), 0.333333333333);
    auto T = gen_random_walk(50, 4);
    std::string a = trajectory_json(T).dump(), b = trajectory_json(T).dump();
    EXPECT_EQ(a, b);
    // a dump reloads to the same dump
    auto back = parse_instance(a);
    EXPECT_EQ(trajectory_json(*back.trajectory).dump(), a);
}

TEST(Io, IndexSnapshotRoundTrip)
{
    auto T = gen_random_walk(40, 2);
    auto path = (std::filesystem::temp_directory_path() / "segcover_io_test.idx").string();
    {
        std::ofstream out(path);
        out << index_snapshot(T).dump();
    }
    auto back = load_index_snapshot(path);
    ASSERT_EQ(back.num_vertices(), T.num_vertices());
    for (std::size_t i = 0; i < T.num_vertices(); ++i) {
        EXPECT_NEAR(back.vertex(i).x, T.vertex(i).x, 1e-11);
        EXPECT_NEAR(back.vertex(i).y, T.vertex(i).y, 1e-11);
    }
    {
        std::ofstream out(path);
        out << trajectory_json(T).dump();
    }
    EXPECT_THROW(load_index_snapshot(path), InputError);
    std::filesystem::remove(path);
    EXPECT_THROW(load_index_snapshot(path), InputError);
}

TEST(Io, SvgIsAPureView)
{
    auto p = gen_planted_coverable(2, 30, 11, 2.0);
    auto before = coverable_2(p.segments);
    ASSERT_TRUE(before);
    auto svg = render_svg(p.segments, *before);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_EQ(svg, render_svg(p.segments, *before));
    auto after = coverable_2(p.segments);
    ASSERT_TRUE(after);
    EXPECT_EQ(before->squares, after->squares);
    // degenerate input still renders
    std::vector<Segment> dot{{{1, 1}, {1, 1}}};
    EXPECT_NE(render_svg(dot, {}).find("<circle"), std::string::npos);
}
