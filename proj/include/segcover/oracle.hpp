#pragma once

// Generators and brute-force oracles. Apart from geom primitives they avoid the
// algorithms they are used to check; oracle_longest uses the offline k=2 decision.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "cover.hpp"
#include "geom.hpp"
#include "traj.hpp"

namespace segcover {

struct Planted {
    std::vector<Segment> segments;
    Covering plant;
};

namespace detail {

inline Point random_in(const UnitSquare& q, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> U(0, 1);
    Rect r = q.rect();
    return {r.x_min + U(rng), r.y_min + U(rng)};
}

inline std::vector<Segment> sample_in_union(const Covering& plant, std::size_t n, std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::size_t> pick(0, plant.size() - 1);
    std::uniform_real_distribution<double> U(0, 1);
    std::vector<Segment> out;
    while (out.size() < n) {
        const auto& qa = plant.squares[pick(rng)];
        Point a = random_in(qa, rng);
        Point b = U(rng) < 0.5 ? random_in(qa, rng) : random_in(plant.squares[pick(rng)], rng);
        Segment s{a, b};
        std::vector<Segment> one{s};
        if (verify_covering(one, plant, 0.0)) out.push_back(s);
    }
    return out;
}

} // namespace detail

// k unit squares with top-left corners uniform in [0, spread]^2, n segments inside their union.
inline Planted gen_planted_coverable(int k, std::size_t n, std::uint64_t seed, double spread)
{
    if (k < 1 || k > 4) throw std::invalid_argument("k must be in 1..4");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0, spread);
    Planted p;
    for (int i = 0; i < k; ++i) p.plant.squares.push_back({{U(rng), U(rng)}});
    p.segments = detail::sample_in_union(p.plant, n, rng);
    return p;
}

// Four squares, each touching exactly one side of the bounding box (left, top, bottom, right).
inline Planted gen_planted_one_per_side(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0, 1);
    const double W = 2.3 + 1.2 * U(rng), H = 2.3 + 1.2 * U(rng), d = 0.1;
    auto in = [&](double lo, double hi) { return lo + (hi - lo) * U(rng); };
    UnitSquare L{{0, in(1 + d, H - d)}};
    UnitSquare T{{in(d, W - 1 - d), H}};
    UnitSquare B{{in(d, W - 1 - d), 1}};
    UnitSquare R{{W - 1, in(1 + d, H - d)}};
    Planted p;
    p.plant.squares = {L, T, B, R};
    // pin the bounding box with one point on each outer side
    Rect l = L.rect(), t = T.rect(), b = B.rect(), r = R.rect();
    Point pl{0, in(l.y_min, l.y_max)}, pt{in(t.x_min, t.x_max), H}, pb{in(b.x_min, b.x_max), 0}, pr{W, in(r.y_min, r.y_max)};
    p.segments.push_back({pl, pl});
    p.segments.push_back({pt, pt});
    p.segments.push_back({pb, pb});
    p.segments.push_back({pr, pr});
    auto rest = detail::sample_in_union(p.plant, n > 4 ? n - 4 : 0, rng);
    p.segments.insert(p.segments.end(), rest.begin(), rest.end());
    return p;
}

// k+1 points with pairwise Chebyshev distance > 1 + margin, plus optional clutter segments.
inline std::vector<Segment> gen_separated_points(int k, std::uint64_t seed, double margin = 0.2, std::size_t clutter = 0)
{
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    std::mt19937_64 rng(seed);
    const double box = 1.6 * (k + 1);
    std::uniform_real_distribution<double> U(0, box);
    std::vector<Point> pts;
    while (static_cast<int>(pts.size()) < k + 1) {
        Point p{U(rng), U(rng)};
        bool ok = std::all_of(pts.begin(), pts.end(), [&](Point q) { return cheb(p, q) > 1 + margin; });
        if (ok) pts.push_back(p);
    }
    std::vector<Segment> out;
    for (auto p : pts) out.push_back({p, p});
    std::uniform_real_distribution<double> D(-0.4, 0.4);
    for (std::size_t i = 0; i < clutter; ++i) {
        Point c{U(rng), U(rng)};
        out.push_back({c, {c.x + D(rng), c.y + D(rng)}});
    }
    return out;
}

// Random walk with Gaussian steps.
inline Trajectory gen_random_walk(std::size_t n, std::uint64_t seed, double step = 0.3)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0, step);
    std::vector<Point> pts{{0, 0}};
    while (pts.size() < n) pts.push_back({pts.back().x + N(rng), pts.back().y + N(rng)});
    return Trajectory(pts);
}

struct LongestResult {
    TrajPos start, end;
    double length = 0;
};

namespace detail {

inline bool oracle_coverable(const Trajectory& T, TrajPos a, TrajPos b, int k)
{
    auto segs = T.extract(a, b);
    if (k == 1) {
        Rect r = bounding_box(segs);
        return r.width() <= 1 + eps_geom() && r.height() <= 1 + eps_geom();
    }
    return coverable_2(segs).has_value();
}

} // namespace detail

// Best sampled (start, reach) pair; a certified lower bound on the longest k-coverable subtrajectory.
inline LongestResult oracle_longest(const Trajectory& T, int k, std::size_t samples_start, std::size_t samples_end)
{
    if (k != 1 && k != 2) throw std::invalid_argument("oracle_longest: k must be 1 or 2");
    if (samples_start < 2 || samples_end < 2) throw std::invalid_argument("oracle_longest: need >= 2 samples");
    const double L = T.length();
    auto s_at = [&](std::size_t i) { return L * static_cast<double>(i) / static_cast<double>(samples_start - 1); };
    auto e_at = [&](std::size_t j) { return L * static_cast<double>(j) / static_cast<double>(samples_end - 1); };

    LongestResult best{T.start(), T.start(), -1};
    std::size_t j = 0;
    for (std::size_t i = 0; i < samples_start; ++i) {
        double s = s_at(i);
        TrajPos ps = T.at_arc(s);
        while (j + 1 < samples_end && e_at(j) < s) ++j;
        double e = std::max(e_at(j), s);
        if (!detail::oracle_coverable(T, ps, T.at_arc(e), k)) e = s;
        while (j + 1 < samples_end && detail::oracle_coverable(T, ps, T.at_arc(e_at(j + 1)), k)) {
            ++j;
            e = e_at(j);
        }
        if (e - s > best.length) best = {ps, T.at_arc(e), e - s};
    }
    return best;
}

enum class GridVerdict { yes, no, boundary };

inline const char* to_string(GridVerdict v)
{
    return v == GridVerdict::yes ? "yes" : v == GridVerdict::no ? "no" : "boundary";
}

namespace detail {

struct GridSearch {
    std::vector<double> anchors_y; // endpoint y and y +- side
    double res, side, eps;
    int k;

    std::vector<Segment> clip_out(const std::vector<Segment>& segs, const Rect& r) const
    {
        std::vector<Segment> out;
        for (const auto& s : segs) {
            auto iv = clip_param(s, r.inflated(eps));
            if (!iv) {
                out.push_back(s);
                continue;
            }
            if (iv->first > 0 && s.length() * iv->first > eps) out.push_back({s.a, s.at(iv->first)});
            if (iv->second < 1 && s.length() * (1 - iv->second) > eps) out.push_back({s.at(iv->second), s.b});
        }
        return out;
    }

    bool run(const std::vector<Segment>& rest, int depth, std::vector<Rect>& placed) const
    {
        if (rest.empty()) return true;
        if (depth == k) return false;
        // the square covering the leftmost remaining point may be slid right until its left side meets it
        Point p = rest[0].a;
        for (const auto& s : rest)
            for (Point q : {s.a, s.b})
                if (q.x < p.x) p = q;
        std::set<double> tops;
        for (double y : anchors_y)
            if (y >= p.y - 1e-12 && y <= p.y + side + 1e-12) tops.insert(y);
        for (double y = p.y; y <= p.y + side + 1e-12; y += res) tops.insert(std::min(y, p.y + side));
        for (double top : tops) {
            Rect r{p.x, p.x + side, top - side, top};
            placed.push_back(r);
            if (run(clip_out(rest, r), depth + 1, placed)) return true;
            placed.pop_back();
        }
        return false;
    }
};

} // namespace detail

// Grid search over square placements. Squares are normalized so that each new one has its
// left side on the leftmost uncovered point; tops range over anchor coordinates plus a grid.
// A search with squares grown by 2*resolution on every side separates "no" from "boundary".
inline GridVerdict oracle_decide_grid(std::span<const Segment> segs, int k, double resolution)
{
    if (!(resolution > 0)) throw std::invalid_argument("oracle_decide_grid: resolution must be positive");
    if (k < 1) throw std::invalid_argument("oracle_decide_grid: k must be >= 1");
    if (segs.empty()) return GridVerdict::yes;
    std::vector<Segment> all(segs.begin(), segs.end());
    auto search = [&](double side) {
        detail::GridSearch g;
        g.res = resolution;
        g.side = side;
        g.eps = eps_geom();
        g.k = k;
        for (const auto& s : all)
            for (Point q : {s.a, s.b})
                for (double d : {0.0, side, -side}) g.anchors_y.push_back(q.y + d);
        std::vector<Rect> placed;
        bool ok = g.run(all, 0, placed);
        if (ok && side == 1.0) {
            Covering c;
            for (const auto& r : placed) c.squares.push_back(UnitSquare::from_rect(r));
            ok = verify_covering(all, c);
        }
        return ok;
    };
    if (search(1.0)) return GridVerdict::yes;
    if (search(1.0 + 4 * resolution)) return GridVerdict::boundary;
    return GridVerdict::no;
}

} // namespace segcover
