#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "geom.hpp"
#include "pwl.hpp"

namespace segcover {

enum class Axis { x, y };

namespace detail {

inline bool fits_one(const Rect& r, double eps) { return r.width() <= 1 + eps && r.height() <= 1 + eps; }

inline std::optional<Covering> certified(std::span<const Segment> segs, Covering c, double eps)
{
    if (verify_covering(segs, c, eps)) return c;
    return std::nullopt;
}

// Parts of segs outside sq; clipping slivers shorter than eps are dropped, points are kept.
inline std::vector<Segment> uncovered_by(std::span<const Segment> segs, const UnitSquare& sq, double eps)
{
    std::vector<Segment> out;
    for (const auto& s : segs)
        for (const auto& u : clip_segment_to_square(s, sq, eps).uncovered)
            if (u.length() >= eps || s.length() < eps) out.push_back(u);
    return out;
}

inline std::vector<Segment> clip_to(std::span<const Segment> segs, const Rect& r)
{
    std::vector<Segment> out;
    for (const auto& s : segs)
        if (auto iv = clip_param(s, r)) out.push_back({s.at(iv->first), s.at(iv->second)});
    return out;
}

inline Segment swap_xy(const Segment& s) { return {{s.a.y, s.a.x}, {s.b.y, s.b.x}}; }
inline Segment flip_y(const Segment& s) { return {{s.a.x, -s.a.y}, {s.b.x, -s.b.y}}; }

} // namespace detail

inline std::optional<Covering> coverable_1(std::span<const Segment> segs, double eps = eps_geom())
{
    if (segs.empty()) return Covering{};
    Rect bb = bounding_box(segs);
    if (!detail::fits_one(bb, eps)) return std::nullopt;
    return Covering{{UnitSquare::from_rect(bb)}};
}

// thin_axis is the axis along which the bounding box has extent at most 1; squares are
// stacked greedily along the other axis. Returns none when more than budget squares are needed.
inline std::optional<Covering> coverable_1d(std::span<const Segment> segs, Axis thin_axis,
                                            std::size_t budget = std::numeric_limits<std::size_t>::max(),
                                            double eps = eps_geom())
{
    if (segs.empty()) return Covering{};
    Rect bb = bounding_box(segs);
    double thin = thin_axis == Axis::x ? bb.width() : bb.height();
    if (thin > 1 + eps) throw std::invalid_argument("coverable_1d: extent along thin axis exceeds 1");

    std::vector<std::pair<double, double>> iv;
    iv.reserve(segs.size());
    for (const auto& s : segs) {
        double a = thin_axis == Axis::x ? s.a.y : s.a.x;
        double b = thin_axis == Axis::x ? s.b.y : s.b.x;
        iv.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(iv.begin(), iv.end());
    const double hi_all = thin_axis == Axis::x ? bb.y_max : bb.x_max;

    std::vector<double> starts;
    double covered = -std::numeric_limits<double>::infinity();
    for (auto [lo, hi] : iv) {
        if (hi <= covered + eps) continue;
        double start = lo > covered ? lo : covered;
        starts.push_back(start);
        if (starts.size() > budget) return std::nullopt;
        covered = start + 1;
        // a long interval may need several squares
        while (hi > covered + eps) {
            starts.push_back(covered);
            if (starts.size() > budget) return std::nullopt;
            covered += 1;
        }
    }
    Covering c;
    for (double s : starts) {
        double far = std::min(s + 1, hi_all);
        if (thin_axis == Axis::x) c.squares.push_back({{bb.x_min, far}});
        else c.squares.push_back({{far - 1, bb.y_max}});
    }
    return c;
}

inline std::optional<Covering> coverable_2(std::span<const Segment> segs, double eps = eps_geom())
{
    if (segs.empty()) return Covering{};
    Rect bb = bounding_box(segs);
    if (detail::fits_one(bb, eps)) return Covering{{UnitSquare::from_rect(bb)}};
    const UnitSquare tl{{bb.x_min, bb.y_max}}, tr{{bb.x_max - 1, bb.y_max}};
    const UnitSquare bl{{bb.x_min, bb.y_min + 1}}, br{{bb.x_max - 1, bb.y_min + 1}};
    if (auto c = detail::certified(segs, Covering{{tl, br}}, eps)) return c;
    return detail::certified(segs, Covering{{tr, bl}}, eps);
}

inline std::array<UnitSquare, 4> corner_squares(const Rect& bb)
{
    return {UnitSquare{{bb.x_min, bb.y_max}}, UnitSquare{{bb.x_max - 1, bb.y_max}}, UnitSquare{{bb.x_min, bb.y_min + 1}},
            UnitSquare{{bb.x_max - 1, bb.y_min + 1}}};
}

inline std::optional<Covering> coverable_3(std::span<const Segment> segs, double eps = eps_geom())
{
    if (segs.empty()) return Covering{};
    Rect bb = bounding_box(segs);
    if (bb.width() <= 1 + eps) return coverable_1d(segs, Axis::x, 3, eps);
    if (bb.height() <= 1 + eps) return coverable_1d(segs, Axis::y, 3, eps);
    for (const auto& q : corner_squares(bb)) {
        auto rest = detail::uncovered_by(segs, q, eps);
        auto sub = coverable_2(rest, eps);
        if (!sub) continue;
        Covering c{{q}};
        c.squares.insert(c.squares.end(), sub->squares.begin(), sub->squares.end());
        if (auto ok = detail::certified(segs, c, eps)) return ok;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// k = 4, case (ii): every square touches exactly one side, left to right L, T, B, R.

// Extreme of a measured coordinate over the part of segs inside a half-plane, as a
// function of the half-plane's threshold c:
//   F(c) = ext { m(p) : p in segs, a(p) >= c }   (ge)   or   a(p) <= c   (!ge).
inline PiecewiseLinearFn threshold_extreme(std::span<const Segment> segs, Axis half_axis, bool ge, Axis measure,
                                           bool take_max)
{
    if (segs.empty()) return {};
    auto coord = [](Point p, Axis ax) { return ax == Axis::x ? p.x : p.y; };
    if (half_axis != measure) {
        const double sa = ge ? 1.0 : -1.0, sm = take_max ? -1.0 : 1.0;
        std::vector<Segment> t;
        t.reserve(segs.size());
        for (const auto& s : segs)
            t.push_back({{sm * coord(s.a, measure), sa * coord(s.a, half_axis)},
                         {sm * coord(s.b, measure), sa * coord(s.b, half_axis)}});
        PiecewiseLinearFn f = skyline(t);
        if (!ge) f = pwl_reflect(f);
        if (take_max) f = pwl_neg(f);
        return f;
    }
    double lo_all = PWL_INF, hi_all = -PWL_INF;
    for (const auto& s : segs) {
        lo_all = std::min({lo_all, coord(s.a, measure), coord(s.b, measure)});
        hi_all = std::max({hi_all, coord(s.a, measure), coord(s.b, measure)});
    }
    if (ge && take_max) return PiecewiseLinearFn::constant(hi_all, -PWL_INF, hi_all);
    if (!ge && !take_max) return PiecewiseLinearFn::constant(lo_all, lo_all, PWL_INF);

    // first hit: min coordinate >= c, on the union of projections (negated for the <= case)
    const double sg = ge ? 1.0 : -1.0;
    std::vector<std::pair<double, double>> iv;
    iv.reserve(segs.size());
    for (const auto& s : segs) {
        double a = sg * coord(s.a, measure), b = sg * coord(s.b, measure);
        iv.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(iv.begin(), iv.end());
    std::vector<std::pair<double, double>> merged;
    for (auto [a, b] : iv) {
        if (!merged.empty() && a <= merged.back().second) merged.back().second = std::max(merged.back().second, b);
        else merged.emplace_back(a, b);
    }
    std::vector<Piece> ps;
    double prev = -PWL_INF;
    for (auto [a, b] : merged) {
        if (a > prev) ps.push_back({prev, a, a, a});
        if (b > a) ps.push_back({a, b, a, b});
        prev = b;
    }
    PiecewiseLinearFn f(std::move(ps));
    if (!ge) f = pwl_neg(pwl_reflect(f));
    return f;
}

struct FourCoverProfile {
    PiecewiseLinearFn x_T, x_B, x_R1, x_R2, y_R1, y_R2;
    double y_lo = 0, y_hi = 0; // domain of y_L
    Rect bbox;
};

enum class Order { LTBR, LBTR };

namespace detail {

inline PiecewiseLinearFn const_on(std::optional<double> v, double lo, double hi)
{
    if (!v) return {};
    return PiecewiseLinearFn::constant(*v, lo, hi);
}

// Extremes (min x, max x, max y, min y) of a set, each as a function of y_L.
struct Extremes {
    PiecewiseLinearFn min_x, max_x, max_y, min_y;

    void merge(const Extremes& o)
    {
        min_x = pwl_min(min_x, o.min_x);
        max_x = pwl_max(max_x, o.max_x);
        max_y = pwl_max(max_y, o.max_y);
        min_y = pwl_min(min_y, o.min_y);
    }
};

// P \ L for L = [X0, X0+1] x [a-1, a]: split into {y >= a}, {y <= a-1}, {x >= X0+1}.
inline Extremes extremes_outside_L(std::span<const Segment> P, double x0, double lo, double hi)
{
    Extremes e;
    if (P.empty()) return e;
    auto up = [&](Axis m, bool mx) { return threshold_extreme(P, Axis::y, true, m, mx); };
    auto dn = [&](Axis m, bool mx) { return pwl_shift(threshold_extreme(P, Axis::y, false, m, mx), 1.0); };
    auto rt = [&](Axis m, bool mx) { return const_on(threshold_extreme(P, Axis::x, true, m, mx)(x0 + 1), lo, hi); };
    e.min_x = pwl_min(pwl_min(up(Axis::x, false), dn(Axis::x, false)), rt(Axis::x, false));
    e.max_x = pwl_max(pwl_max(up(Axis::x, true), dn(Axis::x, true)), rt(Axis::x, true));
    e.max_y = pwl_max(pwl_max(up(Axis::y, true), dn(Axis::y, true)), rt(Axis::y, true));
    e.min_y = pwl_min(pwl_min(up(Axis::y, false), dn(Axis::y, false)), rt(Axis::y, false));
    return e;
}

// P restricted to x >= g(a).
inline Extremes extremes_right_of(std::span<const Segment> P, const PiecewiseLinearFn& g)
{
    Extremes e;
    if (P.empty() || g.empty()) return e;
    auto f = [&](Axis m, bool mx) { return pwl_compose_any(threshold_extreme(P, Axis::x, true, m, mx), g); };
    e.min_x = f(Axis::x, false);
    e.max_x = f(Axis::x, true);
    e.max_y = f(Axis::y, true);
    e.min_y = f(Axis::y, false);
    return e;
}

} // namespace detail

// Profile of the LTBR configuration over y_L in [y_min + 1, y_max]. For LBTR the profile
// describes the instance reflected in y (y -> -y).
inline FourCoverProfile four_cover_profile(std::span<const Segment> input, Order order)
{
    std::vector<Segment> S(input.begin(), input.end());
    if (order == Order::LBTR)
        for (auto& s : S) s = detail::flip_y(s);
    if (S.empty()) throw std::invalid_argument("four_cover_profile: empty instance");
    const Rect bb = bounding_box(S);
    if (!(bb.width() > 1 && bb.height() > 1)) throw std::invalid_argument("four_cover_profile: bounding box must exceed 1 in both axes");

    const double X0 = bb.x_min, Y0 = bb.y_min, Y1 = bb.y_max;
    const double lo = Y0 + 1, hi = Y1;
    const double inf = PWL_INF;
    auto dom = [&](const PiecewiseLinearFn& f) { return pwl_clip(f, lo, hi); };

    FourCoverProfile P;
    P.bbox = bb;
    P.y_lo = lo;
    P.y_hi = hi;

    // leftmost point outside L
    auto ext_L = detail::extremes_outside_L(S, X0, lo, hi);
    P.x_T = dom(ext_L.min_x);

    // leftmost point outside L and T: below T's bottom, or right of T
    const double yT = Y1 - 1, yB = Y0 + 1;
    auto S_lo = detail::clip_to(S, {-inf, inf, -inf, yT});
    auto S_hi = detail::clip_to(S, {-inf, inf, yB, inf});
    auto S_mid = detail::clip_to(S, {-inf, inf, yB, yT});
    auto t1 = pwl_add_const(P.x_T, 1.0);
    auto lo_L = detail::extremes_outside_L(S_lo, X0, lo, hi);
    auto right_of_T = pwl_compose_any(threshold_extreme(S, Axis::x, true, Axis::x, false), t1);
    P.x_B = dom(pwl_min(lo_L.min_x, right_of_T));

    // what R has to cover
    auto b1 = pwl_add_const(P.x_B, 1.0);
    detail::Extremes u;
    if (Y1 - Y0 > 2) u = detail::extremes_outside_L(S_mid, X0, lo, hi);
    u.merge(detail::extremes_right_of(S_lo, b1));
    u.merge(detail::extremes_right_of(S_hi, t1));
    u.merge(detail::extremes_right_of(S, pwl_max(t1, b1)));
    P.x_R1 = dom(u.min_x);
    P.x_R2 = dom(u.max_x);
    P.y_R1 = dom(u.max_y);
    P.y_R2 = dom(u.min_y);
    return P;
}

namespace detail {

// Greedy L, T, B, R placement at top y_L = a.
inline std::optional<Covering> place_ltbr(std::span<const Segment> S, const Rect& bb, double a, double eps)
{
    Covering c;
    c.squares.push_back({{bb.x_min, a}});
    auto u = uncovered_by(S, c.squares.back(), eps);
    for (int step = 0; step < 3 && !u.empty(); ++step) {
        Rect r = bounding_box(u);
        if (step == 1) c.squares.push_back({{r.x_min, r.y_min + 1}});
        else c.squares.push_back({{r.x_min, r.y_max}});
        u = uncovered_by(u, c.squares.back(), eps);
    }
    if (!u.empty()) return std::nullopt;
    return certified(S, c, eps);
}

inline std::optional<Covering> scan_profile(std::span<const Segment> S, const FourCoverProfile& P, double eps)
{
    auto spanx = pwl_sub(P.x_R2, P.x_R1);
    auto spany = pwl_sub(P.y_R1, P.y_R2);
    auto span = pwl_max(spanx, spany);

    std::vector<double> ts{P.y_lo, P.y_hi};
    for (const PiecewiseLinearFn* f : {&P.x_T, &P.x_B, &P.x_R1, &P.x_R2, &P.y_R1, &P.y_R2, static_cast<const PiecewiseLinearFn*>(&span)})
        for (double t : f->breakpoints()) ts.push_back(t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    std::vector<double> cand;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < P.y_lo || ts[i] > P.y_hi) continue;
        cand.push_back(ts[i]);
        if (i + 1 < ts.size() && ts[i + 1] <= P.y_hi) cand.push_back(0.5 * (ts[i] + ts[i + 1]));
    }
    // feasible sub-interval of each span piece
    for (const auto& p : span.pieces) {
        double a = std::max(p.t0, P.y_lo), b = std::min(p.t1, P.y_hi);
        if (b < a) continue;
        double va = p.at(a), vb = p.at(b);
        if (va <= 1 && vb <= 1) { cand.push_back(0.5 * (a + b)); continue; }
        if (va > 1 && vb > 1) continue;
        double tc = a + (b - a) * (1 - va) / (vb - va);
        cand.push_back(va <= 1 ? 0.5 * (a + tc) : 0.5 * (tc + b));
        cand.push_back(tc);
    }
    // order: feasible per profile first, smallest span first
    std::vector<std::pair<double, double>> scored;
    for (double a : cand) {
        auto v = span.eval_min(a);
        scored.emplace_back(v ? *v : -1.0, a);
    }
    std::sort(scored.begin(), scored.end());
    std::size_t tries = 0;
    for (auto [v, a] : scored) {
        if (v > 1 + 1e-7 && tries >= 8) break;
        ++tries;
        if (auto c = place_ltbr(S, P.bbox, a, eps)) return c;
    }
    return std::nullopt;
}

inline std::optional<Covering> case_ii(std::span<const Segment> segs, double eps)
{
    for (bool transpose : {false, true}) {
        for (Order ord : {Order::LTBR, Order::LBTR}) {
            std::vector<Segment> S(segs.begin(), segs.end());
            if (transpose)
                for (auto& s : S) s = swap_xy(s);
            FourCoverProfile P = four_cover_profile(S, ord);
            if (ord == Order::LBTR)
                for (auto& s : S) s = flip_y(s);
            auto c = scan_profile(S, P, eps);
            if (!c) continue;
            Covering out;
            for (const auto& q : c->squares) {
                Rect r = q.rect();
                if (ord == Order::LBTR) r = {r.x_min, r.x_max, -r.y_max, -r.y_min};
                if (transpose) r = {r.y_min, r.y_max, r.x_min, r.x_max};
                out.squares.push_back(UnitSquare::from_rect(r));
            }
            if (auto ok = certified(segs, out, eps)) return ok;
        }
    }
    return std::nullopt;
}

} // namespace detail

inline std::optional<Covering> coverable_4(std::span<const Segment> segs, double eps = eps_geom())
{
    if (segs.empty()) return Covering{};
    Rect bb = bounding_box(segs);
    if (bb.width() <= 1 + eps) return coverable_1d(segs, Axis::x, 4, eps);
    if (bb.height() <= 1 + eps) return coverable_1d(segs, Axis::y, 4, eps);
    for (const auto& q : corner_squares(bb)) {
        auto rest = detail::uncovered_by(segs, q, eps);
        auto sub = coverable_3(rest, eps);
        if (!sub) continue;
        Covering c{{q}};
        c.squares.insert(c.squares.end(), sub->squares.begin(), sub->squares.end());
        if (auto ok = detail::certified(segs, c, eps)) return ok;
    }
    return detail::case_ii(segs, eps);
}

inline std::optional<Covering> coverable_k(std::span<const Segment> segs, int k, double eps = eps_geom())
{
    switch (k) {
    case 1: return coverable_1(segs, eps);
    case 2: return coverable_2(segs, eps);
    case 3: return coverable_3(segs, eps);
    case 4: return coverable_4(segs, eps);
    default: throw std::invalid_argument("k must be in 1..4");
    }
}

} // namespace segcover
