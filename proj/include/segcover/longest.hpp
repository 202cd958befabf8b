#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cover.hpp"
#include "subtraj.hpp"
#include "traj.hpp"
#include "traj_index.hpp"

namespace segcover {

// Bisection tolerance on edge parameters, also the merge distance for candidate starts.
inline constexpr double EPS_REACH = 1e-9;
// Slack for event predicates that compare against a bisected reach.
inline constexpr double EVENT_TOL = 1e-7;

// ---------------------------------------------------------------------------
// k = 1: reach of every vertex

struct ReachTable {
    std::vector<TrajPos> reach;         // r(v_i): furthest q with T[v_i, q] coverable
    std::vector<TrajPos> reverse_reach; // rr(v_j): earliest p with T[p, v_j] coverable
    int k = 1;
};

namespace detail {

// Largest t in [0, 1] with box + (a + t (b - a)) still inside a lim x lim box. a must be in box.
inline double frontier(const Rect& box, Point a, Point b, double lim)
{
    double t = 1;
    auto bound = [&](double lo_edge, double hi_edge, double p, double d) {
        if (d > 0) t = std::min(t, (lo_edge + lim - p) / d);
        else if (d < 0) t = std::min(t, (hi_edge - lim - p) / d);
    };
    bound(box.x_min, box.x_max, a.x, b.x - a.x);
    bound(box.y_min, box.y_max, a.y, b.y - a.y);
    return std::clamp(t, 0.0, 1.0);
}

// Forward reach of every vertex: sliding window with monotone deques over vertex coordinates.
inline std::vector<TrajPos> forward_reach_1(const std::vector<Point>& v, double eps)
{
    const std::size_t n = v.size();
    const double lim = 1 + eps;
    std::deque<std::size_t> xmax, xmin, ymax, ymin;
    auto push = [&](std::size_t j) {
        auto put = [&](std::deque<std::size_t>& q, auto better) {
            while (!q.empty() && !better(v[q.back()], v[j])) q.pop_back();
            q.push_back(j);
        };
        put(xmax, [](Point a, Point b) { return a.x > b.x; });
        put(xmin, [](Point a, Point b) { return a.x < b.x; });
        put(ymax, [](Point a, Point b) { return a.y > b.y; });
        put(ymin, [](Point a, Point b) { return a.y < b.y; });
    };
    auto box = [&] { return Rect{v[xmin.front()].x, v[xmax.front()].x, v[ymin.front()].y, v[ymax.front()].y}; };

    std::vector<TrajPos> out(n);
    std::size_t j = 0;
    push(0);
    for (std::size_t i = 0; i < n; ++i) {
        if (j < i) {
            j = i;
            push(i);
        }
        for (auto* q : {&xmax, &xmin, &ymax, &ymin})
            while (q->front() < i) q->pop_front();
        while (j + 1 < n) {
            Rect b = box();
            b.add(v[j + 1]);
            if (!fits_one(b, eps)) break;
            push(++j);
        }
        if (j + 1 == n) out[i] = {n - 2, 1.0};
        else out[i] = {j, frontier(box(), v[j], v[j + 1], lim)};
    }
    return out;
}

inline TrajPos reverse_pos(std::size_t edges, TrajPos p) { return {edges - 1 - p.edge, 1.0 - p.frac}; }

} // namespace detail

inline ReachTable reach_all_vertices(const Trajectory& T, double eps = eps_geom())
{
    ReachTable rt;
    rt.reach = detail::forward_reach_1(T.vertices(), eps);
    std::vector<Point> rev(T.vertices().rbegin(), T.vertices().rend());
    auto back = detail::forward_reach_1(rev, eps);
    const std::size_t n = T.num_vertices();
    rt.reverse_reach.resize(n);
    for (std::size_t j = 0; j < n; ++j) rt.reverse_reach[j] = T.normalize(detail::reverse_pos(T.num_edges(), back[n - 1 - j]));
    for (auto& r : rt.reach) r = T.normalize(r);
    return rt;
}

// ---------------------------------------------------------------------------
// k = 1: candidate squares

enum class CornerPair { TL_BR, TR_BL };

namespace detail {

struct CornerSolve {
    UnitSquare square;
    double s, t; // parameters on e_i and e_j
};

// Corner c on e_i, opposite corner c + off on e_j. Solves e_i(s) + off = e_j(t).
inline std::optional<CornerSolve> solve_corners(const Segment& ei, const Segment& ej, CornerPair cp, double tol)
{
    const Point off = cp == CornerPair::TL_BR ? Point{1, -1} : Point{-1, -1};
    const Point A = ei.b - ei.a, B = ej.a - ej.b, w = ej.a - ei.a - off;
    const double det = cross(A, B);
    if (std::abs(det) <= 1e-12 * std::hypot(A.x, A.y) * std::hypot(B.x, B.y)) return std::nullopt;
    double s = cross(w, B) / det, t = cross(A, w) / det;
    const double ts = tol / ei.length(), tt = tol / ej.length();
    if (s < -ts || s > 1 + ts || t < -tt || t > 1 + tt) return std::nullopt;
    s = std::clamp(s, 0.0, 1.0);
    t = std::clamp(t, 0.0, 1.0);
    Point c = ei.at(s);
    UnitSquare sq = cp == CornerPair::TL_BR ? UnitSquare{c} : UnitSquare{{c.x - 1, c.y}};
    return CornerSolve{sq, s, t};
}

} // namespace detail

// The unit square with one corner on e_i and the opposite corner on e_j (TL on e_i for TL_BR, TR on e_i for TR_BL).
inline std::optional<UnitSquare> opposite_corner_square(const Segment& ei, const Segment& ej, CornerPair cp, double tol = eps_geom())
{
    if (auto r = detail::solve_corners(ei, ej, cp, tol)) return r->square;
    return std::nullopt;
}

enum class CandidateFamily : unsigned { vertex_pair = 1, vertex_edge_corner = 2, opposite_corner = 4 };
inline constexpr unsigned ALL_FAMILIES = 7;

inline const char* to_string(CandidateFamily f)
{
    switch (f) {
    case CandidateFamily::vertex_pair: return "vertex-pair";
    case CandidateFamily::vertex_edge_corner: return "vertex-edge-corner";
    case CandidateFamily::opposite_corner: return "opposite-corner";
    }
    return "?";
}

struct CandidateSquare {
    UnitSquare square;
    CandidateFamily family;
    TrajPos anchor;                                   // a trajectory point on the square's boundary
    std::size_t edge_i = 0, edge_j = 0;               // opposite-corner only
    double s = 0, t = 0;                              // corner parameters on edge_i, edge_j
};

namespace detail {

inline Rect swap_rect(const Rect& r) { return {r.y_min, r.y_max, r.x_min, r.x_max}; }

// Every candidate square, in a fixed order. The visitor may be called many times per anchor.
inline void for_each_candidate(const Trajectory& T, const ReachTable& rt, unsigned families,
                               const std::function<void(const CandidateSquare&)>& visit, double eps)
{
    const auto& V = T.vertices();
    const std::size_t n = V.size(), m = T.num_edges();
    const double lim = 1 + eps;

    if (families & static_cast<unsigned>(CandidateFamily::vertex_pair)) {
        std::vector<std::size_t> by_x(n);
        for (std::size_t i = 0; i < n; ++i) by_x[i] = i;
        std::sort(by_x.begin(), by_x.end(), [&](std::size_t a, std::size_t b) { return V[a].x < V[b].x || (V[a].x == V[b].x && a < b); });
        std::size_t lo = 0;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t u = by_x[k];
            while (V[by_x[lo]].x < V[u].x - lim) ++lo;
            for (std::size_t h = lo; h < n && V[by_x[h]].x <= V[u].x + lim; ++h) {
                std::size_t v = by_x[h];
                if (std::abs(V[v].y - V[u].y) > lim) continue;
                for (double left : {V[u].x, V[u].x - 1})
                    for (double top : {V[v].y, V[v].y + 1}) {
                        UnitSquare sq{{left, top}};
                        if (!sq.contains(V[u], eps) || !sq.contains(V[v], eps)) continue;
                        visit({sq, CandidateFamily::vertex_pair, T.at_vertex(u)});
                    }
            }
        }
    }

    if (families & static_cast<unsigned>(CandidateFamily::vertex_edge_corner)) {
        for (bool swapped : {false, true}) {
            auto P = [&](std::size_t i) { return swapped ? Point{V[i].y, V[i].x} : V[i]; };
            for (std::size_t u = 0; u < n; ++u) {
                const Point pu = P(u);
                for (double left : {pu.x, pu.x - 1})
                    for (double c : {left, left + 1})
                        for (std::size_t e = 0; e < m; ++e) {
                            Point a = P(e), b = P(e + 1);
                            if (a.x == b.x || c < std::min(a.x, b.x) || c > std::max(a.x, b.x)) continue;
                            double ye = a.y + (c - a.x) / (b.x - a.x) * (b.y - a.y);
                            if (std::abs(ye - pu.y) > lim) continue;
                            for (double top : {ye, ye + 1}) {
                                Rect r{left, left + 1, top - 1, top};
                                if (!r.contains(pu, eps)) continue;
                                if (swapped) r = swap_rect(r);
                                visit({UnitSquare::from_rect(r), CandidateFamily::vertex_edge_corner, T.at_vertex(u)});
                            }
                        }
            }
        }
    }

    if (families & static_cast<unsigned>(CandidateFamily::opposite_corner)) {
        auto pair = [&](std::size_t i, std::size_t j) {
            if (i >= m || j >= m || i > j) return;
            for (CornerPair cp : {CornerPair::TL_BR, CornerPair::TR_BL}) {
                // corner on e_i first, then the mirrored assignment with the corner on e_j
                if (auto r = solve_corners(T.edge(i), T.edge(j), cp, eps))
                    visit({r->square, CandidateFamily::opposite_corner, TrajPos{i, r->s}, i, j, r->s, r->t});
                if (auto r = solve_corners(T.edge(j), T.edge(i), cp, eps))
                    visit({r->square, CandidateFamily::opposite_corner, TrajPos{i, r->t}, i, j, r->t, r->s});
            }
        };
        for (std::size_t i = 0; i < n; ++i) {
            pair(i, rt.reach[i].edge);
            const TrajPos rr = rt.reverse_reach[i];
            std::size_t first = rr.frac > 0 ? rr.edge + 1 : rr.edge;
            if (first >= 1) pair(first - 1, i);
        }
    }
}

struct Run {
    TrajPos start, end;
    double length = -1;
};

// Maximal piece of T inside box that contains anchor.
inline Run run_through(const Trajectory& T, const Rect& box, TrajPos anchor)
{
    if (!box.contains(T.at(anchor))) return {};
    const std::size_t m = T.num_edges();
    Run r;
    std::size_t e = anchor.edge;
    double f = anchor.frac;
    for (;;) {
        auto iv = clip_param(T.edge(e), box);
        double t1 = iv ? std::max(iv->second, f) : f;
        if (t1 >= 1 && e + 1 < m) {
            ++e;
            f = 0;
            continue;
        }
        r.end = {e, std::min(t1, 1.0)};
        break;
    }
    e = anchor.edge;
    f = anchor.frac;
    for (;;) {
        auto iv = clip_param(T.edge(e), box);
        double t0 = iv ? std::min(iv->first, f) : f;
        if (t0 <= 0 && e > 0) {
            --e;
            f = 1;
            continue;
        }
        r.start = {e, std::max(t0, 0.0)};
        break;
    }
    r.length = T.arc(r.end) - T.arc(r.start);
    return r;
}

// Longer wins; near-equal lengths go to the earlier start.
inline bool better(double len, TrajPos start, double best_len, TrajPos best_start, const Trajectory& T)
{
    if (len > best_len + 1e-12) return true;
    return len >= best_len - 1e-12 && T.arc(start) < T.arc(best_start) - 1e-12;
}

} // namespace detail

inline std::vector<CandidateSquare> candidate_squares(const Trajectory& T, const ReachTable& rt, unsigned families = ALL_FAMILIES,
                                                      double eps = eps_geom())
{
    std::vector<CandidateSquare> out;
    detail::for_each_candidate(T, rt, families, [&](const CandidateSquare& c) { out.push_back(c); }, eps);
    return out;
}

struct Longest1Result {
    TrajPos start, end;
    UnitSquare witness;
    double length = 0;
    CandidateFamily family = CandidateFamily::vertex_pair;
};

// Longest 1-coverable subtrajectory over the chosen candidate families; ties go to the earliest start.
inline Longest1Result longest_1coverable(const Trajectory& T, unsigned families = ALL_FAMILIES, double eps = eps_geom())
{
    auto rt = reach_all_vertices(T, eps);
    Longest1Result best;
    best.length = -1;
    detail::for_each_candidate(
        T, rt, families,
        [&](const CandidateSquare& c) {
            // half on each side, so the piece has width and height at most 1 + eps
            auto run = detail::run_through(T, c.square.rect().inflated(eps / 2), c.anchor);
            if (run.length < 0 || !detail::better(run.length, run.start, best.length, best.start, T)) return;
            best = {T.normalize(run.start), run.end, c.square, run.length, c.family};
        },
        eps);
    if (best.length < 0) {
        // only possible with a family subset that yields nothing
        best = {T.start(), T.start(), UnitSquare{T.vertex(0)}, 0, CandidateFamily::vertex_pair};
    }
    return best;
}

// ---------------------------------------------------------------------------
// k = 2: reach of an arbitrary point

namespace detail {

inline bool coverable_range(const TrajIndex& idx, TrajPos a, TrajPos b, int k, double eps)
{
    switch (k) {
    case 1: return fits_one(idx.query_bbox(a, b), eps);
    case 2: return is_2coverable(idx, a, b, eps).has_value();
    case 3: return is_3coverable(idx, a, b, eps).has_value();
    }
    throw std::invalid_argument("reach: k must be 1, 2 or 3");
}

// Vertex i written as a position on the edge before it when possible.
inline TrajPos vertex_before(std::size_t i) { return i == 0 ? TrajPos{0, 0.0} : TrajPos{i - 1, 1.0}; }

} // namespace detail

// Largest q with T[p, q] k-coverable: galloping search over vertices, then bisection on the final edge.
inline TrajPos reach_point(const TrajIndex& idx, TrajPos p, int k = 2, double eps = eps_geom())
{
    const Trajectory& T = idx.trajectory();
    p = T.normalize(p);
    auto ok = [&](TrajPos q) { return detail::coverable_range(idx, p, q, k, eps); };
    if (ok(T.end())) return T.end();
    const std::size_t n = T.num_vertices();
    // good: largest vertex index known reachable (p.edge stands for p itself)
    std::size_t good = p.edge, bad = n - 1, step = 1;
    while (good + step < bad) {
        if (!ok(detail::vertex_before(good + step))) {
            bad = good + step;
            break;
        }
        good += step;
        step *= 2;
    }
    while (bad - good > 1) {
        std::size_t mid = good + (bad - good) / 2;
        if (ok(detail::vertex_before(mid))) good = mid;
        else bad = mid;
    }
    double lo = good == p.edge ? p.frac : 0.0, hi = 1.0;
    const std::size_t e = good;
    while (hi - lo > EPS_REACH) {
        double mid = 0.5 * (lo + hi);
        if (ok({e, mid})) lo = mid;
        else hi = mid;
    }
    return T.normalize({e, lo});
}

// Earliest p with T[p, q] k-coverable.
inline TrajPos reverse_reach_point(const TrajIndex& idx, TrajPos q, int k = 2, double eps = eps_geom())
{
    const Trajectory& T = idx.trajectory();
    if (q.frac == 0 && q.edge > 0) q = {q.edge - 1, 1.0};
    auto ok = [&](TrajPos p) { return detail::coverable_range(idx, p, q, k, eps); };
    if (ok(T.start())) return T.start();
    // vertices v_0 .. v_{q.edge} precede q; good is the smallest known reachable one (q.edge + 1 stands for q)
    std::size_t good = q.edge + 1, bad = 0, step = 1;
    while (good > bad + step) {
        if (!ok(T.at_vertex(good - step))) {
            bad = good - step;
            break;
        }
        good -= step;
        step *= 2;
    }
    while (good - bad > 1) {
        std::size_t mid = bad + (good - bad) / 2;
        if (ok(T.at_vertex(mid))) good = mid;
        else bad = mid;
    }
    // the answer lies on edge good - 1
    const std::size_t e = good - 1;
    double lo = 0.0, hi = good == q.edge + 1 ? q.frac : 1.0;
    while (hi - lo > EPS_REACH) {
        double mid = 0.5 * (lo + hi);
        if (ok({e, mid})) hi = mid;
        else lo = mid;
    }
    return T.normalize({e, hi});
}

// ---------------------------------------------------------------------------
// k = 2: events and candidate starts

enum class EventKind { vertex, reach, bounding_box, bridge, upper_envelope, special_config_1, special_config_2, special_config_3 };

inline const char* to_string(EventKind k)
{
    switch (k) {
    case EventKind::vertex: return "vertex";
    case EventKind::reach: return "reach";
    case EventKind::bounding_box: return "bounding_box";
    case EventKind::bridge: return "bridge";
    case EventKind::upper_envelope: return "upper_envelope";
    case EventKind::special_config_1: return "special_config_1";
    case EventKind::special_config_2: return "special_config_2";
    case EventKind::special_config_3: return "special_config_3";
    }
    return "?";
}

struct EventPoint {
    TrajPos pos;
    EventKind kind = EventKind::vertex;
    Dir direction = Dir::up;
    std::optional<Point> aux;      // u for bridge/envelope events, r(p) for special ones, the vertex for reach events
    std::optional<TrajPos> aux_pos;
    bool mirrored = false; // frame is the rotation followed by y -> -y
};

// Shared state for event computation: the index, cached reaches and the eight rotated/mirrored copies of T.
class EventContext {
public:
    explicit EventContext(const TrajIndex& idx, double eps = eps_geom()) : idx_(idx), eps_(eps)
    {
        for (Dir d : all_dirs) {
            auto pts = transform_cardinal(std::span<const Point>(idx.trajectory().vertices()), d);
            frame_[2 * static_cast<int>(d)] = Trajectory(pts);
            for (auto& q : pts) q.y = -q.y;
            frame_[2 * static_cast<int>(d) + 1] = Trajectory(pts);
        }
    }

    const Trajectory& T() const { return idx_.trajectory(); }
    const TrajIndex& index() const { return idx_; }
    const Trajectory& frame(Dir d, bool mirrored) const { return frame_[2 * static_cast<int>(d) + (mirrored ? 1 : 0)]; }
    double eps() const { return eps_; }

    TrajPos reach(TrajPos p)
    {
        p = T().normalize(p);
        auto key = std::pair{p.edge, p.frac};
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        return cache_[key] = reach_point(idx_, p, 2, eps_);
    }
    bool coverable(TrajPos a, TrajPos b) const { return is_2coverable(idx_, a, b, eps_).has_value(); }

private:
    const TrajIndex& idx_;
    double eps_;
    Trajectory frame_[8];
    std::map<std::pair<std::size_t, double>, TrajPos> cache_;
};

namespace detail {

// Index of the last vertex at or before r.
inline std::size_t last_vertex(TrajPos r) { return r.frac >= 1 ? r.edge + 1 : r.edge; }
// Index of the first vertex at or after p.
inline std::size_t first_vertex(TrajPos p) { return p.frac > 0 ? p.edge + 1 : p.edge; }

inline double param(TrajPos p) { return p.param(); }

// Vertices of T[p, r] (by index range), in the rotated frame.
struct Window {
    std::size_t first, last; // empty when first > last
    bool empty() const { return first > last; }
};
inline Window window(TrajPos p, TrajPos r) { return {first_vertex(p), last_vertex(r)}; }

inline double max_y(const Trajectory& R, Window w)
{
    double m = -INFINITY;
    for (std::size_t i = w.first; i <= w.last; ++i) m = std::max(m, R.vertex(i).y);
    return m;
}
inline double min_y(const Trajectory& R, Window w)
{
    double m = INFINITY;
    for (std::size_t i = w.first; i <= w.last; ++i) m = std::min(m, R.vertex(i).y);
    return m;
}

// p is leftmost on R[p, r].
inline bool leftmost(const Trajectory& R, TrajPos p, TrajPos r, Window w, double tol)
{
    double px = R.at(p).x;
    if (R.at(r).x < px - tol) return false;
    for (std::size_t i = w.first; i <= w.last; ++i)
        if (R.vertex(i).x < px - tol) return false;
    return true;
}

inline bool within(TrajPos p, TrajPos u, TrajPos r, double tol) { return param(u) >= param(p) - tol && param(u) <= param(r) + tol; }

// Parameter on segment s where coordinate (x if axis 0, y otherwise) equals c.
inline std::optional<double> solve_coord(const Segment& s, int axis, double c)
{
    double a = axis == 0 ? s.a.x : s.a.y, b = axis == 0 ? s.b.x : s.b.y;
    if (a == b) return std::nullopt;
    double t = (c - a) / (b - a);
    if (t < 0 || t > 1) return std::nullopt;
    return t;
}

// Is there a unit square containing rest whose top-left corner lies in H1?
inline bool second_square_fits(std::span<const Segment> rest, const Rect& h1, double tol)
{
    if (rest.empty()) return true;
    Rect b = bounding_box(rest);
    double xl = std::max(b.x_max - 1, h1.x_min), xh = std::min(b.x_min, h1.x_max);
    double yl = std::max(b.y_max, h1.y_min), yh = std::min(b.y_min + 1, h1.y_max);
    return xl <= xh + tol && yl <= yh + tol;
}

inline bool passes_through(std::span<const Segment> segs, Point x, double tol)
{
    for (const auto& s : segs) {
        auto iv = clip_param(s, Rect::of(x).inflated(tol));
        if (iv) return true;
    }
    return false;
}

} // namespace detail

// Re-checks an event against its defining predicate. Exact identities use eps; anything measured
// against the bisected reach uses EVENT_TOL.
inline bool validate_event(EventContext& ctx, const EventPoint& ev)
{
    const Trajectory& T = ctx.T();
    const Trajectory& R = ctx.frame(ev.direction, ev.mirrored);
    const double eps = std::max(ctx.eps(), 1e-9);
    const TrajPos p = T.normalize(ev.pos);
    if (ev.kind == EventKind::vertex) return p.frac == 0 || p == T.end();
    if (ev.kind == EventKind::reach) {
        if (!ev.aux_pos || !ctx.coverable(p, *ev.aux_pos)) return false;
        if (p == T.start()) return true;
        TrajPos before = T.at_arc(T.arc(p) - EVENT_TOL);
        return !ctx.coverable(before, *ev.aux_pos);
    }
    const TrajPos r = ctx.reach(p);
    const detail::Window w = detail::window(p, r);
    const Point P = R.at(p);
    switch (ev.kind) {
    case EventKind::bounding_box:
        return !w.empty() && std::abs(P.y - detail::max_y(R, w)) <= eps;
    case EventKind::bridge:
    case EventKind::upper_envelope: {
        if (w.empty() || !ev.aux_pos || !detail::within(p, *ev.aux_pos, r, EVENT_TOL)) return false;
        if (!detail::leftmost(R, p, r, w, eps)) return false;
        Point u = R.at(*ev.aux_pos);
        if (std::abs(u.x - P.x - 1) > eps) return false;
        if (ev.kind == EventKind::bridge) return std::abs(u.y - detail::min_y(R, w) - 1) <= eps;
        for (const auto& s : R.extract(p, r)) {
            auto iv = clip_param(s, Rect{u.x, u.x, -INFINITY, INFINITY});
            if (!iv) continue;
            if (std::max(s.at(iv->first).y, s.at(iv->second).y) > u.y + eps) return false;
        }
        return true;
    }
    default: break;
    }
    // special configurations: H1 is pinned by p, H2 must cover the rest with its top-left corner in H1
    const Point Rp = R.at(r);
    auto segs = R.extract(p, r);
    Rect h1 = ev.kind == EventKind::special_config_1 ? Rect{P.x - 1, P.x, P.y - 1, P.y} : Rect{P.x, P.x + 1, P.y - 1, P.y};
    auto rest = detail::uncovered_by(segs, UnitSquare::from_rect(h1), eps);
    switch (ev.kind) {
    case EventKind::special_config_1:
        return std::abs(Rp.x - P.x + 1) <= EVENT_TOL && std::abs(Rp.y - P.y + 1) <= EVENT_TOL &&
               detail::second_square_fits(rest, h1, EVENT_TOL);
    case EventKind::special_config_2:
        return detail::passes_through(segs, {P.x + 1, P.y - 1}, eps) && detail::second_square_fits(rest, h1, EVENT_TOL);
    case EventKind::special_config_3: {
        Rect h2{Rp.x - 1, Rp.x, Rp.y, Rp.y + 1};
        if (!h1.contains({h2.x_min, h2.y_max}, EVENT_TOL)) return false;
        Covering c{{UnitSquare::from_rect(h1), UnitSquare::from_rect(h2)}};
        return verify_covering(segs, c, EVENT_TOL) && detail::passes_through(segs, {P.x + 1, Rp.y + 1}, EVENT_TOL) &&
               detail::passes_through(segs, {Rp.x - 1, P.y - 1}, EVENT_TOL);
    }
    default: return false;
    }
}

namespace detail {

// Skips events whose window has no interior vertex, and events reaching the end of T (the earliest
// start reaching the end is already a reach event; later ones are strictly shorter).
inline void emit(EventContext& ctx, std::vector<EventPoint>& out, EventPoint ev)
{
    ev.pos = ctx.T().normalize(ev.pos);
    if (ev.kind != EventKind::vertex && ev.kind != EventKind::reach) {
        TrajPos r = ctx.reach(ev.pos);
        if (r == ctx.T().end()) return;
        std::size_t last_inner = r.frac > 0 ? r.edge : r.edge - 1;
        if (ev.pos.edge + 1 > last_inner) return;
    }
    if (validate_event(ctx, ev)) out.push_back(ev);
}

// Piece of one edge between consecutive refined vertices.
struct Interval {
    TrajPos a, b;
};
inline std::vector<Interval> intervals(std::span<const TrajPos> base)
{
    std::vector<Interval> out;
    for (std::size_t k = 0; k + 1 < base.size(); ++k) {
        TrajPos a = base[k], b = base[k + 1];
        if (b.frac == 0 && b.edge > 0) b = {b.edge - 1, 1.0};
        if (a.edge != b.edge || b.frac <= a.frac) continue;
        out.push_back({a, b});
    }
    return out;
}

// Solve point-on-interval with coordinate axis == c.
inline std::optional<TrajPos> on_interval(const Trajectory& R, const Interval& I, int axis, double c)
{
    auto t = solve_coord(R.edge(I.a.edge), axis, c);
    if (!t || *t < I.a.frac || *t > I.b.frac) return std::nullopt;
    return TrajPos{I.a.edge, *t};
}

inline std::optional<Point> intersect(const Segment& s1, const Segment& s2, double* t1 = nullptr, double* t2 = nullptr)
{
    const Point A = s1.b - s1.a, B = s2.a - s2.b, w = s2.a - s1.a;
    const double det = cross(A, B);
    if (det == 0) return std::nullopt;
    double s = cross(w, B) / det, t = cross(A, w) / det;
    if (s < 0 || s > 1 || t < 0 || t > 1) return std::nullopt;
    if (t1) *t1 = s;
    if (t2) *t2 = t;
    return s1.at(s);
}

} // namespace detail

// Events of one kind in one direction. Envelope and special-configuration events need the refined
// vertex set they are defined over (sorted, containing every vertex of T).
inline std::vector<EventPoint> compute_events(EventContext& ctx, EventKind kind, Dir d, std::span<const TrajPos> base = {},
                                              bool mirrored = false)
{
    const Trajectory& T = ctx.T();
    const Trajectory& R = ctx.frame(d, mirrored);
    const std::size_t n = T.num_vertices(), m = T.num_edges();
    std::vector<EventPoint> out;
    auto put = [&](EventPoint ev) {
        ev.mirrored = mirrored;
        detail::emit(ctx, out, ev);
    };

    switch (kind) {
    case EventKind::vertex:
        for (std::size_t i = 0; i < n; ++i) out.push_back({T.at_vertex(i), kind, d});
        return out;

    case EventKind::reach:
        // direction-free; the earliest start whose reach passes each vertex
        for (std::size_t j = 1; j < n; ++j) {
            TrajPos v = detail::vertex_before(j);
            TrajPos p = reverse_reach_point(ctx.index(), v, 2, ctx.eps());
            if (p == T.start()) continue;
            put({p, kind, d, T.vertex(j), v});
        }
        return out;

    case EventKind::bounding_box:
    case EventKind::bridge:
        for (std::size_t e = 0; e < m; ++e) {
            std::size_t m0 = detail::last_vertex(ctx.reach(T.at_vertex(e)));
            std::size_t m1 = detail::last_vertex(ctx.reach(T.at_vertex(e + 1)));
            const detail::Interval I{{e, 0.0}, {e, 1.0}};
            for (std::size_t last = std::max(m0, e + 1); last <= m1; ++last) {
                detail::Window w{e + 1, last};
                if (kind == EventKind::bounding_box) {
                    if (auto p = detail::on_interval(R, I, 1, detail::max_y(R, w))) put({*p, kind, d});
                    continue;
                }
                const double line = detail::min_y(R, w) + 1;
                for (std::size_t f = e; f <= std::min(last, m - 1); ++f) {
                    auto tu = detail::solve_coord(R.edge(f), 1, line);
                    if (!tu) continue;
                    TrajPos u{f, *tu};
                    auto p = detail::on_interval(R, I, 0, R.at(u).x - 1);
                    if (!p || !(*p <= u)) continue;
                    put({*p, kind, d, T.at(u), u});
                }
            }
        }
        return out;

    case EventKind::upper_envelope: {
        for (const auto& I : detail::intervals(base)) {
            const std::size_t e = I.a.edge;
            TrajPos rb = ctx.reach(I.b);
            const std::size_t M = std::min(rb.edge, m - 1);
            const double xlo = std::min(R.at(I.a).x, R.at(I.b).x) + 1, xhi = std::max(R.at(I.a).x, R.at(I.b).x) + 1;
            // candidate u: refined vertices and edge crossings inside the window, one unit right of the interval
            std::vector<TrajPos> us;
            auto lo = std::lower_bound(base.begin(), base.end(), I.a);
            for (auto it = lo; it != base.end() && *it <= rb; ++it) us.push_back(*it);
            for (std::size_t f = e; f <= M; ++f)
                for (std::size_t g = f + 2; g <= M; ++g) {
                    double tf, tg;
                    if (detail::intersect(R.edge(f), R.edge(g), &tf, &tg)) {
                        us.push_back({f, tf});
                        us.push_back({g, tg});
                    }
                }
            for (TrajPos u : us) {
                double ux = R.at(u).x;
                if (ux < xlo - 1e-12 || ux > xhi + 1e-12) continue;
                auto p = detail::on_interval(R, I, 0, ux - 1);
                if (!p || !(*p <= u)) continue;
                put({*p, kind, d, T.at(u), u});
            }
        }
        return out;
    }

    case EventKind::special_config_1:
    case EventKind::special_config_2:
    case EventKind::special_config_3: {
        for (const auto& I : detail::intervals(base)) {
            const std::size_t e = I.a.edge;
            const Segment S = R.edge(e);
            TrajPos ra = ctx.reach(I.a), rb = ctx.reach(I.b);
            const std::size_t M = std::min(rb.edge, m - 1);
            auto inside = [&](double t) { return t >= I.a.frac && t <= I.b.frac; };
            for (std::size_t q = std::min(ra.edge, m - 1); q <= M; ++q) {
                const Segment Q = R.edge(q);
                if (kind == EventKind::special_config_1) {
                    // p is the top-right corner of H1 and r(p) = p - (1, 1)
                    auto solve = detail::solve_corners(S, Q, CornerPair::TR_BL, 0);
                    if (solve && inside(solve->s)) put({{e, solve->s}, kind, d, T.at({q, solve->t})});
                } else if (kind == EventKind::special_config_2) {
                    // p is the top-left corner of H1 and T passes through p + (1, -1)
                    for (std::size_t f = e; f <= q; ++f) {
                        auto solve = detail::solve_corners(S, R.edge(f), CornerPair::TL_BR, 0);
                        if (solve && inside(solve->s)) put({{e, solve->s}, kind, d, T.at({f, solve->t})});
                    }
                } else {
                    // p = TL of H1 = S(t), r(p) = BR of H2 = Q(s); T passes through (p.x + 1, r.y + 1) and (r.x - 1, p.y - 1)
                    const Point dS = S.b - S.a, dQ = Q.b - Q.a;
                    for (std::size_t f = e; f <= q; ++f)
                        for (std::size_t g = e; g <= q; ++g) {
                            const Segment F = R.edge(f), G = R.edge(g);
                            // line through F: nF . X = cF
                            Point nF{-(F.b.y - F.a.y), F.b.x - F.a.x}, nG{-(G.b.y - G.a.y), G.b.x - G.a.x};
                            double cF = nF.x * F.a.x + nF.y * F.a.y, cG = nG.x * G.a.x + nG.y * G.a.y;
                            // nF.x (S.a.x + t dS.x + 1) + nF.y (Q.a.y + s dQ.y + 1) = cF
                            // nG.x (Q.a.x + s dQ.x - 1) + nG.y (S.a.y + t dS.y - 1) = cG
                            double a11 = nF.x * dS.x, a12 = nF.y * dQ.y, b1 = cF - nF.x * (S.a.x + 1) - nF.y * (Q.a.y + 1);
                            double a21 = nG.y * dS.y, a22 = nG.x * dQ.x, b2 = cG - nG.x * (Q.a.x - 1) - nG.y * (S.a.y - 1);
                            double det = a11 * a22 - a12 * a21;
                            if (std::abs(det) < 1e-15) continue;
                            double t = (b1 * a22 - a12 * b2) / det, s = (a11 * b2 - b1 * a21) / det;
                            if (!inside(t) || s < 0 || s > 1) continue;
                            Point P = S.at(t), Rp = Q.at(s);
                            if (!detail::passes_through(std::span<const Segment>(&F, 1), {P.x + 1, Rp.y + 1}, 1e-9)) continue;
                            if (!detail::passes_through(std::span<const Segment>(&G, 1), {Rp.x - 1, P.y - 1}, 1e-9)) continue;
                            put({{e, t}, kind, d, T.at({q, s})});
                        }
                }
            }
        }
        return out;
    }
    }
    return out;
}

struct CandidateStartSet {
    std::vector<TrajPos> starts;    // sorted, deduplicated
    std::vector<std::uint8_t> stage; // 0 vertex of T, 1..3 first stage that added the point, 4 reversed pass
    std::vector<EventPoint> events;  // every validated event that fed the set

    std::vector<TrajPos> members(int upto) const
    {
        std::vector<TrajPos> out;
        for (std::size_t i = 0; i < starts.size(); ++i)
            if (stage[i] <= upto) out.push_back(starts[i]);
        return out;
    }
};

namespace detail {

// Adds points to the set; vertices always survive, other points within EPS_REACH of a kept one merge into it.
inline void merge_starts(const Trajectory& T, CandidateStartSet& cs, std::span<const EventPoint> evs, std::uint8_t stage)
{
    std::vector<std::pair<TrajPos, std::uint8_t>> all;
    for (std::size_t i = 0; i < cs.starts.size(); ++i) all.push_back({cs.starts[i], cs.stage[i]});
    for (const auto& e : evs) all.push_back({T.normalize(e.pos), e.kind == EventKind::vertex ? std::uint8_t{0} : stage});
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.first.param() != b.first.param()) return a.first.param() < b.first.param();
        return a.second < b.second;
    });
    cs.starts.clear();
    cs.stage.clear();
    for (const auto& [p, s] : all) {
        if (!cs.starts.empty() && p.param() - cs.starts.back().param() <= EPS_REACH) {
            if (s == 0 && cs.stage.back() != 0) {
                cs.starts.back() = p;
                cs.stage.back() = 0;
            } else {
                cs.stage.back() = std::min(cs.stage.back(), s);
            }
            continue;
        }
        cs.starts.push_back(p);
        cs.stage.push_back(s);
    }
}

} // namespace detail

// T1: vertex, reach, bounding-box and bridge events; T2 adds envelope events of T1; T3 adds special
// configuration events of T2.
inline CandidateStartSet build_candidate_starts(EventContext& ctx)
{
    const Trajectory& T = ctx.T();
    CandidateStartSet cs;
    std::vector<EventPoint> stage1 = compute_events(ctx, EventKind::vertex, Dir::up);
    auto add = [](std::vector<EventPoint>& dst, std::vector<EventPoint> src) { dst.insert(dst.end(), src.begin(), src.end()); };
    add(stage1, compute_events(ctx, EventKind::reach, Dir::up));
    for (Dir d : all_dirs) {
        add(stage1, compute_events(ctx, EventKind::bounding_box, d));
        for (bool mir : {false, true}) add(stage1, compute_events(ctx, EventKind::bridge, d, {}, mir));
    }
    detail::merge_starts(T, cs, stage1, 1);

    std::vector<EventPoint> stage2;
    const auto t1 = cs.starts;
    for (Dir d : all_dirs)
        for (bool mir : {false, true}) add(stage2, compute_events(ctx, EventKind::upper_envelope, d, t1, mir));
    detail::merge_starts(T, cs, stage2, 2);

    std::vector<EventPoint> stage3;
    const auto t2 = cs.starts;
    for (Dir d : all_dirs)
        for (bool mir : {false, true})
            for (EventKind k : {EventKind::special_config_1, EventKind::special_config_2, EventKind::special_config_3})
                add(stage3, compute_events(ctx, k, d, t2, mir));
    detail::merge_starts(T, cs, stage3, 3);

    cs.events = std::move(stage1);
    add(cs.events, std::move(stage2));
    add(cs.events, std::move(stage3));
    return cs;
}

// Stage 4: the same construction on the reversed trajectory yields candidate end points; each is mapped
// to the earliest start that reaches it. Covers optima whose end, not start, sits in a square corner.
inline void add_reversed_candidates(const TrajIndex& idx, CandidateStartSet& cs, double eps = eps_geom())
{
    const Trajectory& T = idx.trajectory();
    std::vector<Point> rv(T.vertices().rbegin(), T.vertices().rend());
    TrajIndex ridx{Trajectory(rv)};
    EventContext rctx(ridx, eps);
    auto rcs = build_candidate_starts(rctx);
    std::vector<EventPoint> mapped;
    for (TrajPos q : rcs.starts) {
        TrajPos end = T.normalize(detail::reverse_pos(T.num_edges(), q));
        TrajPos p = reverse_reach_point(idx, end, 2, eps);
        if (p == T.start()) continue;
        mapped.push_back({p, EventKind::reach, Dir::up, T.at(end), end});
    }
    detail::merge_starts(T, cs, mapped, 4);
}

// Offset, in edge parameter, at which each candidate start is evaluated a second time.
inline constexpr double START_NUDGE = 10 * EPS_REACH;

struct Longest2Result {
    TrajPos start, end;
    Covering witness;
    double length = 0;
    std::size_t candidates = 0;
};

inline Longest2Result longest_2coverable(const TrajIndex& idx, double eps = eps_geom())
{
    const Trajectory& T = idx.trajectory();
    EventContext ctx(idx, eps);
    auto cs = build_candidate_starts(ctx);
    add_reversed_candidates(idx, cs, eps);
    Longest2Result best;
    best.length = -1;
    auto consider = [&](TrajPos p) {
        TrajPos r = ctx.reach(p);
        double len = T.arc(r) - T.arc(p);
        if (detail::better(len, p, best.length, best.start, T)) {
            best.start = p;
            best.end = r;
            best.length = len;
        }
    };
    for (TrajPos p : cs.starts) {
        consider(p);
        // Where the reach jumps, the optimum is only approached from the right and a computed
        // event can sit on the wrong side of the jump.
        if (p.frac + START_NUDGE <= 1) consider({p.edge, p.frac + START_NUDGE});
        else if (p.edge + 1 < T.num_edges()) consider({p.edge + 1, START_NUDGE});
    }
    best.candidates = cs.starts.size();
    auto w = is_2coverable(idx, best.start, best.end, eps);
    if (!w || !verify_covering(T.extract(best.start, best.end), *w, eps))
        throw std::logic_error("longest_2coverable: witness does not verify");
    best.witness = *w;
    return best;
}

inline Longest2Result longest_2coverable(const Trajectory& T, double eps = eps_geom())
{
    TrajIndex idx(T);
    return longest_2coverable(idx, eps);
}

} // namespace segcover
