#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geom.hpp"

namespace segcover {

inline constexpr double PWL_INF = std::numeric_limits<double>::infinity();

// Linear from (t0, v0) to (t1, v1). An infinite t0 or t1 is only allowed when v0 == v1.
struct Piece {
    double t0, t1, v0, v1;

    double at(double t) const
    {
        if (v0 == v1) return v0;
        if (t <= t0) return v0;
        if (t >= t1) return v1;
        return v0 + (t - t0) * ((v1 - v0) / (t1 - t0));
    }
    bool constant() const { return v0 == v1; }
    bool covers(double t) const { return t >= t0 && t <= t1; }
    Piece restrict(double lo, double hi) const { return {lo, hi, at(lo), at(hi)}; }
};

// Sorted pieces with disjoint interiors. Gaps are undefined regions; adjacent pieces
// may disagree at a shared t (a jump).
class PiecewiseLinearFn {
public:
    std::vector<Piece> pieces;

    PiecewiseLinearFn() = default;
    explicit PiecewiseLinearFn(std::vector<Piece> p) : pieces(std::move(p)) {}

    static PiecewiseLinearFn constant(double v, double lo = -PWL_INF, double hi = PWL_INF)
    {
        return PiecewiseLinearFn({{lo, hi, v, v}});
    }
    static PiecewiseLinearFn linear(double t0, double t1, double v0, double v1)
    {
        return PiecewiseLinearFn({{t0, t1, v0, v1}});
    }

    bool empty() const { return pieces.empty(); }
    std::size_t size() const { return pieces.size(); }
    double domain_lo() const { return pieces.empty() ? PWL_INF : pieces.front().t0; }
    double domain_hi() const { return pieces.empty() ? -PWL_INF : pieces.back().t1; }

    // Value of the first piece containing t (left limit at a jump).
    std::optional<double> operator()(double t) const
    {
        auto it = first_covering(t);
        if (it == pieces.end()) return std::nullopt;
        return it->at(t);
    }
    std::optional<double> eval_min(double t) const { return eval_join(t, true); }
    std::optional<double> eval_max(double t) const { return eval_join(t, false); }

    std::vector<double> breakpoints() const
    {
        std::vector<double> out;
        for (const auto& p : pieces) {
            if (std::isfinite(p.t0) && (out.empty() || out.back() != p.t0)) out.push_back(p.t0);
            if (std::isfinite(p.t1)) out.push_back(p.t1);
        }
        return out;
    }

    // JSON array of [t, v] breakpoints; null separates pieces that do not join continuously.
    std::string dump() const
    {
        std::ostringstream os;
        os.precision(12);
        auto num = [&](double v) {
            if (std::isinf(v)) os << (v > 0 ? "\"inf\"" : "\"-inf\"");
            else os << v;
        };
        os << '[';
        bool first = true;
        const Piece* prev = nullptr;
        for (const auto& p : pieces) {
            bool joined = prev && prev->t1 == p.t0 && prev->v1 == p.v0;
            if (!joined) {
                if (!first) os << ",null,";
                os << '[';
                num(p.t0);
                os << ',';
                num(p.v0);
                os << ']';
                first = false;
            }
            os << ",[";
            num(p.t1);
            os << ',';
            num(p.v1);
            os << ']';
            prev = &p;
        }
        os << ']';
        return os.str();
    }

private:
    std::vector<Piece>::const_iterator first_covering(double t) const
    {
        auto it = std::lower_bound(pieces.begin(), pieces.end(), t, [](const Piece& p, double v) { return p.t1 < v; });
        if (it != pieces.end() && it->covers(t)) return it;
        return pieces.end();
    }
    std::optional<double> eval_join(double t, bool take_min) const
    {
        auto it = first_covering(t);
        if (it == pieces.end()) return std::nullopt;
        double v = it->at(t);
        for (++it; it != pieces.end() && it->covers(t); ++it) v = take_min ? std::min(v, it->at(t)) : std::max(v, it->at(t));
        return v;
    }
};

namespace detail {

inline constexpr double PWL_SNAP = 1e-12;

inline bool collinear_join(const Piece& p, const Piece& q)
{
    if (q.t0 - p.t1 > PWL_SNAP * std::max(1.0, std::abs(p.t1))) return false;
    double tol = 1e-12 * std::max({1.0, std::abs(p.v1), std::abs(q.v0)});
    if (std::abs(p.v1 - q.v0) > tol) return false;
    if (p.constant() && q.constant()) return true;
    if (!std::isfinite(p.t0) || !std::isfinite(q.t1)) return false;
    // extend p to q.t1 and compare
    double sp = (p.v1 - p.v0) / (p.t1 - p.t0);
    double sq = (q.v1 - q.v0) / (q.t1 - q.t0);
    double scale = std::max({1.0, std::abs(sp), std::abs(sq)});
    return std::abs(sp - sq) <= 1e-10 * scale;
}

inline void canonicalize(std::vector<Piece>& ps)
{
    std::vector<Piece> out;
    out.reserve(ps.size());
    for (const auto& p : ps) {
        if (!(p.t1 > p.t0)) continue;
        if (!out.empty() && collinear_join(out.back(), p)) {
            Piece& b = out.back();
            if (b.constant() && p.constant()) b.t1 = p.t1;
            else b = {b.t0, p.t1, b.v0, p.v1};
            continue;
        }
        out.push_back(p);
    }
    ps.swap(out);
}

template <class Pick>
PiecewiseLinearFn combine(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g, Pick pick_first)
{
    std::vector<double> ts;
    ts.reserve(2 * (f.size() + g.size()));
    for (const auto* h : {&f, &g})
        for (const auto& p : h->pieces) {
            ts.push_back(p.t0);
            ts.push_back(p.t1);
        }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    std::vector<Piece> out;
    out.reserve(ts.size() + 8);
    std::size_t i = 0, j = 0;
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        double lo = ts[k], hi = ts[k + 1];
        if (std::isfinite(lo) && std::isfinite(hi) && hi - lo <= PWL_SNAP * std::max(1.0, std::abs(lo))) continue;
        while (i < f.size() && f.pieces[i].t1 <= lo) ++i;
        while (j < g.size() && g.pieces[j].t1 <= lo) ++j;
        const Piece* pf = (i < f.size() && f.pieces[i].t0 <= lo) ? &f.pieces[i] : nullptr;
        const Piece* pg = (j < g.size() && g.pieces[j].t0 <= lo) ? &g.pieces[j] : nullptr;
        if (!pf && !pg) continue;
        if (!pg) { out.push_back(pf->restrict(lo, hi)); continue; }
        if (!pf) { out.push_back(pg->restrict(lo, hi)); continue; }
        Piece a = pf->restrict(lo, hi), b = pg->restrict(lo, hi);
        double d0 = a.v0 - b.v0, d1 = a.v1 - b.v1;
        if (std::isfinite(lo) && std::isfinite(hi) && ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0))) {
            double tc = lo + (hi - lo) * (d0 / (d0 - d1));
            double snap = PWL_SNAP * std::max(1.0, std::abs(tc));
            if (tc - lo > snap && hi - tc > snap) {
                Piece a0 = pf->restrict(lo, tc), b0 = pg->restrict(lo, tc);
                Piece a1 = pf->restrict(tc, hi), b1 = pg->restrict(tc, hi);
                double vc = 0.5 * (a0.v1 + b0.v1);
                Piece l = pick_first(a0.v0, b0.v0) ? a0 : b0;
                Piece r = pick_first(a1.v1, b1.v1) ? a1 : b1;
                l.v1 = vc;
                r.v0 = vc;
                out.push_back(l);
                out.push_back(r);
                continue;
            }
        }
        // no interior crossing: decide by the larger endpoint gap
        double key = std::abs(d0) >= std::abs(d1) ? d0 : d1;
        bool first = key == 0 ? true : pick_first(key, 0.0);
        out.push_back(first ? a : b);
    }
    canonicalize(out);
    return PiecewiseLinearFn(std::move(out));
}

} // namespace detail

// Undefined behaves as +inf for min and -inf for max.
inline PiecewiseLinearFn pwl_min(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g)
{
    return detail::combine(f, g, [](double a, double b) { return a <= b; });
}

inline PiecewiseLinearFn pwl_max(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g)
{
    return detail::combine(f, g, [](double a, double b) { return a >= b; });
}

inline PiecewiseLinearFn pwl_neg(const PiecewiseLinearFn& f)
{
    PiecewiseLinearFn o = f;
    for (auto& p : o.pieces) {
        p.v0 = -p.v0;
        p.v1 = -p.v1;
    }
    return o;
}

inline PiecewiseLinearFn pwl_add_const(const PiecewiseLinearFn& f, double c)
{
    PiecewiseLinearFn o = f;
    for (auto& p : o.pieces) {
        p.v0 += c;
        p.v1 += c;
    }
    return o;
}

// x -> f(x - dt)
inline PiecewiseLinearFn pwl_shift(const PiecewiseLinearFn& f, double dt)
{
    PiecewiseLinearFn o = f;
    for (auto& p : o.pieces) {
        p.t0 += dt;
        p.t1 += dt;
    }
    return o;
}

// x -> f(-x)
inline PiecewiseLinearFn pwl_reflect(const PiecewiseLinearFn& f)
{
    std::vector<Piece> ps;
    ps.reserve(f.size());
    for (auto it = f.pieces.rbegin(); it != f.pieces.rend(); ++it) ps.push_back({-it->t1, -it->t0, it->v1, it->v0});
    return PiecewiseLinearFn(std::move(ps));
}

// Restricts the domain to [lo, hi].
inline PiecewiseLinearFn pwl_clip(const PiecewiseLinearFn& f, double lo, double hi)
{
    std::vector<Piece> ps;
    for (const auto& p : f.pieces) {
        double a = std::max(p.t0, lo), b = std::min(p.t1, hi);
        if (b > a) ps.push_back(p.restrict(a, b));
        else if (b == a && lo == hi) ps.push_back({a, b, p.at(a), p.at(a)});
    }
    return PiecewiseLinearFn(std::move(ps));
}

inline PiecewiseLinearFn pwl_sub(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g)
{
    // defined where both are defined
    std::vector<double> ts;
    for (const auto* h : {&f, &g})
        for (const auto& p : h->pieces) {
            ts.push_back(p.t0);
            ts.push_back(p.t1);
        }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    std::vector<Piece> out;
    std::size_t i = 0, j = 0;
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        double lo = ts[k], hi = ts[k + 1];
        while (i < f.size() && f.pieces[i].t1 <= lo) ++i;
        while (j < g.size() && g.pieces[j].t1 <= lo) ++j;
        if (i >= f.size() || j >= g.size() || f.pieces[i].t0 > lo || g.pieces[j].t0 > lo) continue;
        Piece a = f.pieces[i].restrict(lo, hi), b = g.pieces[j].restrict(lo, hi);
        out.push_back({lo, hi, a.v0 - b.v0, a.v1 - b.v1});
    }
    detail::canonicalize(out);
    return PiecewiseLinearFn(std::move(out));
}

namespace detail {

// Composes f with a single linear piece of g; works for either slope sign.
inline void compose_piece(const PiecewiseLinearFn& f, const Piece& g, bool strict, std::vector<Piece>& out)
{
    if (g.constant()) {
        auto v = f(g.v0);
        if (!v) {
            if (strict) throw std::invalid_argument("pwl_compose: range of g outside domain of f");
            return;
        }
        out.push_back({g.t0, g.t1, *v, *v});
        return;
    }
    double lo = std::min(g.v0, g.v1), hi = std::max(g.v0, g.v1);
    auto inv = [&](double v) {
        if (v == g.v0) return g.t0;
        if (v == g.v1) return g.t1;
        return g.t0 + (v - g.v0) / (g.v1 - g.v0) * (g.t1 - g.t0);
    };
    std::vector<Piece> local;
    double covered = lo;
    auto it = std::lower_bound(f.pieces.begin(), f.pieces.end(), lo, [](const Piece& p, double v) { return p.t1 < v; });
    for (; it != f.pieces.end() && it->t0 <= hi; ++it) {
        double a = std::max(it->t0, lo), b = std::min(it->t1, hi);
        if (b <= a) continue;
        if (strict && a > covered + PWL_SNAP * std::max(1.0, std::abs(a)))
            throw std::invalid_argument("pwl_compose: range of g outside domain of f");
        double ta = inv(a), tb = inv(b);
        double fa = it->at(a), fb = it->at(b);
        if (ta <= tb) local.push_back({ta, tb, fa, fb});
        else local.push_back({tb, ta, fb, fa});
        covered = std::max(covered, b);
    }
    if (strict && covered < hi - PWL_SNAP * std::max(1.0, std::abs(hi)))
        throw std::invalid_argument("pwl_compose: range of g outside domain of f");
    if (g.v1 < g.v0) std::reverse(local.begin(), local.end());
    out.insert(out.end(), local.begin(), local.end());
}

} // namespace detail

// x -> f(g(x)). g must be non-decreasing and its range must lie in the domain of f.
inline PiecewiseLinearFn pwl_compose(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g)
{
    const double tol = 1e-12;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Piece& p = g.pieces[i];
        if (p.v1 < p.v0 - tol * std::max(1.0, std::abs(p.v0))) throw std::invalid_argument("pwl_compose: g is not monotone");
        if (i > 0 && p.v0 < g.pieces[i - 1].v1 - tol * std::max(1.0, std::abs(p.v0)))
            throw std::invalid_argument("pwl_compose: g is not monotone");
    }
    std::vector<Piece> out;
    for (const auto& p : g.pieces) detail::compose_piece(f, p, true, out);
    detail::canonicalize(out);
    return PiecewiseLinearFn(std::move(out));
}

// Piece-by-piece composition for arbitrary g; undefined wherever f is undefined at g(x).
inline PiecewiseLinearFn pwl_compose_any(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g)
{
    std::vector<Piece> out;
    for (const auto& p : g.pieces) detail::compose_piece(f, p, false, out);
    detail::canonicalize(out);
    return PiecewiseLinearFn(std::move(out));
}

// Skyline: f(l) = leftmost x of the segment on or above the horizontal line at height l.
inline PiecewiseLinearFn segment_skyline(const Segment& s)
{
    Point p = s.a, q = s.b;
    if (q.x < p.x || (q.x == p.x && q.y > p.y)) std::swap(p, q);
    if (p.x == q.x) return PiecewiseLinearFn::constant(p.x, -PWL_INF, std::max(p.y, q.y));
    if (q.y > p.y) return PiecewiseLinearFn({{-PWL_INF, p.y, p.x, p.x}, {p.y, q.y, p.x, q.x}});
    return PiecewiseLinearFn::constant(p.x, -PWL_INF, p.y);
}

namespace detail {

template <class Op>
PiecewiseLinearFn reduce_dc(std::vector<PiecewiseLinearFn>& fs, std::size_t lo, std::size_t hi, Op op)
{
    if (hi - lo == 1) return std::move(fs[lo]);
    std::size_t mid = lo + (hi - lo) / 2;
    auto a = reduce_dc(fs, lo, mid, op);
    auto b = reduce_dc(fs, mid, hi, op);
    return op(a, b);
}

} // namespace detail

// Leftwards envelope of skylines.
inline PiecewiseLinearFn merge_skylines(std::vector<PiecewiseLinearFn> sk)
{
    if (sk.empty()) return {};
    return detail::reduce_dc(sk, 0, sk.size(), [](const auto& a, const auto& b) { return pwl_min(a, b); });
}

inline PiecewiseLinearFn skyline(std::span<const Segment> segs)
{
    std::vector<PiecewiseLinearFn> sk;
    sk.reserve(segs.size());
    for (const auto& s : segs) sk.push_back(segment_skyline(s));
    return merge_skylines(std::move(sk));
}

inline std::optional<PiecewiseLinearFn> segment_graph(const Segment& s)
{
    Point p = s.a, q = s.b;
    if (p.x == q.x) return std::nullopt;
    if (q.x < p.x) std::swap(p, q);
    return PiecewiseLinearFn::linear(p.x, q.x, p.y, q.y);
}

// Upper envelope over x. Vertical segments have no extent in x and are skipped;
// callers that need them at an exact x handle them separately.
inline PiecewiseLinearFn upper_envelope(std::span<const Segment> segs)
{
    std::vector<PiecewiseLinearFn> fs;
    for (const auto& s : segs)
        if (auto g = segment_graph(s)) fs.push_back(std::move(*g));
    if (fs.empty()) return {};
    return detail::reduce_dc(fs, 0, fs.size(), [](const auto& a, const auto& b) { return pwl_max(a, b); });
}

} // namespace segcover
