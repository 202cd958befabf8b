#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace segcover {

// Default containment tolerance. SEGCOVER_EPS overrides it for the whole process.
inline constexpr double EPS_GEOM_DEFAULT = 1e-9;

inline double eps_geom()
{
    static const double v = [] {
        if (const char* s = std::getenv("SEGCOVER_EPS")) {
            char* end = nullptr;
            double d = std::strtod(s, &end);
            if (end != s && std::isfinite(d) && d >= 0) return d;
        }
        return EPS_GEOM_DEFAULT;
    }();
    return v;
}

struct Point {
    double x = 0, y = 0;
    friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline double cheb(Point a, Point b) { return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)); }
inline Point lerp(Point a, Point b, double t) { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }

struct Segment {
    Point a, b;
    double length() const { return dist(a, b); }
    Point at(double t) const { return lerp(a, b, t); }
    friend bool operator==(const Segment&, const Segment&) = default;
};

struct Rect {
    double x_min = 0, x_max = 0, y_min = 0, y_max = 0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    bool contains(Point p, double eps = 0) const
    {
        return p.x >= x_min - eps && p.x <= x_max + eps && p.y >= y_min - eps && p.y <= y_max + eps;
    }
    Rect inflated(double d) const { return {x_min - d, x_max + d, y_min - d, y_max + d}; }
    void add(Point p)
    {
        x_min = std::min(x_min, p.x);
        x_max = std::max(x_max, p.x);
        y_min = std::min(y_min, p.y);
        y_max = std::max(y_max, p.y);
    }
    void add(const Rect& r)
    {
        x_min = std::min(x_min, r.x_min);
        x_max = std::max(x_max, r.x_max);
        y_min = std::min(y_min, r.y_min);
        y_max = std::max(y_max, r.y_max);
    }
    static Rect of(Point p) { return {p.x, p.x, p.y, p.y}; }
    friend bool operator==(const Rect&, const Rect&) = default;
};

// Occupies [x, x+1] x [y-1, y] for top_left (x, y).
struct UnitSquare {
    Point top_left;

    Rect rect() const { return {top_left.x, top_left.x + 1.0, top_left.y - 1.0, top_left.y}; }
    bool contains(Point p, double eps = 0) const { return rect().contains(p, eps); }
    static UnitSquare from_rect(const Rect& r) { return {{r.x_min, r.y_max}}; }
    friend bool operator==(const UnitSquare&, const UnitSquare&) = default;
};

struct Covering {
    std::vector<UnitSquare> squares;

    std::size_t size() const { return squares.size(); }
    bool contains(Point p, double eps = 0) const
    {
        return std::any_of(squares.begin(), squares.end(), [&](const UnitSquare& s) { return s.contains(p, eps); });
    }
};

inline Rect bounding_box(std::span<const Segment> segs)
{
    if (segs.empty()) throw std::invalid_argument("empty instance");
    Rect r = Rect::of(segs[0].a);
    for (const auto& s : segs) {
        r.add(s.a);
        r.add(s.b);
    }
    return r;
}

inline Rect bounding_box(std::span<const Point> pts)
{
    if (pts.empty()) throw std::invalid_argument("empty instance");
    Rect r = Rect::of(pts[0]);
    for (auto p : pts) r.add(p);
    return r;
}

// Parameter interval [t0, t1] of seg inside the closed rect (Liang-Barsky).
inline std::optional<std::pair<double, double>> clip_param(const Segment& seg, const Rect& r)
{
    double t0 = 0, t1 = 1;
    const double d[2] = {seg.b.x - seg.a.x, seg.b.y - seg.a.y};
    const double lo[2] = {r.x_min - seg.a.x, r.y_min - seg.a.y};
    const double hi[2] = {r.x_max - seg.a.x, r.y_max - seg.a.y};
    for (int k = 0; k < 2; ++k) {
        if (d[k] == 0) {
            if (lo[k] > 0 || hi[k] < 0) return std::nullopt;
            continue;
        }
        double ta = lo[k] / d[k], tb = hi[k] / d[k];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return std::nullopt;
    }
    return std::pair{t0, t1};
}

struct ClipResult {
    std::optional<Segment> covered;
    std::vector<Segment> uncovered;
};

inline ClipResult clip_segment_to_square(const Segment& seg, const UnitSquare& sq, double eps = eps_geom())
{
    ClipResult out;
    auto iv = clip_param(seg, sq.rect().inflated(eps));
    if (!iv) {
        out.uncovered.push_back(seg);
        return out;
    }
    auto [t0, t1] = *iv;
    out.covered = Segment{seg.at(t0), seg.at(t1)};
    if (t0 > 0) out.uncovered.push_back({seg.a, seg.at(t0)});
    if (t1 < 1) out.uncovered.push_back({seg.at(t1), seg.b});
    return out;
}

inline bool segment_covered(const Segment& seg, const Covering& cov, double eps)
{
    std::vector<std::pair<double, double>> ivs;
    for (const auto& sq : cov.squares)
        if (auto iv = clip_param(seg, sq.rect().inflated(eps))) ivs.push_back(*iv);
    std::sort(ivs.begin(), ivs.end());
    double reach = 0;
    const double slack = 1e-12;
    for (auto [a, b] : ivs) {
        if (a > reach + slack) return false;
        reach = std::max(reach, b);
    }
    return reach >= 1 - slack;
}

inline bool verify_covering(std::span<const Segment> segs, const Covering& cov, double eps = eps_geom())
{
    return std::all_of(segs.begin(), segs.end(), [&](const Segment& s) { return segment_covered(s, cov, eps); });
}

enum class Dir { up, down, left, right };

inline constexpr std::array<Dir, 4> all_dirs{Dir::up, Dir::down, Dir::left, Dir::right};

inline const char* dir_name(Dir d)
{
    switch (d) {
    case Dir::up: return "up";
    case Dir::down: return "down";
    case Dir::left: return "left";
    default: return "right";
    }
}

// Rotation taking direction d onto "up".
inline Point transform_cardinal(Point p, Dir d)
{
    switch (d) {
    case Dir::up: return p;
    case Dir::down: return {-p.x, -p.y};
    case Dir::left: return {p.y, -p.x};
    default: return {-p.y, p.x};
    }
}

inline Point inverse_cardinal(Point p, Dir d)
{
    switch (d) {
    case Dir::up: return p;
    case Dir::down: return {-p.x, -p.y};
    case Dir::left: return {-p.y, p.x};
    default: return {p.y, -p.x};
    }
}

inline Segment transform_cardinal(const Segment& s, Dir d) { return {transform_cardinal(s.a, d), transform_cardinal(s.b, d)}; }
inline Segment inverse_cardinal(const Segment& s, Dir d) { return {inverse_cardinal(s.a, d), inverse_cardinal(s.b, d)}; }

inline std::vector<Point> transform_cardinal(std::span<const Point> pts, Dir d)
{
    std::vector<Point> out;
    out.reserve(pts.size());
    for (auto p : pts) out.push_back(transform_cardinal(p, d));
    return out;
}

inline std::vector<Segment> transform_cardinal(std::span<const Segment> segs, Dir d)
{
    std::vector<Segment> out;
    out.reserve(segs.size());
    for (const auto& s : segs) out.push_back(transform_cardinal(s, d));
    return out;
}

inline Rect transform_cardinal(const Rect& r, Dir d)
{
    Rect o = Rect::of(transform_cardinal(Point{r.x_min, r.y_min}, d));
    o.add(transform_cardinal(Point{r.x_max, r.y_max}, d));
    return o;
}

inline Rect inverse_cardinal(const Rect& r, Dir d)
{
    Rect o = Rect::of(inverse_cardinal(Point{r.x_min, r.y_min}, d));
    o.add(inverse_cardinal(Point{r.x_max, r.y_max}, d));
    return o;
}

inline UnitSquare transform_cardinal(const UnitSquare& s, Dir d) { return UnitSquare::from_rect(transform_cardinal(s.rect(), d)); }
inline UnitSquare inverse_cardinal(const UnitSquare& s, Dir d) { return UnitSquare::from_rect(inverse_cardinal(s.rect(), d)); }

inline Covering inverse_cardinal(const Covering& c, Dir d)
{
    Covering o;
    for (const auto& s : c.squares) o.squares.push_back(inverse_cardinal(s, d));
    return o;
}

} // namespace segcover
