#pragma once

// 2- and 3-coverability of a query subtrajectory T[a, b] using the index.
//
// A candidate covering is checked without touching the edges: the complement of the
// (eps-inflated) squares inside the bounding box is split into grid cells, and the curve
// avoids it iff (1) both endpoints are covered, (2) no vertex lies in an uncovered cell and
// (3) no edge crosses a boundary piece between a covered and an uncovered cell. For (3) a
// piece is tested with one envelope query along its line, in a direction in which the line
// never runs through the interior of the union. A piece with no such direction needs no
// query: an edge entering through it must leave through another piece, or turn at a vertex
// inside, or end inside. At most one such piece may exist per complement component.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cover.hpp"
#include "geom.hpp"
#include "traj_index.hpp"

namespace segcover {

namespace detail {

class UnionCheck {
public:
    UnionCheck(const TrajIndex& idx, TrajPos a, TrajPos b, const Rect& bb, std::span<const UnitSquare> squares, double eps)
        : idx_(idx), a_(a), b_(b), bb_(bb), eps_(eps)
    {
        for (const auto& q : squares) rects_.push_back(q.rect().inflated(eps));
        xs_ = {bb.x_min, bb.x_max};
        ys_ = {bb.y_min, bb.y_max};
        for (const auto& r : rects_) {
            for (double x : {r.x_min, r.x_max})
                if (x > bb.x_min && x < bb.x_max) xs_.push_back(x);
            for (double y : {r.y_min, r.y_max})
                if (y > bb.y_min && y < bb.y_max) ys_.push_back(y);
        }
        std::sort(xs_.begin(), xs_.end());
        xs_.erase(std::unique(xs_.begin(), xs_.end()), xs_.end());
        std::sort(ys_.begin(), ys_.end());
        ys_.erase(std::unique(ys_.begin(), ys_.end()), ys_.end());
        nx_ = xs_.size() > 1 ? xs_.size() - 1 : 0;
        ny_ = ys_.size() > 1 ? ys_.size() - 1 : 0;
        cov_.assign(nx_ * ny_, 0);
        for (std::size_t i = 0; i < nx_; ++i)
            for (std::size_t j = 0; j < ny_; ++j) {
                Point c{0.5 * (xs_[i] + xs_[i + 1]), 0.5 * (ys_[j] + ys_[j + 1])};
                cov_[i * ny_ + j] = std::any_of(rects_.begin(), rects_.end(), [&](const Rect& r) { return r.contains(c); });
            }
    }

    bool covers() const
    {
        const auto& T = idx_.trajectory();
        if (!in_union(T.at(a_)) || !in_union(T.at(b_))) return false;
        // a degenerate box (zero width or height) has no cells; endpoints and vertices decide
        if (nx_ == 0 || ny_ == 0) return degenerate_covers();
        if (vertex_in_complement()) return false;
        return !boundary_crossed();
    }

private:
    bool covered(std::size_t i, std::size_t j) const { return cov_[i * ny_ + j]; }

    bool in_union(Point p) const
    {
        return std::any_of(rects_.begin(), rects_.end(), [&](const Rect& r) { return r.contains(p); });
    }

    bool degenerate_covers() const
    {
        // the curve lies on a segment; walk its covered sub-intervals
        Segment s{{bb_.x_min, bb_.y_min}, {bb_.x_max, bb_.y_max}};
        std::vector<UnitSquare> sq;
        for (const auto& r : rects_) sq.push_back(UnitSquare::from_rect(r.inflated(-eps_)));
        return segment_covered(s, Covering{sq}, eps_);
    }

    bool vertex_in_complement() const
    {
        constexpr double inf = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < ny_; ++j) {
            std::size_t i = 0;
            while (i < nx_) {
                if (covered(i, j)) {
                    ++i;
                    continue;
                }
                std::size_t k = i;
                while (k + 1 < nx_ && !covered(k + 1, j)) ++k;
                Rect r{i == 0 ? -inf : xs_[i], k + 1 == nx_ ? inf : xs_[k + 1], j == 0 ? -inf : ys_[j],
                       j + 1 == ny_ ? inf : ys_[j + 1]};
                if (idx_.query_extreme_vertex_id(a_, b_, r, Dir::up)) return true;
                i = k + 1;
            }
        }
        return false;
    }

    std::vector<int> components() const
    {
        std::vector<int> comp(nx_ * ny_, -1);
        int next = 0;
        std::vector<std::size_t> stack;
        for (std::size_t s = 0; s < nx_ * ny_; ++s) {
            if (cov_[s] || comp[s] >= 0) continue;
            comp[s] = next;
            stack.push_back(s);
            while (!stack.empty()) {
                std::size_t c = stack.back();
                stack.pop_back();
                std::size_t i = c / ny_, j = c % ny_;
                auto visit = [&](std::size_t ii, std::size_t jj) {
                    std::size_t t = ii * ny_ + jj;
                    if (!cov_[t] && comp[t] < 0) {
                        comp[t] = next;
                        stack.push_back(t);
                    }
                };
                if (i > 0) visit(i - 1, j);
                if (i + 1 < nx_) visit(i + 1, j);
                if (j > 0) visit(i, j - 1);
                if (j + 1 < ny_) visit(i, j + 1);
            }
            ++next;
        }
        return comp;
    }

    bool boundary_crossed() const
    {
        auto comp = components();
        std::vector<int> blind(comp.empty() ? 0 : static_cast<std::size_t>(*std::max_element(comp.begin(), comp.end()) + 1), 0);
        auto note_blind = [&](std::size_t cell) {
            if (++blind[static_cast<std::size_t>(comp[cell])] > 1)
                throw std::logic_error("subtrajectory query: two boundary pieces without a free direction");
        };

        // vertical lines x = xs[i], pieces along rows
        for (std::size_t i = 1; i < nx_; ++i) {
            auto interior = [&](std::size_t j) { return covered(i - 1, j) && covered(i, j); };
            std::size_t j = 0;
            while (j < ny_) {
                bool l = covered(i - 1, j), r = covered(i, j);
                if (l == r) {
                    ++j;
                    continue;
                }
                std::size_t k = j;
                while (k + 1 < ny_ && covered(i - 1, k + 1) == l && covered(i, k + 1) == r) ++k;
                bool up = true, down = true;
                for (std::size_t t = k + 1; t < ny_ && up; ++t) up = !interior(t);
                for (std::size_t t = 0; t < j && down; ++t) down = !interior(t);
                if (up) {
                    auto p = idx_.query_envelope(a_, b_, xs_[i], Dir::up);
                    if (p && p->y > ys_[j]) return true;
                } else if (down) {
                    auto p = idx_.query_envelope(a_, b_, xs_[i], Dir::down);
                    if (p && p->y < ys_[k + 1]) return true;
                } else {
                    note_blind((l ? i : i - 1) * ny_ + j);
                }
                j = k + 1;
            }
        }
        // horizontal lines y = ys[j], pieces along columns
        for (std::size_t j = 1; j < ny_; ++j) {
            auto interior = [&](std::size_t i) { return covered(i, j - 1) && covered(i, j); };
            std::size_t i = 0;
            while (i < nx_) {
                bool lo = covered(i, j - 1), hi = covered(i, j);
                if (lo == hi) {
                    ++i;
                    continue;
                }
                std::size_t k = i;
                while (k + 1 < nx_ && covered(k + 1, j - 1) == lo && covered(k + 1, j) == hi) ++k;
                bool right = true, left = true;
                for (std::size_t t = k + 1; t < nx_ && right; ++t) right = !interior(t);
                for (std::size_t t = 0; t < i && left; ++t) left = !interior(t);
                if (right) {
                    auto p = idx_.query_envelope(a_, b_, ys_[j], Dir::right);
                    if (p && p->x > xs_[i]) return true;
                } else if (left) {
                    auto p = idx_.query_envelope(a_, b_, ys_[j], Dir::left);
                    if (p && p->x < xs_[k + 1]) return true;
                } else {
                    note_blind(i * ny_ + (lo ? j : j - 1));
                }
                i = k + 1;
            }
        }
        return false;
    }

    const TrajIndex& idx_;
    TrajPos a_, b_;
    Rect bb_;
    double eps_;
    std::vector<Rect> rects_;
    std::vector<double> xs_, ys_;
    std::size_t nx_ = 0, ny_ = 0;
    std::vector<char> cov_;
};

inline bool union_covers(const TrajIndex& idx, TrajPos a, TrajPos b, const Rect& bb, std::span<const UnitSquare> squares,
                         double eps)
{
    return UnionCheck(idx, a, b, bb, squares, eps).covers();
}

// Two-square configurations at opposite corners of bb, in the order coverable_2 tries them.
inline std::optional<Covering> two_corner(const TrajIndex& idx, TrajPos a, TrajPos b, const Rect& bb,
                                          std::span<const UnitSquare> fixed, const Rect& sub, double eps)
{
    auto attempt = [&](std::initializer_list<UnitSquare> extra) -> std::optional<Covering> {
        Covering c{{fixed.begin(), fixed.end()}};
        c.squares.insert(c.squares.end(), extra.begin(), extra.end());
        if (union_covers(idx, a, b, bb, c.squares, eps)) return c;
        return std::nullopt;
    };
    if (fits_one(sub, eps)) return attempt({UnitSquare::from_rect(sub)});
    const UnitSquare tl{{sub.x_min, sub.y_max}}, tr{{sub.x_max - 1, sub.y_max}};
    const UnitSquare bl{{sub.x_min, sub.y_min + 1}}, br{{sub.x_max - 1, sub.y_min + 1}};
    if (auto c = attempt({tl, br})) return c;
    return attempt({tr, bl});
}

inline void add_opt(std::optional<Rect>& r, Point p)
{
    if (!r) r = Rect::of(p);
    else r->add(p);
}

// Bounding box of T[a, b] inside the closed half-plane {x >= c} (axis x, ge) and its variants.
inline std::optional<Rect> halfplane_bbox(const TrajIndex& idx, TrajPos a, TrajPos b, const Rect& bb, Axis axis, double c,
                                          bool ge)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    const auto& T = idx.trajectory();
    auto inside = [&](Point p) {
        double v = axis == Axis::x ? p.x : p.y;
        return ge ? v >= c : v <= c;
    };
    std::optional<Rect> r;
    for (Point p : {T.at(a), T.at(b)})
        if (inside(p)) add_opt(r, p);
    Rect half = axis == Axis::x ? (ge ? Rect{c, inf, -inf, inf} : Rect{-inf, c, -inf, inf})
                                : (ge ? Rect{-inf, inf, c, inf} : Rect{-inf, inf, -inf, c});
    for (Dir d : all_dirs)
        if (auto v = idx.query_extreme_vertex(a, b, half, d)) add_opt(r, *v);
    const bool vertical = axis == Axis::x;
    for (Dir d : vertical ? std::array<Dir, 2>{Dir::up, Dir::down} : std::array<Dir, 2>{Dir::left, Dir::right})
        if (auto p = idx.query_envelope(a, b, c, d)) add_opt(r, *p);
    (void)bb;
    return r;
}

} // namespace detail

inline std::optional<Covering> is_2coverable(const TrajIndex& idx, TrajPos a, TrajPos b, double eps = eps_geom())
{
    if (b < a) throw std::invalid_argument("query range: a > b");
    Rect bb = idx.query_bbox(a, b);
    if (detail::fits_one(bb, eps)) return Covering{{UnitSquare::from_rect(bb)}};
    if (bb.width() > 2 + 2 * eps || bb.height() > 2 + 2 * eps) return std::nullopt;
    return detail::two_corner(idx, a, b, bb, {}, bb, eps);
}

inline std::optional<Covering> is_3coverable(const TrajIndex& idx, TrajPos a, TrajPos b, double eps = eps_geom())
{
    if (b < a) throw std::invalid_argument("query range: a > b");
    Rect bb = idx.query_bbox(a, b);
    if (detail::fits_one(bb, eps)) return Covering{{UnitSquare::from_rect(bb)}};
    // thin box: the curve is connected, so its projection on the long axis is one interval
    if (bb.width() <= 1 + eps || bb.height() <= 1 + eps) {
        Axis thin = bb.width() <= 1 + eps ? Axis::x : Axis::y;
        std::vector<Segment> diag{{{bb.x_min, bb.y_min}, {bb.x_max, bb.y_max}}};
        return coverable_1d(diag, thin, 3, eps);
    }
    if (bb.width() > 3 + 3 * eps || bb.height() > 3 + 3 * eps) return std::nullopt;
    for (const auto& q : corner_squares(bb)) {
        Rect r = q.rect().inflated(eps);
        // the rest lies right of / left of the square, or below / above it
        bool right = r.x_min <= bb.x_min, top = r.y_max >= bb.y_max;
        auto hx = detail::halfplane_bbox(idx, a, b, bb, Axis::x, right ? r.x_max : r.x_min, right);
        auto hy = detail::halfplane_bbox(idx, a, b, bb, Axis::y, top ? r.y_min : r.y_max, !top);
        std::optional<Rect> rest = hx;
        if (hy) {
            if (rest) rest->add(*hy);
            else rest = hy;
        }
        if (!rest) return Covering{{q}};
        std::array<UnitSquare, 1> first{q};
        if (auto c = detail::two_corner(idx, a, b, bb, first, *rest, eps)) return c;
    }
    return std::nullopt;
}

} // namespace segcover
