#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdio>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "geom.hpp"

namespace segcover {

// Position on a trajectory: edge index and fraction along that edge.
struct TrajPos {
    std::size_t edge = 0;
    double frac = 0;

    double param() const { return static_cast<double>(edge) + frac; }
    friend auto operator<=>(const TrajPos& a, const TrajPos& b)
    {
        if (auto c = a.edge <=> b.edge; c != 0) return c == std::strong_ordering::less ? std::partial_ordering::less : std::partial_ordering::greater;
        return a.frac <=> b.frac;
    }
    friend bool operator==(const TrajPos&, const TrajPos&) = default;
};

inline std::string to_string(const TrajPos& p)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%zu:%.12g", p.edge, p.frac);
    return buf;
}

class Trajectory {
public:
    Trajectory() = default;

    // Drops exactly-duplicate consecutive vertices (zero-length edges).
    explicit Trajectory(const std::vector<Point>& pts)
    {
        for (auto p : pts) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw std::invalid_argument("non-finite coordinate");
            if (!v_.empty() && v_.back() == p) {
                ++dropped_;
                continue;
            }
            v_.push_back(p);
        }
        if (v_.size() < 2) throw std::invalid_argument("trajectory needs >=2 vertices");
        cum_.assign(v_.size(), 0.0);
        for (std::size_t i = 1; i < v_.size(); ++i) cum_[i] = cum_[i - 1] + dist(v_[i - 1], v_[i]);
    }

    std::size_t num_vertices() const { return v_.size(); }
    std::size_t num_edges() const { return v_.size() - 1; }
    std::size_t dropped() const { return dropped_; }
    const std::vector<Point>& vertices() const { return v_; }
    Point vertex(std::size_t i) const { return v_[i]; }
    Segment edge(std::size_t i) const { return {v_[i], v_[i + 1]}; }
    double length() const { return cum_.back(); }
    double edge_length(std::size_t i) const { return cum_[i + 1] - cum_[i]; }

    TrajPos start() const { return {0, 0.0}; }
    TrajPos end() const { return {num_edges() - 1, 1.0}; }
    TrajPos at_vertex(std::size_t i) const { return i + 1 < v_.size() ? TrajPos{i, 0.0} : end(); }

    Point at(const TrajPos& p) const { return lerp(v_[p.edge], v_[p.edge + 1], p.frac); }
    double arc(const TrajPos& p) const { return cum_[p.edge] + p.frac * edge_length(p.edge); }
    double arc_vertex(std::size_t i) const { return cum_[i]; }

    TrajPos at_arc(double s) const
    {
        if (s <= 0) return start();
        if (s >= length()) return end();
        auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
        std::size_t e = static_cast<std::size_t>(it - cum_.begin()) - 1;
        e = std::min(e, num_edges() - 1);
        double len = edge_length(e);
        return {e, len > 0 ? std::clamp((s - cum_[e]) / len, 0.0, 1.0) : 0.0};
    }

    // Moves (e, 1) to (e+1, 0) when possible, so equal points compare equal.
    TrajPos normalize(TrajPos p) const
    {
        if (p.frac >= 1 && p.edge + 1 < num_edges()) return {p.edge + 1, 0.0};
        return p;
    }

    // Subsegments of T[a, b].
    std::vector<Segment> extract(TrajPos a, TrajPos b) const
    {
        if (b < a) throw std::invalid_argument("extract: a > b");
        std::vector<Segment> out;
        if (a.edge == b.edge) {
            out.push_back({at(a), at(b)});
            return out;
        }
        out.push_back({at(a), v_[a.edge + 1]});
        for (std::size_t e = a.edge + 1; e < b.edge; ++e) out.push_back(edge(e));
        out.push_back({v_[b.edge], at(b)});
        return out;
    }

private:
    std::vector<Point> v_;
    std::vector<double> cum_;
    std::size_t dropped_ = 0;
};

inline Trajectory transform_cardinal(const Trajectory& T, Dir d)
{
    return Trajectory(transform_cardinal(std::span<const Point>(T.vertices()), d));
}

} // namespace segcover
