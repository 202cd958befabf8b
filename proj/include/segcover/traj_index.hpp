#pragma once

// Query structures over a trajectory:
//   bbox of any subtrajectory               (segment tree of boxes)
//   extreme crossing with an axis line      (segment tree of directional envelopes)
//   extreme vertex inside a rectangle       (segment tree over vertices, wavelet matrix per node)
// Partial first/last edges are handled directly, outside the trees.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "geom.hpp"
#include "pwl.hpp"
#include "traj.hpp"

namespace segcover {

// A query line for direction d: vertical x = c for up/down, horizontal y = c for left/right.
// After transform_cardinal(., d) the line is vertical at the returned coordinate.
inline double transform_line(double c, Dir d) { return (d == Dir::up || d == Dir::left) ? c : -c; }

// Vertex indices v with a <= v <= b along the trajectory; empty when first > last.
inline std::pair<std::size_t, std::size_t> vertex_range(TrajPos a, TrajPos b)
{
    std::size_t first = a.frac == 0 ? a.edge : a.edge + 1;
    std::size_t last = b.frac >= 1 ? b.edge + 1 : b.edge;
    return {first, last};
}

namespace detail {

// Canonical nodes of a bottom-up segment tree with `size` leaves covering [l, r].
inline void canonical_nodes(std::size_t size, std::size_t l, std::size_t r, std::vector<std::size_t>& out)
{
    out.clear();
    std::size_t lo = l + size, hi = r + size + 1;
    std::vector<std::size_t> right;
    while (lo < hi) {
        if (lo & 1) out.push_back(lo++);
        if (hi & 1) right.push_back(--hi);
        lo >>= 1;
        hi >>= 1;
    }
    out.insert(out.end(), right.rbegin(), right.rend());
}

inline std::size_t leaf_count(std::size_t n) { return std::bit_ceil(std::max<std::size_t>(n, 1)); }

class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : n_(n), words_((n + 63) / 64 + 1, 0) {}

    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void build()
    {
        ranks_.assign(words_.size() + 1, 0);
        for (std::size_t w = 0; w < words_.size(); ++w) ranks_[w + 1] = ranks_[w] + static_cast<std::uint32_t>(std::popcount(words_[w]));
    }
    // ones in [0, i)
    std::size_t rank1(std::size_t i) const
    {
        std::size_t w = i >> 6, b = i & 63;
        std::size_t r = ranks_[w];
        if (b) r += static_cast<std::size_t>(std::popcount(words_[w] & ((std::uint64_t{1} << b) - 1)));
        return r;
    }
    std::size_t rank0(std::size_t i) const { return i - rank1(i); }
    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    std::size_t size() const { return n_; }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
    std::vector<std::uint32_t> ranks_;
};

// Wavelet matrix over values in [0, 2^bits).
class WaveletMatrix {
public:
    WaveletMatrix() = default;
    WaveletMatrix(std::vector<std::uint32_t> vals, int bits) : n_(vals.size()), bits_(bits)
    {
        levels_.resize(bits);
        zeros_.resize(bits);
        std::vector<std::uint32_t> next(vals.size());
        for (int lv = 0; lv < bits; ++lv) {
            int shift = bits - 1 - lv;
            BitVector bv(n_);
            std::size_t z = 0;
            for (std::size_t i = 0; i < n_; ++i)
                if ((vals[i] >> shift) & 1) bv.set(i);
                else ++z;
            bv.build();
            std::size_t zi = 0, oi = z;
            for (std::size_t i = 0; i < n_; ++i) {
                if ((vals[i] >> shift) & 1) next[oi++] = vals[i];
                else next[zi++] = vals[i];
            }
            vals.swap(next);
            levels_[lv] = std::move(bv);
            zeros_[lv] = z;
        }
    }

    // number of values < bound in positions [l, r)
    std::size_t count_less(std::size_t l, std::size_t r, std::uint64_t bound) const
    {
        if (bound >= (std::uint64_t{1} << bits_)) return r - l;
        std::size_t res = 0;
        for (int lv = 0; lv < bits_ && l < r; ++lv) {
            int shift = bits_ - 1 - lv;
            const auto& bv = levels_[lv];
            std::size_t l0 = bv.rank0(l), r0 = bv.rank0(r);
            if ((bound >> shift) & 1) {
                res += r0 - l0;
                l = zeros_[lv] + (l - l0);
                r = zeros_[lv] + (r - r0);
            } else {
                l = l0;
                r = r0;
            }
        }
        return res;
    }

    // k-th smallest (0-based) value in positions [l, r)
    std::uint32_t kth_smallest(std::size_t l, std::size_t r, std::size_t k) const
    {
        std::uint32_t v = 0;
        for (int lv = 0; lv < bits_; ++lv) {
            const auto& bv = levels_[lv];
            std::size_t l0 = bv.rank0(l), r0 = bv.rank0(r);
            std::size_t zc = r0 - l0;
            v <<= 1;
            if (k < zc) {
                l = l0;
                r = r0;
            } else {
                k -= zc;
                v |= 1;
                l = zeros_[lv] + (l - l0);
                r = zeros_[lv] + (r - r0);
            }
        }
        return v;
    }

    // largest value < bound in [l, r), if any
    std::optional<std::uint32_t> max_less(std::size_t l, std::size_t r, std::uint64_t bound) const
    {
        if (l >= r) return std::nullopt;
        std::size_t c = count_less(l, r, bound);
        if (c == 0) return std::nullopt;
        return kth_smallest(l, r, c - 1);
    }

    std::size_t size() const { return n_; }

private:
    std::size_t n_ = 0;
    int bits_ = 0;
    std::vector<BitVector> levels_;
    std::vector<std::size_t> zeros_;
};

// Highest crossing of one segment with the vertical line x = c.
inline std::optional<double> segment_crossing_max(const Segment& s, double c)
{
    double lo = std::min(s.a.x, s.b.x), hi = std::max(s.a.x, s.b.x);
    if (c < lo || c > hi) return std::nullopt;
    if (lo == hi) return std::max(s.a.y, s.b.y);
    if (c == s.a.x) return s.a.y;
    if (c == s.b.x) return s.b.y;
    double t = (c - s.a.x) / (s.b.x - s.a.x);
    return s.a.y + t * (s.b.y - s.a.y);
}

inline std::optional<double> opt_max(std::optional<double> a, std::optional<double> b)
{
    if (!a) return b;
    if (!b) return a;
    return std::max(*a, *b);
}

// Envelopes of one direction (coordinates already transformed so that the direction is "up").
struct EnvelopeTree {
    struct Vertical {
        double x, top;
    };
    std::size_t size = 0;
    std::vector<PiecewiseLinearFn> env;
    std::vector<std::vector<Vertical>> verticals; // sorted by x, max top per x

    void build(const std::vector<Point>& v)
    {
        const std::size_t m = v.size() - 1;
        size = leaf_count(m);
        env.assign(2 * size, {});
        verticals.assign(2 * size, {});
        for (std::size_t e = 0; e < m; ++e) {
            Segment s{v[e], v[e + 1]};
            if (s.a.x == s.b.x) verticals[size + e].push_back({s.a.x, std::max(s.a.y, s.b.y)});
            else env[size + e] = *segment_graph(s);
        }
        for (std::size_t i = size - 1; i >= 1; --i) {
            env[i] = pwl_max(env[2 * i], env[2 * i + 1]);
            const auto &L = verticals[2 * i], &R = verticals[2 * i + 1];
            if (L.empty() && R.empty()) continue;
            auto& out = verticals[i];
            std::merge(L.begin(), L.end(), R.begin(), R.end(), std::back_inserter(out),
                       [](const Vertical& a, const Vertical& b) { return a.x < b.x; });
            std::size_t w = 0;
            for (std::size_t k = 0; k < out.size(); ++k) {
                if (w > 0 && out[w - 1].x == out[k].x) out[w - 1].top = std::max(out[w - 1].top, out[k].top);
                else out[w++] = out[k];
            }
            out.resize(w);
        }
    }

    std::optional<double> node_query(std::size_t node, double c) const
    {
        auto r = env[node].eval_max(c);
        const auto& vs = verticals[node];
        if (!vs.empty()) {
            auto it = std::lower_bound(vs.begin(), vs.end(), c, [](const Vertical& a, double x) { return a.x < x; });
            if (it != vs.end() && it->x == c) r = opt_max(r, it->top);
        }
        return r;
    }
};

// Vertices of one direction; answers the highest vertex in an index range and a rectangle.
struct RangeTree {
    std::size_t size = 0;
    int bits = 1;
    std::vector<std::vector<double>> xs;     // node vertices' x, sorted
    std::vector<WaveletMatrix> wm;           // global y-ranks in the node's x order
    std::vector<std::vector<std::uint32_t>> small; // the same ranks, plain, for nodes below SMALL_NODE
    static constexpr std::size_t SMALL_NODE = 64;
    std::vector<std::uint32_t> rank_to_id;   // global y-rank -> vertex index
    std::vector<double> rank_y;              // y by global rank

    void build(const std::vector<Point>& v)
    {
        const std::size_t n = v.size();
        size = leaf_count(n);
        while ((std::size_t{1} << bits) < n) ++bits;
        rank_to_id.resize(n);
        std::iota(rank_to_id.begin(), rank_to_id.end(), 0u);
        // ties: larger rank = smaller x, then smaller index
        std::sort(rank_to_id.begin(), rank_to_id.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (v[a].y != v[b].y) return v[a].y < v[b].y;
            if (v[a].x != v[b].x) return v[a].x > v[b].x;
            return a > b;
        });
        std::vector<std::uint32_t> rank(n);
        rank_y.resize(n);
        for (std::size_t r = 0; r < n; ++r) {
            rank[rank_to_id[r]] = static_cast<std::uint32_t>(r);
            rank_y[r] = v[rank_to_id[r]].y;
        }
        // node order: vertex ids sorted by x (stable by id), built by merging children
        std::vector<std::vector<std::uint32_t>> ids(2 * size);
        for (std::size_t i = 0; i < n; ++i) ids[size + i] = {static_cast<std::uint32_t>(i)};
        xs.assign(2 * size, {});
        wm.assign(2 * size, {});
        small.assign(2 * size, {});
        auto by_x = [&](std::uint32_t a, std::uint32_t b) { return v[a].x < v[b].x || (v[a].x == v[b].x && a < b); };
        for (std::size_t i = 2 * size - 1; i >= 1; --i) {
            if (i < size) {
                const auto &L = ids[2 * i], &R = ids[2 * i + 1];
                ids[i].reserve(L.size() + R.size());
                std::merge(L.begin(), L.end(), R.begin(), R.end(), std::back_inserter(ids[i]), by_x);
            }
            if (ids[i].empty()) continue;
            std::vector<std::uint32_t> vals;
            vals.reserve(ids[i].size());
            xs[i].reserve(ids[i].size());
            for (auto id : ids[i]) {
                xs[i].push_back(v[id].x);
                vals.push_back(rank[id]);
            }
            if (vals.size() < SMALL_NODE) small[i] = std::move(vals);
            else wm[i] = WaveletMatrix(std::move(vals), bits);
            // children's id lists are no longer needed
            if (i < size) {
                std::vector<std::uint32_t>().swap(ids[2 * i]);
                std::vector<std::uint32_t>().swap(ids[2 * i + 1]);
            }
        }
    }

    // highest vertex with index in [l, r] and inside the closed rect
    std::optional<std::uint32_t> query(std::size_t l, std::size_t r, const Rect& rect, std::vector<std::size_t>& scratch) const
    {
        if (l > r || rect.x_min > rect.x_max || rect.y_min > rect.y_max) return std::nullopt;
        // ranks with y <= y_max
        std::uint64_t bound = static_cast<std::uint64_t>(std::upper_bound(rank_y.begin(), rank_y.end(), rect.y_max) - rank_y.begin());
        std::optional<std::uint32_t> best;
        canonical_nodes(size, l, r, scratch);
        for (auto node : scratch) {
            const auto& x = xs[node];
            std::size_t p = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), rect.x_min) - x.begin());
            std::size_t q = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), rect.x_max) - x.begin());
            std::optional<std::uint32_t> m;
            if (x.size() < SMALL_NODE) {
                for (std::size_t k = p; k < q; ++k)
                    if (small[node][k] < bound && (!m || small[node][k] > *m)) m = small[node][k];
            } else
                m = wm[node].max_less(p, q, bound);
            if (m && (!best || *m > *best)) best = m;
        }
        if (!best || rank_y[*best] < rect.y_min) return std::nullopt;
        return rank_to_id[*best];
    }
};

} // namespace detail

class TrajIndex {
public:
    explicit TrajIndex(Trajectory T) : T_(std::move(T))
    {
        const auto& v = T_.vertices();
        const std::size_t m = T_.num_edges();
        size_ = detail::leaf_count(m);
        box_.assign(2 * size_, Rect{PWL_INF, -PWL_INF, PWL_INF, -PWL_INF});
        for (std::size_t e = 0; e < m; ++e) {
            box_[size_ + e] = Rect::of(v[e]);
            box_[size_ + e].add(v[e + 1]);
        }
        for (std::size_t i = size_ - 1; i >= 1; --i) {
            box_[i] = box_[2 * i];
            box_[i].add(box_[2 * i + 1]);
        }
        for (Dir d : all_dirs) {
            auto tv = transform_cardinal(std::span<const Point>(v), d);
            env_[static_cast<int>(d)].build(tv);
            range_[static_cast<int>(d)].build(tv);
            tverts_[static_cast<int>(d)] = std::move(tv);
        }
    }

    const Trajectory& trajectory() const { return T_; }

    Rect query_bbox(TrajPos a, TrajPos b) const
    {
        check(a, b);
        Point pa = T_.at(a), pb = T_.at(b);
        Rect r = Rect::of(pa);
        r.add(pb);
        if (a.edge == b.edge) return r;
        r.add(T_.vertex(a.edge + 1));
        r.add(T_.vertex(b.edge));
        if (a.edge + 1 < b.edge) {
            std::vector<std::size_t> nodes;
            detail::canonical_nodes(size_, a.edge + 1, b.edge - 1, nodes);
            for (auto n : nodes) r.add(box_[n]);
        }
        return r;
    }

    // Extreme (per d) intersection of T[a, b] with the query line (see transform_line).
    std::optional<Point> query_envelope(TrajPos a, TrajPos b, double line_coord, Dir d) const
    {
        check(a, b);
        const int di = static_cast<int>(d);
        const double c = transform_line(line_coord, d);
        const auto& tv = tverts_[di];
        auto at = [&](TrajPos p) { return lerp(tv[p.edge], tv[p.edge + 1], p.frac); };
        std::optional<double> best;
        if (a.edge == b.edge) {
            best = detail::segment_crossing_max({at(a), at(b)}, c);
        } else {
            best = detail::opt_max(detail::segment_crossing_max({at(a), tv[a.edge + 1]}, c),
                                   detail::segment_crossing_max({tv[b.edge], at(b)}, c));
            if (a.edge + 1 < b.edge) {
                std::vector<std::size_t> nodes;
                detail::canonical_nodes(env_[di].size, a.edge + 1, b.edge - 1, nodes);
                for (auto n : nodes) best = detail::opt_max(best, env_[di].node_query(n, c));
            }
        }
        if (!best) return std::nullopt;
        return inverse_cardinal(Point{c, *best}, d);
    }

    // Extreme (per d) vertex of T[a, b] inside rect; a and b count only when they are vertices.
    std::optional<Point> query_extreme_vertex(TrajPos a, TrajPos b, const Rect& rect, Dir d) const
    {
        auto id = query_extreme_vertex_id(a, b, rect, d);
        if (!id) return std::nullopt;
        return T_.vertex(*id);
    }

    std::optional<std::size_t> query_extreme_vertex_id(TrajPos a, TrajPos b, const Rect& rect, Dir d) const
    {
        check(a, b);
        auto [first, last] = vertex_range(a, b);
        if (first > last) return std::nullopt;
        std::vector<std::size_t> scratch;
        auto id = range_[static_cast<int>(d)].query(first, last, transform_cardinal(rect, d), scratch);
        if (!id) return std::nullopt;
        return *id;
    }

    // Node-level access for instrumented tests.
    std::size_t edge_leaves() const { return size_; }
    const Rect& node_bbox(std::size_t node) const { return box_[node]; }
    const PiecewiseLinearFn& node_envelope(std::size_t node, Dir d) const { return env_[static_cast<int>(d)].env[node]; }

private:
    static void check(TrajPos a, TrajPos b)
    {
        if (b < a) throw std::invalid_argument("query range: a > b");
    }

    Trajectory T_;
    std::size_t size_ = 0;
    std::vector<Rect> box_;
    std::array<std::vector<Point>, 4> tverts_;
    std::array<detail::EnvelopeTree, 4> env_;
    std::array<detail::RangeTree, 4> range_;
};

inline TrajIndex build_index(const Trajectory& T) { return TrajIndex(T); }

} // namespace segcover
