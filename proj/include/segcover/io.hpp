#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "geom.hpp"
#include "traj.hpp"

namespace segcover::io {

using json = nlohmann::json;

enum class ParseError { io, malformed_json, bad_shape, non_finite, too_few_vertices, bad_position };

inline const char* to_string(ParseError e)
{
    switch (e) {
    case ParseError::io: return "io";
    case ParseError::malformed_json: return "malformed_json";
    case ParseError::bad_shape: return "bad_shape";
    case ParseError::non_finite: return "non_finite";
    case ParseError::too_few_vertices: return "too_few_vertices";
    case ParseError::bad_position: return "bad_position";
    }
    return "?";
}

struct InputError : std::runtime_error {
    ParseError code;
    InputError(ParseError c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

struct Instance {
    std::optional<Trajectory> trajectory;
    std::vector<Segment> segments; // the trajectory's edges when a trajectory was given
    std::size_t dropped = 0;       // zero-length edges or segments removed on load
};

// Rounds to 12 significant digits so that dumps are reproducible.
inline double round12(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

inline json to_json(Point p) { return json::array({round12(p.x), round12(p.y)}); }
inline json to_json(const UnitSquare& s) { return to_json(s.top_left); }
inline json to_json(const Covering& c)
{
    json a = json::array();
    for (const auto& s : c.squares) a.push_back(to_json(s));
    return a;
}
inline std::string pos_string(TrajPos p) { return to_string(p); }

inline Point parse_point(const json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InputError(ParseError::bad_shape, "a point must be [x, y]");
    Point p{j[0].get<double>(), j[1].get<double>()};
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InputError(ParseError::non_finite, "non-finite coordinate");
    return p;
}

// A number too large for a double is reported as non-finite.
inline json parse_json(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(ParseError::malformed_json, e.what());
    } catch (const json::out_of_range& e) {
        throw InputError(ParseError::non_finite, e.what());
    }
}

// {"trajectory": [[x, y], ...]} or {"segments": [[[x, y], [x, y]], ...]}.
inline Instance parse_instance(const std::string& text)
{
    json j = parse_json(text);
    Instance inst;
    if (j.is_object() && j.contains("trajectory")) {
        const json& t = j["trajectory"];
        if (!t.is_array()) throw InputError(ParseError::bad_shape, "trajectory must be an array of points");
        std::vector<Point> pts;
        for (const auto& p : t) pts.push_back(parse_point(p));
        std::size_t distinct = 0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (i == 0 || !(pts[i] == pts[i - 1])) ++distinct;
        if (distinct < 2) throw InputError(ParseError::too_few_vertices, "trajectory needs ≥2 vertices");
        inst.trajectory = Trajectory(pts);
        inst.dropped = inst.trajectory->dropped();
        for (std::size_t e = 0; e < inst.trajectory->num_edges(); ++e) inst.segments.push_back(inst.trajectory->edge(e));
        return inst;
    }
    if (j.is_object() && j.contains("segments")) {
        const json& s = j["segments"];
        if (!s.is_array()) throw InputError(ParseError::bad_shape, "segments must be an array");
        for (const auto& seg : s) {
            if (!seg.is_array() || seg.size() != 2) throw InputError(ParseError::bad_shape, "a segment must be [[x, y], [x, y]]");
            inst.segments.push_back({parse_point(seg[0]), parse_point(seg[1])});
        }
        if (inst.segments.empty()) throw InputError(ParseError::bad_shape, "no segments");
        return inst;
    }
    throw InputError(ParseError::bad_shape, "expected a \"trajectory\" or \"segments\" key");
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(ParseError::io, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

inline json trajectory_json(const Trajectory& T)
{
    json a = json::array();
    for (auto p : T.vertices()) a.push_back(to_json(p));
    return json{{"trajectory", a}};
}

inline json segments_json(std::span<const Segment> segs)
{
    json a = json::array();
    for (const auto& s : segs) a.push_back(json::array({to_json(s.a), to_json(s.b)}));
    return json{{"segments", a}};
}

// "edge:frac", e.g. "3:0.25".
inline TrajPos parse_pos(const std::string& s, const Trajectory& T)
{
    auto colon = s.find(':');
    if (colon == std::string::npos) throw InputError(ParseError::bad_position, "position must be E:F, got '" + s + "'");
    try {
        std::size_t used = 0;
        unsigned long e = std::stoul(s.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("edge");
        std::string rest = s.substr(colon + 1);
        double f = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("frac");
        if (e >= T.num_edges() || !(f >= 0 && f <= 1)) throw InputError(ParseError::bad_position, "position out of range: " + s);
        return {e, f};
    } catch (const std::logic_error&) {
        throw InputError(ParseError::bad_position, "position must be E:F, got '" + s + "'");
    }
}

// Index snapshot: the trajectory plus a format tag. The index is rebuilt on load.
inline json index_snapshot(const Trajectory& T)
{
    json j = trajectory_json(T);
    j["format"] = "segcover-index";
    j["version"] = 1;
    return j;
}

inline Trajectory load_index_snapshot(const std::string& path)
{
    auto text = read_file(path);
    json j = parse_json(text);
    if (!j.is_object() || j.value("format", "") != "segcover-index" || j.value("version", 0) != 1)
        throw InputError(ParseError::bad_shape, "not a segcover index snapshot");
    auto inst = parse_instance(text);
    return *inst.trajectory;
}

// Plain SVG of the input and the witness squares; y points up.
inline std::string render_svg(std::span<const Segment> segs, const Covering& witness)
{
    Rect box = bounding_box(segs);
    for (const auto& s : witness.squares) box.add(s.rect());
    box = box.inflated(0.2);
    const double scale = 400 / std::max({box.width(), box.height(), 1e-9});
    auto X = [&](double x) { return (x - box.x_min) * scale; };
    auto Y = [&](double y) { return (box.y_max - y) * scale; };
    std::ostringstream o;
    o.precision(6);
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << box.width() * scale << "\" height=\"" << box.height() * scale << "\">\n";
    for (const auto& s : witness.squares) {
        Rect r = s.rect();
        o << "<rect x=\"" << X(r.x_min) << "\" y=\"" << Y(r.y_max) << "\" width=\"" << scale << "\" height=\"" << scale
          << "\" fill=\"#4a90d9\" fill-opacity=\"0.2\" stroke=\"#4a90d9\"/>\n";
    }
    for (const auto& s : segs) {
        if (s.a == s.b) {
            o << "<circle cx=\"" << X(s.a.x) << "\" cy=\"" << Y(s.a.y) << "\" r=\"2\" fill=\"black\"/>\n";
            continue;
        }
        o << "<line x1=\"" << X(s.a.x) << "\" y1=\"" << Y(s.a.y) << "\" x2=\"" << X(s.b.x) << "\" y2=\"" << Y(s.b.y)
          << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }
    o << "</svg>\n";
    return o.str();
}

} // namespace segcover::io
