// segcover: command-line driver for the covering library.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "segcover/cover.hpp"
#include "segcover/io.hpp"
#include "segcover/longest.hpp"
#include "segcover/oracle.hpp"
#include "segcover/subtraj.hpp"

using namespace segcover;
using io::json;

namespace {

enum Exit { ok = 0, usage = 1, parse = 2, internal = 3 };

struct Globals {
    std::string svg;
    std::uint64_t seed = 1;
    double eps = -1; // < 0: use eps_geom()
    double get_eps() const { return eps < 0 ? eps_geom() : eps; }
};

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io::InputError(io::ParseError::io, "cannot write " + path);
    out << text;
}

void emit(const json& j, const std::string& out_path = {})
{
    if (out_path.empty())
        std::cout << j.dump() << "\n";
    else
        write_text(out_path, j.dump() + "\n");
}

void maybe_svg(const Globals& g, std::span<const Segment> segs, const Covering& witness)
{
    if (!g.svg.empty()) write_text(g.svg, io::render_svg(segs, witness));
}

const Trajectory& need_trajectory(const io::Instance& inst)
{
    if (!inst.trajectory) throw io::InputError(io::ParseError::bad_shape, "this command needs a trajectory input");
    return *inst.trajectory;
}

int run(int argc, char** argv)
{
    CLI::App app{"Unit-square covers of segments and trajectories"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--svg", g.svg, "render input and witness to this SVG file");
    app.add_option("--seed", g.seed, "generator seed");
    app.add_option("--eps", g.eps, "geometric tolerance (default 1e-9 or SEGCOVER_EPS)")->check(CLI::NonNegativeNumber);

    // decide
    auto* decide = app.add_subcommand("decide", "is the input coverable by k unit squares");
    int dk = 1;
    std::string dfile;
    decide->add_option("--k", dk)->required()->check(CLI::Range(1, 4));
    decide->add_option("file", dfile)->required();

    // query build / ask
    auto* query = app.add_subcommand("query", "subtrajectory queries");
    query->require_subcommand(1);
    auto* qbuild = query->add_subcommand("build", "preprocess a trajectory");
    std::string qfile, qout;
    qbuild->add_option("file", qfile)->required();
    qbuild->add_option("--out", qout)->required();
    auto* qask = query->add_subcommand("ask", "is T[from, to] k-coverable");
    int qk = 2;
    std::string qidx, qfrom, qto;
    qask->add_option("index", qidx)->required();
    qask->add_option("--k", qk)->required()->check(CLI::IsMember({2, 3}));
    qask->add_option("--from", qfrom)->required();
    qask->add_option("--to", qto)->required();

    // extract
    auto* extract = app.add_subcommand("extract", "write T[from, to] as a trajectory file");
    std::string efile, efrom, eto, eout;
    extract->add_option("file", efile)->required();
    extract->add_option("--from", efrom)->required();
    extract->add_option("--to", eto)->required();
    extract->add_option("--out", eout);

    // longest
    auto* longest = app.add_subcommand("longest", "longest k-coverable subtrajectory");
    int lk = 1;
    std::string lfile;
    longest->add_option("--k", lk)->required()->check(CLI::IsMember({1, 2}));
    longest->add_option("file", lfile)->required();

    // gen
    auto* gen = app.add_subcommand("gen", "write a generated instance");
    gen->require_subcommand(1);
    std::string gout;
    int gk = 2;
    std::size_t gn = 100, gclutter = 0;
    double gspread = 2.0, gmargin = 0.2, gstep = 0.3;
    auto* gplanted = gen->add_subcommand("planted", "segments inside k planted squares");
    gplanted->add_option("--k", gk)->check(CLI::Range(1, 8));
    gplanted->add_option("--n", gn);
    gplanted->add_option("--spread", gspread);
    auto* gsep = gen->add_subcommand("separated", "k+1 points pairwise more than 1 apart");
    gsep->add_option("--k", gk)->check(CLI::Range(1, 8));
    gsep->add_option("--margin", gmargin);
    gsep->add_option("--clutter", gclutter);
    auto* gwalk = gen->add_subcommand("random-walk", "random walk trajectory");
    gwalk->add_option("--n", gn)->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
    gwalk->add_option("--step", gstep);
    for (auto* c : {gplanted, gsep, gwalk}) c->add_option("--out", gout);

    // oracle
    auto* oracle = app.add_subcommand("oracle", "brute-force reference answers");
    oracle->require_subcommand(1);
    auto* olong = oracle->add_subcommand("longest", "sampled longest k-coverable subtrajectory");
    auto* ogrid = oracle->add_subcommand("grid", "grid-search decision");
    int ok_ = 1;
    std::size_t osamples = 400;
    double ores = 0.05;
    std::string ofile;
    olong->add_option("--k", ok_)->required()->check(CLI::IsMember({1, 2}));
    olong->add_option("--samples", osamples)->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
    olong->add_option("file", ofile)->required();
    ogrid->add_option("--k", ok_)->required()->check(CLI::Range(1, 4));
    ogrid->add_option("--res", ores)->check(CLI::PositiveNumber);
    ogrid->add_option("file", ofile)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? Exit::ok : Exit::usage;
    }
    const double eps = g.get_eps();

    try {
        if (*decide) {
            auto inst = io::load_instance(dfile);
            auto c = coverable_k(inst.segments, dk, eps);
            if (c && !verify_covering(inst.segments, *c, eps)) throw std::logic_error("decide: witness fails verification");
            emit({{"coverable", c.has_value()}, {"witness", c ? io::to_json(*c) : json::array()}, {"dropped", inst.dropped}});
            maybe_svg(g, inst.segments, c ? *c : Covering{});
        } else if (*qbuild) {
            auto inst = io::load_instance(qfile);
            const auto& T = need_trajectory(inst);
            TrajIndex idx(T); // validates the trajectory the same way a later load will
            emit(io::index_snapshot(idx.trajectory()), qout);
        } else if (*qask) {
            TrajIndex idx(io::load_index_snapshot(qidx));
            const auto& T = idx.trajectory();
            TrajPos a = io::parse_pos(qfrom, T), b = io::parse_pos(qto, T);
            if (b < a) throw std::invalid_argument("--from must not come after --to");
            auto c = qk == 2 ? is_2coverable(idx, a, b, eps) : is_3coverable(idx, a, b, eps);
            auto segs = T.extract(a, b);
            if (c && !verify_covering(segs, *c, eps)) throw std::logic_error("query: witness fails verification");
            emit({{"coverable", c.has_value()}, {"witness", c ? io::to_json(*c) : json::array()}});
            maybe_svg(g, segs, c ? *c : Covering{});
        } else if (*extract) {
            auto inst = io::load_instance(efile);
            const auto& T = need_trajectory(inst);
            TrajPos a = io::parse_pos(efrom, T), b = io::parse_pos(eto, T);
            if (b < a) throw std::invalid_argument("--from must not come after --to");
            json pts = json::array();
            auto segs = T.extract(a, b);
            pts.push_back(io::to_json(segs.front().a));
            for (const auto& s : segs) pts.push_back(io::to_json(s.b));
            emit(json{{"trajectory", pts}}, eout);
        } else if (*longest) {
            auto inst = io::load_instance(lfile);
            const auto& T = need_trajectory(inst);
            json out;
            Covering w;
            if (lk == 1) {
                auto r = longest_1coverable(T, ALL_FAMILIES, eps);
                w.squares.push_back(r.witness);
                out = {{"start", io::pos_string(r.start)}, {"end", io::pos_string(r.end)}, {"length", io::round12(r.length)}};
            } else {
                auto r = longest_2coverable(T, eps);
                w = r.witness;
                out = {{"start", io::pos_string(r.start)}, {"end", io::pos_string(r.end)}, {"length", io::round12(r.length)}};
            }
            out["witness"] = io::to_json(w);
            emit(out);
            maybe_svg(g, inst.segments, w);
        } else if (*gplanted) {
            auto p = gen_planted_coverable(gk, gn, g.seed, gspread);
            emit(io::segments_json(p.segments), gout);
        } else if (*gsep) {
            emit(io::segments_json(gen_separated_points(gk, g.seed, gmargin, gclutter)), gout);
        } else if (*gwalk) {
            emit(io::trajectory_json(gen_random_walk(gn, g.seed, gstep)), gout);
        } else if (*olong) {
            auto inst = io::load_instance(ofile);
            auto r = oracle_longest(need_trajectory(inst), ok_, osamples, osamples);
            emit({{"start", io::pos_string(r.start)}, {"end", io::pos_string(r.end)}, {"length", io::round12(r.length)}});
        } else if (*ogrid) {
            auto inst = io::load_instance(ofile);
            emit({{"verdict", to_string(oracle_decide_grid(inst.segments, ok_, ores))}});
        }
    } catch (const io::InputError& e) {
        std::cerr << "error[" << io::to_string(e.code) << "]: " << e.what() << "\n";
        return e.code == io::ParseError::bad_position ? Exit::usage : Exit::parse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::usage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return Exit::internal;
    }
    return Exit::ok;
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
