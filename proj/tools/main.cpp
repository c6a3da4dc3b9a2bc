#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "k3flow/json_io.hpp"
#include "render_svg.hpp"

namespace {

using namespace k3flow;

json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    json j;
    f >> j;
    return j;
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << text;
}

SvgOptions parse_window(const std::string& text, int px) {
    SvgOptions opt;
    opt.width_px = px;
    if (text.empty()) return opt;
    std::istringstream is(text);
    char c1, c2, c3;
    if (!(is >> opt.b0 >> c1 >> opt.b1 >> c2 >> opt.t0 >> c3 >> opt.t1) || c1 != ',' ||
        c2 != ',' || c3 != ',')
        throw std::runtime_error("window must be b0,b1,t0,t1");
    return opt;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chamber geometry, width descent and deck-group lifting"};
    app.fallthrough();
    long long m = 1, rmax = 12, dmax = 12;
    double tol = 1e-9;
    std::string out;
    app.add_option("--m", m, "intersection parameter (H^2 = 2m)")->check(CLI::PositiveNumber);
    app.add_option("--rmax", rmax, "rank bound of the enumeration box");
    app.add_option("--dmax", dmax, "degree bound of the enumeration box");
    app.add_option("--tol", tol, "generic tolerance for near-degenerate input");
    app.add_option("--out", out, "output file (stdout when omitted)");

    auto* roots_cmd = app.add_subcommand("roots", "list the roots in the box");
    auto* holes_cmd = app.add_subcommand("holes", "list holes with exact positions");

    std::string window;
    int px = 800;
    auto* chamber_cmd = app.add_subcommand("chamber", "render the chamber as SVG");
    chamber_cmd->add_option("--window", window, "view window b0,b1,t0,t1");
    chamber_cmd->add_option("--px", px, "image width in pixels");

    std::string path_file;
    double hstep = 1e-3;
    long max_steps = 400000;
    auto* flow_cmd = app.add_subcommand("flow", "walk a path, then descend to the next wall");
    flow_cmd->add_option("--path", path_file, "open polyline JSON")->required();
    flow_cmd->add_option("--step", hstep, "step size");
    flow_cmd->add_option("--max-steps", max_steps, "step budget");

    std::string retract_path, trace_file;
    auto* retract_cmd = app.add_subcommand("retract", "retract a path to the width-0 locus");
    retract_cmd->add_option("--path", retract_path, "open polyline JSON")->required();
    retract_cmd->add_option("--step", hstep, "step size");
    retract_cmd->add_option("--max-steps", max_steps, "step budget");
    retract_cmd->add_option("--trace", trace_file, "also dump per-leg samples here");

    std::string loop_file;
    auto* lift_cmd = app.add_subcommand("lift", "deck transformation of a closed loop");
    lift_cmd->add_option("--loop", loop_file, "closed polyline JSON")->required();

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
        LatticeContext ctx(m);
        FlowConfig cfg;
        cfg.h = hstep;
        cfg.max_steps = max_steps;
        cfg.r_max = rmax;
        cfg.d_max = dmax;

        if (*roots_cmd) {
            json arr = json::array();
            for (const MukaiVector& v : enumerate_roots(ctx, rmax, dmax))
                arr.push_back(vector_json(v));
            emit(out, arr.dump(2) + "\n");
        } else if (*holes_cmd) {
            emit(out, holes_json(ctx, holes(ctx, rmax, dmax)).dump(2) + "\n");
        } else if (*chamber_cmd) {
            emit(out, chamber_svg(ctx, parse_window(window, px), rmax, dmax));
        } else if (*flow_cmd) {
            Polyline p = polyline_from_json(load_json(path_file));
            if (p.closed) throw std::runtime_error("flow expects an open path");
            WidthState st =
                initial_state_geometric(ctx, {0, 0, 1}, p.base, rmax, dmax);
            TubePoint at = p.base;
            for (const TubePoint& v : p.vertices) {
                st = walk_segment(ctx, st, at, v, rmax, dmax).state;
                at = v;
            }
            if (st.quasistable)
                throw std::runtime_error("path ends at width zero; nothing to descend");
            FlowTrace tr = flow_to_integer(ctx, st, exp_class(ctx, at), cfg);
            std::ostringstream os;
            write_trace_jsonl(os, tr);
            emit(out, os.str());
        } else if (*retract_cmd) {
            Polyline p = polyline_from_json(load_json(retract_path));
            if (p.closed) throw std::runtime_error("retract expects an open path");
            RetractResult r = retract(ctx, p.base, p.vertices, cfg);
            json events = json::array();
            for (const WallEvent& e : r.events) events.push_back(event_json(e));
            json crossings = json::array();
            for (const CutCrossing& c : r.crossings)
                crossings.push_back(json{{"root", vector_json(c.root)},
                                         {"direction", c.direction},
                                         {"parameter", c.parameter}});
            json doc{{"endpoint", json::array({r.endpoint.b, r.endpoint.t})},
                     {"word", word_json(r.word)},
                     {"events", events},
                     {"crossings", crossings},
                     {"legs", json::array()}};
            for (const FlowTrace& leg : r.legs)
                doc["legs"].push_back(trace_summary_json(leg));
            emit(out, doc.dump(2) + "\n");
            if (!trace_file.empty()) {
                std::ofstream tf(trace_file);
                if (!tf) throw std::runtime_error("cannot write " + trace_file);
                for (const FlowTrace& leg : r.legs) write_trace_jsonl(tf, leg);
            }
        } else if (*lift_cmd) {
            Polyline p = polyline_from_json(load_json(loop_file));
            GroupElement g = lift_loop(ctx, p, rmax, dmax);
            emit(out, word_json(g).dump(2) + "\n");
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cout << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
}
