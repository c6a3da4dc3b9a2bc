#include "k3flow/json_io.hpp"

#include <ostream>
#include <stdexcept>

namespace k3flow {

namespace {

const char* kind_name(WallKind k) {
    switch (k) {
        case WallKind::plus_wall: return "plus_wall";
        case WallKind::minus_wall: return "minus_wall";
        case WallKind::integral_wall: return "integral_wall";
        case WallKind::geometric_boundary: return "geometric_boundary";
    }
    throw std::logic_error("unknown wall kind");
}

WallKind kind_of(const std::string& s) {
    if (s == "plus_wall") return WallKind::plus_wall;
    if (s == "minus_wall") return WallKind::minus_wall;
    if (s == "integral_wall") return WallKind::integral_wall;
    if (s == "geometric_boundary") return WallKind::geometric_boundary;
    throw std::invalid_argument("unknown wall kind: " + s);
}

const char* status_name(FlowStatus s) {
    switch (s) {
        case FlowStatus::reached_integral_wall: return "reached_integral_wall";
        case FlowStatus::reached_width_zero: return "reached_width_zero";
        case FlowStatus::error_hole: return "error_hole";
        case FlowStatus::error_step: return "error_step";
    }
    throw std::logic_error("unknown flow status");
}

json omega_json(const OmegaVector& o) {
    return json::array({json::array({o.r.real(), o.r.imag()}),
                        json::array({o.d.real(), o.d.imag()}),
                        json::array({o.s.real(), o.s.imag()})});
}

OmegaVector omega_from_json(const json& j) {
    return {cplx(j.at(0).at(0).get<double>(), j.at(0).at(1).get<double>()),
            cplx(j.at(1).at(0).get<double>(), j.at(1).at(1).get<double>()),
            cplx(j.at(2).at(0).get<double>(), j.at(2).at(1).get<double>())};
}

}  // namespace

json vector_json(const MukaiVector& v) {
    return json{{"r", v.r}, {"d", v.d}, {"s", v.s}};
}

MukaiVector vector_from_json(const json& j) {
    return {j.at("r").get<long long>(), j.at("d").get<long long>(),
            j.at("s").get<long long>()};
}

json holes_json(const LatticeContext& ctx, const std::vector<Hole>& hs) {
    json roots = json::array();
    json positions = json::array();
    for (const Hole& h : hs) {
        roots.push_back(vector_json(h.root));
        positions.push_back(json{{"num", h.num}, {"den", h.den}, {"r", h.root.r}});
    }
    return json{{"m", ctx.m}, {"roots", roots}, {"positions", positions}};
}

std::vector<Hole> holes_from_json(const json& j) {
    std::vector<Hole> out;
    const json& roots = j.at("roots");
    const json& positions = j.at("positions");
    if (roots.size() != positions.size())
        throw std::invalid_argument("holes record: mismatched array lengths");
    for (size_t i = 0; i < roots.size(); ++i) {
        Hole h;
        h.root = vector_from_json(roots[i]);
        h.num = positions[i].at("num").get<long long>();
        h.den = positions[i].at("den").get<long long>();
        if (positions[i].at("r").get<long long>() != h.root.r)
            throw std::invalid_argument("holes record: rank mismatch");
        out.push_back(h);
    }
    return out;
}

json event_json(const WallEvent& e) {
    json roots = json::array();
    for (const MukaiVector& r : e.roots) roots.push_back(vector_json(r));
    return json{{"kind", kind_name(e.kind)},
                {"roots", roots},
                {"parameter", e.parameter},
                {"side", e.side}};
}

WallEvent event_from_json(const json& j) {
    WallEvent e;
    e.kind = kind_of(j.at("kind").get<std::string>());
    for (const json& r : j.at("roots")) e.roots.push_back(vector_from_json(r));
    e.parameter = j.at("parameter").get<double>();
    e.side = j.at("side").get<int>();
    return e;
}

json sample_json(const FlowSample& s) {
    return json{{"t", s.t},
                {"omega", omega_json(s.omega)},
                {"width", s.width},
                {"nint", s.nint},
                {"phiplus", s.phiplus},
                {"phiminus", s.phiminus},
                {"d_residual", s.d_residual},
                {"quadric_residual", s.quadric_residual},
                {"theta_speed", s.theta_speed}};
}

FlowSample sample_from_json(const json& j) {
    FlowSample s;
    s.t = j.at("t").get<double>();
    s.omega = omega_from_json(j.at("omega"));
    s.width = j.at("width").get<double>();
    s.nint = j.at("nint").get<long long>();
    s.phiplus = j.at("phiplus").get<double>();
    s.phiminus = j.at("phiminus").get<double>();
    s.d_residual = j.at("d_residual").get<double>();
    s.quadric_residual = j.at("quadric_residual").get<double>();
    s.theta_speed = j.at("theta_speed").get<double>();
    return s;
}

json trace_summary_json(const FlowTrace& tr) {
    json events = json::array();
    json crossings = json::array();
    for (const CutCrossing& c : tr.crossings)
        crossings.push_back(json{{"root", vector_json(c.root)},
                                 {"direction", c.direction},
                                 {"parameter", c.parameter}});
    return json{{"status", status_name(tr.status)},
                {"message", tr.message},
                {"steps", tr.samples.empty() ? 0 : tr.samples.size() - 1},
                {"arrival_time", tr.arrival_time},
                {"crossings", crossings},
                {"events", events}};
}

json letters_json(const GroupElement& g) {
    json word = json::array();
    for (const Letter& l : g.word)
        word.push_back(json{{"r", l.root.r}, {"d", l.root.d}, {"s", l.root.s},
                            {"exp", l.exp}});
    return word;
}

json word_json(const GroupElement& g) {
    return json{{"shift", g.shift}, {"word", letters_json(g)}};
}

GroupElement word_from_json(const json& j) {
    GroupElement g;
    g.shift = j.at("shift").get<long long>();
    for (const json& l : j.at("word")) {
        Letter letter;
        letter.root = {l.at("r").get<long long>(), l.at("d").get<long long>(),
                       l.at("s").get<long long>()};
        letter.exp = l.at("exp").get<long long>();
        g.word.push_back(letter);
    }
    return reduced(std::move(g));
}

json polyline_json(const Polyline& p) {
    json verts = json::array();
    for (const TubePoint& v : p.vertices) verts.push_back(json::array({v.b, v.t}));
    return json{{"base", json::array({p.base.b, p.base.t})},
                {"vertices", verts},
                {"closed", p.closed}};
}

Polyline polyline_from_json(const json& j) {
    Polyline p;
    p.base = {j.at("base").at(0).get<double>(), j.at("base").at(1).get<double>()};
    for (const json& v : j.at("vertices"))
        p.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    p.closed = j.at("closed").get<bool>();
    return p;
}

void write_trace_jsonl(std::ostream& os, const FlowTrace& tr) {
    for (const FlowSample& s : tr.samples) os << sample_json(s).dump() << '\n';
    os << trace_summary_json(tr).dump() << '\n';
}

}  // namespace k3flow
