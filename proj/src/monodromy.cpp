#include "k3flow/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace k3flow {

GroupElement reduced(GroupElement g) {
    std::vector<Letter> out;
    for (const Letter& l : g.word) {
        if (l.exp == 0) continue;
        if (!out.empty() && out.back().root == l.root) {
            out.back().exp = checked_add(out.back().exp, l.exp);
            if (out.back().exp == 0) out.pop_back();
        } else {
            out.push_back(l);
        }
    }
    g.word = std::move(out);
    return g;
}

GroupElement multiply(const GroupElement& a, const GroupElement& b) {
    GroupElement r;
    r.shift = checked_add(a.shift, b.shift);
    r.word = a.word;
    r.word.insert(r.word.end(), b.word.begin(), b.word.end());
    return reduced(std::move(r));
}

GroupElement inverse(const GroupElement& g) {
    GroupElement r;
    r.shift = -g.shift;
    for (auto it = g.word.rbegin(); it != g.word.rend(); ++it)
        r.word.push_back({it->root, -it->exp});
    return reduced(std::move(r));
}

GroupElement twist(const MukaiVector& root, long long exp) {
    GroupElement g;
    g.word.push_back({root, exp});
    return reduced(std::move(g));
}

std::string to_string(const GroupElement& g) {
    std::ostringstream os;
    bool first = true;
    if (g.shift != 0) {
        os << "sh^" << g.shift;
        first = false;
    }
    for (const Letter& l : g.word) {
        if (!first) os << ' ';
        os << "t(" << l.root.r << ',' << l.root.d << ',' << l.root.s << ')';
        if (l.exp != 1) os << '^' << l.exp;
        first = false;
    }
    if (first) os << '1';
    return os.str();
}

GroupElement lift_loop(const LatticeContext& ctx, const Polyline& loop, long long r_max,
                       long long d_max) {
    if (!loop.closed)
        throw std::invalid_argument("lift_loop: path is not a closed loop");
    if (in_geometric_chamber(ctx, loop.base, r_max, d_max).kind !=
        ChamberLocation::Kind::inside)
        throw std::invalid_argument("lift_loop: base point is not inside the chamber");

    std::vector<TubePoint> pts;
    pts.push_back(loop.base);
    pts.insert(pts.end(), loop.vertices.begin(), loop.vertices.end());
    pts.push_back(loop.base);

    double sqm = std::sqrt(double(ctx.m));
    double tmin = loop.base.t, bmax = std::abs(loop.base.b);
    for (const TubePoint& p : pts) {
        if (!(p.t > 0.0))
            throw std::invalid_argument("lift_loop: vertex outside the tube domain");
        tmin = std::min(tmin, p.t);
        bmax = std::max(bmax, std::abs(p.b));
    }
    long long needed_r = (long long)std::ceil(1.0 / (tmin * sqm));
    long long needed_d = (long long)std::ceil(bmax * double(needed_r));
    if (needed_r > r_max || needed_d > d_max)
        throw std::invalid_argument("lift_loop: enumeration box too small for the loop");

    for (const TubePoint& p : pts)
        if (in_geometric_chamber(ctx, p, r_max, d_max).kind ==
            ChamberLocation::Kind::on_segment)
            throw std::invalid_argument("lift_loop: vertex on a cut segment");

    std::vector<MukaiVector> roots = enumerate_roots(ctx, r_max, d_max);
    GroupElement g;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        TubePoint a = pts[i], b = pts[i + 1];
        if (a.b == b.b) continue;
        struct Hit {
            double s;
            MukaiVector root;
            int dir;
        };
        std::vector<Hit> hits;
        for (const MukaiVector& root : roots) {
            double q = double(root.d) / double(root.r);
            double fa = a.b - q, fb = b.b - q;
            double h = 1.0 / (double(root.r) * sqm);
            if (fa == 0.0 || fb == 0.0) {
                double tv = (fa == 0.0) ? a.t : b.t;
                if (tv <= h + 1e-9)
                    throw std::invalid_argument("lift_loop: vertex on a cut segment");
                continue;
            }
            if ((fa < 0.0) == (fb < 0.0)) continue;
            double s = fa / (fa - fb);
            double y = a.t + s * (b.t - a.t);
            if (std::abs(y - h) < 1e-9)
                throw std::runtime_error("lift_loop: crossing within tolerance of a hole");
            if (y > h) continue;
            hits.push_back({s, root, (fb > fa) ? 1 : -1});
        }
        std::sort(hits.begin(), hits.end(),
                  [](const Hit& x, const Hit& y) { return x.s < y.s; });
        for (const Hit& h : hits) g = multiply(g, twist(h.root, h.dir));
    }
    return g;
}

LatticeIsometry act_on_lattice(const LatticeContext& ctx, const GroupElement& g) {
    LatticeIsometry acc = LatticeIsometry::identity();
    for (const Letter& l : g.word) {
        LatticeIsometry refl = reflection_matrix(ctx, l.root);
        LatticeIsometry sq = refl.compose(refl);
        for (long long i = 0; i < std::llabs(l.exp); ++i) acc = acc.compose(sq);
    }
    return acc;
}

LatticeIsometry twist_matrix(const LatticeContext& ctx, const MukaiVector& root) {
    return reflection_matrix(ctx, root);
}

LatticeIsometry shift_matrix(long long k) {
    LatticeIsometry g = LatticeIsometry::identity();
    if (k % 2 != 0)
        for (auto& row : g.a)
            for (auto& x : row) x = -x;
    return g;
}

GroupElement deck_action_on_chamber(const GroupElement& g, const GroupElement& tag) {
    return multiply(g, tag);
}

}  // namespace k3flow
