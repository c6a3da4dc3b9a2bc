#include "k3flow/hn.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace k3flow {

namespace {

constexpr double kPi = 3.14159265358979323846;

OmegaVector section_at(const LatticeContext& ctx, TubePoint a, TubePoint b, double s) {
    return exp_class(ctx, {a.b + s * (b.b - a.b), a.t + s * (b.t - a.t)});
}

void flip_minus(WidthState& st) {
    st.vminus = -st.vminus;
    for (Factor& f : st.minus_factors) f.cls = -f.cls;
}

// Advances phases over (s0, s1], renormalizing at every integral wall met in
// the interior. When defer_end is set, a wall within 1e-9 of s1 is left
// unprocessed for the caller, which knows the cut sitting there.
void march_gap(const LatticeContext& ctx, WidthState& st, TubePoint a, TubePoint b,
               double s0, double s1, std::vector<WallEvent>& events, bool defer_end) {
    if (!(s1 > s0)) return;
    double s = s0;
    double ds = s1 - s0;
    double last_event = -1.0;
    long guard = 0;
    while (s < s1) {
        if (++guard > 4000000)
            throw std::runtime_error("walk_segment: substep guard exceeded");
        double step = std::min(ds, s1 - s);
        double s2 = (step >= s1 - s) ? s1 : s + step;
        OmegaVector om = section_at(ctx, a, b, s2);
        double p1, p2;
        try {
            p1 = phase(ctx, om, st.vplus, st.phiplus);
            p2 = phase(ctx, om, st.vminus, st.phiminus);
        } catch (const std::runtime_error&) {
            if (step / 2 < 1e-13) throw;
            ds = step / 2;
            continue;
        }
        if (std::abs(p1 - st.phiplus) > 0.1 || std::abs(p2 - st.phiminus) > 0.1) {
            if (step / 2 < 1e-13)
                throw std::runtime_error("walk_segment: phase tracking collapsed");
            ds = step / 2;
            continue;
        }
        double g2 = p1 - p2;
        double bound = -1.0;
        if (g2 <= 0.0) bound = 0.0;
        else if (g2 >= 1.0) bound = 1.0;
        if (bound >= 0.0) {
            double lo = s, hi = s2;
            double plo1 = st.phiplus, plo2 = st.phiminus;
            double phi1 = p1, phi2 = p2;
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                double mid = 0.5 * (lo + hi);
                OmegaVector omm = section_at(ctx, a, b, mid);
                double q1 = phase(ctx, omm, st.vplus, plo1);
                double q2 = phase(ctx, omm, st.vminus, plo2);
                bool past = (bound == 0.0) ? (q1 - q2 <= 0.0) : (q1 - q2 >= 1.0);
                if (past) {
                    hi = mid;
                    phi1 = q1;
                    phi2 = q2;
                } else {
                    lo = mid;
                    plo1 = q1;
                    plo2 = q2;
                }
            }
            if (defer_end && s1 - hi < 1e-9) {
                OmegaVector ome = section_at(ctx, a, b, s1);
                st.phiplus = phase(ctx, ome, st.vplus, plo1);
                st.phiminus = phase(ctx, ome, st.vminus, plo2);
                return;
            }
            if (last_event >= 0.0 && hi - last_event < 1e-12)
                throw std::runtime_error("walk_segment: wall collision; perturb the path");
            last_event = hi;
            st.phiplus = phi1;
            st.phiminus = phi2;
            if (bound == 0.0) {
                if (st.nint == 0)
                    throw std::logic_error("walk_segment: width-0 wall away from a cut");
                events.push_back({WallKind::integral_wall,
                                  {st.plus_factors[0].cls, st.minus_factors[0].cls}, hi, -1});
                st.nint -= 1;
                flip_minus(st);
                st.phiminus -= 1.0;
            } else {
                events.push_back({WallKind::integral_wall,
                                  {st.plus_factors[0].cls, st.minus_factors[0].cls}, hi, +1});
                st.nint += 1;
                flip_minus(st);
                st.phiminus += 1.0;
            }
            s = hi;
            ds = std::max(ds / 4, 1e-9);
            continue;
        }
        st.phiplus = p1;
        st.phiminus = p2;
        s = s2;
        ds = std::min(ds * 1.7, s1 - s0);
    }
}

}  // namespace

std::optional<MukaiVector> tracked_root(const LatticeContext& ctx, const WidthState& st) {
    if (st.plus_factors.size() != 1 || st.minus_factors.size() != 1) return std::nullopt;
    std::optional<MukaiVector> found;
    for (const Factor& f : {st.plus_factors[0], st.minus_factors[0]}) {
        MukaiVector c = (f.cls.r >= 0) ? f.cls : -f.cls;
        if (c.r > 0 && is_root(ctx, c)) {
            if (found) return std::nullopt;
            found = c;
        }
    }
    return found;
}

double phase(const LatticeContext& ctx, const OmegaVector& omega, const MukaiVector& v,
             double prev) {
    cplx zv = central_charge(ctx, omega, v);
    double scale = std::abs(omega.r) + std::abs(omega.d) + std::abs(omega.s);
    if (std::abs(zv) <= 1e-14 * scale)
        throw std::runtime_error("phase: class hits hole");
    double raw = std::arg(zv) / kPi;
    double ph = raw + 2.0 * std::round((prev - raw) / 2.0);
    if (std::abs(ph - prev) >= 0.5)
        throw std::runtime_error("phase: step too large to track branch");
    return ph;
}

WidthState initial_state_geometric(const LatticeContext& ctx, const MukaiVector& e,
                                   TubePoint z, long long r_max, long long d_max) {
    if (!(e == MukaiVector{0, 0, 1}))
        throw std::invalid_argument(
            "initial_state_geometric: only the skyscraper class (0,0,1) is supported");
    ChamberLocation loc = in_geometric_chamber(ctx, z, r_max, d_max);
    if (loc.kind != ChamberLocation::Kind::inside)
        throw std::invalid_argument(
            "initial_state_geometric: base point is not inside the chamber");
    WidthState st;
    st.seed = e;
    st.vplus = e;
    st.vminus = e;
    st.nint = 0;
    st.phiplus = 1.0;
    st.phiminus = 1.0;
    st.plus_factors = {{e, 1}};
    st.minus_factors = {{e, 1}};
    st.quasistable = true;
    return st;
}

void refresh_phases(const LatticeContext& ctx, WidthState& state, const OmegaVector& omega) {
    state.phiplus = phase(ctx, omega, state.vplus, state.phiplus);
    state.phiminus = phase(ctx, omega, state.vminus, state.phiminus);
}

void validate_state(const LatticeContext& ctx, const WidthState& st) {
    if (st.quasistable) {
        if (!(st.vplus == st.seed) || !(st.vminus == st.seed) || st.nint != 0)
            throw std::logic_error("width state: quasistable data deviates from the seed");
        return;
    }
    auto check_side = [&](const std::vector<Factor>& fs, const MukaiVector& v) {
        if (fs.empty()) throw std::logic_error("width state: empty factor list");
        MukaiVector sum{0, 0, 0};
        long long total = 0;
        for (const Factor& f : fs) {
            if (f.mult <= 0) throw std::logic_error("width state: nonpositive multiplicity");
            sum = sum + f.cls.scaled(f.mult);
            total = checked_add(total, f.mult);
        }
        if (!(sum == v))
            throw std::logic_error("width state: factors do not sum to the side class");
        long long q = pair(ctx, v, v);
        if (q > 0) throw std::logic_error("width state: side class has positive square");
        if (q < checked_mul(-2, checked_mul(total, total)))
            throw std::logic_error("width state: side square below the factor bound");
    };
    check_side(st.plus_factors, st.vplus);
    check_side(st.minus_factors, st.vminus);
    // The stored minus side carries a sign flip per wall renormalization, so
    // the geometric class it denotes is (-1)^nint times the stored vector.
    MukaiVector vm = (st.nint % 2 == 0) ? st.vminus : -st.vminus;
    if (pair(ctx, st.vplus, vm) <= 0)
        throw std::logic_error("width state: sides do not pair positively");
    ConeComponent cp = cone_component(ctx, st.vplus);
    ConeComponent cm = cone_component(ctx, vm);
    if (cp == ConeComponent::outside || cm == ConeComponent::outside || cp == cm)
        throw std::logic_error("width state: sides not in opposite cone components");
    double g = st.gap();
    if (g < -1e-6 || g > 1.0 + 1e-6)
        throw std::logic_error("width state: phase gap out of range");
    if (st.nint < 0) throw std::logic_error("width state: negative integer part");
}

WidthState cross_geometric_boundary(const LatticeContext& ctx, const WidthState& state,
                                    const MukaiVector& delta, int side) {
    if (!state.quasistable)
        throw std::invalid_argument("cross_geometric_boundary: state is not quasistable");
    if (side != 1 && side != -1)
        throw std::invalid_argument("cross_geometric_boundary: side must be +1 or -1");
    if (delta.r <= 0 || !is_root(ctx, delta))
        throw std::invalid_argument("cross_geometric_boundary: not a positive-rank root");
    long long k = -pair(ctx, state.seed, delta);
    if (k <= 0)
        throw std::logic_error("cross_geometric_boundary: inconsistent wall data");
    MukaiVector quotient = reflect(ctx, delta, state.seed);
    double c = state.phiplus;

    WidthState out = state;
    out.quasistable = false;
    out.nint = 0;
    out.phiplus = c;
    out.phiminus = c;
    if (side > 0) {
        out.vplus = delta.scaled(k);
        out.plus_factors = {{delta, k}};
        out.vminus = quotient;
        out.minus_factors = {{quotient, 1}};
    } else {
        out.vplus = quotient;
        out.plus_factors = {{quotient, 1}};
        out.vminus = delta.scaled(k);
        out.minus_factors = {{delta, k}};
    }
    validate_state(ctx, out);
    return out;
}

WidthState cross_integral_wall(const LatticeContext& ctx, const WidthState& state,
                               const OmegaVector& omega, int side) {
    if (state.quasistable)
        throw std::invalid_argument("cross_integral_wall: no wall at a quasistable state");
    if (side != 1 && side != -1)
        throw std::invalid_argument("cross_integral_wall: side must be +1 or -1");
    if (state.plus_factors.size() != 1 || state.minus_factors.size() != 1)
        throw std::runtime_error("cross_integral_wall: inconsistent wall data");
    double g = state.gap();
    bool at_zero = std::abs(g) <= 1e-6;
    bool at_one = std::abs(g - 1.0) <= 1e-6;
    if (!at_zero && !at_one)
        throw std::invalid_argument("cross_integral_wall: state is not on an integral wall");
    if (std::abs(phase(ctx, omega, state.vplus, state.phiplus) - state.phiplus) > 1e-6 ||
        std::abs(phase(ctx, omega, state.vminus, state.phiminus) - state.phiminus) > 1e-6)
        throw std::runtime_error("cross_integral_wall: phases stale at the wall point");

    WidthState out = state;
    if (at_zero && side < 0) {
        if (state.nint == 0) {
            MukaiVector total{0, 0, 0};
            total = total + state.vplus + state.vminus;
            if (!(total == state.seed))
                throw std::runtime_error("cross_integral_wall: inconsistent wall data");
            double c = state.phiplus;
            out.quasistable = true;
            out.vplus = state.seed;
            out.vminus = state.seed;
            out.nint = 0;
            out.phiplus = c;
            out.phiminus = c;
            out.plus_factors = {{state.seed, 1}};
            out.minus_factors = {{state.seed, 1}};
        } else {
            out.nint -= 1;
            flip_minus(out);
            out.phiminus -= 1.0;
        }
    } else if (at_one && side > 0) {
        out.nint += 1;
        flip_minus(out);
        out.phiminus += 1.0;
    }
    validate_state(ctx, out);
    return out;
}

WalkOutcome walk_segment(const LatticeContext& ctx, const WidthState& state0,
                         TubePoint a, TubePoint b, long long r_max, long long d_max) {
    for (TubePoint p : {a, b}) {
        ChamberLocation loc = in_geometric_chamber(ctx, p, r_max, d_max);
        if (loc.kind == ChamberLocation::Kind::on_segment)
            throw std::invalid_argument("walk_segment: segment endpoint on a cut");
        if (loc.kind == ChamberLocation::Kind::outside_tube)
            throw std::invalid_argument("walk_segment: segment leaves the tube domain");
    }
    double sqm = std::sqrt(double(ctx.m));
    double tmin = std::min(a.t, b.t);
    long long needed_r = (long long)std::ceil(1.0 / (tmin * sqm));
    long long needed_d = (long long)std::ceil(std::max(std::abs(a.b), std::abs(b.b)) *
                                              double(needed_r));
    if (needed_r > r_max || needed_d > d_max)
        throw std::invalid_argument("walk_segment: enumeration box too small for segment");

    struct Pending {
        double s;
        MukaiVector root;
        int dir;
    };
    std::vector<Pending> cuts;
    if (a.b != b.b) {
        for (const MukaiVector& root : enumerate_roots(ctx, r_max, d_max)) {
            double q = double(root.d) / double(root.r);
            double fa = a.b - q, fb = b.b - q;
            double h = 1.0 / (double(root.r) * sqm);
            if (fa == 0.0 || fb == 0.0) {
                double tv = (fa == 0.0) ? a.t : b.t;
                if (tv <= h + 1e-9)
                    throw std::invalid_argument("walk_segment: segment endpoint on a cut");
                continue;
            }
            if ((fa < 0.0) == (fb < 0.0)) continue;
            double sc = fa / (fa - fb);
            double y = a.t + sc * (b.t - a.t);
            if (std::abs(y - h) < 1e-9)
                throw std::runtime_error("walk_segment: crossing within tolerance of a hole");
            if (y > h) continue;
            cuts.push_back({sc, root, (fb > fa) ? 1 : -1});
        }
        std::sort(cuts.begin(), cuts.end(),
                  [](const Pending& x, const Pending& y) { return x.s < y.s; });
        for (size_t i = 1; i < cuts.size(); ++i)
            if (cuts[i].s - cuts[i - 1].s < 1e-12)
                throw std::runtime_error("walk_segment: wall collision; perturb the path");
    }

    WalkOutcome out;
    out.state = state0;
    WidthState& st = out.state;
    double s_now = 0.0;
    size_t ci = 0;
    while (true) {
        double s_stop = (ci < cuts.size()) ? cuts[ci].s : 1.0;
        if (st.quasistable) {
            OmegaVector om = section_at(ctx, a, b, s_stop);
            st.phiplus = phase(ctx, om, st.vplus, st.phiplus);
            st.phiminus = st.phiplus;
        } else {
            march_gap(ctx, st, a, b, s_now, s_stop, out.events, ci < cuts.size());
        }
        s_now = s_stop;
        if (ci >= cuts.size()) break;

        const Pending c = cuts[ci];
        out.crossings.push_back({c.root, c.dir, c.s});
        OmegaVector om = section_at(ctx, a, b, c.s);
        if (st.quasistable) {
            out.events.push_back({WallKind::geometric_boundary,
                                  {c.root, reflect(ctx, c.root, st.seed)}, c.s, c.dir});
            st = cross_geometric_boundary(ctx, st, c.root, c.dir);
        } else {
            std::optional<MukaiVector> own = tracked_root(ctx, st);
            if (!own)
                throw std::runtime_error("walk_segment: inconsistent wall data");
            double g = st.gap();
            if (*own == c.root) {
                if (std::abs(g) <= 1e-6) {
                    WallKind kind = (st.nint == 0) ? WallKind::geometric_boundary
                                                   : WallKind::integral_wall;
                    out.events.push_back({kind,
                                          {st.plus_factors[0].cls, st.minus_factors[0].cls},
                                          c.s, (kind == WallKind::geometric_boundary) ? c.dir : -1});
                    st = cross_integral_wall(ctx, st, om, -1);
                } else if (std::abs(g - 1.0) <= 1e-6) {
                    out.events.push_back({WallKind::integral_wall,
                                          {st.plus_factors[0].cls, st.minus_factors[0].cls},
                                          c.s, +1});
                    st = cross_integral_wall(ctx, st, om, +1);
                } else {
                    throw std::runtime_error("walk_segment: inconsistent wall data");
                }
            } else if (g <= 1e-6 || g >= 1.0 - 1e-6) {
                throw std::runtime_error("walk_segment: wall collision; perturb the path");
            }
        }
        ++ci;
    }
    return out;
}

std::vector<WallEvent> detect_walls(const LatticeContext& ctx, const WidthState& state,
                                    TubePoint a, TubePoint b, long long r_max,
                                    long long d_max) {
    return walk_segment(ctx, state, a, b, r_max, d_max).events;
}

}  // namespace k3flow
