#include "k3flow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace k3flow {

namespace {

constexpr double kPi = 3.14159265358979323846;

void gram_apply(const LatticeContext& ctx, const double v[3], double out[3]) {
    out[0] = -v[2];
    out[1] = 2.0 * double(ctx.m) * v[1];
    out[2] = -v[0];
}

double dot3(const double a[3], const double b[3]) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Gaussian elimination with partial pivoting on a 3x3 system.
void solve3(double a[3][3], double b[3], double x[3]) {
    int idx[3] = {0, 1, 2};
    for (int c = 0; c < 3; ++c) {
        int p = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(a[idx[r]][c]) > std::abs(a[idx[p]][c])) p = r;
        std::swap(idx[c], idx[p]);
        double piv = a[idx[c]][c];
        if (std::abs(piv) < 1e-300)
            throw std::runtime_error("projection system is singular");
        for (int r = c + 1; r < 3; ++r) {
            double f = a[idx[r]][c] / piv;
            for (int k = c; k < 3; ++k) a[idx[r]][k] -= f * a[idx[c]][k];
            b[idx[r]] -= f * b[idx[c]];
        }
    }
    for (int c = 2; c >= 0; --c) {
        double acc = b[idx[c]];
        for (int k = c + 1; k < 3; ++k) acc -= a[idx[c]][k] * x[k];
        x[c] = acc / a[idx[c]][c];
    }
}

int cone_sign(const LatticeContext& ctx, const MukaiVector& v) {
    ConeComponent c = cone_component(ctx, v);
    if (c == ConeComponent::plus) return 1;
    if (c == ConeComponent::minus) return -1;
    throw std::logic_error("flow: side class left the negative cone");
}

OmegaVector field_at(const LatticeContext& ctx, const WidthState& st,
                     const OmegaVector& om, int eps) {
    double p1 = phase(ctx, om, st.vplus, st.phiplus);
    double p2 = phase(ctx, om, st.vminus, st.phiminus);
    cplx rot = double(eps) * cplx(0.0, 1.0) * std::exp(cplx(0.0, kPi * (p1 + p2) / 2.0));
    ThetaVector th = theta_of(ctx, om);
    return {rot * th.r, rot * th.d, rot * th.s};
}

OmegaVector axpy(const OmegaVector& base, double c, const OmegaVector& dir) {
    return {base.r + c * dir.r, base.d + c * dir.d, base.s + c * dir.s};
}

// Newton iteration pulling omega back onto (Omega,Omega) = 0 and
// (Omega, conj Omega) = 2 d0.
void project(const LatticeContext& ctx, OmegaVector& om, double d0, const FlowConfig& cfg) {
    double X[3] = {om.r.real(), om.d.real(), om.s.real()};
    double Y[3] = {om.r.imag(), om.d.imag(), om.s.imag()};
    double scale = std::max(1.0, 2.0 * d0);
    for (int it = 0; it < cfg.max_newton; ++it) {
        double GX[3], GY[3];
        gram_apply(ctx, X, GX);
        gram_apply(ctx, Y, GY);
        double xx = dot3(X, GX), yy = dot3(Y, GY), xy = dot3(X, GY);
        double c[3] = {xx - yy, 2.0 * xy, xx + yy - 2.0 * d0};
        if (std::abs(c[0]) <= cfg.tol_quadric * scale &&
            std::abs(c[1]) <= cfg.tol_quadric * scale &&
            std::abs(c[2]) <= cfg.tol_quadric * scale) {
            om = {cplx(X[0], Y[0]), cplx(X[1], Y[1]), cplx(X[2], Y[2])};
            return;
        }
        double J[3][6];
        for (int k = 0; k < 3; ++k) {
            J[0][k] = 2.0 * GX[k];
            J[0][k + 3] = -2.0 * GY[k];
            J[1][k] = 2.0 * GY[k];
            J[1][k + 3] = 2.0 * GX[k];
            J[2][k] = 2.0 * GX[k];
            J[2][k + 3] = 2.0 * GY[k];
        }
        double A[3][3], rhs[3], lam[3];
        for (int i = 0; i < 3; ++i) {
            rhs[i] = -c[i];
            for (int j = 0; j < 3; ++j) {
                A[i][j] = 0.0;
                for (int k = 0; k < 6; ++k) A[i][j] += J[i][k] * J[j][k];
            }
        }
        solve3(A, rhs, lam);
        for (int k = 0; k < 3; ++k) {
            X[k] += J[0][k] * lam[0] + J[1][k] * lam[1] + J[2][k] * lam[2];
            Y[k] += J[0][k + 3] * lam[0] + J[1][k + 3] * lam[1] + J[2][k + 3] * lam[2];
        }
    }
    om = {cplx(X[0], Y[0]), cplx(X[1], Y[1]), cplx(X[2], Y[2])};
    double GX[3], GY[3];
    gram_apply(ctx, X, GX);
    gram_apply(ctx, Y, GY);
    if (std::abs(dot3(X, GX) - dot3(Y, GY)) > 1e-6 * scale)
        throw std::runtime_error("projection failed to converge");
    return;
}

double dd_of(const LatticeContext& ctx, const OmegaVector& om) {
    return pair_c(ctx, om, conj(om)).real();
}

FlowSample make_sample(const LatticeContext& ctx, double t, const WidthState& st,
                       const OmegaVector& om, double d0, double theta_speed) {
    FlowSample s;
    s.t = t;
    s.omega = om;
    s.width = st.width();
    s.nint = st.nint;
    s.phiplus = st.phiplus;
    s.phiminus = st.phiminus;
    double dd = dd_of(ctx, om);
    s.d_residual = std::abs(dd / 2.0 - d0) / d0;
    s.quadric_residual = std::abs(pair_c(ctx, om, om)) / dd;
    s.theta_speed = theta_speed;
    return s;
}

void scan_crossings(const LatticeContext& ctx, TubePoint z1, TubePoint z2,
                    const std::optional<MukaiVector>& skip, double param,
                    std::vector<CutCrossing>& out, const FlowConfig& cfg,
                    std::string& err) {
    if (z1.b == z2.b) return;
    double sqm = std::sqrt(double(ctx.m));
    double tmin = std::min(z1.t, z2.t);
    if (tmin <= 0.0) {
        err = "trajectory left the tube domain";
        return;
    }
    long long needed_r = (long long)std::ceil(1.0 / (tmin * sqm));
    long long needed_d =
        (long long)std::ceil(std::max(std::abs(z1.b), std::abs(z2.b)) * double(needed_r));
    if (needed_r > cfg.r_max || needed_d > cfg.d_max) {
        err = "enumeration box too small for the crossing scan";
        return;
    }
    for (const MukaiVector& root : enumerate_roots(ctx, cfg.r_max, cfg.d_max)) {
        if (skip && root == *skip) continue;
        double q = double(root.d) / double(root.r);
        double fa = z1.b - q, fb = z2.b - q;
        if (fa == 0.0 || fb == 0.0 || (fa < 0.0) == (fb < 0.0)) continue;
        double sc = fa / (fa - fb);
        double y = z1.t + sc * (z2.t - z1.t);
        if (y < 1.0 / (double(root.r) * sqm))
            out.push_back({root, (fb > fa) ? 1 : -1, param});
    }
}

// Horizontal velocity of the projected trajectory, used to orient arrivals.
double x_velocity(const LatticeContext& ctx, const WidthState& st, const OmegaVector& om) {
    int eps = cone_sign(ctx, st.vplus);
    OmegaVector v = field_at(ctx, st, om, eps);
    cplx zdot = (v.d * om.r - om.d * v.r) / (om.r * om.r);
    return zdot.real();
}

}  // namespace

cplx zeta(const WidthState& state) {
    if (state.quasistable)
        throw std::domain_error("zeta: undefined at a quasistable state");
    return cplx(0.0, 1.0) *
           std::exp(cplx(0.0, kPi * (state.phiplus + state.phiminus) / 2.0));
}

OmegaVector vector_field(const LatticeContext& ctx, const WidthState& state,
                         const OmegaVector& omega) {
    if (state.quasistable)
        throw std::domain_error("vector_field: undefined at a quasistable state");
    return field_at(ctx, state, omega, cone_sign(ctx, state.vplus));
}

void step(const LatticeContext& ctx, WidthState& state, OmegaVector& omega, double h,
          double d0, const FlowConfig& cfg) {
    int eps = cone_sign(ctx, state.vplus);
    OmegaVector k1 = field_at(ctx, state, omega, eps);
    OmegaVector k2 = field_at(ctx, state, axpy(omega, h / 2.0, k1), eps);
    OmegaVector k3 = field_at(ctx, state, axpy(omega, h / 2.0, k2), eps);
    OmegaVector k4 = field_at(ctx, state, axpy(omega, h, k3), eps);
    OmegaVector next = omega;
    next = axpy(next, h / 6.0, k1);
    next = axpy(next, h / 3.0, k2);
    next = axpy(next, h / 3.0, k3);
    next = axpy(next, h / 6.0, k4);
    project(ctx, next, d0, cfg);
    WidthState ns = state;
    refresh_phases(ctx, ns, next);
    state = ns;
    omega = next;
}

FlowTrace flow_to_integer(const LatticeContext& ctx, const WidthState& state0,
                          const OmegaVector& omega0, const FlowConfig& cfg) {
    if (state0.quasistable)
        throw std::invalid_argument("flow_to_integer: state has no width to descend");
    validate_state(ctx, state0);
    if (state0.nint % 2 != 0)
        throw std::invalid_argument(
            "flow_to_integer: minus-side factor data is not determined by crossing "
            "history on this band");

    FlowTrace tr;
    WidthState st = state0;
    OmegaVector om = omega0;
    double d0 = dd_of(ctx, om) / 2.0;
    if (!(d0 > 0.0))
        throw std::invalid_argument("flow_to_integer: omega is not reduced");
    std::optional<MukaiVector> own = tracked_root(ctx, st);

    double t = 0.0;
    ThetaVector th_prev = theta_of(ctx, om);
    TubePoint z_prev = recover_z(om);
    tr.samples.push_back(make_sample(ctx, t, st, om, d0, 0.0));

    double hole_scale = std::sqrt(2.0 * d0);
    long steps = 0;
    while (true) {
        double g = st.gap();
        if (g < cfg.wall_tol) {
            tr.status = (st.nint == 0) ? FlowStatus::reached_width_zero
                                       : FlowStatus::reached_integral_wall;
            break;
        }
        if (++steps > cfg.max_steps) {
            tr.status = FlowStatus::error_step;
            tr.message = "step budget exhausted before the wall";
            break;
        }

        double h_eff = std::min(cfg.h, std::max(g, cfg.wall_tol / 2.0));
        WidthState ns;
        OmegaVector no;
        bool accepted = false;
        for (int attempt = 0; attempt < 60; ++attempt) {
            ns = st;
            no = om;
            try {
                step(ctx, ns, no, h_eff, d0, cfg);
            } catch (const std::runtime_error&) {
                h_eff /= 2.0;
                continue;
            }
            if (ns.gap() < 0.0) {
                h_eff /= 2.0;
                continue;
            }
            accepted = true;
            break;
        }
        if (!accepted) {
            tr.status = FlowStatus::error_step;
            tr.message = "could not land a step between walls";
            break;
        }
        if (ns.phiplus > st.phiplus + 1e-12 || ns.phiminus < st.phiminus - 1e-12) {
            tr.status = FlowStatus::error_step;
            tr.message = "phase monotonicity violated";
            break;
        }
        if (ns.width() >= st.width()) {
            tr.status = FlowStatus::error_step;
            tr.message = "width failed to decrease";
            break;
        }

        bool hole = false;
        for (const MukaiVector& v : {ns.vplus, ns.vminus}) {
            if (std::abs(central_charge(ctx, no, v)) < cfg.hole_tol * hole_scale) hole = true;
        }
        if (hole) {
            tr.status = FlowStatus::error_hole;
            tr.message = "central charge of a side class collapsed; hole reached";
            st = ns;
            om = no;
            t += h_eff;
            break;
        }

        st = ns;
        om = no;
        t += h_eff;
        TubePoint z_now = recover_z(om);
        scan_crossings(ctx, z_prev, z_now, own, t, tr.crossings, cfg, tr.message);
        if (!tr.message.empty()) {
            tr.status = FlowStatus::error_step;
            break;
        }
        z_prev = z_now;
        ThetaVector th_now = theta_of(ctx, om);
        tr.samples.push_back(
            make_sample(ctx, t, st, om, d0, hyp_distance(ctx, th_prev, th_now) / h_eff));
        th_prev = th_now;
    }

    tr.final_state = st;
    tr.final_omega = om;
    tr.arrival_time = t;
    return tr;
}

RetractResult retract(const LatticeContext& ctx, TubePoint z_start,
                      const std::vector<TubePoint>& waypoints, const FlowConfig& cfg) {
    std::vector<TubePoint> pts;
    pts.push_back(z_start);
    pts.insert(pts.end(), waypoints.begin(), waypoints.end());
    for (const TubePoint& p : pts) {
        ChamberLocation loc = in_geometric_chamber(ctx, p, cfg.r_max, cfg.d_max);
        if (loc.kind == ChamberLocation::Kind::on_segment)
            throw std::invalid_argument("retract: path vertex on a cut segment");
        if (loc.kind == ChamberLocation::Kind::outside_tube)
            throw std::invalid_argument("retract: path vertex outside the tube domain");
    }

    RetractResult res;
    WidthState st = initial_state_geometric(ctx, {0, 0, 1}, z_start, cfg.r_max, cfg.d_max);
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        WalkOutcome w = walk_segment(ctx, st, pts[i], pts[i + 1], cfg.r_max, cfg.d_max);
        st = w.state;
        for (WallEvent e : w.events) {
            e.parameter += double(i);
            res.events.push_back(e);
        }
        for (CutCrossing c : w.crossings) {
            c.parameter += double(i);
            res.crossings.push_back(c);
        }
    }

    OmegaVector om = exp_class(ctx, pts.back());
    double sqm = std::sqrt(double(ctx.m));
    for (long leg = 0; !st.quasistable; ++leg) {
        if (leg > 1000)
            throw std::runtime_error("retract: leg budget exhausted");
        FlowTrace tr = flow_to_integer(ctx, st, om, cfg);
        for (const CutCrossing& c : tr.crossings) res.crossings.push_back(c);
        if (tr.status == FlowStatus::error_hole || tr.status == FlowStatus::error_step) {
            res.legs.push_back(std::move(tr));
            throw std::runtime_error("retract: " + res.legs.back().message);
        }
        st = tr.final_state;
        om = tr.final_omega;
        if (tr.status == FlowStatus::reached_width_zero) {
            res.legs.push_back(std::move(tr));
            break;
        }

        // Intermediate wall: if its locus is the cut itself, the descent just
        // crossed the cut transversally and the word picks up the letter.
        std::optional<MukaiVector> own = tracked_root(ctx, st);
        if (!own)
            throw std::runtime_error("retract: inconsistent wall data");
        TubePoint zw = recover_z(om);
        if (zw.t < 1.0 / (double(own->r) * sqm)) {
            int dir = (x_velocity(ctx, st, om) > 0.0) ? 1 : -1;
            res.crossings.push_back({*own, dir, tr.arrival_time});
        }
        res.events.push_back({WallKind::integral_wall,
                              {st.plus_factors[0].cls, st.minus_factors[0].cls},
                              tr.arrival_time, -1});
        res.legs.push_back(std::move(tr));
        st = cross_integral_wall(ctx, st, om, -1);
    }

    res.endpoint = recover_z(om);
    res.final_state = st;
    res.final_omega = om;
    GroupElement w;
    for (const CutCrossing& c : res.crossings)
        w = multiply(w, twist(c.root, c.direction));
    res.word = w;
    return res;
}

}  // namespace k3flow
