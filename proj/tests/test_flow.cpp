#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "k3flow/flow.hpp"

using namespace k3flow;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Descent {
    WidthState state;
    OmegaVector omega;
};

// Walks a straight segment from a chamber point, returning the state and the
// period vector at the far end.
Descent split_at(const LatticeContext& ctx, TubePoint from, TubePoint to) {
    WidthState st = initial_state_geometric(ctx, {0, 0, 1}, from, 24, 24);
    WalkOutcome w = walk_segment(ctx, st, from, to, 24, 24);
    return {w.state, exp_class(ctx, to)};
}

std::array<double, 3> theta_arr(const ThetaVector& th) { return {th.r, th.d, th.s}; }

// Right-hand side of the normal-vector transport equation at one sample:
// Re(zeta) Re(Omega) + Im(zeta) Im(Omega), with the plus-cone sign folded in
// by the caller.
std::array<double, 3> transport_rhs(const FlowSample& s) {
    cplx zt = cplx(0.0, 1.0) * std::exp(cplx(0.0, kPi * (s.phiplus + s.phiminus) / 2.0));
    return {zt.real() * s.omega.r.real() + zt.imag() * s.omega.r.imag(),
            zt.real() * s.omega.d.real() + zt.imag() * s.omega.d.imag(),
            zt.real() * s.omega.s.real() + zt.imag() * s.omega.s.imag()};
}

double norm3(const std::array<double, 3>& a) {
    return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
}

// Rebuilds the based loop a retraction traces out: the walked waypoints, a
// subsample of the descent trajectory, and a cut-free return high above the
// holes. Lifting it recounts every crossing by pure segment geometry.
GroupElement trajectory_loop_word(const LatticeContext& ctx, TubePoint base,
                                  const std::vector<TubePoint>& waypoints,
                                  const RetractResult& rr, long long box) {
    std::vector<MukaiVector> roots = enumerate_roots(ctx, box, box);
    double sqm = std::sqrt(double(ctx.m));
    auto near_cut = [&](TubePoint p) {
        for (const MukaiVector& rt : roots) {
            double q = double(rt.d) / double(rt.r);
            double h = 1.0 / (double(rt.r) * sqm);
            if (std::abs(p.b - q) < 1e-7 && p.t <= h + 1e-6) return true;
        }
        return false;
    };

    Polyline loop;
    loop.base = base;
    loop.closed = true;
    loop.vertices = waypoints;
    TubePoint last = waypoints.back();
    for (const FlowTrace& leg : rr.legs) {
        for (size_t k = 0; k < leg.samples.size(); k += 20) {
            TubePoint z = recover_z(leg.samples[k].omega);
            if (near_cut(z)) continue;
            loop.vertices.push_back(z);
            last = z;
        }
    }
    loop.vertices.push_back({last.b, 2.0});
    loop.vertices.push_back({base.b, 2.0});
    return lift_loop(ctx, loop, box, box);
}

FlowConfig wide_config() {
    FlowConfig cfg;
    cfg.r_max = 24;
    cfg.d_max = 24;
    return cfg;
}

}  // namespace

TEST_CASE("zeta reads the rotation off the stored phases") {
    LatticeContext ctx(1);
    WidthState seed = initial_state_geometric(ctx, {0, 0, 1}, {-0.2, 0.4}, 12, 12);
    CHECK_THROWS_AS(zeta(seed), std::domain_error);

    WidthState sp = cross_geometric_boundary(ctx, seed, {1, 0, 1}, 1);
    cplx z = zeta(sp);
    CHECK(std::abs(z.real()) < 1e-15);
    CHECK(z.imag() == doctest::Approx(-1.0));

    sp.phiplus = 1.5;
    sp.phiminus = 0.5;
    z = zeta(sp);
    CHECK(z.imag() == doctest::Approx(-1.0));

    sp.phiplus = 1.0;
    sp.phiminus = 0.0;
    z = zeta(sp);
    CHECK(z.real() == doctest::Approx(-1.0));
    CHECK(std::abs(z.imag()) < 1e-15);
}

TEST_CASE("the descent direction is orthogonal to the period plane") {
    LatticeContext ctx(1);
    Descent dn = split_at(ctx, {-0.2, 0.4}, {0.2, 0.4});
    OmegaVector f = vector_field(ctx, dn.state, dn.omega);

    double d0 = pair_c(ctx, dn.omega, conj(dn.omega)).real() / 2.0;
    CHECK(std::abs(pair_c(ctx, f, dn.omega)) < 1e-12 * d0);
    CHECK(std::abs(pair_c(ctx, f, conj(dn.omega))) < 1e-12 * d0);
    CHECK(std::abs(pair_c(ctx, f, f)) == doctest::Approx(d0).epsilon(1e-9));

    WidthState seed = initial_state_geometric(ctx, {0, 0, 1}, {-0.2, 0.4}, 12, 12);
    CHECK_THROWS_AS(vector_field(ctx, seed, dn.omega), std::domain_error);
}

TEST_CASE("a Runge-Kutta step conserves the quadric and retraces itself backwards") {
    LatticeContext ctx(1);
    Descent dn = split_at(ctx, {-0.2, 0.4}, {0.2, 0.4});
    FlowConfig cfg;
    double d0 = pair_c(ctx, dn.omega, conj(dn.omega)).real() / 2.0;

    WidthState st = dn.state;
    OmegaVector om = dn.omega;
    double gap0 = st.gap();
    for (int k = 0; k < 300; ++k) {
        step(ctx, st, om, 1e-3, d0, cfg);
        double dd = pair_c(ctx, om, conj(om)).real();
        CHECK(std::abs(dd / 2.0 - d0) <= 1e-9 * d0);
        CHECK(std::abs(pair_c(ctx, om, om)) <= 1e-9 * dd);
    }
    CHECK(st.gap() < gap0 - 0.1);

    for (int k = 0; k < 300; ++k) step(ctx, st, om, -1e-3, d0, cfg);
    CHECK(std::abs(om.r.real() - (dn.omega.r.real())) < 1e-6);
    CHECK(std::abs(om.r.imag() - (dn.omega.r.imag())) < 1e-6);
    CHECK(std::abs(om.d.real() - (dn.omega.d.real())) < 1e-6);
    CHECK(std::abs(om.d.imag() - (dn.omega.d.imag())) < 1e-6);
    CHECK(std::abs(om.s.real() - (dn.omega.s.real())) < 1e-6);
    CHECK(std::abs(om.s.imag() - (dn.omega.s.imag())) < 1e-6);
    CHECK(std::abs(st.phiplus - (dn.state.phiplus)) < 1e-6);
    CHECK(std::abs(st.phiminus - (dn.state.phiminus)) < 1e-6);
}

TEST_CASE("the flow descends to the width-zero wall at the certified rate") {
    LatticeContext ctx(1);
    Descent dn = split_at(ctx, {-0.2, 0.4}, {0.2, 0.4});
    FlowTrace tr = flow_to_integer(ctx, dn.state, dn.omega, FlowConfig{});

    REQUIRE(tr.status == FlowStatus::reached_width_zero);
    REQUIRE(tr.samples.size() >= 100);
    CHECK(tr.samples.front().t == 0.0);
    CHECK(tr.samples.front().width == doctest::Approx(dn.state.gap()));
    CHECK(tr.crossings.empty());

    double theta0 = tr.samples.front().width;
    for (size_t k = 0; k + 1 < tr.samples.size(); ++k) {
        const FlowSample& a = tr.samples[k];
        const FlowSample& b = tr.samples[k + 1];
        CHECK(b.t > a.t);
        CHECK(b.width < a.width);
        CHECK(b.phiplus <= a.phiplus + 1e-12);
        CHECK(b.phiminus >= a.phiminus - 1e-12);
        double rate = (a.width - b.width) / (b.t - a.t);
        CHECK(rate >= (2.0 / kPi) * std::cos(kPi * a.width / 2.0) - 1e-3);
    }
    for (const FlowSample& s : tr.samples) {
        CHECK(s.nint == 0);
        CHECK(s.d_residual <= 1e-9);
        CHECK(s.quadric_residual <= 1e-9);
    }
    CHECK(tr.arrival_time <= kPi / (2.0 * std::cos(kPi * theta0 / 2.0)) + 1e-2);

    CHECK(tr.final_state.gap() < 1e-9);
    CHECK(tr.final_state.nint == 0);
    CHECK(tr.final_state.vplus == MukaiVector{1, 0, 1});
    CHECK(tr.final_state.vminus == MukaiVector{-1, 0, 0});
    TubePoint end = recover_z(tr.final_omega);
    CHECK(std::abs(end.b) < 1e-6);
    CHECK(end.t > 0.05);
    CHECK(end.t < 1.0);
    CHECK(!is_degenerate(ctx, tr.final_omega, 1e-6).has_value());
}

TEST_CASE("the integrated normal vector solves its transport equation at unit speed") {
    LatticeContext ctx(1);
    Descent dn = split_at(ctx, {-0.2, 0.4}, {0.2, 0.4});
    REQUIRE(cone_component(ctx, dn.state.vplus) == ConeComponent::plus);
    FlowTrace tr = flow_to_integer(ctx, dn.state, dn.omega, FlowConfig{});
    REQUIRE(tr.status == FlowStatus::reached_width_zero);

    for (size_t k = 0; k + 1 < tr.samples.size(); ++k) {
        const FlowSample& a = tr.samples[k];
        const FlowSample& b = tr.samples[k + 1];
        double dt = b.t - a.t;
        if (dt <= 1e-4) continue;

        std::array<double, 3> ta = theta_arr(theta_of(ctx, a.omega));
        std::array<double, 3> tb = theta_arr(theta_of(ctx, b.omega));
        std::array<double, 3> fa = transport_rhs(a);
        std::array<double, 3> fb = transport_rhs(b);
        std::array<double, 3> diff{};
        for (int i = 0; i < 3; ++i)
            diff[i] = (tb[i] - ta[i]) / dt - 0.5 * (fa[i] + fb[i]);
        CHECK(norm3(diff) <= 1e-4 * norm3(fa));

        CHECK(std::abs(b.theta_speed - (1.0)) < 1e-3);
    }
}

TEST_CASE("the flow rejects states it cannot certify") {
    LatticeContext ctx(1);
    FlowConfig cfg;

    WidthState seed = initial_state_geometric(ctx, {0, 0, 1}, {-0.2, 0.4}, 12, 12);
    CHECK_THROWS_AS(flow_to_integer(ctx, seed, exp_class(ctx, {-0.2, 0.4}), cfg),
                    std::invalid_argument);

    Descent dn = split_at(ctx, {-0.2, 0.4}, {0.2, 0.4});
    OmegaVector junk{cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)};
    CHECK_THROWS_AS(flow_to_integer(ctx, dn.state, junk, cfg), std::invalid_argument);

    // One anticlockwise wind around the hole of (1,0,1) renormalizes the
    // minus side once; its factor data is then no longer a function of the
    // crossing history and the descent must refuse to run.
    WidthState st = initial_state_geometric(ctx, {0, 0, 1}, {-0.4, 2.0}, 12, 12);
    std::vector<TubePoint> ring = {{-0.4, 0.5}, {0.4, 0.5}, {0.4, 2.0}, {-0.4, 2.0}};
    TubePoint prev{-0.4, 2.0};
    for (TubePoint p : ring) {
        st = walk_segment(ctx, st, prev, p, 12, 12).state;
        prev = p;
    }
    REQUIRE(st.nint == 1);
    CHECK_THROWS_WITH_AS(
        flow_to_integer(ctx, st, exp_class(ctx, prev), cfg),
        "flow_to_integer: minus-side factor data is not determined by crossing "
        "history on this band",
        std::invalid_argument);
}

TEST_CASE("retract of a path inside the chamber is trivial") {
    LatticeContext ctx(1);
    RetractResult rr = retract(ctx, {0.0, 2.0}, {{-0.3, 2.0}, {-0.35, 1.5}}, FlowConfig{});
    CHECK(rr.word.is_identity());
    CHECK(rr.crossings.empty());
    CHECK(rr.events.empty());
    CHECK(rr.legs.empty());
    CHECK(rr.final_state.quasistable);
    CHECK(rr.endpoint == TubePoint{-0.35, 1.5});
}

TEST_CASE("retract of a poke across the cut and back cancels") {
    LatticeContext ctx(1);
    RetractResult rr = retract(ctx, {-0.2, 0.5}, {{0.2, 0.5}, {-0.2, 0.5}}, FlowConfig{});
    CHECK(rr.word.is_identity());
    CHECK(rr.crossings.size() == 2);
    CHECK(rr.legs.empty());
    CHECK(rr.final_state.quasistable);
    CHECK(rr.endpoint == TubePoint{-0.2, 0.5});
}

TEST_CASE("retract across one cut lands back on it with a one-letter word") {
    LatticeContext ctx(1);
    FlowConfig cfg = wide_config();
    TubePoint base{-0.2, 0.6};
    std::vector<TubePoint> way = {{0.2, 0.6}};
    RetractResult rr = retract(ctx, base, way, cfg);

    CHECK(rr.word == twist({1, 0, 1}, 1));
    CHECK(rr.word.shift == 0);
    REQUIRE(rr.legs.size() == 1);
    CHECK(rr.legs[0].status == FlowStatus::reached_width_zero);
    REQUIRE(rr.events.size() == 1);
    CHECK(rr.events[0].kind == WallKind::geometric_boundary);
    CHECK(rr.events[0].side == 1);
    CHECK(rr.crossings.size() == 1);

    CHECK(!rr.final_state.quasistable);
    CHECK(rr.final_state.nint == 0);
    CHECK(rr.final_state.gap() < 1e-9);
    CHECK(std::abs(rr.endpoint.b) < 1e-6);
    CHECK(rr.endpoint.t > 0.0);
    CHECK(rr.endpoint.t < 1.0);

    CHECK(trajectory_loop_word(ctx, base, way, rr, 24) == rr.word);
}

TEST_CASE("retract across two different cuts matches the lifted loop") {
    LatticeContext ctx(1);
    FlowConfig cfg = wide_config();
    TubePoint base{-0.2, 0.4};
    std::vector<TubePoint> way = {{0.7, 0.4}};
    RetractResult rr = retract(ctx, base, way, cfg);

    REQUIRE(rr.crossings.size() >= 2);
    CHECK(rr.crossings[0].root == MukaiVector{1, 0, 1});
    CHECK(rr.crossings[0].direction == 1);
    CHECK(rr.crossings[1].root == MukaiVector{2, 1, 1});
    CHECK(rr.crossings[1].direction == 1);

    REQUIRE(rr.legs.size() == 1);
    CHECK(rr.legs[0].status == FlowStatus::reached_width_zero);
    CHECK(rr.final_state.gap() < 1e-9);
    CHECK(std::abs(rr.endpoint.b) < 1e-6);
    CHECK(rr.endpoint.t < 1.0);

    CHECK(trajectory_loop_word(ctx, base, way, rr, 24) == rr.word);
}

TEST_CASE("retract refuses paths it cannot certify") {
    LatticeContext ctx(1);
    FlowConfig cfg;
    CHECK_THROWS_AS(retract(ctx, {0.0, 0.5}, {{0.3, 0.5}}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(
        retract(ctx, {-0.4, 2.0}, {{-0.4, 0.5}, {0.4, 0.5}, {0.4, 2.0}, {-0.4, 2.0}}, cfg),
        std::invalid_argument);
}
