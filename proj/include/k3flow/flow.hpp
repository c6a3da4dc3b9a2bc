#pragma once

#include <string>
#include <vector>

#include "k3flow/hn.hpp"
#include "k3flow/hyperbolic.hpp"
#include "k3flow/monodromy.hpp"

namespace k3flow {

struct FlowConfig {
    double h = 1e-3;
    double tol_quadric = 1e-12;
    int max_newton = 10;
    long max_steps = 400000;
    double wall_tol = 1e-10;
    double hole_tol = 1e-8;
    long long r_max = 12;
    long long d_max = 12;
};

struct FlowSample {
    double t = 0.0;
    OmegaVector omega;
    double width = 0.0;
    long long nint = 0;
    double phiplus = 0.0;
    double phiminus = 0.0;
    double d_residual = 0.0;
    double quadric_residual = 0.0;
    double theta_speed = 0.0;
};

enum class FlowStatus { reached_integral_wall, reached_width_zero, error_hole, error_step };

struct FlowTrace {
    std::vector<FlowSample> samples;
    FlowStatus status = FlowStatus::error_step;
    std::string message;
    std::vector<CutCrossing> crossings;
    WidthState final_state;
    OmegaVector final_omega;
    double arrival_time = 0.0;
};

// Rotation i exp(i pi (phi+ + phi-)/2) read off the stored phases.
cplx zeta(const WidthState& state);

// Unit-speed descent direction: the cone sign of vplus times zeta times the
// normal vector of the current period plane.
OmegaVector vector_field(const LatticeContext& ctx, const WidthState& state,
                         const OmegaVector& omega);

// One Runge-Kutta step followed by a Newton projection back onto the quadric
// and the normalization sphere; the state comes back with re-tracked phases.
void step(const LatticeContext& ctx, WidthState& state, OmegaVector& omega, double h,
          double d0, const FlowConfig& cfg);

// Runs the descent from a positive-width state until the phase gap closes at
// the next integral wall, logging samples and every transversal cut crossing
// of classes other than the tracked root. Hole approaches and monotonicity
// failures stop the run with a diagnostic status instead of being patched
// over. Odd-band states are rejected up front: after an odd number of wall
// renormalizations the minus factor data is no longer determined by the
// crossing history, and the stored-phase field does not descend there.
FlowTrace flow_to_integer(const LatticeContext& ctx, const WidthState& state,
                          const OmegaVector& omega, const FlowConfig& cfg);

struct RetractResult {
    TubePoint endpoint;
    WidthState final_state;
    OmegaVector final_omega;
    GroupElement word;
    std::vector<WallEvent> events;
    std::vector<CutCrossing> crossings;
    std::vector<FlowTrace> legs;
};

// Full retraction: walk the polyline from z_start through the waypoints,
// then alternate descent legs and downward wall crossings until the width
// reaches zero. The word collects one letter per transversal cut crossing in
// chronological order; the terminal arrival on the width-0 wall contributes
// none.
RetractResult retract(const LatticeContext& ctx, TubePoint z_start,
                      const std::vector<TubePoint>& waypoints, const FlowConfig& cfg);

}  // namespace k3flow
