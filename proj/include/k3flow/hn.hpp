#pragma once

#include <optional>
#include <vector>

#include "k3flow/period.hpp"

namespace k3flow {

struct Factor {
    MukaiVector cls;
    long long mult = 1;

    friend bool operator==(const Factor&, const Factor&) = default;
};

// Extremal Harder-Narasimhan data of the tracked class along a path. The
// minus side carries the shift normalization: vminus is the class of
// E-[nint] and phiminus its phase, so the gap phiplus - phiminus always sits
// in [0,1) away from walls and the width is nint + gap.
struct WidthState {
    MukaiVector seed;
    MukaiVector vplus;
    MukaiVector vminus;
    long long nint = 0;
    double phiplus = 0.0;
    double phiminus = 0.0;
    std::vector<Factor> plus_factors;
    std::vector<Factor> minus_factors;
    bool quasistable = true;

    double gap() const { return phiplus - phiminus; }
    double width() const { return double(nint) + gap(); }

    friend bool operator==(const WidthState&, const WidthState&) = default;
};

enum class WallKind { plus_wall, minus_wall, integral_wall, geometric_boundary };

struct WallEvent {
    WallKind kind = WallKind::integral_wall;
    std::vector<MukaiVector> roots;
    double parameter = 0.0;
    int side = 0;
};

// Transversal crossing of a cut segment by the underlying tube-domain path,
// recorded independently of any state change. direction +1 means the path
// moved left to right.
struct CutCrossing {
    MukaiVector root;
    int direction = 0;
    double parameter = 0.0;
};

// Branch of (1/pi) arg (Omega, v) closest to prev. Branches differ by even
// integers; a jump of 1/2 or more between consecutive evaluations means the
// caller stepped too far to track continuity.
double phase(const LatticeContext& ctx, const OmegaVector& omega, const MukaiVector& v,
             double prev);

// Width-0 state for the skyscraper class e = (0,0,1) at a point strictly
// inside the chamber. Other seed classes are rejected.
WidthState initial_state_geometric(const LatticeContext& ctx, const MukaiVector& e,
                                   TubePoint z, long long r_max, long long d_max);

// Re-evaluates both phases against omega, keeping branches.
void refresh_phases(const LatticeContext& ctx, WidthState& state,
                    const OmegaVector& omega);

// The positive-rank root whose cut a pure two-factor state is pinned to;
// empty when the factor data does not single one out.
std::optional<MukaiVector> tracked_root(const LatticeContext& ctx, const WidthState& state);

// Checks the standing invariants of a positive-width state: two pure factor
// sides, nonpositive self-pairings, and vplus pairing positively with the
// geometric minus class (-1)^nint vminus from the opposite cone component.
// Throws std::logic_error on violation.
void validate_state(const LatticeContext& ctx, const WidthState& state);

// Splits the quasistable state across the segment of delta. side +1 means
// the path crossed the segment left to right. The factor classes are
// S1 = delta with multiplicity r and S2 = e - r delta; on the right of the
// segment S1 carries the larger phase, on the left S2 does.
WidthState cross_geometric_boundary(const LatticeContext& ctx, const WidthState& state,
                                    const MukaiVector& delta, int side);

// Applies the bookkeeping for a state sitting on an integral wall. side +1
// selects the side where the width exceeds the wall value, side -1 the
// other one; landing below a zero wall merges the factors back into the
// quasistable state.
WidthState cross_integral_wall(const LatticeContext& ctx, const WidthState& state,
                               const OmegaVector& omega, int side);

struct WalkOutcome {
    WidthState state;
    std::vector<WallEvent> events;
    std::vector<CutCrossing> crossings;
};

// Advances the state along the straight tube-domain segment from a to b,
// processing wall events in parameter order and logging every transversal
// cut crossing. Throws when the enumeration box cannot cover the segment,
// when a crossing comes within tolerance of a hole, or when an alignment is
// tangential.
WalkOutcome walk_segment(const LatticeContext& ctx, const WidthState& state,
                         TubePoint a, TubePoint b, long long r_max, long long d_max);

// Event-only view of walk_segment.
std::vector<WallEvent> detect_walls(const LatticeContext& ctx, const WidthState& state,
                                    TubePoint a, TubePoint b, long long r_max,
                                    long long d_max);

}  // namespace k3flow
