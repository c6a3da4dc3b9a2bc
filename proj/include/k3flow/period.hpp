#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "k3flow/lattice.hpp"

namespace k3flow {

using cplx = std::complex<double>;

// Point z = b + i t of the upper half plane, standing for beta + i omega = z H.
struct TubePoint {
    double b = 0.0;
    double t = 0.0;

    friend bool operator==(const TubePoint&, const TubePoint&) = default;
};

// Complexified lattice vector; reduced vectors satisfy (Omega,Omega) ~ 0 and
// (Omega, conj Omega) > 0.
struct OmegaVector {
    cplx r{};
    cplx d{};
    cplx s{};
};

// Complex-bilinear extension of the Mukai pairing.
cplx pair_c(const LatticeContext& ctx, const OmegaVector& a, const OmegaVector& b);

OmegaVector conj(const OmegaVector& o);
OmegaVector scale(const OmegaVector& o, cplx c);
OmegaVector add(const OmegaVector& a, const OmegaVector& b);

// The section Omega = (1, z, m z^2) of reduced vectors over the tube domain.
OmegaVector exp_class(const LatticeContext& ctx, TubePoint z);

cplx central_charge(const LatticeContext& ctx, const OmegaVector& omega,
                    const MukaiVector& v);

// Zero of the central charge of a positive-rank root in the upper half
// plane. The abscissa d/r is kept as a reduced fraction and the height is
// recoverable as 1/(r sqrt m); nothing here is rounded.
struct Hole {
    MukaiVector root;
    long long num = 0;
    long long den = 1;

    double height(const LatticeContext& ctx) const;
    cplx position(const LatticeContext& ctx) const;
};

std::vector<Hole> holes(const LatticeContext& ctx, long long r_max, long long d_max);

struct ChamberLocation {
    enum class Kind { inside, on_segment, outside_tube };
    Kind kind = Kind::inside;
    std::optional<MukaiVector> root;  // set when kind == on_segment
};

// Exact membership test for the chamber V(X): the upper half plane minus the
// closed vertical segment below each hole. A point is on the segment of
// (r,d,s) iff b equals d/r exactly and t <= 1/(r sqrt m); only roots with
// r <= ceil(1/(t sqrt m)) can match, so the scan is finite. Points with
// t <= 0 report outside_tube. Throws when the required scan exceeds the
// supplied box, since truncation would make the answer wrong.
ChamberLocation in_geometric_chamber(const LatticeContext& ctx, TubePoint z,
                                     long long r_max, long long d_max);

// Cross-check variant of the segment test: <exp(z), delta> in R_{<=0}.
bool on_segment_sign_criterion(const LatticeContext& ctx, TubePoint z,
                               const MukaiVector& delta);

// Membership in the oriented reduced period domain: (Omega,Omega) ~ 0,
// (Omega, conj Omega) > 0 and Im(Omega_d/Omega_r) > 0.
bool in_Q_plus(const LatticeContext& ctx, const OmegaVector& omega,
               double tol_rel = 1e-9);

// Inverse of the section up to scale: z = Omega_d / Omega_r. Throws
// "section degenerate" when |Omega_r| is negligible.
TubePoint recover_z(const OmegaVector& omega);

// Searches for a root with |(Omega, delta)| < tol. The identity
// |(Omega,v)|^2 - (Theta,v)^2 = d (v,v) bounds the coordinates of any such
// root in the frame (Theta, Re Omega, Im Omega), so an integer box scan is
// exhaustive. Requires a reduced Omega.
std::optional<MukaiVector> is_degenerate(const LatticeContext& ctx,
                                         const OmegaVector& omega, double tol);

}  // namespace k3flow
