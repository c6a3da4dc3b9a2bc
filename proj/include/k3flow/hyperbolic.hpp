#pragma once

#include "k3flow/period.hpp"

namespace k3flow {

// Real lattice vector spanning the negative line orthogonal to a reduced
// Omega, normalized to (Theta,Theta) = -d with d = (Omega, conj Omega)/2 and
// pointing into the plus cone.
struct ThetaVector {
    double r = 0.0;
    double d = 0.0;
    double s = 0.0;
    double dval = 0.0;
};

double pair_theta(const LatticeContext& ctx, const ThetaVector& a, const ThetaVector& b);
double pair_theta_vec(const LatticeContext& ctx, const ThetaVector& th,
                      const MukaiVector& v);
cplx pair_theta_omega(const LatticeContext& ctx, const ThetaVector& th,
                      const OmegaVector& omega);

ThetaVector theta_of(const LatticeContext& ctx, const OmegaVector& omega);

// Residual of |(Omega,v)|^2 - (Theta,v)^2 - d (v,v); zero up to rounding.
double minkowski_identity(const LatticeContext& ctx, const OmegaVector& omega,
                          const ThetaVector& th, const MukaiVector& v);

// Distance on the sheet (xi,xi) = -d in the metric that makes Re Omega,
// Im Omega an orthonormal tangent frame: arccosh(-(T1,T2)/d).
double hyp_distance(const LatticeContext& ctx, const ThetaVector& t1,
                    const ThetaVector& t2);

}  // namespace k3flow
