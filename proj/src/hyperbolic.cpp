#include "k3flow/hyperbolic.hpp"

#include <cmath>
#include <stdexcept>

namespace k3flow {

namespace {

inline double form(const LatticeContext& ctx, const double a[3], const double b[3]) {
    return 2.0 * double(ctx.m) * a[1] * b[1] - a[0] * b[2] - b[0] * a[2];
}

}  // namespace

double pair_theta(const LatticeContext& ctx, const ThetaVector& a, const ThetaVector& b) {
    double x[3] = {a.r, a.d, a.s};
    double y[3] = {b.r, b.d, b.s};
    return form(ctx, x, y);
}

double pair_theta_vec(const LatticeContext& ctx, const ThetaVector& th,
                      const MukaiVector& v) {
    double x[3] = {th.r, th.d, th.s};
    double y[3] = {double(v.r), double(v.d), double(v.s)};
    return form(ctx, x, y);
}

cplx pair_theta_omega(const LatticeContext& ctx, const ThetaVector& th,
                      const OmegaVector& omega) {
    OmegaVector t{cplx(th.r, 0.0), cplx(th.d, 0.0), cplx(th.s, 0.0)};
    return pair_c(ctx, t, omega);
}

ThetaVector theta_of(const LatticeContext& ctx, const OmegaVector& omega) {
    double dd = std::real(pair_c(ctx, omega, conj(omega)));
    double scale2 = std::norm(omega.r) + std::norm(omega.d) + std::norm(omega.s);
    if (!(dd > 1e-12 * scale2))
        throw std::invalid_argument("theta_of: degenerate Omega");
    double d = dd / 2.0;

    double X[3] = {std::real(omega.r), std::real(omega.d), std::real(omega.s)};
    double Y[3] = {std::imag(omega.r), std::imag(omega.d), std::imag(omega.s)};
    // (Theta, X) = 0 and (Theta, Y) = 0 written as rows of a 2x3 system; the
    // kernel is the Euclidean cross product of the rows.
    double row1[3] = {-X[2], 2.0 * double(ctx.m) * X[1], -X[0]};
    double row2[3] = {-Y[2], 2.0 * double(ctx.m) * Y[1], -Y[0]};
    double k[3] = {row1[1] * row2[2] - row1[2] * row2[1],
                   row1[2] * row2[0] - row1[0] * row2[2],
                   row1[0] * row2[1] - row1[1] * row2[0]};
    double q = form(ctx, k, k);
    if (!(q < 0.0)) throw std::invalid_argument("theta_of: orthogonal line not negative");
    double lam = std::sqrt(-d / q);
    ThetaVector th{lam * k[0], lam * k[1], lam * k[2], d};
    double mag = std::abs(th.r) + std::abs(th.d) + std::abs(th.s);
    double key = (std::abs(th.s) > 1e-12 * mag) ? th.s : th.r;
    if (key < 0.0) {
        th.r = -th.r;
        th.d = -th.d;
        th.s = -th.s;
    }
    return th;
}

double minkowski_identity(const LatticeContext& ctx, const OmegaVector& omega,
                          const ThetaVector& th, const MukaiVector& v) {
    double zv = std::norm(central_charge(ctx, omega, v));
    double tv = pair_theta_vec(ctx, th, v);
    return zv - tv * tv - th.dval * double(pair(ctx, v, v));
}

double hyp_distance(const LatticeContext& ctx, const ThetaVector& t1,
                    const ThetaVector& t2) {
    if (std::abs(t1.dval - t2.dval) > 1e-6 * std::max(t1.dval, t2.dval))
        throw std::invalid_argument("hyp_distance: mismatched normalizations");
    double d = 0.5 * (t1.dval + t2.dval);
    double x = -pair_theta(ctx, t1, t2) / d;
    if (x < 1.0 - 1e-6)
        throw std::domain_error("hyp_distance: arguments not on the same sheet");
    return std::acosh(std::max(x, 1.0));
}

}  // namespace k3flow
