#include "k3flow/period.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "k3flow/hyperbolic.hpp"

namespace k3flow {

cplx pair_c(const LatticeContext& ctx, const OmegaVector& a, const OmegaVector& b) {
    return 2.0 * double(ctx.m) * a.d * b.d - a.r * b.s - b.r * a.s;
}

OmegaVector conj(const OmegaVector& o) {
    return {std::conj(o.r), std::conj(o.d), std::conj(o.s)};
}

OmegaVector scale(const OmegaVector& o, cplx c) { return {c * o.r, c * o.d, c * o.s}; }

OmegaVector add(const OmegaVector& a, const OmegaVector& b) {
    return {a.r + b.r, a.d + b.d, a.s + b.s};
}

OmegaVector exp_class(const LatticeContext& ctx, TubePoint z) {
    if (!(z.t > 0.0)) throw std::invalid_argument("exp_class: need t > 0");
    cplx zz(z.b, z.t);
    return {cplx(1.0, 0.0), zz, double(ctx.m) * zz * zz};
}

cplx central_charge(const LatticeContext& ctx, const OmegaVector& omega,
                    const MukaiVector& v) {
    return 2.0 * double(ctx.m) * omega.d * double(v.d) - omega.r * double(v.s) -
           double(v.r) * omega.s;
}

double Hole::height(const LatticeContext& ctx) const {
    return 1.0 / (double(root.r) * std::sqrt(double(ctx.m)));
}

cplx Hole::position(const LatticeContext& ctx) const {
    return {double(num) / double(den), height(ctx)};
}

std::vector<Hole> holes(const LatticeContext& ctx, long long r_max, long long d_max) {
    if (r_max < 1 || d_max < 0) throw std::invalid_argument("holes: bad bounds");
    std::vector<Hole> out;
    for (const auto& delta : enumerate_roots(ctx, r_max, d_max)) {
        long long g = std::gcd(delta.d < 0 ? -delta.d : delta.d, delta.r);
        if (g == 0) g = delta.r;
        Hole h{delta, delta.d / g, delta.r / g};
        cplx z = central_charge(ctx, exp_class(ctx, {std::real(h.position(ctx)),
                                                     std::imag(h.position(ctx))}),
                                delta);
        if (std::abs(z) >= 1e-12)
            throw std::logic_error("holes: computed position fails the residual check");
        out.push_back(h);
    }
    return out;
}

namespace {

// Exact test for b == d/r given doubles: the fused multiply-add rounds the
// mathematically exact value of b*r - d once, so a zero result certifies
// exact equality at these magnitudes.
bool abscissa_matches(double b, long long r, long long d) {
    return std::fma(b, double(r), -double(d)) == 0.0;
}

}  // namespace

bool on_segment_sign_criterion(const LatticeContext& ctx, TubePoint z,
                               const MukaiVector& delta) {
    // Im<exp(z), delta> factors as 2 m t (d - b r), so its vanishing reduces
    // to a single product difference that fma resolves exactly; the rounded
    // complex evaluation would alias to zero one ulp away from the segment.
    if (std::fma(z.b, double(delta.r), -double(delta.d)) != 0.0) return false;
    cplx val = central_charge(ctx, exp_class(ctx, z), delta);
    return std::real(val) <= 0.0;
}

ChamberLocation in_geometric_chamber(const LatticeContext& ctx, TubePoint z,
                                     long long r_max, long long d_max) {
    if (!(z.t > 0.0)) return {ChamberLocation::Kind::outside_tube, std::nullopt};
    double sqrtm = std::sqrt(double(ctx.m));
    long long needed_r = static_cast<long long>(std::ceil(1.0 / (z.t * sqrtm)));
    if (needed_r < 1) needed_r = 1;
    long long needed_d =
        static_cast<long long>(std::ceil(std::abs(z.b) * double(needed_r)));
    if (needed_r > r_max || needed_d > d_max)
        throw std::invalid_argument(
            "in_geometric_chamber: box too small for an exact answer at this point");
    for (long long r = 1; r <= needed_r; ++r) {
        long long d = std::llround(z.b * double(r));
        if (!abscissa_matches(z.b, r, d)) continue;
        long long num = checked_add(checked_mul(ctx.m, checked_mul(d, d)), 1);
        if (num % r != 0) continue;
        MukaiVector delta{r, d, num / r};
        if (double(ctx.m) * double(r) * double(r) * z.t * z.t <= 1.0)
            return {ChamberLocation::Kind::on_segment, delta};
    }
    return {ChamberLocation::Kind::inside, std::nullopt};
}

bool in_Q_plus(const LatticeContext& ctx, const OmegaVector& omega, double tol_rel) {
    double dd = std::real(pair_c(ctx, omega, conj(omega)));
    if (!(dd > 0.0)) return false;
    if (std::abs(pair_c(ctx, omega, omega)) > tol_rel * dd) return false;
    double scale = std::max({std::abs(omega.r), std::abs(omega.d), std::abs(omega.s)});
    if (std::abs(omega.r) < 1e-12 * scale) return false;
    return std::imag(omega.d / omega.r) > 0.0;
}

TubePoint recover_z(const OmegaVector& omega) {
    double scale = std::max({std::abs(omega.r), std::abs(omega.d), std::abs(omega.s)});
    if (!(scale > 0.0) || std::abs(omega.r) < 1e-12 * scale)
        throw std::runtime_error("recover_z: section degenerate");
    cplx z = omega.d / omega.r;
    return {std::real(z), std::imag(z)};
}

std::optional<MukaiVector> is_degenerate(const LatticeContext& ctx,
                                         const OmegaVector& omega, double tol) {
    double dd = std::real(pair_c(ctx, omega, conj(omega)));
    if (!(dd > 0.0)) throw std::invalid_argument("is_degenerate: Omega not reduced");
    if (std::abs(pair_c(ctx, omega, omega)) > 1e-6 * dd)
        throw std::invalid_argument("is_degenerate: Omega not reduced");
    double d = dd / 2.0;
    ThetaVector th = theta_of(ctx, omega);
    double X[3] = {std::real(omega.r), std::real(omega.d), std::real(omega.s)};
    double Y[3] = {std::imag(omega.r), std::imag(omega.d), std::imag(omega.s)};
    double T[3] = {th.r, th.d, th.s};
    // |(delta,Theta)| <= sqrt(2d + tol^2) and |(delta, Re/Im Omega)| < tol,
    // so in the frame expansion delta = (-(d,T)T + (d,X)X + (d,Y)Y)/d every
    // coordinate is bounded by the triangle inequality.
    double ct = std::sqrt(2.0 * d + tol * tol);
    long long bound[3];
    for (int i = 0; i < 3; ++i) {
        double bi = (ct * std::abs(T[i]) + tol * (std::abs(X[i]) + std::abs(Y[i]))) / d;
        bound[i] = static_cast<long long>(std::floor(bi + 0.5)) + 1;
    }
    std::optional<MukaiVector> best;
    double best_abs = tol;
    // A (-2)-class cannot have rank zero, so scanning the positive-rank half
    // loses nothing and the reported class is the root rather than its flip.
    for (long long r = 1; r <= bound[0]; ++r)
        for (long long dv = -bound[1]; dv <= bound[1]; ++dv)
            for (long long s = -bound[2]; s <= bound[2]; ++s) {
                MukaiVector v{r, dv, s};
                if (pair(ctx, v, v) != -2) continue;
                double a = std::abs(central_charge(ctx, omega, v));
                if (a < best_abs) {
                    best = v;
                    best_abs = a;
                }
            }
    return best;
}

}  // namespace k3flow
