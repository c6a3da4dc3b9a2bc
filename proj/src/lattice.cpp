#include "k3flow/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace k3flow {

std::ostream& operator<<(std::ostream& os, const MukaiVector& v) {
    return os << '(' << v.r << ',' << v.d << ',' << v.s << ')';
}

std::ostream& operator<<(std::ostream& os, ConeComponent c) {
    switch (c) {
        case ConeComponent::plus: return os << "plus";
        case ConeComponent::minus: return os << "minus";
        case ConeComponent::outside: return os << "outside";
    }
    return os;
}

bool lex_less(const MukaiVector& a, const MukaiVector& b) {
    if (a.r != b.r) return a.r < b.r;
    if (a.d != b.d) return a.d < b.d;
    return a.s < b.s;
}

long long pair(const LatticeContext& ctx, const MukaiVector& v, const MukaiVector& w) {
    long long dd = checked_mul(checked_mul(2, ctx.m), checked_mul(v.d, w.d));
    long long rs = checked_add(checked_mul(v.r, w.s), checked_mul(w.r, v.s));
    return checked_sub(dd, rs);
}

ConeComponent cone_component(const LatticeContext& ctx, const MukaiVector& v) {
    if (v.is_zero()) throw std::invalid_argument("cone_component: zero vector");
    if (pair(ctx, v, v) > 0) return ConeComponent::outside;
    // Inside C the entries r and s cannot have opposite signs, and they do
    // not both vanish, so the first nonzero of (s, r) fixes the nappe.
    long long key = (v.s != 0) ? v.s : v.r;
    return key > 0 ? ConeComponent::plus : ConeComponent::minus;
}

std::vector<MukaiVector> enumerate_roots(const LatticeContext& ctx, long long r_max,
                                         long long d_max) {
    if (r_max < 1 || d_max < 0)
        throw std::invalid_argument("enumerate_roots: need r_max >= 1, d_max >= 0");
    std::vector<MukaiVector> out;
    for (long long r = 1; r <= r_max; ++r) {
        for (long long d = -d_max; d <= d_max; ++d) {
            long long num = checked_add(checked_mul(ctx.m, checked_mul(d, d)), 1);
            if (num % r != 0) continue;
            out.push_back({r, d, num / r});
        }
    }
    return out;
}

bool is_root(const LatticeContext& ctx, const MukaiVector& delta) {
    return pair(ctx, delta, delta) == -2;
}

MukaiVector reflect(const LatticeContext& ctx, const MukaiVector& delta,
                    const MukaiVector& v) {
    if (!is_root(ctx, delta))
        throw std::invalid_argument("reflect: delta is not a (-2)-class");
    return v + delta.scaled(pair(ctx, v, delta));
}

MukaiVector shift_action(long long k, const MukaiVector& v) {
    long long sign = (k % 2 == 0) ? 1 : -1;
    return v.scaled(sign);
}

LatticeIsometry LatticeIsometry::identity() {
    LatticeIsometry g;
    for (int i = 0; i < 3; ++i) g.a[i][i] = 1;
    return g;
}

MukaiVector LatticeIsometry::apply(const MukaiVector& v) const {
    std::array<long long, 3> x{v.r, v.d, v.s};
    std::array<long long, 3> y{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            y[i] = checked_add(y[i], checked_mul(a[i][j], x[j]));
    return {y[0], y[1], y[2]};
}

LatticeIsometry LatticeIsometry::compose(const LatticeIsometry& o) const {
    LatticeIsometry g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                g.a[i][j] = checked_add(g.a[i][j], checked_mul(a[i][k], o.a[k][j]));
    return g;
}

LatticeIsometry reflection_matrix(const LatticeContext& ctx, const MukaiVector& delta) {
    if (!is_root(ctx, delta))
        throw std::invalid_argument("reflection_matrix: delta is not a (-2)-class");
    LatticeIsometry g;
    const MukaiVector basis[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int j = 0; j < 3; ++j) {
        MukaiVector col = reflect(ctx, delta, basis[j]);
        g.a[0][j] = col.r;
        g.a[1][j] = col.d;
        g.a[2][j] = col.s;
    }
    return g;
}

bool is_isometry(const LatticeContext& ctx, const LatticeIsometry& g) {
    const MukaiVector basis[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            long long expect = pair(ctx, basis[i], basis[j]);
            long long got = pair(ctx, g.apply(basis[i]), g.apply(basis[j]));
            if (expect != got) return false;
        }
    long long det = 0;
    det = checked_add(det, checked_mul(g.a[0][0], checked_sub(checked_mul(g.a[1][1], g.a[2][2]), checked_mul(g.a[1][2], g.a[2][1]))));
    det = checked_sub(det, checked_mul(g.a[0][1], checked_sub(checked_mul(g.a[1][0], g.a[2][2]), checked_mul(g.a[1][2], g.a[2][0]))));
    det = checked_add(det, checked_mul(g.a[0][2], checked_sub(checked_mul(g.a[1][0], g.a[2][1]), checked_mul(g.a[1][1], g.a[2][0]))));
    return det == 1 || det == -1;
}

namespace {

double pair_real(const LatticeContext& ctx, const std::array<double, 3>& v,
                 const std::array<double, 3>& w) {
    return 2.0 * double(ctx.m) * v[1] * w[1] - v[0] * w[2] - w[0] * v[2];
}

std::array<double, 3> apply_real(const LatticeIsometry& g, const std::array<double, 3>& v) {
    std::array<double, 3> y{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) y[i] += double(g.a[i][j]) * v[j];
    return y;
}

}  // namespace

bool is_orientation_preserving(const LatticeContext& ctx, const LatticeIsometry& g) {
    if (!is_isometry(ctx, g))
        throw std::invalid_argument("is_orientation_preserving: not an isometry");
    // Reference plane from exp(i): X = (1, 0, -m), Y = (0, 1, 0). The plane
    // is positive definite, so projection of any positive plane onto it is
    // invertible and the determinant sign is well defined.
    std::array<double, 3> X{1.0, 0.0, -double(ctx.m)};
    std::array<double, 3> Y{0.0, 1.0, 0.0};
    std::array<double, 3> gX = apply_real(g, X);
    std::array<double, 3> gY = apply_real(g, Y);
    double xx = pair_real(ctx, X, X);
    double yy = pair_real(ctx, Y, Y);
    double a = pair_real(ctx, gX, X) / xx;
    double b = pair_real(ctx, gX, Y) / yy;
    double c = pair_real(ctx, gY, X) / xx;
    double d = pair_real(ctx, gY, Y) / yy;
    return a * d - b * c > 0.0;
}

}  // namespace k3flow
