#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace k3flow {

// Overflow-checked arithmetic on 64-bit integers. Every lattice computation
// goes through these helpers; a silent wraparound would corrupt wall
// detection downstream, so overflow throws instead.
inline long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("integer overflow in lattice arithmetic (add)");
    return r;
}

inline long long checked_sub(long long a, long long b) {
    long long r;
    if (__builtin_sub_overflow(a, b, &r))
        throw std::overflow_error("integer overflow in lattice arithmetic (sub)");
    return r;
}

inline long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("integer overflow in lattice arithmetic (mul)");
    return r;
}

// Degree datum of the surface: the ample generator H has H^2 = 2m.
struct LatticeContext {
    long long m;

    explicit LatticeContext(long long m_) : m(m_) {
        if (m < 1) throw std::invalid_argument("LatticeContext: m must be >= 1");
    }
};

// Integer class (r, d, s): rank, divisor coefficient in units of H, and the
// degree-4 component.
struct MukaiVector {
    long long r = 0;
    long long d = 0;
    long long s = 0;

    friend bool operator==(const MukaiVector&, const MukaiVector&) = default;

    bool is_zero() const { return r == 0 && d == 0 && s == 0; }

    MukaiVector operator+(const MukaiVector& o) const {
        return {checked_add(r, o.r), checked_add(d, o.d), checked_add(s, o.s)};
    }
    MukaiVector operator-(const MukaiVector& o) const {
        return {checked_sub(r, o.r), checked_sub(d, o.d), checked_sub(s, o.s)};
    }
    MukaiVector operator-() const {
        return {checked_sub(0, r), checked_sub(0, d), checked_sub(0, s)};
    }
    MukaiVector scaled(long long k) const {
        return {checked_mul(k, r), checked_mul(k, d), checked_mul(k, s)};
    }
};

std::ostream& operator<<(std::ostream&, const MukaiVector&);

// Ordering is lexicographic in (r, d, s); used for sorted root lists.
bool lex_less(const MukaiVector& a, const MukaiVector& b);

enum class ConeComponent { plus, minus, outside };

std::ostream& operator<<(std::ostream&, ConeComponent);

// The signature (2,1) pairing 2m*d1*d2 - r1*s2 - r2*s1.
long long pair(const LatticeContext& ctx, const MukaiVector& v, const MukaiVector& w);

// Locates v relative to the negative cone C = { v != 0 : (v,v) <= 0 }.
// Returns plus/minus for the component of C containing/opposite (0,0,1),
// outside when (v,v) > 0. Rejects the zero vector.
ConeComponent cone_component(const LatticeContext& ctx, const MukaiVector& v);

// All delta = (r, d, s) with 1 <= r <= r_max, |d| <= d_max and
// m*d^2 - r*s = -1, sorted lexicographically. These are exactly the
// (-2)-classes of positive rank within the box.
std::vector<MukaiVector> enumerate_roots(const LatticeContext& ctx, long long r_max,
                                         long long d_max);

bool is_root(const LatticeContext& ctx, const MukaiVector& delta);

// v |-> v + <v,delta> delta, the reflection fixing delta-perp. delta must be
// a root.
MukaiVector reflect(const LatticeContext& ctx, const MukaiVector& delta,
                    const MukaiVector& v);

// Action of the k-fold shift on classes: v |-> (-1)^k v.
MukaiVector shift_action(long long k, const MukaiVector& v);

// Integer matrix acting on (r, d, s) column vectors.
struct LatticeIsometry {
    std::array<std::array<long long, 3>, 3> a{};

    static LatticeIsometry identity();

    MukaiVector apply(const MukaiVector& v) const;
    LatticeIsometry compose(const LatticeIsometry& o) const;

    friend bool operator==(const LatticeIsometry&, const LatticeIsometry&) = default;
};

LatticeIsometry reflection_matrix(const LatticeContext& ctx, const MukaiVector& delta);

// Checks pairing preservation on all basis pairs (determinant +-1 follows,
// but is asserted as well).
bool is_isometry(const LatticeContext& ctx, const LatticeIsometry& g);

// Orientation test on positive definite 2-planes: maps the reference plane
// spanned by Re exp(i), Im exp(i) through g, projects back with the pairing,
// and reports the sign of the resulting 2x2 determinant. Throws when g is
// not an isometry.
bool is_orientation_preserving(const LatticeContext& ctx, const LatticeIsometry& g);

}  // namespace k3flow
