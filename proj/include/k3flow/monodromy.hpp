#pragma once

#include <string>
#include <vector>

#include "k3flow/period.hpp"

namespace k3flow {

// One generator power: the twist attached to a positive-rank root.
struct Letter {
    MukaiVector root;
    long long exp = 0;

    friend bool operator==(const Letter&, const Letter&) = default;
};

// Element of the deck group, written as an even-shift count times a freely
// reduced word in the root twists. Adjacent letters with the same root are
// merged and zero powers dropped.
struct GroupElement {
    long long shift = 0;
    std::vector<Letter> word;

    bool is_identity() const { return shift == 0 && word.empty(); }

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

GroupElement reduced(GroupElement g);
GroupElement multiply(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& g);
GroupElement twist(const MukaiVector& root, long long exp);
std::string to_string(const GroupElement& g);

// Piecewise-linear path in the tube domain. The traversal order is
// base -> vertices[0] -> ... -> vertices.back(), and closed paths return to
// the base along one more straight edge.
struct Polyline {
    TubePoint base;
    std::vector<TubePoint> vertices;
    bool closed = false;
};

// Deck transformation of a closed loop based in the chamber, read off from
// its transversal cut crossings in path order; a left-to-right crossing
// contributes the positive power. Throws when the loop is not closed, a
// vertex sits on a cut, a crossing comes within tolerance of a hole, or the
// enumeration box cannot certify the crossing list.
GroupElement lift_loop(const LatticeContext& ctx, const Polyline& loop, long long r_max,
                       long long d_max);

// Induced action on the lattice. Each twist acts by the square of the root
// reflection and each shift unit by the square of -id, so words act
// trivially; the matrix is still assembled honestly from its factors.
LatticeIsometry act_on_lattice(const LatticeContext& ctx, const GroupElement& g);

LatticeIsometry twist_matrix(const LatticeContext& ctx, const MukaiVector& root);
LatticeIsometry shift_matrix(long long k);

// Action on chamber tags of the covering: left translation.
GroupElement deck_action_on_chamber(const GroupElement& g, const GroupElement& tag);

}  // namespace k3flow
