#pragma once

#include <string>

#include "k3flow/period.hpp"

namespace k3flow {

struct SvgOptions {
    double b0 = -2.0;
    double b1 = 2.0;
    double t0 = 0.0;
    double t1 = 1.5;
    int width_px = 800;
};

// Draws the window [b0,b1] x [t0,t1] of the tube domain: the real axis, one
// vertical cut per hole in the box and a dot at each hole. Cut lines carry
// data-num/data-den/data-r attributes so consumers can read the exact
// abscissa and rank back out of the picture.
std::string chamber_svg(const LatticeContext& ctx, const SvgOptions& opt, long long r_max,
                        long long d_max);

}  // namespace k3flow
