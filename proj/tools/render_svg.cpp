#include "render_svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace k3flow {

std::string chamber_svg(const LatticeContext& ctx, const SvgOptions& opt, long long r_max,
                        long long d_max) {
    if (!(opt.b1 > opt.b0) || !(opt.t1 > opt.t0) || opt.width_px <= 0)
        throw std::invalid_argument("chamber_svg: empty window");
    const double w = double(opt.width_px);
    const double h = w * (opt.t1 - opt.t0) / (opt.b1 - opt.b0);
    auto px = [&](double b) { return (b - opt.b0) / (opt.b1 - opt.b0) * w; };
    auto py = [&](double t) { return h - (t - opt.t0) / (opt.t1 - opt.t0) * h; };

    std::ostringstream os;
    os.precision(10);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width_px
       << "\" height=\"" << (long)std::lround(h) << "\" viewBox=\"0 0 " << w << " " << h
       << "\">\n";
    os << "<style>.axis{stroke:#444;stroke-width:1}"
          ".cut{stroke:#c22;stroke-width:1.5}"
          ".hole{fill:#c22}</style>\n";
    if (opt.t0 <= 0.0 && 0.0 <= opt.t1)
        os << "<line class=\"axis\" x1=\"0\" y1=\"" << py(0.0) << "\" x2=\"" << w
           << "\" y2=\"" << py(0.0) << "\"/>\n";

    for (const Hole& hole : holes(ctx, r_max, d_max)) {
        double b = double(hole.num) / double(hole.den);
        double ht = hole.height(ctx);
        if (b < opt.b0 || b > opt.b1) continue;
        if (ht < opt.t0) continue;
        double lo = std::max(opt.t0, 0.0);
        double hi = std::min(ht, opt.t1);
        if (hi > lo)
            os << "<line class=\"cut\" x1=\"" << px(b) << "\" y1=\"" << py(lo)
               << "\" x2=\"" << px(b) << "\" y2=\"" << py(hi) << "\" data-num=\""
               << hole.num << "\" data-den=\"" << hole.den << "\" data-r=\""
               << hole.root.r << "\"/>\n";
        if (ht <= opt.t1)
            os << "<circle class=\"hole\" cx=\"" << px(b) << "\" cy=\"" << py(ht)
               << "\" r=\"3\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace k3flow
