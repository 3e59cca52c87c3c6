#include "cylobs/free_boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cylobs {

std::string to_string(FbClass c) {
    switch (c) {
        case FbClass::regular: return "regular";
        case FbClass::singular_candidate: return "singular-candidate";
        case FbClass::degenerate: return "degenerate";
    }
    return "?";
}

FreeBoundaryReport analyze_free_boundary(const ObstacleSolution& sol, std::span<const double> radii,
                                         const FreeBoundaryOptions& opt) {
    const Grid& g = sol.u.grid;
    if (radii.empty()) throw std::invalid_argument("analyze_free_boundary: no radii");
    for (double r : radii)
        if (r < 2.0 * g.h_cross - 1e-12)
            throw std::invalid_argument("analyze_free_boundary: radius below 2 h_cross");

    bool any_coincident = false;
    for (int c = 0; c < g.cross_count(); ++c) any_coincident = any_coincident || sol.coincidence[c];
    if (!any_coincident)
        throw std::invalid_argument("analyze_free_boundary: empty coincidence set");

    std::vector<double> sorted_radii(radii.begin(), radii.end());
    std::sort(sorted_radii.begin(), sorted_radii.end());

    const ReducedField tb = normal_trace(sol.u, Face::bottom);
    const ReducedField tt = normal_trace(sol.u, Face::top);

    FreeBoundaryReport rep;
    rep.tol_v = sol.tol_v;
    rep.min_h = std::numeric_limits<double>::infinity();

    auto coincident = [&](int c) { return sol.coincidence[c] != 0; };
    for (int c = 0; c < g.cross_count(); ++c) {
        const int ix = g.cross_ix(c), iy = g.cross_iy(c);
        const bool s = coincident(c);
        bool fb = false;
        if (ix > 0) fb = fb || coincident(g.cross_index(ix - 1, iy)) != s;
        if (ix < g.n_cross - 1) fb = fb || coincident(g.cross_index(ix + 1, iy)) != s;
        if (g.d_cross == 2) {
            if (iy > 0) fb = fb || coincident(g.cross_index(ix, iy - 1)) != s;
            if (iy < g.n_cross - 1) fb = fb || coincident(g.cross_index(ix, iy + 1)) != s;
        }
        if (!fb) continue;

        FbNode node;
        node.cross_index = c;
        node.x1 = g.x1(c);
        node.x2 = g.x2(c);
        node.h_value = 1.0 - tb.values[c] - tt.values[c];
        rep.min_h = std::min(rep.min_h, node.h_value);

        for (double r : sorted_radii) {
            const int span = static_cast<int>(std::floor(r / g.h_cross + 1e-12));
            const double r2 = (r / g.h_cross) * (r / g.h_cross) + 1e-12;
            long total = 0, inside = 0;
            for (int dx = -span; dx <= span; ++dx) {
                const int jx = ix + dx;
                if (jx < 0 || jx >= g.n_cross) continue;
                if (g.d_cross == 1) {
                    if (dx * dx > r2) continue;
                    ++total;
                    if (coincident(g.cross_index(jx))) ++inside;
                } else {
                    for (int dy = -span; dy <= span; ++dy) {
                        const int jy = iy + dy;
                        if (jy < 0 || jy >= g.n_cross) continue;
                        if (dx * dx + dy * dy > r2) continue;
                        ++total;
                        if (coincident(g.cross_index(jx, jy))) ++inside;
                    }
                }
            }
            node.density_ratios.emplace_back(r, static_cast<double>(inside) / static_cast<double>(total));
        }

        if (std::abs(node.h_value) <= opt.tol_h)
            node.classification = FbClass::degenerate;
        else if (node.density_ratios.front().second < opt.density_threshold)
            node.classification = FbClass::singular_candidate;
        else
            node.classification = FbClass::regular;
        rep.nodes.push_back(std::move(node));
    }
    return rep;
}

}  // namespace cylobs
