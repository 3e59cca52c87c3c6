#include "cylobs/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cylobs {

namespace {

void check_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

// Trapezoid weight along one cross axis.
double axis_trap(const Grid& g, int i) {
    return (i == 0 || i == g.n_cross - 1) ? 0.5 * g.h_cross : g.h_cross;
}

}  // namespace

ReducedField average_vertical(const Field& u) {
    const Grid& g = u.grid;
    ReducedField v(g);
    const int na = g.n_axial;
    for (int c = 0; c < g.cross_count(); ++c) {
        const double* col = u.values.data() + g.node_index(c, 0);
        double s = 0.5 * (col[0] + col[na - 1]);
        for (int j = 1; j < na - 1; ++j) s += col[j];
        v.values[c] = s * g.h_axial;
    }
    return v;
}

Field apply_laplacian(const Field& u) {
    const Grid& g = u.grid;
    Field out(g);
    const double inv_hc2 = 1.0 / (g.h_cross * g.h_cross);
    const double inv_ha2 = 1.0 / (g.h_axial * g.h_axial);
    const int na = g.n_axial;
    const int nc = g.n_cross;
    const int stride_x = (g.d_cross == 1 ? 1 : nc) * na;  // node stride along x1
    const int stride_y = na;                              // node stride along x2 (d_cross == 2)
    for (int c = 0; c < g.cross_count(); ++c) {
        if (g.cross_on_boundary(c)) continue;
        const int base = g.node_index(c, 0);
        for (int j = 1; j < na - 1; ++j) {
            const int n = base + j;
            const double* p = u.values.data();
            double lap = (p[n - stride_x] + p[n + stride_x] - 2.0 * p[n]) * inv_hc2;
            if (g.d_cross == 2) lap += (p[n - stride_y] + p[n + stride_y] - 2.0 * p[n]) * inv_hc2;
            lap += (p[n - 1] + p[n + 1] - 2.0 * p[n]) * inv_ha2;
            out.values[n] = lap;
        }
    }
    return out;
}

ReducedField normal_trace(const Field& u, Face face) {
    const Grid& g = u.grid;
    ReducedField t(g);
    const int na = g.n_axial;
    const double inv_2h = 1.0 / (2.0 * g.h_axial);
    for (int c = 0; c < g.cross_count(); ++c) {
        const double* col = u.values.data() + g.node_index(c, 0);
        if (face == Face::bottom)
            t.values[c] = (3.0 * col[0] - 4.0 * col[1] + col[2]) * inv_2h;
        else
            t.values[c] = (3.0 * col[na - 1] - 4.0 * col[na - 2] + col[na - 3]) * inv_2h;
    }
    return t;
}

double edge_form(const Field& u, const Field& w) {
    check_same_grid(u.grid, w.grid, "edge_form");
    const Grid& g = u.grid;
    const int na = g.n_axial;
    const int nc = g.n_cross;
    const double inv_hc = 1.0 / g.h_cross;
    const double inv_ha = 1.0 / g.h_axial;
    double total = 0.0;

    // Axial edges: weight h_axial * cross_weight(c); (Du/h)^2 * h = Du^2 / h.
    for (int c = 0; c < g.cross_count(); ++c) {
        const double wc = g.cross_weight(c);
        const int base = g.node_index(c, 0);
        double s = 0.0;
        for (int j = 0; j < na - 1; ++j) {
            const double du = u.values[base + j + 1] - u.values[base + j];
            const double dw = w.values[base + j + 1] - w.values[base + j];
            s += du * dw;
        }
        total += s * inv_ha * wc;
    }

    // Cross edges along x1 (and x2 when d_cross == 2): transverse trapezoid weights.
    const int stride_x = (g.d_cross == 1 ? 1 : nc) * na;
    for (int c = 0; c < g.cross_count(); ++c) {
        if (g.cross_ix(c) == nc - 1) continue;
        const double wt = (g.d_cross == 2 ? axis_trap(g, g.cross_iy(c)) : 1.0);
        const int base = g.node_index(c, 0);
        double s = 0.0;
        for (int j = 0; j < na; ++j) {
            const double aw = g.axial_weight(j);
            const double du = u.values[base + stride_x + j] - u.values[base + j];
            const double dw = w.values[base + stride_x + j] - w.values[base + j];
            s += du * dw * aw;
        }
        total += s * inv_hc * wt;
    }
    if (g.d_cross == 2) {
        for (int c = 0; c < g.cross_count(); ++c) {
            if (g.cross_iy(c) == nc - 1) continue;
            const double wt = axis_trap(g, g.cross_ix(c));
            const int base = g.node_index(c, 0);
            double s = 0.0;
            for (int j = 0; j < na; ++j) {
                const double aw = g.axial_weight(j);
                const double du = u.values[base + na + j] - u.values[base + j];
                const double dw = w.values[base + na + j] - w.values[base + j];
                s += du * dw * aw;
            }
            total += s * inv_hc * wt;
        }
    }
    return total;
}

double dirichlet_energy(const Field& u) { return edge_form(u, u); }

double inner(const Field& u, const Field& w) {
    check_same_grid(u.grid, w.grid, "inner");
    const Grid& g = u.grid;
    double s = 0.0;
    for (int c = 0; c < g.cross_count(); ++c) {
        const double wc = g.cross_weight(c);
        const int base = g.node_index(c, 0);
        double col = 0.0;
        for (int j = 0; j < g.n_axial; ++j)
            col += u.values[base + j] * w.values[base + j] * g.axial_weight(j);
        s += col * wc;
    }
    return s;
}

double inner_reduced(const ReducedField& f, const ReducedField& g) {
    check_same_grid(f.grid, g.grid, "inner_reduced");
    double s = 0.0;
    for (int c = 0; c < f.grid.cross_count(); ++c)
        s += f.values[c] * g.values[c] * f.grid.cross_weight(c);
    return s;
}

double quadrature_reduced(const ReducedField& f) {
    double s = 0.0;
    for (int c = 0; c < f.grid.cross_count(); ++c) s += f.values[c] * f.grid.cross_weight(c);
    return s;
}

ReducedField reduced_laplacian(const ReducedField& v) {
    const Grid& g = v.grid;
    ReducedField out(g);
    const double inv_h2 = 1.0 / (g.h_cross * g.h_cross);
    const int nc = g.n_cross;
    for (int c = 0; c < g.cross_count(); ++c) {
        if (g.cross_on_boundary(c)) continue;
        const int ix = g.cross_ix(c);
        const int iy = g.cross_iy(c);
        double lap = (v.values[g.cross_index(ix - 1, iy)] + v.values[g.cross_index(ix + 1, iy)] -
                      2.0 * v.values[c]) *
                     inv_h2;
        if (g.d_cross == 2)
            lap += (v.values[g.cross_index(ix, iy - 1)] + v.values[g.cross_index(ix, iy + 1)] -
                    2.0 * v.values[c]) *
                   inv_h2;
        out.values[c] = lap;
    }
    (void)nc;
    return out;
}

Field extend_to_cylinder(const ReducedField& f) {
    Field u(f.grid);
    for (int c = 0; c < f.grid.cross_count(); ++c) {
        const int base = f.grid.node_index(c, 0);
        for (int j = 0; j < f.grid.n_axial; ++j) u.values[base + j] = f.values[c];
    }
    return u;
}

double max_abs(const Field& u) {
    double m = 0.0;
    for (double v : u.values) m = std::max(m, std::abs(v));
    return m;
}

double max_abs(const ReducedField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace cylobs
