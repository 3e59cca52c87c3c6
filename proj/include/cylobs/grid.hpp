#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cylobs {

/// Uniform tensor grid on the cylinder D x (0,1); D is the unit interval
/// (d_cross = 1) or the unit square (d_cross = 2). Spacings are 1/(n-1) on
/// each axis, so the axial node set is symmetric under xn -> 1-xn.
/// Node storage is row-major with the axial index fastest: the value at
/// cross-section node c and axial level j lives at c * n_axial + j.
struct Grid {
    int d_cross = 1;
    int n_cross = 3;
    int n_axial = 3;
    double h_cross = 0.5;
    double h_axial = 0.5;

    Grid(int d, int nc, int na) {
        if (d != 1 && d != 2) throw std::invalid_argument("Grid: d_cross must be 1 or 2");
        if (nc < 3) throw std::invalid_argument("Grid: n_cross must be >= 3");
        if (na < 3) throw std::invalid_argument("Grid: n_axial must be >= 3");
        d_cross = d;
        n_cross = nc;
        n_axial = na;
        h_cross = 1.0 / (nc - 1);
        h_axial = 1.0 / (na - 1);
    }

    int cross_count() const { return d_cross == 1 ? n_cross : n_cross * n_cross; }
    int node_count() const { return cross_count() * n_axial; }

    int cross_index(int ix, int iy = 0) const { return d_cross == 1 ? ix : ix * n_cross + iy; }
    int node_index(int c, int j) const { return c * n_axial + j; }

    int cross_ix(int c) const { return d_cross == 1 ? c : c / n_cross; }
    int cross_iy(int c) const { return d_cross == 1 ? 0 : c % n_cross; }

    double x1(int c) const { return cross_ix(c) * h_cross; }
    double x2(int c) const { return cross_iy(c) * h_cross; }
    double xn(int j) const { return j * h_axial; }

    bool cross_on_boundary(int c) const {
        const int ix = cross_ix(c);
        if (ix == 0 || ix == n_cross - 1) return true;
        if (d_cross == 2) {
            const int iy = cross_iy(c);
            if (iy == 0 || iy == n_cross - 1) return true;
        }
        return false;
    }
    bool node_on_boundary(int c, int j) const {
        return j == 0 || j == n_axial - 1 || cross_on_boundary(c);
    }

    /// Trapezoid weight of a cross-section node (quadrature measure on D).
    double cross_weight(int c) const {
        double w = axis_weight(cross_ix(c), n_cross, h_cross);
        if (d_cross == 2) w *= axis_weight(cross_iy(c), n_cross, h_cross);
        return w;
    }
    double axial_weight(int j) const { return axis_weight(j, n_axial, h_axial); }
    /// Tensor trapezoid weight of a full node (quadrature measure on the cylinder).
    double node_weight(int c, int j) const { return cross_weight(c) * axial_weight(j); }

    /// Quadrature measure of D (equals 1 up to roundoff).
    double domain_measure() const {
        double s = 0.0;
        for (int c = 0; c < cross_count(); ++c) s += cross_weight(c);
        return s;
    }

    bool operator==(const Grid&) const = default;

  private:
    static double axis_weight(int i, int n, double h) {
        return (i == 0 || i == n - 1) ? 0.5 * h : h;
    }
};

/// Scalar nodal values on the full cylinder grid.
struct Field {
    Grid grid;
    std::vector<double> values;

    explicit Field(const Grid& g, double fill = 0.0) : grid(g), values(g.node_count(), fill) {}

    double& at(int c, int j) { return values[grid.node_index(c, j)]; }
    double at(int c, int j) const { return values[grid.node_index(c, j)]; }

    /// Sample f at every node; f takes (x1, xn) or (x1, x2, xn).
    template <class F>
    static Field from_function(const Grid& g, F&& f) {
        Field u(g);
        for (int c = 0; c < g.cross_count(); ++c)
            for (int j = 0; j < g.n_axial; ++j) {
                if constexpr (std::is_invocable_v<F&, double, double, double>)
                    u.at(c, j) = f(g.x1(c), g.x2(c), g.xn(j));
                else
                    u.at(c, j) = f(g.x1(c), g.xn(j));
            }
        return u;
    }

    void validate_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) throw std::invalid_argument("Field: non-finite value");
    }
};

/// Scalar values on the cross-section grid of D.
struct ReducedField {
    Grid grid;
    std::vector<double> values;

    explicit ReducedField(const Grid& g, double fill = 0.0) : grid(g), values(g.cross_count(), fill) {}

    double& at(int c) { return values[c]; }
    double at(int c) const { return values[c]; }

    template <class F>
    static ReducedField from_function(const Grid& g, F&& f) {
        ReducedField v(g);
        for (int c = 0; c < g.cross_count(); ++c) {
            if (g.d_cross == 1)
                v.values[c] = f(g.x1(c));
            else
                v.values[c] = f(g.x1(c), g.x2(c));
        }
        return v;
    }

    void validate_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) throw std::invalid_argument("ReducedField: non-finite value");
    }
};

/// Dirichlet data on the cylinder boundary: per-node lateral values plus
/// constant bottom and top caps. Lateral values are stored node-indexed and
/// are meaningful only at lateral-boundary nodes; at the cap edges they must
/// agree with the cap constants.
struct BoundaryData {
    double bottom = 0.0;
    double top = 0.0;
    std::vector<double> lateral;

    static BoundaryData constant(const Grid& g, double alpha) {
        BoundaryData b;
        b.bottom = alpha;
        b.top = alpha;
        b.lateral.assign(g.node_count(), alpha);
        return b;
    }

    static BoundaryData zero(const Grid& g) { return constant(g, 0.0); }

    /// Build from g(x', xn) sampled at lateral nodes; the caps are read off
    /// the lateral trace and must be constant (checked).
    template <class F>
    static BoundaryData from_lateral_function(const Grid& g, F&& f) {
        BoundaryData b;
        b.lateral.assign(g.node_count(), 0.0);
        bool first = true;
        for (int c = 0; c < g.cross_count(); ++c) {
            if (!g.cross_on_boundary(c)) continue;
            for (int j = 0; j < g.n_axial; ++j) {
                const double val = g.d_cross == 1 ? f(g.x1(c), g.xn(j)) : f(g.x1(c), g.x2(c), g.xn(j));
                b.lateral[g.node_index(c, j)] = val;
                if (j == 0) {
                    if (first) b.bottom = val;
                    else if (std::abs(val - b.bottom) > 1e-12)
                        throw std::invalid_argument("BoundaryData: bottom cap value is not constant");
                }
                if (j == g.n_axial - 1) {
                    if (first) b.top = val;
                    else if (std::abs(val - b.top) > 1e-12)
                        throw std::invalid_argument("BoundaryData: top cap value is not constant");
                }
            }
            first = false;
        }
        return b;
    }

    void validate(const Grid& g) const {
        if (static_cast<int>(lateral.size()) != g.node_count())
            throw std::invalid_argument("BoundaryData: lateral size mismatch");
        for (int c = 0; c < g.cross_count(); ++c) {
            if (!g.cross_on_boundary(c)) continue;
            if (std::abs(lateral[g.node_index(c, 0)] - bottom) > 1e-12)
                throw std::invalid_argument("BoundaryData: lateral trace at xn=0 disagrees with bottom");
            if (std::abs(lateral[g.node_index(c, g.n_axial - 1)] - top) > 1e-12)
                throw std::invalid_argument("BoundaryData: lateral trace at xn=1 disagrees with top");
        }
    }

    /// Overwrite boundary nodes of u with this data.
    void apply(Field& u) const {
        const Grid& g = u.grid;
        for (int c = 0; c < g.cross_count(); ++c) {
            const bool lat = g.cross_on_boundary(c);
            for (int j = 0; j < g.n_axial; ++j) {
                if (j == 0)
                    u.at(c, j) = bottom;
                else if (j == g.n_axial - 1)
                    u.at(c, j) = top;
                else if (lat)
                    u.at(c, j) = lateral[g.node_index(c, j)];
            }
        }
    }
};

}  // namespace cylobs
