#pragma once

#include "cylobs/grid.hpp"

namespace cylobs {

enum class Face { bottom, top };

/// Vertical (axial) trapezoid average v(x') = integral of u over the column
/// at x'. Linear in u; exact for fields affine in xn.
ReducedField average_vertical(const Field& u);

/// Discrete Laplacian, standard second-order 5/7-point stencil at interior
/// nodes; boundary nodes of the output are set to 0.
Field apply_laplacian(const Field& u);

/// Outward normal derivative on a cap face: -d/dxn at the bottom, +d/dxn at
/// the top, one-sided second-order three-point stencils (exact on quadratics).
ReducedField normal_trace(const Field& u, Face face);

/// Edge bilinear form sum_edges (Du Dw / h^2) * edge measure, with trapezoid
/// weights transverse to each edge. dirichlet_energy(u) = edge_form(u, u),
/// and for u, w vanishing on the boundary <apply_laplacian(u), w> = -edge_form(u, w)
/// holds to roundoff.
double edge_form(const Field& u, const Field& w);
double dirichlet_energy(const Field& u);

/// Trapezoid-weighted inner products and quadratures.
double inner(const Field& u, const Field& w);
double inner_reduced(const ReducedField& f, const ReducedField& g);
double quadrature_reduced(const ReducedField& f);

/// Cross-section Laplacian of a reduced field at interior nodes of D;
/// boundary nodes of the output are set to 0.
ReducedField reduced_laplacian(const ReducedField& v);

/// Extend f(x') to the cylinder, constant along xn.
Field extend_to_cylinder(const ReducedField& f);

double max_abs(const Field& u);
double max_abs(const ReducedField& f);

}  // namespace cylobs
