#pragma once

#include <iosfwd>
#include <vector>

#include "sgl/grid.hpp"

namespace sgl {

/// Per-node complex N-vectors, e.g. a nodal gradient. Layout values[node*dim + k].
struct DiscreteGradient {
    const Grid* grid;
    std::vector<cplx> values;

    explicit DiscreteGradient(const Grid& g) : grid(&g), values(g.num_nodes() * g.dim()) {}
    cplx& at(std::size_t node, int k) { return values[node * grid->dim() + k]; }
    const cplx& at(std::size_t node, int k) const { return values[node * grid->dim() + k]; }
};

/// Centred second-order nodal gradient. Boundary handling follows the grid BC:
/// Neumann reflects a ghost node (derivative 0 at the wall), Dirichlet extends by zero.
DiscreteGradient grad(const GridFunction& u);

/// Trapezoidal L^p norm; p = infinity is the max norm (pass p = inf).
double lp_norm(const GridFunction& u, double p);

/// Trapezoidal sesquilinear inner product: sum w_i u_i conj(v_i).
cplx inner(const GridFunction& u, const GridFunction& v);

struct SignumMaps {
    GridFunction absu;   // |u|
    GridFunction sgnu;   // u/|u| where |u| > floor, else 0
    DiscreteGradient eta; // Im(conj(sgn u) grad u), nodal
    GridFunction v_p;    // u |u|^{p/2-1}
    GridFunction w_p;    // u |u|^{p-2}
};

/// Nodewise nonlinear maps used by the L^p accretivity machinery. Negative powers
/// replace |u| with max(|u|, floor).
SignumMaps signum_maps(const GridFunction& u, double p, double floor = 1e-30);

/// Nodewise |u|^s with the floor applied only when s < 0.
GridFunction abs_power(const GridFunction& u, double s, double floor = 1e-30);

/// CSV export: x[,y],re,im per node.
void write_csv(std::ostream& os, const GridFunction& u);

} // namespace sgl
