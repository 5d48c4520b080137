#pragma once

#include <array>

#include "sgl/forms.hpp"

namespace sgl::detail {

// One quadrature point of the cell-wise tensor-trapezoid rule: the corner node
// carries the coefficient samples and the function value; the gradient uses the
// cell-edge differences through that corner.
struct QuadPoint {
    std::size_t node;               // corner node (values & coefficients)
    std::array<std::size_t, 2> gx;  // x-edge endpoints: (u[gx1]-u[gx0]) / hx
    std::array<std::size_t, 2> gy;  // y-edge endpoints (2-D only)
    double weight;                  // cell volume / 2^dim
};

template <class F>
void for_each_quad_point(const Grid& g, F&& f) {
    const std::size_t nx = g.n(0);
    if (g.dim() == 1) {
        const double w = g.h(0) / 2.0;
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            for (int cx = 0; cx <= 1; ++cx) {
                QuadPoint q;
                q.node = i + cx;
                q.gx = {i, i + 1};
                q.weight = w;
                f(q);
            }
        }
        return;
    }
    const std::size_t ny = g.n(1);
    const double w = g.h(0) * g.h(1) / 4.0;
    for (std::size_t j = 0; j + 1 < ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            for (int cy = 0; cy <= 1; ++cy) {
                for (int cx = 0; cx <= 1; ++cx) {
                    QuadPoint q;
                    q.node = g.index(i + cx, j + cy);
                    q.gx = {g.index(i, j + cy), g.index(i + 1, j + cy)};
                    q.gy = {g.index(i + cx, j), g.index(i + cx, j + 1)};
                    q.weight = w;
                    f(q);
                }
            }
        }
    }
}

// Dirichlet arguments are used with boundary values zeroed.
struct Sampler {
    const Grid& g;
    const GridFunction& u;
    bool zero_boundary;

    cplx value(std::size_t node) const {
        if (zero_boundary && g.on_boundary(node)) return cplx(0.0, 0.0);
        return u[node];
    }
    std::array<cplx, 2> gradient(const QuadPoint& q) const {
        std::array<cplx, 2> out{cplx(0, 0), cplx(0, 0)};
        out[0] = (value(q.gx[1]) - value(q.gx[0])) / g.h(0);
        if (g.dim() == 2) out[1] = (value(q.gy[1]) - value(q.gy[0])) / g.h(1);
        return out;
    }
};

inline Sampler make_sampler(const FormContext& ctx, const GridFunction& u) {
    return Sampler{ctx.grid(), u, ctx.grid().bc() == Bc::Dirichlet};
}

} // namespace sgl::detail
