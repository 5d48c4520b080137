#include "sgl/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace sgl {

namespace {

// Value of the ghost node just outside the wall, per BC.
cplx ghost(const GridFunction& u, Bc bc, std::size_t mirror) {
    return bc == Bc::Neumann ? u[mirror] : cplx(0.0, 0.0);
}

} // namespace

DiscreteGradient grad(const GridFunction& u) {
    const Grid& g = u.grid();
    DiscreteGradient out(g);
    const std::size_t nx = g.n(0);
    const std::size_t ny = g.dim() == 2 ? g.n(1) : 1;
    for (std::size_t iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            std::size_t idx = g.index(ix, iy);
            cplx left = ix > 0 ? u[g.index(ix - 1, iy)] : ghost(u, g.bc(), g.index(1, iy));
            cplx right = ix + 1 < nx ? u[g.index(ix + 1, iy)] : ghost(u, g.bc(), g.index(nx - 2, iy));
            out.at(idx, 0) = (right - left) / (2.0 * g.h(0));
            if (g.dim() == 2) {
                cplx down = iy > 0 ? u[g.index(ix, iy - 1)] : ghost(u, g.bc(), g.index(ix, 1));
                cplx up = iy + 1 < ny ? u[g.index(ix, iy + 1)] : ghost(u, g.bc(), g.index(ix, ny - 2));
                out.at(idx, 1) = (up - down) / (2.0 * g.h(1));
            }
        }
    }
    return out;
}

double lp_norm(const GridFunction& u, double p) {
    const Grid& g = u.grid();
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i]));
        return m;
    }
    if (p < 1.0) throw BadExponent("lp_norm needs p >= 1");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        s += g.quad_weight(i) * std::pow(std::abs(u[i]), p);
    return std::pow(s, 1.0 / p);
}

cplx inner(const GridFunction& u, const GridFunction& v) {
    const Grid& g = u.grid();
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) s += g.quad_weight(i) * u[i] * std::conj(v[i]);
    return s;
}

GridFunction abs_power(const GridFunction& u, double s, double floor) {
    GridFunction out(u.grid());
    for (std::size_t i = 0; i < u.size(); ++i) {
        double a = std::abs(u[i]);
        if (s < 0.0) a = std::max(a, floor);
        out[i] = (s == 0.0) ? 1.0 : std::pow(a, s);
    }
    return out;
}

SignumMaps signum_maps(const GridFunction& u, double p, double floor) {
    if (!(p > 1.0) || std::isinf(p)) throw BadExponent("signum_maps needs p in (1, inf)");
    const Grid& g = u.grid();
    SignumMaps m{GridFunction(g), GridFunction(g), DiscreteGradient(g), GridFunction(g),
                 GridFunction(g)};
    DiscreteGradient du = grad(u);
    const double ev = p / 2.0 - 1.0;
    const double ew = p - 2.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double a = std::abs(u[i]);
        m.absu[i] = a;
        cplx sgn = a > floor ? u[i] / a : cplx(0.0, 0.0);
        m.sgnu[i] = sgn;
        double av = ev < 0.0 ? std::max(a, floor) : a;
        double aw = ew < 0.0 ? std::max(a, floor) : a;
        m.v_p[i] = (ev == 0.0) ? u[i] : u[i] * std::pow(av, ev);
        m.w_p[i] = (ew == 0.0) ? u[i] : u[i] * std::pow(aw, ew);
        for (int k = 0; k < g.dim(); ++k)
            m.eta.at(i, k) = std::imag(std::conj(sgn) * du.at(i, k));
    }
    return m;
}

void write_csv(std::ostream& os, const GridFunction& u) {
    const Grid& g = u.grid();
    os << (g.dim() == 2 ? "x,y,re,im\n" : "x,re,im\n");
    for (std::size_t i = 0; i < u.size(); ++i) {
        os << g.x_of(i);
        if (g.dim() == 2) os << ',' << g.y_of(i);
        os << ',' << u[i].real() << ',' << u[i].imag() << '\n';
    }
}

} // namespace sgl
