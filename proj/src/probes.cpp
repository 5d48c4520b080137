#include "sgl/probes.hpp"

#include <cmath>

namespace sgl {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Axis mode: Dirichlet sin(k pi t), k>=1; Neumann cos((k-1) pi t), k>=1 (t in [0,1]).
double axis_mode(Bc bc, int k, double t) {
    return bc == Bc::Dirichlet ? std::sin(double(k) * kPi * t) : std::cos(double(k - 1) * kPi * t);
}

} // namespace

std::vector<GridFunction> ProbeGen::modes(int kmax) {
    const Grid& g = *grid_;
    std::vector<GridFunction> out;
    auto txy = [&](std::size_t idx, int axis) {
        double lo = g.lo(axis), hi = g.hi(axis);
        double v = axis == 0 ? g.x_of(idx) : g.y_of(idx);
        return (v - lo) / (hi - lo);
    };
    if (g.dim() == 1) {
        for (int k = 1; k <= kmax; ++k) {
            GridFunction u(g);
            for (std::size_t i = 0; i < u.size(); ++i) u[i] = axis_mode(g.bc(), k, txy(i, 0));
            out.push_back(std::move(u));
        }
    } else {
        for (int k = 1; k <= kmax; ++k) {
            for (int l = 1; l <= kmax; ++l) {
                GridFunction u(g);
                for (std::size_t i = 0; i < u.size(); ++i)
                    u[i] = axis_mode(g.bc(), k, txy(i, 0)) * axis_mode(g.bc(), l, txy(i, 1));
                out.push_back(std::move(u));
            }
        }
    }
    return out;
}

GridFunction ProbeGen::random_combination(int kmax, double decay, bool force_dirichlet_zero) {
    const Grid& g = *grid_;
    std::normal_distribution<double> gauss(0.0, 1.0);
    GridFunction u(g);
    auto t_of = [&](std::size_t idx, int axis) {
        double lo = g.lo(axis), hi = g.hi(axis);
        double v = axis == 0 ? g.x_of(idx) : g.y_of(idx);
        return (v - lo) / (hi - lo);
    };
    Bc bc = force_dirichlet_zero ? Bc::Dirichlet : g.bc();
    if (g.dim() == 1) {
        std::vector<cplx> coeff(kmax);
        for (int k = 1; k <= kmax; ++k)
            coeff[k - 1] = cplx(gauss(rng_), gauss(rng_)) / std::pow(double(k), decay);
        for (std::size_t i = 0; i < u.size(); ++i) {
            cplx s = 0.0;
            for (int k = 1; k <= kmax; ++k) s += coeff[k - 1] * axis_mode(bc, k, t_of(i, 0));
            u[i] = s;
        }
    } else {
        std::vector<cplx> coeff(kmax * kmax);
        for (int k = 1; k <= kmax; ++k)
            for (int l = 1; l <= kmax; ++l)
                coeff[(k - 1) * kmax + (l - 1)] =
                    cplx(gauss(rng_), gauss(rng_)) / std::pow(double(k + l - 1), decay);
        for (std::size_t i = 0; i < u.size(); ++i) {
            cplx s = 0.0;
            double tx = t_of(i, 0), ty = t_of(i, 1);
            for (int k = 1; k <= kmax; ++k)
                for (int l = 1; l <= kmax; ++l)
                    s += coeff[(k - 1) * kmax + (l - 1)] * axis_mode(bc, k, tx) *
                         axis_mode(bc, l, ty);
            u[i] = s;
        }
    }
    double sup = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sup = std::max(sup, std::abs(u[i]));
    if (sup > 0)
        for (std::size_t i = 0; i < u.size(); ++i) u[i] /= sup;
    return u;
}

GridFunction ProbeGen::random_smooth(int kmax, double decay) {
    return random_combination(kmax, decay, false);
}

GridFunction ProbeGen::random_nonneg(int kmax, double decay) {
    const Grid& g = *grid_;
    GridFunction base = random_combination(kmax, decay, false);
    GridFunction u(g);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::exp(base[i].real());
    if (g.bc() == Bc::Dirichlet) {
        // Taper to zero at the boundary with the lowest sine bump.
        for (std::size_t i = 0; i < u.size(); ++i) {
            double bump = std::sin(kPi * (g.x_of(i) - g.lo(0)) / (g.hi(0) - g.lo(0)));
            if (g.dim() == 2) bump *= std::sin(kPi * (g.y_of(i) - g.lo(1)) / (g.hi(1) - g.lo(1)));
            u[i] *= bump;
        }
    }
    return u;
}

GridFunction ProbeGen::random_nonvanishing(int kmax, double decay) {
    const Grid& g = *grid_;
    GridFunction g1 = random_combination(kmax, decay, false);
    GridFunction g2 = random_combination(kmax, decay, false);
    GridFunction u(g);
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = std::exp(cplx(g1[i].real(), g2[i].real()));
    return u;
}

} // namespace sgl
