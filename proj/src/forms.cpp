#include "sgl/forms.hpp"

#include <array>
#include <cmath>

#include "sgl/smallmat.hpp"
#include "quadloop.hpp"

namespace sgl {

using detail::QuadPoint;
using detail::Sampler;
using detail::for_each_quad_point;
using detail::make_sampler;

namespace {

// A0s and A1s rows at a node as fixed arrays.
Mat2 real_part(const RealMatrixField& m, std::size_t node, int dim) {
    Mat2 out{m.at(node, 0, 0), 0, 0, 0};
    if (dim == 2) {
        out[1] = m.at(node, 0, 1);
        out[2] = m.at(node, 1, 0);
        out[3] = m.at(node, 1, 1);
    }
    return out;
}

} // namespace

FormContext FormContext::build(CoefficientSet cs_in) {
    cs_in.check();
    Decomposition dec = decompose(cs_in.A);
    validate_ellipticity(dec);
    FormContext ctx{std::move(cs_in), std::move(dec), {}, {}, {}};
    const Grid& g = *ctx.cs.grid;
    ctx.Vplus.resize(g.num_nodes());
    ctx.Vminus.resize(g.num_nodes());
    ctx.W.resize(g.num_nodes());
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        double V = ctx.cs.Q[i].real();
        ctx.Vplus[i] = std::max(V, 0.0);
        ctx.Vminus[i] = std::max(-V, 0.0);
        ctx.W[i] = ctx.cs.Q[i].imag();
    }
    return ctx;
}

CoefficientSet FormContext::adjoint_data() const {
    const Grid& g = grid();
    CoefficientSet out(g);
    int d = g.dim();
    for (std::size_t node = 0; node < g.num_nodes(); ++node) {
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) out.A.at(node, r, c) = std::conj(cs.A.at(node, c, r));
        for (int k = 0; k < d; ++k) {
            out.b1.at(node, k) = -std::conj(cs.b2.at(node, k));
            out.b2.at(node, k) = -std::conj(cs.b1.at(node, k));
        }
        out.Q[node] = std::conj(cs.Q[node]);
    }
    return out;
}

cplx form_t(const FormContext& ctx, const GridFunction& u, const GridFunction& v) {
    const Grid& g = ctx.grid();
    if (!u.grid().same_as(g) || !v.grid().same_as(g))
        throw InvalidField("form arguments must share the context grid");
    const int d = g.dim();
    Sampler su = make_sampler(ctx, u);
    Sampler sv = make_sampler(ctx, v);
    cplx acc(0.0, 0.0);
    for_each_quad_point(g, [&](const QuadPoint& q) {
        auto gu = su.gradient(q);
        auto gv = sv.gradient(q);
        cplx uq = su.value(q.node);
        cplx vq = sv.value(q.node);
        cplx term(0.0, 0.0);
        // <A grad u, grad v>
        for (int r = 0; r < d; ++r) {
            cplx row(0.0, 0.0);
            for (int c = 0; c < d; ++c) row += ctx.cs.A.at(q.node, r, c) * gu[c];
            term += row * std::conj(gv[r]);
        }
        // <b1 . grad u, v> - <b2 u, grad v> + <Q u, v>
        cplx b1g(0.0, 0.0);
        for (int k = 0; k < d; ++k) b1g += ctx.cs.b1.at(q.node, k) * gu[k];
        term += b1g * std::conj(vq);
        for (int k = 0; k < d; ++k) term -= ctx.cs.b2.at(q.node, k) * uq * std::conj(gv[k]);
        term += ctx.cs.Q[q.node] * uq * std::conj(vq);
        acc += q.weight * term;
    });
    return acc;
}

namespace {

double quadratic_a0s(const FormContext& ctx, const GridFunction& u, bool with_vplus) {
    const Grid& g = ctx.grid();
    const int d = g.dim();
    Sampler su = make_sampler(ctx, u);
    double acc = 0.0;
    for_each_quad_point(g, [&](const QuadPoint& q) {
        auto gu = su.gradient(q);
        Mat2 a0s = real_part(ctx.dec.A0s, q.node, d);
        // <A0s z, conj z> for complex z splits into real and imaginary parts.
        std::array<double, 2> re{gu[0].real(), gu[1].real()};
        std::array<double, 2> im{gu[0].imag(), gu[1].imag()};
        double val = dot2(apply_real(a0s, re, d), re, d) + dot2(apply_real(a0s, im, d), im, d);
        if (with_vplus) val += ctx.Vplus[q.node] * std::norm(su.value(q.node));
        acc += q.weight * val;
    });
    return acc;
}

// Shared evaluation core for the chain-rule route: walks quadrature points with
// zeta = conj(sgn v) grad v split into xi = Re zeta, eta = Im zeta.
template <class F>
void for_each_zeta(const FormContext& ctx, const GridFunction& v, F&& f) {
    const Grid& g = ctx.grid();
    Sampler sv = make_sampler(ctx, v);
    for_each_quad_point(g, [&](const QuadPoint& q) {
        auto gv = sv.gradient(q);
        cplx vq = sv.value(q.node);
        double a = std::abs(vq);
        cplx sgn = a > ctx.nonlinear_floor ? vq / a : cplx(0.0, 0.0);
        std::array<double, 2> xi{0, 0}, eta{0, 0};
        for (int k = 0; k < g.dim(); ++k) {
            cplx zk = std::conj(sgn) * gv[k];
            xi[k] = zk.real();
            eta[k] = zk.imag();
        }
        f(q, vq, a, xi, eta);
    });
}

} // namespace

double form_a(const FormContext& ctx, const GridFunction& u) {
    return quadratic_a0s(ctx, u, false);
}

double form_h0(const FormContext& ctx, const GridFunction& u) {
    return quadratic_a0s(ctx, u, true);
}

double form_a_abs(const FormContext& ctx, const GridFunction& v) {
    const int d = ctx.grid().dim();
    double acc = 0.0;
    for_each_zeta(ctx, v, [&](const QuadPoint& q, cplx, double, const std::array<double, 2>& xi,
                              const std::array<double, 2>&) {
        Mat2 a0s = real_part(ctx.dec.A0s, q.node, d);
        acc += q.weight * dot2(apply_real(a0s, xi, d), xi, d);
    });
    return acc;
}

double form_h0_abs(const FormContext& ctx, const GridFunction& v) {
    const int d = ctx.grid().dim();
    double acc = 0.0;
    for_each_zeta(ctx, v, [&](const QuadPoint& q, cplx, double a, const std::array<double, 2>& xi,
                              const std::array<double, 2>&) {
        Mat2 a0s = real_part(ctx.dec.A0s, q.node, d);
        acc += q.weight * (dot2(apply_real(a0s, xi, d), xi, d) + ctx.Vplus[q.node] * a * a);
    });
    return acc;
}

double tau_p(const FormContext& ctx, const GridFunction& v, Exponent e) {
    const Grid& g = ctx.grid();
    const int d = g.dim();
    const double one_minus = 1.0 - 2.0 * e.s;
    const double re_t = form_t(ctx, v, v).real();
    double corr = 0.0;
    for_each_zeta(ctx, v, [&](const QuadPoint& q, cplx, double a, const std::array<double, 2>& xi,
                              const std::array<double, 2>& eta) {
        Mat2 a0s = real_part(ctx.dec.A0s, q.node, d);
        Mat2 a1s = real_part(ctx.dec.A1s, q.node, d);
        double term = one_minus * one_minus * dot2(apply_real(a0s, xi, d), xi, d);
        term += 2.0 * std::abs(one_minus) * std::abs(dot2(apply_real(a1s, xi, d), eta, d));
        std::array<double, 2> reb{0, 0};
        for (int k = 0; k < d; ++k)
            reb[k] = ctx.cs.b1.at(q.node, k).real() + ctx.cs.b2.at(q.node, k).real();
        term += one_minus * a * dot2(reb, xi, d);
        corr += q.weight * term;
    });
    return re_t - corr;
}

double tau_p_floored_fraction(const FormContext& ctx, const GridFunction& v) {
    std::size_t total = 0, floored = 0;
    for_each_zeta(ctx, v, [&](const QuadPoint&, cplx, double a, const std::array<double, 2>&,
                              const std::array<double, 2>&) {
        ++total;
        if (a <= ctx.nonlinear_floor) ++floored;
    });
    return total == 0 ? 0.0 : double(floored) / double(total);
}

std::vector<double> U_hat_potential(const FormContext& ctx) {
    const Grid& g = ctx.grid();
    const int d = g.dim();
    std::vector<double> out(g.num_nodes(), 0.0);
    for (std::size_t node = 0; node < g.num_nodes(); ++node) {
        std::array<double, 2> reb{0, 0};
        for (int k = 0; k < d; ++k)
            reb[k] = ctx.cs.b1.at(node, k).real() + ctx.cs.b2.at(node, k).real();
        Mat2 a0s = real_part(ctx.dec.A0s, node, d);
        auto sol = spd_solve(a0s, reb, d);
        out[node] = 0.25 * dot2({sol[0], sol[1]}, reb, d);
    }
    return out;
}

double U_hat(const FormContext& ctx, const GridFunction& v) {
    const Grid& g = ctx.grid();
    std::vector<double> pot = U_hat_potential(ctx);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.num_nodes(); ++i)
        acc += g.quad_weight(i) * pot[i] * std::norm(v[i]);
    return acc;
}

double W_rho(const FormContext& ctx, const GridFunction& rho, const GridFunction& v) {
    const Grid& g = ctx.grid();
    const int d = g.dim();
    for (std::size_t i = 0; i < g.num_nodes(); ++i)
        if (!(rho[i].real() > 0.0) || rho[i].imag() != 0.0)
            throw BadWeight("weight rho must be strictly positive");
    DiscreteGradient gr = grad(rho);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        std::array<double, 2> grv{gr.at(i, 0).real(), d == 2 ? gr.at(i, 1).real() : 0.0};
        Mat2 a0s = real_part(ctx.dec.A0s, i, d);
        double w = dot2(apply_real(a0s, grv, d), grv, d) / std::norm(rho[i]);
        acc += g.quad_weight(i) * w * std::norm(v[i]);
    }
    return acc;
}

AccretivityCheck check_accretivity_identity(const FormContext& ctx, const GridFunction& u,
                                            double p) {
    SignumMaps maps = signum_maps(u, p, ctx.nonlinear_floor);
    cplx t_uw = form_t(ctx, u, maps.w_p);
    double tau = tau_p(ctx, maps.v_p, Exponent::from_p(p));
    GridFunction vp = maps.v_p;
    double h0_plus_1 = form_h0(ctx, vp) + std::pow(lp_norm(vp, 2.0), 2);
    AccretivityCheck out;
    out.re_t_uw = t_uw.real();
    out.tau_vp = tau;
    out.residual = t_uw.real() - tau;
    out.im_ratio = std::abs(t_uw.imag()) / h0_plus_1;
    return out;
}

double tau_lower_bound_check(const StructuralConstants& c, const FormContext& ctx,
                             const GridFunction& v, Exponent e, double eps) {
    if (!(eps >= 0.0 && eps < 1.0)) throw BadParameter("eps must lie in [0,1)");
    const double tau = tau_p(ctx, v, e);
    const double ep = eps_p(c, e);
    const double d2 = delta_p(c, e) * delta_p(c, e);
    const double oh = omega_hat(c, e, GrowthMode::Audit);
    const double bh = B_hat_p(c, e);
    const double x = form_h0_abs(ctx, v);
    const double full = form_h0(ctx, v);
    const double n2 = std::pow(lp_norm(v, 2.0), 2);
    const double lam = eps > 0.0 ? eps / (1.0 - eps) : 0.0;
    const double bound = (ep - eps - lam * d2) * x + eps * full - (oh + lam * bh) * n2;
    return tau - bound;
}

double t_plus_Uhat_slack(const FormContext& ctx, const GridFunction& v, Exponent e) {
    return form_t(ctx, v, v).real() - tau_p(ctx, v, e) + U_hat(ctx, v);
}

} // namespace sgl
