#include "sgl/operator.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include <unsupported/Eigen/MatrixFunctions>

#include "quadloop.hpp"
#include "sgl/intervals.hpp"

namespace sgl {

using detail::QuadPoint;
using detail::for_each_quad_point;

Eigen::VectorXcd DiscreteOperator::restrict_fn(const GridFunction& u) const {
    Eigen::VectorXcd out(ndof());
    for (std::size_t d = 0; d < ndof(); ++d) out[d] = u[dof_nodes[d]];
    return out;
}

GridFunction DiscreteOperator::prolong(const Eigen::VectorXcd& u) const {
    GridFunction out(*grid);
    for (std::size_t d = 0; d < ndof(); ++d) out[dof_nodes[d]] = u[d];
    return out;
}

Eigen::VectorXcd DiscreteOperator::apply(const Eigen::VectorXcd& u) const {
    Eigen::VectorXcd tu = T * u;
    return mass.cwiseInverse().asDiagonal() * tu;
}

cplx DiscreteOperator::inner_h(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const {
    cplx s(0.0, 0.0);
    for (Eigen::Index i = 0; i < a.size(); ++i) s += mass[i] * a[i] * std::conj(b[i]);
    return s;
}

double DiscreteOperator::norm_p(const Eigen::VectorXcd& u, double p) const {
    if (std::isinf(p)) return u.cwiseAbs().maxCoeff();
    double s = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) s += mass[i] * std::pow(std::abs(u[i]), p);
    return std::pow(s, 1.0 / p);
}

Eigen::MatrixXcd DiscreteOperator::dense_L() const {
    Eigen::MatrixXcd Td = Eigen::MatrixXcd(T);
    return mass.cwiseInverse().asDiagonal() * Td;
}

DiscreteOperator assemble(const FormContext& ctx) {
    const Grid& g = ctx.grid();
    const int d = g.dim();
    DiscreteOperator op;
    op.grid = &g;
    op.bc = g.bc();
    op.dof_of_node.assign(g.num_nodes(), -1);
    for (std::size_t node = 0; node < g.num_nodes(); ++node) {
        if (g.bc() == Bc::Dirichlet && g.on_boundary(node)) continue;
        op.dof_of_node[node] = std::ptrdiff_t(op.dof_nodes.size());
        op.dof_nodes.push_back(node);
    }
    const std::size_t n = op.dof_nodes.size();
    if (n == 0) throw AssemblyError("no degrees of freedom left after elimination");

    op.mass = Eigen::VectorXd(n);
    for (std::size_t k = 0; k < n; ++k) {
        double w = g.quad_weight(op.dof_nodes[k]);
        if (!(w > 0.0)) throw AssemblyError("singular mass weight");
        op.mass[k] = w;
    }

    // Local contributions: at each quadrature point the value stencil is the corner
    // node and the gradient stencils are the cell edges through it.
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(g.num_cells() * (d == 1 ? 8 : 48));
    auto dof = [&](std::size_t node) { return op.dof_of_node[node]; };
    auto add = [&](std::ptrdiff_t row, std::ptrdiff_t col, cplx v) {
        if (row >= 0 && col >= 0 && v != cplx(0.0, 0.0))
            trips.emplace_back(int(row), int(col), v);
    };

    for_each_quad_point(g, [&](const QuadPoint& q) {
        const double w = q.weight;
        const std::size_t nodes_u[5] = {q.gx[0], q.gx[1], q.gy[0], q.gy[1], q.node};
        (void)nodes_u;
        // gradient stencil of u: coeff +-1/h on the edge endpoints per axis
        struct Entry {
            std::size_t node;
            cplx coef;
        };
        auto grad_entries = [&](int axis) {
            std::array<Entry, 2> e;
            double h = g.h(axis);
            if (axis == 0)
                e = {Entry{q.gx[0], cplx(-1.0 / h, 0)}, Entry{q.gx[1], cplx(1.0 / h, 0)}};
            else
                e = {Entry{q.gy[0], cplx(-1.0 / h, 0)}, Entry{q.gy[1], cplx(1.0 / h, 0)}};
            return e;
        };

        // <A grad u, grad v>: rows over grad v entries (conjugated), cols over grad u
        for (int r = 0; r < d; ++r) {
            auto ev = grad_entries(r);
            for (int ccol = 0; ccol < d; ++ccol) {
                cplx a = ctx.cs.A.at(q.node, r, ccol);
                if (a == cplx(0.0, 0.0)) continue;
                auto eu = grad_entries(ccol);
                for (const auto& ve : ev)
                    for (const auto& ue : eu)
                        add(dof(ve.node), dof(ue.node), w * a * ue.coef * std::conj(ve.coef));
            }
        }
        // <b1 . grad u, v>
        for (int k = 0; k < d; ++k) {
            cplx b = ctx.cs.b1.at(q.node, k);
            if (b == cplx(0.0, 0.0)) continue;
            auto eu = grad_entries(k);
            for (const auto& ue : eu) add(dof(q.node), dof(ue.node), w * b * ue.coef);
        }
        // -<b2 u, grad v>
        for (int k = 0; k < d; ++k) {
            cplx b = ctx.cs.b2.at(q.node, k);
            if (b == cplx(0.0, 0.0)) continue;
            auto ev = grad_entries(k);
            for (const auto& ve : ev)
                add(dof(ve.node), dof(q.node), -w * b * std::conj(ve.coef));
        }
        // <Q u, v>
        cplx qq = ctx.cs.Q[q.node];
        if (qq != cplx(0.0, 0.0)) add(dof(q.node), dof(q.node), w * qq);
    });

    op.T = Eigen::SparseMatrix<cplx>(n, n);
    op.T.setFromTriplets(trips.begin(), trips.end());
    op.T.makeCompressed();

    // Hermitian detection for the propagator route.
    double scale = 0.0, dev = 0.0;
    Eigen::SparseMatrix<cplx> Th = Eigen::SparseMatrix<cplx>(op.T.adjoint());
    Eigen::SparseMatrix<cplx> diff = op.T - Th;
    for (int k = 0; k < op.T.outerSize(); ++k)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(op.T, k); it; ++it)
            scale = std::max(scale, std::abs(it.value()));
    for (int k = 0; k < diff.outerSize(); ++k)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(diff, k); it; ++it)
            dev = std::max(dev, std::abs(it.value()));
    op.hermitian = dev <= 1e-12 * std::max(scale, 1.0);
    return op;
}

Stepper::Stepper(const DiscreteOperator& op, double dt, Scheme scheme)
    : dt_(dt), scheme_(scheme) {
    if (!(dt > 0.0)) throw BadParameter("dt must be positive");
    const double theta = scheme == Scheme::BackwardEuler ? 1.0 : 0.5;
    Eigen::SparseMatrix<cplx> M(op.T.rows(), op.T.cols());
    std::vector<Eigen::Triplet<cplx>> mt;
    for (Eigen::Index i = 0; i < op.mass.size(); ++i)
        mt.emplace_back(int(i), int(i), cplx(op.mass[i], 0.0));
    M.setFromTriplets(mt.begin(), mt.end());
    Eigen::SparseMatrix<cplx> lhs = M + theta * dt * op.T;
    rhs_ = M - (1.0 - theta) * dt * op.T;
    lu_ = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<cplx>>>();
    lu_->compute(lhs);
    if (lu_->info() != Eigen::Success) throw LinAlgError("time-step factorization failed");
}

Eigen::VectorXcd Stepper::step(const Eigen::VectorXcd& u) const {
    Eigen::VectorXcd rhs = rhs_ * u;
    Eigen::VectorXcd out = lu_->solve(rhs);
    if (lu_->info() != Eigen::Success) throw LinAlgError("time-step solve failed");
    return out;
}

Eigen::VectorXcd step(const DiscreteOperator& op, const Eigen::VectorXcd& u, double dt,
                      Scheme scheme) {
    return Stepper(op, dt, scheme).step(u);
}

namespace {

bool matrix_is_real(const Eigen::SparseMatrix<cplx>& T) {
    for (int k = 0; k < T.outerSize(); ++k)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(T, k); it; ++it)
            if (it.value().imag() != 0.0) return false;
    return true;
}

} // namespace

PropagatorFactory::PropagatorFactory(const DiscreteOperator& op, PropagatorOptions opts)
    : op_(&op), opts_(opts) {
    const bool want_dense = op.ndof() <= opts.dense_cap;
    auto forced = opts.method;
    if (forced == PropagatorOptions::Method::Stepping || !want_dense) {
        method_ = Method::Stepping;
        return;
    }
    mass_sqrt_ = op.mass.cwiseSqrt();
    const bool herm = op.hermitian && forced != PropagatorOptions::Method::MatrixExp;
    if (herm && matrix_is_real(op.T)) {
        method_ = Method::RealSym;
        Eigen::MatrixXd B = mass_sqrt_.cwiseInverse().asDiagonal() *
                            Eigen::MatrixXcd(op.T).real() *
                            mass_sqrt_.cwiseInverse().asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
        if (es.info() != Eigen::Success) throw LinAlgError("eigendecomposition failed");
        v_real_ = es.eigenvectors();
        evals_ = es.eigenvalues();
        return;
    }
    if (herm) {
        method_ = Method::Hermitian;
        Eigen::MatrixXcd B = mass_sqrt_.cwiseInverse().asDiagonal() * Eigen::MatrixXcd(op.T) *
                             mass_sqrt_.cwiseInverse().asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(B);
        if (es.info() != Eigen::Success) throw LinAlgError("eigendecomposition failed");
        v_cplx_ = es.eigenvectors();
        evals_ = es.eigenvalues();
        return;
    }
    method_ = Method::MatrixExp;
}

namespace {

// exp(-t lambda) underflows into subnormals for stiff spectra; flushing the
// negligible factors to exact zero keeps the dense products on fast paths.
Eigen::VectorXd decay_factors(const Eigen::VectorXd& evals, double t) {
    Eigen::VectorXd expl = (-t * evals.array()).exp();
    for (Eigen::Index i = 0; i < expl.size(); ++i)
        if (std::abs(expl[i]) < 1e-250) expl[i] = 0.0;
    return expl;
}

} // namespace

Eigen::MatrixXd PropagatorFactory::at_real(double t) const {
    if (method_ != Method::RealSym) throw LinAlgError("no real propagator path");
    Eigen::VectorXd expl = decay_factors(evals_, t);
    Eigen::MatrixXd scaled = v_real_ * expl.asDiagonal();
    Eigen::MatrixXd core;
    core.noalias() = scaled * v_real_.transpose();
    return mass_sqrt_.cwiseInverse().asDiagonal() * core * mass_sqrt_.asDiagonal();
}

Eigen::MatrixXcd PropagatorFactory::at(double t) const {
    const std::size_t n = op_->ndof();
    switch (method_) {
        case Method::RealSym:
            return at_real(t).cast<cplx>();
        case Method::Hermitian: {
            Eigen::VectorXd expl = decay_factors(evals_, t);
            Eigen::MatrixXcd scaled = v_cplx_ * expl.asDiagonal();
            Eigen::MatrixXcd core;
            core.noalias() = scaled * v_cplx_.adjoint();
            return mass_sqrt_.cwiseInverse().asDiagonal() * core * mass_sqrt_.asDiagonal();
        }
        case Method::MatrixExp: {
            Eigen::MatrixXcd mtL = -t * op_->dense_L();
            return mtL.exp();
        }
        default: {
            const double dt = opts_.dt;
            const std::size_t steps = std::max<std::size_t>(1, std::llround(std::ceil(t / dt)));
            const double dt_eff = t / double(steps);
            Stepper st(*op_, dt_eff, opts_.scheme);
            Eigen::MatrixXcd P(n, n);
            Eigen::VectorXcd col(n);
            for (std::size_t c = 0; c < n; ++c) {
                col.setZero();
                col[c] = 1.0;
                for (std::size_t k = 0; k < steps; ++k) col = st.step(col);
                P.col(c) = col;
            }
            return P;
        }
    }
}

std::string PropagatorFactory::method_name() const {
    switch (method_) {
        case Method::RealSym:
        case Method::Hermitian: return "eig";
        case Method::MatrixExp: return "expm";
        default: return "step";
    }
}

Eigen::MatrixXcd propagator_matrix(const DiscreteOperator& op, double t,
                                   const PropagatorOptions& opts) {
    return PropagatorFactory(op, opts).at(t);
}

DissipativityResult dissipativity_functional(const DiscreteOperator& op, const FormContext& ctx,
                                             const StructuralConstants& c, const GridFunction& u,
                                             double p, double omega,
                                             std::optional<double> eps_choice) {
    SignumMaps maps = signum_maps(u, p, ctx.nonlinear_floor);
    Eigen::VectorXcd ud = op.restrict_fn(u);
    Eigen::VectorXcd wd = op.restrict_fn(maps.w_p);
    Eigen::VectorXcd Lu = op.apply(ud);
    const double npp = std::pow(op.norm_p(ud, p), p);
    DissipativityResult out;
    out.norm_p_p = npp;
    out.value = (op.inner_h(Lu, wd)).real() + omega * npp;

    Exponent e = Exponent::from_p(p);
    const double oh = omega_hat(c, e, GrowthMode::Audit);
    const double epsp = eps_p(c, e);
    const double n2 = std::pow(lp_norm(maps.v_p, 2.0), 2);
    out.lower_abs = epsp * form_h0_abs(ctx, maps.v_p) + (omega - oh) * n2;
    double eps = 0.0;
    if (eps_choice)
        eps = *eps_choice;
    else if (epsp > 0.0)
        eps = eps_choice_max(c, e);
    if (eps > 0.0) {
        const double lam = eps / (1.0 - eps);
        out.lower_coercive =
            eps * form_h0(ctx, maps.v_p) + (omega - oh - lam * B_hat_p(c, e)) * n2;
    } else {
        out.lower_coercive = out.lower_abs;
    }
    return out;
}

Eigen::MatrixXcd resolvent_matrix(const DiscreteOperator& op, double lambda) {
    const std::size_t n = op.ndof();
    Eigen::SparseMatrix<cplx> M(n, n);
    std::vector<Eigen::Triplet<cplx>> mt;
    for (std::size_t i = 0; i < n; ++i) mt.emplace_back(int(i), int(i), cplx(op.mass[i], 0.0));
    M.setFromTriplets(mt.begin(), mt.end());
    Eigen::SparseMatrix<cplx> lhs = lambda * M + op.T;
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu(lhs);
    if (lu.info() != Eigen::Success) throw LinAlgError("resolvent factorization failed");
    Eigen::MatrixXcd R(n, n);
    Eigen::VectorXcd rhs(n);
    for (std::size_t c = 0; c < n; ++c) {
        rhs.setZero();
        rhs[c] = cplx(op.mass[c], 0.0);
        R.col(c) = lu.solve(rhs);
    }
    return R;
}

} // namespace sgl
