#pragma once

#include <memory>
#include <optional>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "sgl/forms.hpp"

namespace sgl {

/// Weak-form realization of the operator on the grid DOFs: <L u, v>_h = t(u, v)
/// for all discrete v, i.e. L = M^{-1} T with T the form matrix and M the
/// (lumped) quadrature weights. Dirichlet eliminates the boundary nodes.
struct DiscreteOperator {
    const Grid* grid = nullptr;
    Bc bc = Bc::Dirichlet;
    std::vector<std::size_t> dof_nodes;      // dof -> node
    std::vector<std::ptrdiff_t> dof_of_node; // node -> dof, -1 when eliminated
    Eigen::SparseMatrix<cplx> T;             // t(u,v) = v^H T u
    Eigen::VectorXd mass;                    // positive quadrature weights per dof
    bool hermitian = false;                  // T = T^H to round-off

    std::size_t ndof() const { return dof_nodes.size(); }

    Eigen::VectorXcd restrict_fn(const GridFunction& u) const;
    GridFunction prolong(const Eigen::VectorXcd& u) const;

    /// L u = M^{-1} (T u).
    Eigen::VectorXcd apply(const Eigen::VectorXcd& u) const;

    /// Weighted pairing sum_i mass_i a_i conj(b_i).
    cplx inner_h(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const;

    /// Weighted l^p norm of a DOF vector (p = inf allowed).
    double norm_p(const Eigen::VectorXcd& u, double p) const;

    Eigen::MatrixXcd dense_L() const;
};

DiscreteOperator assemble(const FormContext& ctx);

enum class Scheme { BackwardEuler, Trapezoidal };

/// One-step solver for u' = -L u with a cached factorization; each step solves
/// (M + theta dt T) u_next = (M - (1-theta) dt T) u.
class Stepper {
public:
    Stepper(const DiscreteOperator& op, double dt, Scheme scheme);
    Eigen::VectorXcd step(const Eigen::VectorXcd& u) const;
    double dt() const { return dt_; }
    Scheme scheme() const { return scheme_; }

private:
    double dt_;
    Scheme scheme_;
    Eigen::SparseMatrix<cplx> rhs_;
    std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<cplx>>> lu_;
};

/// Convenience single step on a fresh factorization.
Eigen::VectorXcd step(const DiscreteOperator& op, const Eigen::VectorXcd& u, double dt,
                      Scheme scheme);

struct PropagatorOptions {
    enum class Method { Auto, EigenDecomp, MatrixExp, Stepping };
    Method method = Method::Auto;
    double dt = 1e-3;              // stepping path
    Scheme scheme = Scheme::Trapezoidal;
    std::size_t dense_cap = 20000; // beyond this many DOFs only stepping is used
};

/// Dense exp(-t L) server. Hermitian forms cache one (real or complex)
/// eigendecomposition and serve every t from it; general complex ones use
/// scaling-and-squaring per t; large systems fall back to repeated stepping.
class PropagatorFactory {
public:
    PropagatorFactory(const DiscreteOperator& op, PropagatorOptions opts = {});

    Eigen::MatrixXcd at(double t) const;
    /// Real-arithmetic propagator; only valid when is_real().
    Eigen::MatrixXd at_real(double t) const;
    bool is_real() const { return method_ == Method::RealSym; }
    std::string method_name() const;
    const DiscreteOperator& op() const { return *op_; }

private:
    enum class Method { RealSym, Hermitian, MatrixExp, Stepping } method_;
    const DiscreteOperator* op_;
    PropagatorOptions opts_;
    // cached spectral data (RealSym / Hermitian)
    Eigen::MatrixXd v_real_;
    Eigen::MatrixXcd v_cplx_;
    Eigen::VectorXd evals_;
    Eigen::VectorXd mass_sqrt_;
};

/// Dense matrix of exp(-t L) (one-shot convenience wrapper).
Eigen::MatrixXcd propagator_matrix(const DiscreteOperator& op, double t,
                                   const PropagatorOptions& opts = {});

struct DissipativityResult {
    double value;          // Re <(omega + L) u, w_p(u)>_h
    double lower_abs;      // eps_p h0(|v_p|) + (omega - omega_hat_p) |v_p|^2
    double lower_coercive; // eps h0(v_p) + (omega - omega_hat_p - eps/(1-eps) B_hat_p) |v_p|^2
    double norm_p_p;       // |u|_p^p = |v_p|_2^2
};

/// Lumer-Phillips pairing of the discrete operator against the duality map, with
/// the two closed-form lower bounds evaluated from the structural constants.
DissipativityResult dissipativity_functional(const DiscreteOperator& op, const FormContext& ctx,
                                             const StructuralConstants& c, const GridFunction& u,
                                             double p, double omega,
                                             std::optional<double> eps_choice = std::nullopt);

/// Resolvent action (lambda + L)^{-1} f via a sparse solve of (lambda M + T) u = M f.
Eigen::MatrixXcd resolvent_matrix(const DiscreteOperator& op, double lambda);

} // namespace sgl
