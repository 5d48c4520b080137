#pragma once

#include <functional>
#include <optional>

#include "sgl/constants.hpp"
#include "sgl/fields.hpp"
#include "sgl/intervals.hpp"
#include "sgl/mesh.hpp"

namespace sgl {

/// Coefficient data prepared for form evaluation: decomposition plus the
/// potential split Q = (V+ - V-) + i W.
struct FormContext {
    CoefficientSet cs;
    Decomposition dec;
    std::vector<double> Vplus;  // per node
    std::vector<double> Vminus; // per node
    std::vector<double> W;      // per node
    double nonlinear_floor = 1e-30;

    const Grid& grid() const { return *cs.grid; }

    static FormContext build(CoefficientSet cs);

    /// Adjoint data (A^*, -conj(b2), -conj(b1), conj(Q)); the adjoint form has the
    /// same structure as the original one.
    CoefficientSet adjoint_data() const;
};

/// Sesquilinear form
///   t(u,v) = <A grad u, grad v> + <b1 . grad u, v> - <b2 u, grad v> + <Q u, v>
/// by cell-wise tensor-trapezoid quadrature with per-corner one-sided differences
/// (the piecewise-multilinear Galerkin form). Under Dirichlet BC the arguments are
/// taken with boundary values zeroed.
cplx form_t(const FormContext& ctx, const GridFunction& u, const GridFunction& v);

/// Reference energy a(u) = <A0s grad u, grad u> >= 0 and h0(u) = a(u) + V+(u).
double form_a(const FormContext& ctx, const GridFunction& u);
double form_h0(const FormContext& ctx, const GridFunction& u);

/// h0(|v|) with grad|v| evaluated through the chain rule Re(conj(sgn v) grad v) at
/// quadrature points; agrees with form_h0 on |v| to O(h^2) and makes the
/// functional inequalities exact at the discrete level.
double form_h0_abs(const FormContext& ctx, const GridFunction& v);
double form_a_abs(const FormContext& ctx, const GridFunction& v);

/// The L^p coercivity functional
///   tau_p(v) = Re t(v,v) - (1-2/p)^2 a(|v|)
///              - 2|1-2/p| int |<A1s grad|v|, Im(conj(sgn v) grad v)>|
///              - (1-2/p) (|v| Re(b1+b2), grad|v|).
double tau_p(const FormContext& ctx, const GridFunction& v, Exponent e);

/// Fraction of quadrature corners where |v| fell below the nonlinear floor in the
/// most recent tau_p-style evaluation path (diagnostic; see signum conventions).
double tau_p_floored_fraction(const FormContext& ctx, const GridFunction& v);

/// Drift-square potential U_hat = 1/4 <(A0s)^{-1} Re(b1+b2), Re(b1+b2)> as a field,
/// and its quadratic form int U_hat |v|^2.
std::vector<double> U_hat_potential(const FormContext& ctx);
double U_hat(const FormContext& ctx, const GridFunction& v);

/// Weight energy W_rho = <A0s grad rho, grad rho> / rho^2 tested against |v|^2.
/// rho must be strictly positive nodewise.
double W_rho(const FormContext& ctx, const GridFunction& rho, const GridFunction& v);

struct AccretivityCheck {
    double residual;   // Re t(u, w_p(u)) - tau_p(v_p(u))
    double im_ratio;   // |Im t(u, w_p(u))| / (h0 + 1)(v_p(u))
    double re_t_uw;    // Re t(u, w_p(u))
    double tau_vp;     // tau_p(v_p(u))
};

/// Pairing check behind the L^p lower bound: with no truncation the residual is a
/// pure discretization defect for smooth nonvanishing u (the sign-definite
/// A1s-cross term excepted) and must stay >= -tol(h).
AccretivityCheck check_accretivity_identity(const FormContext& ctx, const GridFunction& u,
                                            double p);

/// Margin of the closed-form coercivity bound
///   tau_p(v) >= (eps_p - eps - eps/(1-eps) delta_p^2) h0(|v|) + eps h0(v)
///               - (omega_hat_p + eps/(1-eps) B_hat_p) |v|_2^2.
double tau_lower_bound_check(const StructuralConstants& c, const FormContext& ctx,
                             const GridFunction& v, Exponent e, double eps);

/// Chain inequality Re t(v) >= tau_p(v) - U_hat(v): returns the slack.
double t_plus_Uhat_slack(const FormContext& ctx, const GridFunction& v, Exponent e);

} // namespace sgl
