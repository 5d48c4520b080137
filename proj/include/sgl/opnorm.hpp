#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace sgl {

struct OpNormOptions {
    int restarts = 6;
    int max_iter = 400;
    double tol = 1e-11;
    std::uint64_t seed = 42;
};

struct OpNormResult {
    double value = 0.0;   // certified lower bound (best stationary value)
    double spread = 0.0;  // relative spread of the restart values
    int iterations = 0;   // total iterations spent
};

/// Lower bound for the weighted L^p -> L^r operator norm of a dense matrix,
/// weights w > 0 giving |x|_p = (sum w_i |x_i|^p)^{1/p}. Nonlinear power
/// iteration with seeded restarts; p = 1, p = inf and r = inf use the exact
/// column/row formulas. Real matrices run in real arithmetic (for r >= p the
/// real and complex induced norms agree; all callers here satisfy that).
OpNormResult opnorm_mixed(const Eigen::MatrixXcd& S, const Eigen::VectorXd& w, double p, double r,
                          const OpNormOptions& opts = {});
OpNormResult opnorm_mixed(const Eigen::MatrixXd& S, const Eigen::VectorXd& w, double p, double r,
                          const OpNormOptions& opts = {});

/// L^p -> L^p norm (r = p).
inline OpNormResult opnorm_p(const Eigen::MatrixXcd& S, const Eigen::VectorXd& w, double p,
                             const OpNormOptions& opts = {}) {
    return opnorm_mixed(S, w, p, p, opts);
}
inline OpNormResult opnorm_p(const Eigen::MatrixXd& S, const Eigen::VectorXd& w, double p,
                             const OpNormOptions& opts = {}) {
    return opnorm_mixed(S, w, p, p, opts);
}

/// Adjoint with respect to the weighted pairing: W^{-1} S^H W.
Eigen::MatrixXcd weighted_adjoint(const Eigen::MatrixXcd& S, const Eigen::VectorXd& w);

} // namespace sgl
