#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "sgl/fields.hpp"

#include <nlohmann/json_fwd.hpp>

namespace sgl {

struct FormContext; // forms.hpp

enum class Provenance { Measured, Declared, Default };

/// Structural constants of the coefficient data. The a-priori inequalities they
/// certify (on the grid they were measured on):
///   alpha_s:  |<A1s xi, eta>|^2 <= alpha_s^2 <A0s xi,xi> <A0s eta,eta>
///   alpha_a:  same with A1a;   M: same with A0a
///   beta', B':  Im <A1a grad u - u Im(b1+b2), grad u>
///               <= sqrt(beta'^2 h0(|u|) + B' |u|_2^2) * <A0s eta(u), eta(u)>^{1/2}
///   beta_j, B_j: (-1)^j <(Re b_j) u, grad u> <= beta_j h0(u) + B_j |u|_2^2  (u >= 0)
///   gamma, Gamma: (Re Q)^- <= gamma h0 + Gamma
///   beta_hat, B_hat: <(A0s)^{-1} Im(b1+b2), Im(b1+b2)> <= beta_hat^2 h0 + B_hat
///   c_hat: U_hat <= c_hat (h0 + 1)
///   c3: |<A xi, eta>|^2 <= c3^2 <A0s xi,xi> <A0s eta,eta>
///   c4: <(A0s)^{-1} b1,b1> + <(A0s)^{-1} b2,b2> + |Q| <= c4 (h0 + 1)
struct StructuralConstants {
    double alpha_s = 0, alpha_a = 0, M = 0;
    double beta_prime = 0, B_prime = 0;
    double beta1 = 0, B1 = 0, beta2 = 0, B2 = 0;
    double gamma = 0, Gamma = 0;
    double beta_hat = 0, B_hat = 0;
    double c_hat = 0, c3 = 0, c4 = 0;
    std::map<std::string, Provenance> provenance;

    /// The closed-form growth bound needs beta' > 0 or alpha_s * B' = 0.
    bool closed_form_mode_ok() const { return beta_prime > 0.0 || alpha_s * B_prime == 0.0; }

    void set(const std::string& name, double value, Provenance prov);
    double get(const std::string& name) const;

    nlohmann::json to_json() const;
    static StructuralConstants from_json(const nlohmann::json& j);
};

/// Least alpha_s valid pointwise: max over nodes of the spectral radius of
/// (A0s)^{-1/2} A1s (A0s)^{-1/2}.
double alpha_s_of(const Decomposition& dec);

/// Analogous maxima for A1a and A0a in the A0s metric.
std::pair<double, double> anti_bounds(const Decomposition& dec);

/// Pointwise bound constant of the full matrix A in the A0s metric.
double c3_of(const CoefficientSet& cs, const Decomposition& dec);

/// Synthesis of (beta', B') from (alpha_a, beta_hat, B_hat):
/// beta' = 2 alpha_a + beta_hat, B' = (1 + 2 alpha_a / beta_hat) B_hat,
/// with B' = B_hat when beta_hat = 0 and alpha_a * B_hat = 0.
std::pair<double, double> synthesize_beta_prime(double alpha_a, double beta_hat, double B_hat);

/// 2 (M^2 + (1 - 2/p)^2 + c_hat) + alpha_s^2; s = 1/p (s = 0 means p = infinity).
double C_p(const StructuralConstants& c, double s);

struct DriftBoundOptions {
    int mode_count = 5;
    int random_count = 100;
    std::uint64_t seed = 42;
    double safety = 1.05;     // inflation applied to measured slopes/offsets
    double slope_cap = 0.25;  // default beta_j on the admissible (beta_j, B_j) curve
    // Measured slopes diverging under refinement mark the data NotFormBounded; the
    // check compares against this threshold on a coarsened grid.
    double divergence_factor = 20.0;
};

/// One admissible (slope, offset) pair per inequality; provenance "measured".
/// Measures on the probe family (BC-compatible modes + seeded random smooth
/// functions) with a safety inflation; per-grid validity only.
StructuralConstants drift_bounds(const FormContext& ctx, const DriftBoundOptions& opts = {});

/// Extract everything measurable from a coefficient set (alpha_s, anti bounds, c3,
/// drift bounds, synthesized beta'/B'). Declared overrides win afterwards.
StructuralConstants measure_constants(const FormContext& ctx, const DriftBoundOptions& opts = {});

struct AuditResult {
    bool pass = true;
    std::string worst_inequality;
    double worst_margin = 0.0; // negative = violated
};

/// Spot-audit: verify the inequalities certified by `c` on `n` random probes.
AuditResult audit_constants(const StructuralConstants& c, const FormContext& ctx, int n = 100,
                            std::uint64_t seed = 42, double tol = 1e-9);

} // namespace sgl
