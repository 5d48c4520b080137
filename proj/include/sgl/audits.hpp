#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sgl/operator.hpp"
#include "sgl/opnorm.hpp"

namespace sgl {

struct AuditOptions {
    double tol_discr = 1e-3;   // multiplicative allowance on top of the bound
    OpNormOptions opnorm;
    PropagatorOptions prop;
    GrowthMode mode = GrowthMode::Audit;
};

struct TrajectoryPoint {
    double p;
    double t;
    double measured; // lower bound on |S_p(t)|_{p->p}
    double bound;    // exp(omega_hat_p t)
    double margin;   // bound - measured
    std::string method;
    std::string status; // PASS | BREACH | EXPECT-NO-GUARANTEE
};

struct TrajectoryReport {
    std::vector<TrajectoryPoint> points;
    std::string method_meta;

    bool any_breach() const;
    std::string to_csv() const;
    nlohmann::json to_json() const;
};

/// Measured propagator norms against exp(omega_hat_p t) for each (p, t); p outside
/// the closed-form interval is marked EXPECT-NO-GUARANTEE rather than failed.
TrajectoryReport quasi_contractivity_audit(const FormContext& ctx, const StructuralConstants& c,
                                           const std::vector<double>& p_list,
                                           const std::vector<double>& t_list,
                                           const AuditOptions& opts = {});

struct ResolventWeightRow {
    double lambda;
    double measured;
    double bound; // lambda^{-1/p'}
    double margin;
};

struct ResolventWeightReport {
    std::vector<ResolventWeightRow> rows;
    double hypothesis_margin = 0.0; // min over probes of Re<Lu,w_p> - U(v_p)
    bool pass = true;
};

/// Weighted resolvent bound |U^{1/p} (lambda + L)^{-1}|_{p->p} <= lambda^{-1/p'}.
/// The premise U(v_p(u)) <= Re<L u, w_p(u)> is verified on a probe corpus first;
/// probe failure raises HypothesisUnmet.
ResolventWeightReport resolvent_weight_bound(const FormContext& ctx,
                                             const std::vector<double>& U_nodal, double p,
                                             const std::vector<double>& lambdas, int probes = 50,
                                             std::uint64_t seed = 42,
                                             const AuditOptions& opts = {});

struct WeightedGrowthRow {
    double xi;
    double t;
    double measured;
    double ceiling; // exp((omega_p + mu_p + K (C_p/mu_p + 1)) t), K = c2 xi^2
};

struct WeightedGrowthReport {
    double mu_fit = 0.0;
    double omega_fit = 0.0;
    std::vector<WeightedGrowthRow> rows;
    bool within_ceiling = true;
};

/// Exponentially twisted norms |rho_xi^{-1} S_p(t) rho_xi|, rho_xi = exp(-xi x),
/// fitted against mu xi^2 t + omega t and checked against the weighted ceiling.
WeightedGrowthReport weighted_growth_audit(const FormContext& ctx, const StructuralConstants& c,
                                           double p, const std::vector<double>& xi_list,
                                           const std::vector<double>& t_list,
                                           const AuditOptions& opts = {});

struct SmoothingRow {
    double t;
    double measured;
    double fit;
};

struct SmoothingReport {
    double exponent = 0.0; // power-law exponent of the t^{-e} fit
    double prefactor = 0.0;
    std::vector<SmoothingRow> rows;
    bool envelope_ok = true;
};

/// |S(t)|_{p->r} over a t window, fitted to C t^{-e}; low-dimension smoothing
/// surrogate (1-D targets r = inf).
SmoothingReport smoothing_audit(const FormContext& ctx, double p, double r,
                                const std::vector<double>& t_list,
                                const AuditOptions& opts = {});

struct TruncationGap {
    double m_coarse;
    double m_fine;
    double gap; // sup over checkpoints and corpus of |S_{U_m} f - S_{U_m'} f|_p
};

struct TruncationReport {
    std::vector<TruncationGap> gaps;
    bool monotone = true;
    double final_gap = 0.0;
};

/// Absorption-potential emulation: evolves with Q + (U - m)^+ over increasing m
/// and reports the Cauchy gaps between consecutive truncation levels.
TruncationReport truncation_convergence(const FormContext& ctx, const std::vector<double>& U_nodal,
                                        double p, std::vector<double> m_list, double T,
                                        int corpus = 3, double dt = 1e-3,
                                        std::uint64_t seed = 42);

} // namespace sgl
