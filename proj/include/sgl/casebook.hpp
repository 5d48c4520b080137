#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sgl/constants.hpp"
#include "sgl/forms.hpp"

namespace sgl {

/// Hardy-potential thresholds: p_-/p_+ = 2/(1 +- sqrt(1-beta)),
/// p_max = N/(N-2) p_+, p_min = p_max/(p_max - 1). beta -> 0 sends p_+ to the
/// infinity sentinel.
struct HardyThresholds {
    double p_minus;
    double p_plus;
    double p_max;
    double p_min;
};

HardyThresholds hardy(double beta, int N);

/// 1-D Neumann drift counterexample: A = 1 + i, b1 = -i on (0,1), with the bump
/// profile tau(x) = x^2 (3 - 2x) and witness family u_lambda = exp(lambda r tau),
/// r = 1 - sqrt(2) - i. At p = 4 + 2 sqrt(2) the Lumer-Phillips pairing tends to
/// -1/sqrt(8); interior p keeps it above -omega_hat_p |u|_p^p.
struct NeumannCounterexampleRow {
    double lambda;
    double closed_form;  // (1/sqrt8)(exp(-sqrt8 lambda tau(1)) - 1) + K_p lambda^2 I2
    double quadrature;   // composite-Simpson value of the same integrals
    double discrete;     // Re <L_h u, w_p(u)>_h on the assembled operator
    double norm_p;       // |u_lambda|_p
};

struct NeumannCounterexampleReport {
    double p;
    std::size_t n;
    std::vector<NeumannCounterexampleRow> rows;
    double limit_value; // -1/sqrt(8) scaled by the K_p = 0 branch
    bool norms_decreasing;
};

NeumannCounterexampleReport neumann_counterexample(const std::vector<double>& lambda_list,
                                                   std::optional<double> p = std::nullopt,
                                                   std::size_t n = 2049);

/// Constants declared by the counterexample: alpha_s = 1, B' = 1, rest 0.
StructuralConstants neumann_counterexample_constants();

/// Coefficient data of the counterexample on a given grid size.
FormContext neumann_counterexample_context(std::size_t n);

/// Witness function u_lambda on the context grid.
GridFunction neumann_witness(const Grid& g, double lambda);

/// Form invariance under a constant anti-symmetric imaginary part on a 2-D
/// Dirichlet grid: returns the max deviation |t_c(u,u) - t_0(u,u)| over probes
/// and the accompanying energy scale.
struct DivergenceFreeRow {
    double c;
    double max_deviation;
    double scale;
    bool expected_nonzero; // Neumann variant keeps a boundary term
};

std::vector<DivergenceFreeRow> divergence_free_invariance(const std::vector<double>& c_list,
                                                          std::size_t n = 33, int probes = 100,
                                                          std::uint64_t seed = 42,
                                                          Bc bc = Bc::Dirichlet);

/// The explicit (beta', B') synthesis demo; guards the beta_hat = 0 division.
std::pair<double, double> drift_synthesis_demo(double alpha_a, double beta_hat, double B_hat);

nlohmann::json hardy_to_json(const HardyThresholds& h);
nlohmann::json neumann_to_json(const NeumannCounterexampleReport& r);

} // namespace sgl
