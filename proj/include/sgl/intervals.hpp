#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "sgl/constants.hpp"

#include <nlohmann/json_fwd.hpp>

namespace sgl {

/// Lebesgue exponent stored as s = 1/p in [0,1]; s = 0 is the p = infinity sentinel.
struct Exponent {
    double s = 0.5;

    static Exponent from_p(double p) {
        if (p < 1.0) throw BadExponent("p must satisfy p >= 1");
        return Exponent{std::isinf(p) ? 0.0 : 1.0 / p};
    }
    static Exponent from_s(double s_) {
        if (!(s_ >= 0.0 && s_ <= 1.0)) throw BadExponent("1/p must lie in [0,1]");
        return Exponent{s_};
    }
    double p() const { return s == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / s; }
    Exponent dual() const { return Exponent{1.0 - s}; }
};

/// Evaluation mode for the closed-form growth bound. Strict refuses the
/// uncovered configuration beta' = 0, alpha_s B' > 0 (quasi-contractivity can fail
/// at the interval boundary there); Audit evaluates the formula anyway, e.g. to
/// test that failure numerically.
enum class GrowthMode { Strict, Audit };

double delta_p(const StructuralConstants& c, Exponent e);
double eps_p(const StructuralConstants& c, Exponent e);
double B_hat_p(const StructuralConstants& c, Exponent e);
double omega_hat(const StructuralConstants& c, Exponent e, GrowthMode mode = GrowthMode::Strict);

/// Dissipativity condition for pure second-order complex-symmetric data:
/// alpha_s |p - 2| <= 2 sqrt(p - 1).
bool dissipativity_condition(double alpha_s, double p);

/// Closed p-interval where eps_p >= 0. `unbounded` marks [p_lo, infinity);
/// p = infinity itself is never a member.
struct PInterval {
    bool empty = true;
    bool unbounded = false;
    double p_lo = 0.0;
    double p_hi = 0.0;
    double eps_at_lo = 0.0;
    double eps_at_hi = 0.0;

    bool contains(double p) const;
    bool strictly_inside(double p) const;
};

/// Solves eps = 0 as two quadratics in s = 1/p (branches s >= 1/2 and s <= 1/2),
/// exploiting concavity of s -> eps.
PInterval interval_I(const StructuralConstants& c);

struct MuOmega {
    double mu = 0.0;
    double omega = 0.0;
    double eps_used = 0.0;
};

/// Largest eps in (0,1) with eps + eps/(1-eps) delta_p^2 <= eps_p, capped at 0.999.
double eps_choice_max(const StructuralConstants& c, Exponent e);

/// Coercivity pair mu_p = eps, omega_p = omega_hat + eps/(1-eps) B_hat_p for p in the
/// open interval; eps defaults to eps_choice_max.
MuOmega mu_omega_for(const StructuralConstants& c, Exponent e,
                     std::optional<double> eps_choice = std::nullopt,
                     GrowthMode mode = GrowthMode::Strict);

/// Endpoint extension under uniform ellipticity in dimension N >= 3:
/// p_max = N/(N-2) p_hi, p_min = (N/(N-2) (p_lo)')'. Infinite inputs propagate.
std::pair<double, double> extended_endpoints(double p_lo, double p_hi, int N);

struct IntervalReportRow {
    double p;
    double eps;
    double omega_hat;
    double B_hat;
    bool in_interval;
    std::optional<MuOmega> mu_omega; // interior points only
};

struct IntervalReport {
    StructuralConstants constants;
    PInterval interval;
    bool interior_nonempty = false;
    bool closed_form_mode_ok = true;
    std::vector<IntervalReportRow> rows;
    std::optional<std::pair<double, double>> extended; // (p_min, p_max) when N >= 3 given

    nlohmann::json to_json() const;
};

IntervalReport build_interval_report(const StructuralConstants& c,
                                     const std::vector<double>& p_grid, std::optional<int> N,
                                     GrowthMode mode = GrowthMode::Audit);

/// Default p grid for reports: log-spaced over [1, 50] plus interval endpoints.
std::vector<double> default_p_grid(const PInterval& iv);

} // namespace sgl
