#include "sgl/intervals.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace sgl {

double delta_p(const StructuralConstants& c, Exponent e) {
    return c.alpha_s * std::abs(1.0 - 2.0 * e.s) + c.beta_prime / 2.0;
}

double eps_p(const StructuralConstants& c, Exponent e) {
    const double s = e.s, sd = 1.0 - e.s;
    const double d = delta_p(c, e);
    const double drift = 2.0 * s * c.beta1 + 2.0 * sd * c.beta2;
    return 4.0 * s * sd - drift - d * d - c.gamma;
}

double B_hat_p(const StructuralConstants& c, Exponent e) {
    if (c.beta_prime > 0.0)
        return c.B_prime / 4.0 +
               (c.alpha_s * c.B_prime / (2.0 * c.beta_prime)) * std::abs(1.0 - 2.0 * e.s);
    return c.B_prime / 4.0;
}

double omega_hat(const StructuralConstants& c, Exponent e, GrowthMode mode) {
    if (mode == GrowthMode::Strict && !c.closed_form_mode_ok())
        throw ModeError("beta' = 0 with alpha_s B' > 0: the closed-form growth bound is not "
                        "guaranteed at the interval boundary; use the coercivity mode or audit "
                        "mode");
    return 2.0 * e.s * c.B1 + 2.0 * (1.0 - e.s) * c.B2 + c.Gamma + B_hat_p(c, e);
}

bool dissipativity_condition(double alpha_s, double p) {
    return alpha_s * std::abs(p - 2.0) <= 2.0 * std::sqrt(p - 1.0);
}

bool PInterval::contains(double p) const {
    if (empty) return false;
    if (std::isinf(p)) return false;
    return p >= p_lo && (unbounded || p <= p_hi);
}

bool PInterval::strictly_inside(double p) const {
    if (empty || std::isinf(p)) return false;
    return p > p_lo && (unbounded || p < p_hi);
}

namespace {

// eps restricted to the branch sign * (2s - 1) = |2s - 1| as a quadratic in s:
// a s^2 + b s + c0.
struct Quad {
    double a, b, c0;
    double eval(double s) const { return (a * s + b) * s + c0; }
};

Quad branch_quadratic(const StructuralConstants& c, double sign) {
    // delta(s) = alpha_s * sign * (2s - 1) + beta'/2 = 2 alpha_s sign s + (beta'/2 - alpha_s sign)
    const double m = 2.0 * c.alpha_s * sign;
    const double q = c.beta_prime / 2.0 - c.alpha_s * sign;
    Quad out;
    out.a = -4.0 - m * m;
    out.b = 4.0 - 2.0 * c.beta1 + 2.0 * c.beta2 - 2.0 * m * q;
    out.c0 = -2.0 * c.beta2 - q * q - c.gamma;
    return out;
}

// Roots of a downward parabola; empty when it never reaches zero.
std::optional<std::pair<double, double>> nonneg_range(const Quad& q) {
    const double disc = q.b * q.b - 4.0 * q.a * q.c0;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    // a < 0; stable quadratic formula.
    double r1 = (-q.b + sq) / (2.0 * q.a);
    double r2 = (-q.b - sq) / (2.0 * q.a);
    if (r1 > r2) std::swap(r1, r2);
    return std::make_pair(r1, r2);
}

double polish_root(const StructuralConstants& c, double s) {
    // A couple of Newton steps on s -> eps to push |eps| to ~1e-15.
    for (int it = 0; it < 3; ++it) {
        const double f = eps_p(c, Exponent{s});
        const double h = 1e-7;
        const double fp = (eps_p(c, Exponent{std::min(1.0, s + h)}) -
                           eps_p(c, Exponent{std::max(0.0, s - h)})) /
                          (std::min(1.0, s + h) - std::max(0.0, s - h));
        if (fp == 0.0) break;
        const double step = f / fp;
        const double next = s - step;
        if (next < 0.0 || next > 1.0 || !std::isfinite(next)) break;
        s = next;
        if (std::abs(f) < 1e-15) break;
    }
    return s;
}

} // namespace

PInterval interval_I(const StructuralConstants& c) {
    // {s in [0,1] : eps(s) >= 0} is an interval by concavity; intersect the branch
    // solutions with their half-intervals.
    double s_lo = std::numeric_limits<double>::infinity();
    double s_hi = -std::numeric_limits<double>::infinity();
    bool any = false;

    struct Half {
        double sign, lo, hi;
    };
    const Half halves[2] = {{-1.0, 0.0, 0.5}, {+1.0, 0.5, 1.0}};
    for (const Half& hf : halves) {
        Quad q = branch_quadratic(c, hf.sign);
        auto rng = nonneg_range(q);
        if (!rng) continue;
        double lo = std::max(rng->first, hf.lo);
        double hi = std::min(rng->second, hf.hi);
        if (lo > hi) continue;
        any = true;
        s_lo = std::min(s_lo, lo);
        s_hi = std::max(s_hi, hi);
    }

    PInterval out;
    if (!any) return out;
    out.empty = false;

    // Interior roots get polished; clamped ends (s = 1, i.e. p = 1, and s = 0,
    // i.e. the unbounded sentinel) are kept as-is.
    if (s_lo > 0.0) s_lo = polish_root(c, s_lo);
    if (s_hi < 1.0) s_hi = polish_root(c, s_hi);
    s_lo = std::clamp(s_lo, 0.0, 1.0);
    s_hi = std::clamp(s_hi, 0.0, 1.0);

    out.p_lo = 1.0 / s_hi; // small p from large s
    out.eps_at_lo = eps_p(c, Exponent{s_hi});
    if (s_lo == 0.0) {
        out.unbounded = true;
        out.p_hi = std::numeric_limits<double>::infinity();
        out.eps_at_hi = eps_p(c, Exponent{0.0});
    } else {
        out.p_hi = 1.0 / s_lo;
        out.eps_at_hi = eps_p(c, Exponent{s_lo});
    }
    return out;
}

double eps_choice_max(const StructuralConstants& c, Exponent e) {
    const double ep = eps_p(c, e);
    if (ep <= 1e-13) throw OutsideInterval("eps_p <= 0: p is not in the interior of I");
    const double d2 = delta_p(c, e) * delta_p(c, e);
    // eps + eps/(1-eps) d2 = ep  <=>  eps^2 - (1 + d2 + ep) eps + ep = 0 (smaller root)
    const double bcoef = 1.0 + d2 + ep;
    const double disc = bcoef * bcoef - 4.0 * ep;
    const double root = disc <= 0.0 ? bcoef / 2.0 : (2.0 * ep) / (bcoef + std::sqrt(disc));
    return std::min(root, 0.999);
}

MuOmega mu_omega_for(const StructuralConstants& c, Exponent e, std::optional<double> eps_choice,
                     GrowthMode mode) {
    const double ep = eps_p(c, e);
    if (ep <= 1e-13) throw OutsideInterval("p is not in the interior of I");
    double eps = eps_choice.value_or(eps_choice_max(c, e));
    if (!(eps > 0.0 && eps < 1.0)) throw BadParameter("eps_choice must lie in (0,1)");
    const double d2 = delta_p(c, e) * delta_p(c, e);
    if (eps + eps / (1.0 - eps) * d2 > ep * (1.0 + 1e-12))
        throw BadParameter("eps_choice violates eps + eps/(1-eps) delta_p^2 <= eps_p");
    MuOmega out;
    out.eps_used = eps;
    out.mu = eps;
    out.omega = omega_hat(c, e, mode) + eps / (1.0 - eps) * B_hat_p(c, e);
    return out;
}

std::pair<double, double> extended_endpoints(double p_lo, double p_hi, int N) {
    if (N < 3)
        throw BadParameter("endpoint extension needs N >= 3; use the low-dimension smoothing "
                           "route instead");
    const double factor = double(N) / double(N - 2);
    auto dual = [](double p) {
        if (std::isinf(p)) return 1.0;
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        return p / (p - 1.0);
    };
    const double p_max = std::isinf(p_hi) ? p_hi : factor * p_hi;
    const double p_min = dual(std::isinf(dual(p_lo)) ? dual(p_lo) : factor * dual(p_lo));
    return {p_min, p_max};
}

std::vector<double> default_p_grid(const PInterval& iv) {
    std::vector<double> ps;
    for (int k = 0; k <= 40; ++k) ps.push_back(std::pow(10.0, 0.0 + 1.7 * k / 40.0)); // 1..50
    if (!iv.empty) {
        ps.push_back(iv.p_lo);
        if (!iv.unbounded) ps.push_back(iv.p_hi);
    }
    std::sort(ps.begin(), ps.end());
    return ps;
}

IntervalReport build_interval_report(const StructuralConstants& c,
                                     const std::vector<double>& p_grid, std::optional<int> N,
                                     GrowthMode mode) {
    IntervalReport rep;
    rep.constants = c;
    rep.interval = interval_I(c);
    rep.closed_form_mode_ok = c.closed_form_mode_ok();
    rep.interior_nonempty =
        !rep.interval.empty && (rep.interval.unbounded || rep.interval.p_hi > rep.interval.p_lo);
    for (double p : p_grid) {
        Exponent e = Exponent::from_p(p);
        IntervalReportRow row;
        row.p = p;
        row.eps = eps_p(c, e);
        row.omega_hat = omega_hat(c, e, mode);
        row.B_hat = B_hat_p(c, e);
        row.in_interval = rep.interval.contains(p);
        if (rep.interval.strictly_inside(p) && row.eps > 0.0)
            row.mu_omega = mu_omega_for(c, e, std::nullopt, mode);
        rep.rows.push_back(std::move(row));
    }
    if (N && !rep.interval.empty) {
        rep.extended = extended_endpoints(rep.interval.p_lo,
                                          rep.interval.unbounded
                                              ? std::numeric_limits<double>::infinity()
                                              : rep.interval.p_hi,
                                          *N);
    }
    return rep;
}

namespace {
nlohmann::json json_finite(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}
} // namespace

nlohmann::json IntervalReport::to_json() const {
    nlohmann::json j;
    j["constants"] = constants.to_json();
    j["interval"] = {{"empty", interval.empty},
                     {"unbounded", interval.unbounded},
                     {"p_lo", interval.empty ? nlohmann::json() : json_finite(interval.p_lo)},
                     {"p_hi", interval.empty ? nlohmann::json() : json_finite(interval.p_hi)},
                     {"eps_at_lo", interval.eps_at_lo},
                     {"eps_at_hi", interval.eps_at_hi}};
    j["interior_nonempty"] = interior_nonempty;
    j["closed_form_mode_ok"] = closed_form_mode_ok;
    nlohmann::json rows_j = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json rj{{"p", json_finite(r.p)},
                          {"eps", r.eps},
                          {"omega_hat", r.omega_hat},
                          {"B_hat", r.B_hat},
                          {"in_interval", r.in_interval}};
        if (r.mu_omega)
            rj["mu_omega"] = {{"mu", r.mu_omega->mu},
                              {"omega", r.mu_omega->omega},
                              {"eps_used", r.mu_omega->eps_used}};
        rows_j.push_back(std::move(rj));
    }
    j["rows"] = std::move(rows_j);
    if (extended)
        j["extended"] = {{"p_min", json_finite(extended->first)},
                         {"p_max", json_finite(extended->second)}};
    return j;
}

} // namespace sgl
