#include "sgl/casebook.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "sgl/operator.hpp"
#include "sgl/probes.hpp"

namespace sgl {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt8 = 2.8284271247461903;

double tau_profile(double x) { return x * x * (3.0 - 2.0 * x); }
double tau_profile_d(double x) { return 6.0 * x * (1.0 - x); }

// Composite Simpson on [0,1] with an even number of intervals.
template <class F>
double simpson(F&& f, std::size_t n_nodes) {
    std::size_t cells = n_nodes - 1;
    if (cells % 2 == 1) ++cells;
    const double h = 1.0 / double(cells);
    double s = f(0.0) + f(1.0);
    for (std::size_t k = 1; k < cells; ++k) s += (k % 2 == 1 ? 4.0 : 2.0) * f(k * h);
    return s * h / 3.0;
}

} // namespace

HardyThresholds hardy(double beta, int N) {
    if (!(beta > 0.0 && beta < 1.0)) throw BadParameter("hardy needs beta in (0,1)");
    if (N < 3) throw BadParameter("hardy needs N >= 3");
    const double root = std::sqrt(1.0 - beta);
    HardyThresholds h;
    h.p_minus = 2.0 / (1.0 + root);
    h.p_plus = root < 1.0 ? 2.0 / (1.0 - root) : std::numeric_limits<double>::infinity();
    const double factor = double(N) / double(N - 2);
    h.p_max = factor * h.p_plus;
    h.p_min = std::isinf(h.p_max) ? 1.0 : h.p_max / (h.p_max - 1.0);
    return h;
}

StructuralConstants neumann_counterexample_constants() {
    StructuralConstants c;
    c.set("alpha_s", 1.0, Provenance::Declared);
    c.set("B_prime", 1.0, Provenance::Declared);
    c.set("beta_hat", 0.0, Provenance::Declared);
    c.set("B_hat", 1.0, Provenance::Declared);
    return c;
}

FormContext neumann_counterexample_context(std::size_t n) {
    Grid g = Grid::line(0.0, 1.0, n, Bc::Neumann);
    static std::vector<std::unique_ptr<Grid>> grid_pool; // contexts keep grid references
    grid_pool.push_back(std::make_unique<Grid>(g));
    const Grid& gr = *grid_pool.back();
    CoefficientSet cs(gr);
    cs.A = MatrixField::scaled_identity(gr, cplx(1.0, 1.0));
    for (std::size_t i = 0; i < gr.num_nodes(); ++i) cs.b1.at(i, 0) = cplx(0.0, -1.0);
    return FormContext::build(std::move(cs));
}

GridFunction neumann_witness(const Grid& g, double lambda) {
    const cplx r(1.0 - kSqrt2, -1.0);
    GridFunction u(g);
    for (std::size_t i = 0; i < g.num_nodes(); ++i)
        u[i] = std::exp(lambda * r * tau_profile(g.x_of(i)));
    return u;
}

NeumannCounterexampleReport neumann_counterexample(const std::vector<double>& lambda_list,
                                                   std::optional<double> p_opt, std::size_t n) {
    const double p = p_opt.value_or(4.0 + 2.0 * kSqrt2);
    const cplx r(1.0 - kSqrt2, -1.0);
    const double a = r.real();
    // Re<L u, w_p(u)> = K_p lambda^2 int (tau')^2 |u|^p - lambda int tau' |u|^p,
    // with K_p = Re[(1+i)(|r|^2 + (p-2) a r)]; K_p vanishes at p = 4 + 2 sqrt(2).
    const cplx coef = (cplx(1.0, 1.0)) * (std::norm(r) + (p - 2.0) * a * r);
    const double Kp = coef.real();
    const double decay = -p * a; // |u|^p = exp(-decay * lambda * tau)

    FormContext ctx = neumann_counterexample_context(n);
    DiscreteOperator op = assemble(ctx);

    NeumannCounterexampleReport rep;
    rep.p = p;
    rep.n = n;
    rep.limit_value = -1.0 / kSqrt8;
    rep.norms_decreasing = true;
    double prev_norm = std::numeric_limits<double>::infinity();
    for (double lambda : lambda_list) {
        NeumannCounterexampleRow row;
        row.lambda = lambda;
        const double e1 = std::exp(-decay * lambda * tau_profile(1.0));
        // closed forms: int tau' |u|^p = (1 - e1)/(decay lambda) by substitution
        const double I1 = (1.0 - e1) / (decay * lambda);
        row.closed_form = -lambda * I1;
        if (Kp != 0.0) {
            const double I2 = simpson(
                [&](double x) {
                    double td = tau_profile_d(x);
                    return td * td * std::exp(-decay * lambda * tau_profile(x));
                },
                65537);
            row.closed_form += Kp * lambda * lambda * I2;
        }
        row.quadrature =
            Kp * lambda * lambda *
                simpson(
                    [&](double x) {
                        double td = tau_profile_d(x);
                        return td * td * std::exp(-decay * lambda * tau_profile(x));
                    },
                    n) -
            lambda * simpson(
                         [&](double x) {
                             return tau_profile_d(x) * std::exp(-decay * lambda * tau_profile(x));
                         },
                         n);
        GridFunction u = neumann_witness(*ctx.cs.grid, lambda);
        SignumMaps maps = signum_maps(u, p, ctx.nonlinear_floor);
        Eigen::VectorXcd ud = op.restrict_fn(u);
        Eigen::VectorXcd wd = op.restrict_fn(maps.w_p);
        row.discrete = op.inner_h(op.apply(ud), wd).real();
        row.norm_p = lp_norm(u, p);
        if (row.norm_p > prev_norm) rep.norms_decreasing = false;
        prev_norm = row.norm_p;
        rep.rows.push_back(row);
    }
    return rep;
}

std::vector<DivergenceFreeRow> divergence_free_invariance(const std::vector<double>& c_list,
                                                          std::size_t n, int probes,
                                                          std::uint64_t seed, Bc bc) {
    static std::vector<std::unique_ptr<Grid>> grid_pool;
    grid_pool.push_back(std::make_unique<Grid>(Grid::box(0.0, 1.0, 0.0, 1.0, n, n, bc)));
    const Grid& g = *grid_pool.back();

    auto make_ctx = [&](double c) {
        CoefficientSet cs(g);
        cs.A = MatrixField::scaled_identity(g, cplx(1.0, 0.0));
        for (std::size_t i = 0; i < g.num_nodes(); ++i) {
            cs.A.at(i, 0, 1) += cplx(0.0, c);
            cs.A.at(i, 1, 0) += cplx(0.0, -c);
        }
        return FormContext::build(std::move(cs));
    };
    FormContext base = make_ctx(0.0);

    ProbeGen gen(g, seed);
    std::vector<GridFunction> us;
    for (int k = 0; k < probes; ++k) us.push_back(gen.random_smooth());

    std::vector<DivergenceFreeRow> rows;
    for (double c : c_list) {
        FormContext ctx = make_ctx(c);
        DivergenceFreeRow row;
        row.c = c;
        row.max_deviation = 0.0;
        row.scale = 0.0;
        row.expected_nonzero = bc == Bc::Neumann && c != 0.0;
        for (const GridFunction& u : us) {
            cplx with = form_t(ctx, u, u);
            cplx without = form_t(base, u, u);
            row.max_deviation = std::max(row.max_deviation, std::abs(with - without));
            row.scale = std::max(row.scale, std::abs(without));
        }
        rows.push_back(row);
    }
    return rows;
}

std::pair<double, double> drift_synthesis_demo(double alpha_a, double beta_hat, double B_hat) {
    if (!(beta_hat > 0.0) && alpha_a * B_hat != 0.0)
        throw BadParameter("need beta_hat > 0 or alpha_a * B_hat = 0");
    return synthesize_beta_prime(alpha_a, beta_hat, B_hat);
}

nlohmann::json hardy_to_json(const HardyThresholds& h) {
    auto enc = [](double v) -> nlohmann::json {
        if (std::isinf(v)) return "inf";
        return v;
    };
    return {{"p_minus", enc(h.p_minus)},
            {"p_plus", enc(h.p_plus)},
            {"p_max", enc(h.p_max)},
            {"p_min", enc(h.p_min)}};
}

nlohmann::json neumann_to_json(const NeumannCounterexampleReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"lambda", row.lambda},
                        {"closed_form", row.closed_form},
                        {"quadrature", row.quadrature},
                        {"discrete", row.discrete},
                        {"norm_p", row.norm_p}});
    return {{"p", r.p},
            {"n", r.n},
            {"limit_value", r.limit_value},
            {"norms_decreasing", r.norms_decreasing},
            {"rows", rows}};
}

} // namespace sgl
