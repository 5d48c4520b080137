#include "sgl/audits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sgl/probes.hpp"

namespace sgl {

bool TrajectoryReport::any_breach() const {
    for (const auto& pt : points)
        if (pt.status == "BREACH") return true;
    return false;
}

std::string TrajectoryReport::to_csv() const {
    std::ostringstream os;
    os << "p,t,measured,bound,margin,method,status\n";
    os.precision(12);
    for (const auto& pt : points)
        os << pt.p << ',' << pt.t << ',' << pt.measured << ',' << pt.bound << ',' << pt.margin
           << ',' << pt.method << ',' << pt.status << '\n';
    return os.str();
}

nlohmann::json TrajectoryReport::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& pt : points)
        rows.push_back({{"p", pt.p},
                        {"t", pt.t},
                        {"measured", pt.measured},
                        {"bound", pt.bound},
                        {"margin", pt.margin},
                        {"method", pt.method},
                        {"status", pt.status}});
    return {{"points", rows}, {"method_meta", method_meta}, {"breach", any_breach()}};
}

TrajectoryReport quasi_contractivity_audit(const FormContext& ctx, const StructuralConstants& c,
                                           const std::vector<double>& p_list,
                                           const std::vector<double>& t_list,
                                           const AuditOptions& opts) {
    DiscreteOperator op = assemble(ctx);
    PropagatorFactory prop(op, opts.prop);
    PInterval iv = interval_I(c);
    TrajectoryReport rep;
    std::string method = prop.method_name();
    rep.method_meta = "propagator=" + method + ", restarts=" + std::to_string(opts.opnorm.restarts);
    for (double t : t_list) {
        Eigen::MatrixXcd P = prop.at(t);
        for (double p : p_list) {
            OpNormResult nrm = opnorm_p(P, op.mass, p, opts.opnorm);
            Exponent e = Exponent::from_p(p);
            double bound = std::exp(omega_hat(c, e, opts.mode) * t);
            TrajectoryPoint pt;
            pt.p = p;
            pt.t = t;
            pt.measured = nrm.value;
            pt.bound = bound;
            pt.margin = bound - nrm.value;
            pt.method = method;
            if (!iv.contains(p))
                pt.status = "EXPECT-NO-GUARANTEE";
            else
                pt.status = nrm.value <= bound * (1.0 + opts.tol_discr) ? "PASS" : "BREACH";
            rep.points.push_back(std::move(pt));
        }
    }
    return rep;
}

ResolventWeightReport resolvent_weight_bound(const FormContext& ctx,
                                             const std::vector<double>& U_nodal, double p,
                                             const std::vector<double>& lambdas, int probes,
                                             std::uint64_t seed, const AuditOptions& opts) {
    const Grid& g = ctx.grid();
    if (U_nodal.size() != g.num_nodes()) throw BadParameter("U must be a nodal field");
    for (double u : U_nodal)
        if (!(u >= 0.0)) throw BadParameter("U must be nonnegative");
    DiscreteOperator op = assemble(ctx);

    // Premise: U(v_p(u)) <= Re<L u, w_p(u)>_h on the probe corpus.
    ProbeGen gen(g, seed);
    double hyp_margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < probes; ++k) {
        GridFunction u = g.bc() == Bc::Dirichlet ? gen.random_smooth() : gen.random_nonvanishing();
        SignumMaps maps = signum_maps(u, p, ctx.nonlinear_floor);
        Eigen::VectorXcd ud = op.restrict_fn(u);
        Eigen::VectorXcd wd = op.restrict_fn(maps.w_p);
        double lhs = 0.0;
        for (std::size_t i = 0; i < g.num_nodes(); ++i)
            lhs += g.quad_weight(i) * U_nodal[i] * std::norm(maps.v_p[i]);
        double rhs = op.inner_h(op.apply(ud), wd).real();
        hyp_margin = std::min(hyp_margin, rhs - lhs);
    }
    if (hyp_margin < -1e-10)
        throw HypothesisUnmet("the probe corpus violates U(v_p) <= Re<Lu, w_p> (margin " +
                              std::to_string(hyp_margin) + ")");

    ResolventWeightReport rep;
    rep.hypothesis_margin = hyp_margin;
    const double pd = p / (p - 1.0);
    Eigen::VectorXd Uw(op.ndof());
    for (std::size_t d = 0; d < op.ndof(); ++d)
        Uw[d] = std::pow(U_nodal[op.dof_nodes[d]], 1.0 / p);
    for (double lambda : lambdas) {
        Eigen::MatrixXcd R = resolvent_matrix(op, lambda);
        Eigen::MatrixXcd WR = Uw.asDiagonal() * R;
        OpNormResult nrm = opnorm_p(WR, op.mass, p, opts.opnorm);
        ResolventWeightRow row;
        row.lambda = lambda;
        row.measured = nrm.value;
        row.bound = std::pow(lambda, -1.0 / pd);
        row.margin = row.bound * (1.0 + opts.tol_discr) - nrm.value;
        if (row.margin < 0.0) rep.pass = false;
        rep.rows.push_back(row);
    }
    return rep;
}

namespace {

// rho_xi^{-1} P rho_xi with rho_xi = exp(-xi x): entry (i,j) scales by
// exp(xi (x_i - x_j)).
template <class Mat>
Mat twist(const Mat& P, const DiscreteOperator& op, double xi) {
    const Grid& g = *op.grid;
    Eigen::VectorXd xs(op.ndof());
    for (std::size_t d = 0; d < op.ndof(); ++d) xs[d] = g.x_of(op.dof_nodes[d]);
    Mat out = P;
    for (Eigen::Index i = 0; i < out.rows(); ++i)
        for (Eigen::Index j = 0; j < out.cols(); ++j)
            out(i, j) *= std::exp(xi * (xs[i] - xs[j]));
    return out;
}

} // namespace

WeightedGrowthReport weighted_growth_audit(const FormContext& ctx, const StructuralConstants& c,
                                           double p, const std::vector<double>& xi_list,
                                           const std::vector<double>& t_list,
                                           const AuditOptions& opts) {
    if (ctx.grid().dim() != 1)
        throw BadParameter("the twisted-growth audit runs on 1-D grids");
    DiscreteOperator op = assemble(ctx);
    Exponent e = Exponent::from_p(p);
    double c2 = validate_ellipticity(ctx.dec).second;
    MuOmega mo{};
    bool have_mo = false;
    if (eps_p(c, e) > 0.0) {
        mo = mu_omega_for(c, e, std::nullopt, GrowthMode::Audit);
        have_mo = true;
    }
    WeightedGrowthReport rep;
    PropagatorFactory prop(op, opts.prop);
    // Least squares for log N(xi, t) ~ mu xi^2 t + omega t.
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    for (double t : t_list) {
        Eigen::MatrixXcd Pc;
        Eigen::MatrixXd Pr;
        if (prop.is_real())
            Pr = prop.at_real(t);
        else
            Pc = prop.at(t);
        for (double xi : xi_list) {
            OpNormResult nrm;
            if (prop.is_real()) {
                Eigen::MatrixXd Ptw = twist(Pr, op, xi);
                nrm = opnorm_p(Ptw, op.mass, p, opts.opnorm);
            } else {
                Eigen::MatrixXcd Ptw = twist(Pc, op, xi);
                nrm = opnorm_p(Ptw, op.mass, p, opts.opnorm);
            }
            WeightedGrowthRow row;
            row.xi = xi;
            row.t = t;
            row.measured = nrm.value;
            if (have_mo) {
                double K = c2 * xi * xi;
                double rate = mo.omega + mo.mu + K * (C_p(c, e.s) / mo.mu + 1.0);
                row.ceiling = std::exp(rate * t);
                if (nrm.value > row.ceiling * (1.0 + opts.tol_discr)) rep.within_ceiling = false;
            } else {
                row.ceiling = std::numeric_limits<double>::infinity();
            }
            rep.rows.push_back(row);
            double u1 = xi * xi * t, u2 = t, y = std::log(std::max(nrm.value, 1e-300));
            a11 += u1 * u1;
            a12 += u1 * u2;
            a22 += u2 * u2;
            b1 += u1 * y;
            b2 += u2 * y;
        }
    }
    double det = a11 * a22 - a12 * a12;
    if (std::abs(det) > 1e-14) {
        rep.mu_fit = (a22 * b1 - a12 * b2) / det;
        rep.omega_fit = (a11 * b2 - a12 * b1) / det;
    } else if (a11 > 0.0) {
        rep.mu_fit = b1 / a11; // single-t degenerate fit through the origin
        rep.omega_fit = 0.0;
    }
    return rep;
}

SmoothingReport smoothing_audit(const FormContext& ctx, double p, double r,
                                const std::vector<double>& t_list, const AuditOptions& opts) {
    DiscreteOperator op = assemble(ctx);
    SmoothingReport rep;
    PropagatorFactory prop(op, opts.prop);
    double sxx = 0, sx = 0, sy = 0, sxy = 0, n = 0;
    for (double t : t_list) {
        OpNormResult nrm;
        if (prop.is_real())
            nrm = opnorm_mixed(Eigen::MatrixXd(prop.at_real(t)), op.mass, p, r, opts.opnorm);
        else
            nrm = opnorm_mixed(prop.at(t), op.mass, p, r, opts.opnorm);
        SmoothingRow row;
        row.t = t;
        row.measured = nrm.value;
        row.fit = 0.0;
        rep.rows.push_back(row);
        double x = std::log(t), y = std::log(std::max(nrm.value, 1e-300));
        sxx += x * x;
        sx += x;
        sy += y;
        sxy += x * y;
        n += 1.0;
    }
    double det = n * sxx - sx * sx;
    double slope = det != 0.0 ? (n * sxy - sx * sy) / det : 0.0;
    double icpt = n != 0.0 ? (sy - slope * sx) / n : 0.0;
    rep.exponent = -slope;
    rep.prefactor = std::exp(icpt);
    for (auto& row : rep.rows) {
        row.fit = rep.prefactor * std::pow(row.t, -rep.exponent);
        if (row.measured > row.fit * (1.0 + std::max(opts.tol_discr, 0.05)))
            rep.envelope_ok = false;
    }
    return rep;
}

TruncationReport truncation_convergence(const FormContext& ctx, const std::vector<double>& U_nodal,
                                        double p, std::vector<double> m_list, double T, int corpus,
                                        double dt, std::uint64_t seed) {
    const Grid& g = ctx.grid();
    if (U_nodal.size() != g.num_nodes()) throw BadParameter("U must be a nodal field");
    std::sort(m_list.begin(), m_list.end());
    ProbeGen gen(g, seed);
    std::vector<GridFunction> fs;
    for (int k = 0; k < corpus; ++k) fs.push_back(gen.random_smooth());

    const std::size_t nsteps = std::max<std::size_t>(1, std::llround(std::ceil(T / dt)));
    const double dt_eff = T / double(nsteps);
    const std::size_t checkpoint_stride = std::max<std::size_t>(1, nsteps / 8);

    // trajectories[m][f][checkpoint]
    std::vector<std::vector<std::vector<Eigen::VectorXcd>>> traj;
    DiscreteOperator op0; // reused for norms; all variants share the dof layout
    bool have_op0 = false;
    for (double m : m_list) {
        CoefficientSet cs = ctx.cs;
        for (std::size_t i = 0; i < g.num_nodes(); ++i)
            cs.Q[i] += std::max(U_nodal[i] - m, 0.0);
        FormContext cm = FormContext::build(std::move(cs));
        DiscreteOperator op = assemble(cm);
        if (!have_op0) {
            op0 = op;
            have_op0 = true;
        }
        Stepper st(op, dt_eff, Scheme::Trapezoidal);
        std::vector<std::vector<Eigen::VectorXcd>> per_f;
        for (const GridFunction& f : fs) {
            Eigen::VectorXcd u = op.restrict_fn(f);
            std::vector<Eigen::VectorXcd> chk;
            for (std::size_t k = 1; k <= nsteps; ++k) {
                u = st.step(u);
                if (k % checkpoint_stride == 0 || k == nsteps) chk.push_back(u);
            }
            per_f.push_back(std::move(chk));
        }
        traj.push_back(std::move(per_f));
    }

    TruncationReport rep;
    double prev_gap = std::numeric_limits<double>::infinity();
    for (std::size_t mi = 0; mi + 1 < m_list.size(); ++mi) {
        double gap = 0.0;
        for (std::size_t fi = 0; fi < fs.size(); ++fi)
            for (std::size_t ck = 0; ck < traj[mi][fi].size(); ++ck)
                gap = std::max(gap, op0.norm_p(traj[mi][fi][ck] - traj[mi + 1][fi][ck], p));
        rep.gaps.push_back({m_list[mi], m_list[mi + 1], gap});
        if (gap > prev_gap * (1.0 + 1e-12)) rep.monotone = false;
        prev_gap = gap;
        rep.final_gap = gap;
    }
    return rep;
}

} // namespace sgl
