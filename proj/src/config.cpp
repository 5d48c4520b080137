#include "sgl/config.hpp"

#include <nlohmann/json.hpp>

#include "sgl/dsl.hpp"

namespace sgl {

namespace {

cplx read_cplx(const nlohmann::json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2)
        return cplx(j.at(0).get<double>(), j.at(1).get<double>());
    throw ConfigError("complex entries must be numbers or [re, im] pairs");
}

Bc read_bc(const std::string& s) {
    if (s == "dirichlet" || s == "Dirichlet") return Bc::Dirichlet;
    if (s == "neumann" || s == "Neumann") return Bc::Neumann;
    throw ConfigError("bc must be 'dirichlet' or 'neumann'");
}

std::shared_ptr<Grid> read_grid(const nlohmann::json& j) {
    if (!j.contains("grid")) throw ConfigError("config needs a 'grid' block");
    const auto& gj = j.at("grid");
    int dim = gj.value("dim", 0);
    auto ext = gj.at("extent");
    auto nn = gj.at("n");
    if (dim == 0) dim = int(ext.size());
    Bc bc = read_bc(gj.value("bc", "dirichlet"));
    if (dim == 1) {
        return std::make_shared<Grid>(Grid::line(ext.at(0).at(0).get<double>(),
                                                 ext.at(0).at(1).get<double>(),
                                                 nn.at(0).get<std::size_t>(), bc));
    }
    if (dim == 2) {
        return std::make_shared<Grid>(Grid::box(
            ext.at(0).at(0).get<double>(), ext.at(0).at(1).get<double>(),
            ext.at(1).at(0).get<double>(), ext.at(1).at(1).get<double>(),
            nn.at(0).get<std::size_t>(), nn.at(1).get<std::size_t>(), bc));
    }
    throw ConfigError("grid dim must be 1 or 2");
}

// Evaluate a DSL string over the grid, expecting the given shape.
void fill_matrix_from_expr(MatrixField& A, const std::string& text) {
    const Grid& g = A.grid();
    dsl::NodePtr ast = dsl::parse_expr(text);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        dsl::Value v = dsl::eval(ast, g.x_of(i), g.y_of(i));
        if (v.kind == dsl::Value::Kind::Scalar) {
            for (int k = 0; k < g.dim(); ++k) A.at(i, k, k) = v.scalar();
        } else if (v.kind == dsl::Value::Kind::Matrix && v.n == g.dim()) {
            for (int r = 0; r < g.dim(); ++r)
                for (int c = 0; c < g.dim(); ++c) A.at(i, r, c) = v.entries[r * v.n + c];
        } else {
            throw ConfigError("A must evaluate to a scalar or an NxN matrix");
        }
    }
}

void fill_vector_from_expr(VectorField& b, const std::string& text) {
    const Grid& g = b.grid();
    dsl::NodePtr ast = dsl::parse_expr(text);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        dsl::Value v = dsl::eval(ast, g.x_of(i), g.y_of(i));
        if (v.kind == dsl::Value::Kind::Scalar && g.dim() == 1) {
            b.at(i, 0) = v.scalar();
        } else if (v.kind == dsl::Value::Kind::Vector && v.n == g.dim()) {
            for (int k = 0; k < g.dim(); ++k) b.at(i, k) = v.entries[k];
        } else {
            throw ConfigError("drift fields must evaluate to N-vectors (or scalars in 1-D)");
        }
    }
}

void fill_scalar_from_expr(ScalarField& q, const std::string& text) {
    const Grid& g = q.grid();
    dsl::NodePtr ast = dsl::parse_expr(text);
    for (std::size_t i = 0; i < g.num_nodes(); ++i)
        q[i] = dsl::eval_scalar(ast, g.x_of(i), g.y_of(i));
}

void read_A(MatrixField& A, const nlohmann::json& j) {
    const Grid& g = A.grid();
    if (j.is_string()) {
        fill_matrix_from_expr(A, j.get<std::string>());
        return;
    }
    if (j.is_array()) {
        // matrix of expression strings
        std::string text = "[";
        for (std::size_t r = 0; r < j.size(); ++r) {
            if (r) text += ",";
            text += "[";
            for (std::size_t c = 0; c < j.at(r).size(); ++c) {
                if (c) text += ",";
                text += j.at(r).at(c).get<std::string>();
            }
            text += "]";
        }
        text += "]";
        fill_matrix_from_expr(A, text);
        return;
    }
    if (j.is_object() && j.contains("values")) {
        const auto& vals = j.at("values");
        if (vals.size() != g.num_nodes()) throw ConfigError("A values must cover every node");
        for (std::size_t i = 0; i < g.num_nodes(); ++i) {
            const auto& m = vals.at(i);
            for (int r = 0; r < g.dim(); ++r)
                for (int c = 0; c < g.dim(); ++c) A.at(i, r, c) = read_cplx(m.at(r).at(c));
        }
        return;
    }
    throw ConfigError("A must be an expression, a matrix of expressions, or {values: ...}");
}

void read_b(VectorField& b, const nlohmann::json& j) {
    const Grid& g = b.grid();
    if (j.is_string()) {
        fill_vector_from_expr(b, j.get<std::string>());
        return;
    }
    if (j.is_array()) {
        std::string text = "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (k) text += ",";
            text += j.at(k).get<std::string>();
        }
        text += "]";
        fill_vector_from_expr(b, text);
        return;
    }
    if (j.is_object() && j.contains("values")) {
        const auto& vals = j.at("values");
        if (vals.size() != g.num_nodes()) throw ConfigError("drift values must cover every node");
        for (std::size_t i = 0; i < g.num_nodes(); ++i)
            for (int k = 0; k < g.dim(); ++k) b.at(i, k) = read_cplx(vals.at(i).at(k));
        return;
    }
    throw ConfigError("drift fields must be expressions or {values: ...}");
}

void read_Q(ScalarField& q, const nlohmann::json& j) {
    const Grid& g = q.grid();
    if (j.is_string()) {
        fill_scalar_from_expr(q, j.get<std::string>());
        return;
    }
    if (j.is_object() && j.contains("values")) {
        const auto& vals = j.at("values");
        if (vals.size() != g.num_nodes()) throw ConfigError("Q values must cover every node");
        for (std::size_t i = 0; i < g.num_nodes(); ++i) q[i] = read_cplx(vals.at(i));
        return;
    }
    throw ConfigError("Q must be an expression or {values: ...}");
}

GrowthMode read_mode(const nlohmann::json& j) {
    std::string s = j.value("mode", "thm1.3");
    if (s == "thm1.3" || s == "closed-form" || s == "strict") return GrowthMode::Strict;
    if (s == "thm1.5" || s == "coercive" || s == "audit") return GrowthMode::Audit;
    throw ConfigError("mode must be 'thm1.3' or 'thm1.5'");
}

} // namespace

Problem load_problem(const nlohmann::json& config) {
    Problem prob;
    prob.grid = read_grid(config);
    const Grid& g = *prob.grid;
    CoefficientSet cs(g);
    if (config.contains("A"))
        read_A(cs.A, config.at("A"));
    else
        cs.A = MatrixField::scaled_identity(g, cplx(1.0, 0.0));
    if (config.contains("b1")) read_b(cs.b1, config.at("b1"));
    if (config.contains("b2")) read_b(cs.b2, config.at("b2"));
    if (config.contains("Q")) read_Q(cs.Q, config.at("Q"));
    prob.ctx = std::make_unique<FormContext>(FormContext::build(std::move(cs)));
    if (config.contains("constants"))
        prob.declared = StructuralConstants::from_json(config.at("constants"));
    prob.mode = read_mode(config);
    prob.seed = config.value("seed", 42ull);
    return prob;
}

Problem load_problem_text(const std::string& config_json) {
    nlohmann::json j = nlohmann::json::parse(config_json, nullptr, true, true);
    return load_problem(j);
}

StructuralConstants resolve_constants(const Problem& prob, bool measure) {
    StructuralConstants c;
    if (measure) {
        DriftBoundOptions opts;
        opts.seed = prob.seed;
        c = measure_constants(*prob.ctx, opts);
    }
    if (prob.declared) {
        auto declared = [&](const char* name) {
            auto it = prob.declared->provenance.find(name);
            return it != prob.declared->provenance.end() && it->second == Provenance::Declared;
        };
        for (const auto& [name, prov] : prob.declared->provenance)
            if (prov == Provenance::Declared)
                c.set(name, prob.declared->get(name), Provenance::Declared);
        // Declaring the explicit-route inputs re-synthesizes (beta', B') unless
        // those were declared directly.
        if ((declared("alpha_a") || declared("beta_hat") || declared("B_hat")) &&
            (!declared("beta_prime") || !declared("B_prime"))) {
            auto [bp, Bp] = synthesize_beta_prime(c.alpha_a, c.beta_hat, c.B_hat);
            Provenance prov = declared("alpha_a") && declared("beta_hat") && declared("B_hat")
                                  ? Provenance::Declared
                                  : Provenance::Measured;
            if (!declared("beta_prime")) c.set("beta_prime", bp, prov);
            if (!declared("B_prime")) c.set("B_prime", Bp, prov);
        }
    }
    return c;
}

} // namespace sgl
