#include "sgl/constants.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "sgl/smallmat.hpp"

namespace sgl {

void StructuralConstants::set(const std::string& name, double value, Provenance prov) {
    double* slot = nullptr;
    if (name == "alpha_s") slot = &alpha_s;
    else if (name == "alpha_a") slot = &alpha_a;
    else if (name == "M") slot = &M;
    else if (name == "beta_prime") slot = &beta_prime;
    else if (name == "B_prime") slot = &B_prime;
    else if (name == "beta1") slot = &beta1;
    else if (name == "B1") slot = &B1;
    else if (name == "beta2") slot = &beta2;
    else if (name == "B2") slot = &B2;
    else if (name == "gamma") slot = &gamma;
    else if (name == "Gamma") slot = &Gamma;
    else if (name == "beta_hat") slot = &beta_hat;
    else if (name == "B_hat") slot = &B_hat;
    else if (name == "c_hat") slot = &c_hat;
    else if (name == "c3") slot = &c3;
    else if (name == "c4") slot = &c4;
    else throw BadParameter("unknown structural constant '" + name + "'");
    if (value < 0.0) throw BadParameter("structural constant '" + name + "' must be >= 0");
    *slot = value;
    provenance[name] = prov;
}

double StructuralConstants::get(const std::string& name) const {
    if (name == "alpha_s") return alpha_s;
    if (name == "alpha_a") return alpha_a;
    if (name == "M") return M;
    if (name == "beta_prime") return beta_prime;
    if (name == "B_prime") return B_prime;
    if (name == "beta1") return beta1;
    if (name == "B1") return B1;
    if (name == "beta2") return beta2;
    if (name == "B2") return B2;
    if (name == "gamma") return gamma;
    if (name == "Gamma") return Gamma;
    if (name == "beta_hat") return beta_hat;
    if (name == "B_hat") return B_hat;
    if (name == "c_hat") return c_hat;
    if (name == "c3") return c3;
    if (name == "c4") return c4;
    throw BadParameter("unknown structural constant '" + name + "'");
}

namespace {
const char* prov_name(Provenance p) {
    switch (p) {
        case Provenance::Measured: return "measured";
        case Provenance::Declared: return "declared";
        default: return "default";
    }
}
Provenance prov_of(const std::string& s) {
    if (s == "measured") return Provenance::Measured;
    if (s == "declared") return Provenance::Declared;
    return Provenance::Default;
}
const char* kAllFields[] = {"alpha_s", "alpha_a", "M",      "beta_prime", "B_prime", "beta1",
                            "B1",      "beta2",   "B2",     "gamma",      "Gamma",   "beta_hat",
                            "B_hat",   "c_hat",   "c3",     "c4"};
} // namespace

nlohmann::json StructuralConstants::to_json() const {
    nlohmann::json j;
    for (const char* f : kAllFields) j[f] = get(f);
    nlohmann::json prov;
    for (const char* f : kAllFields) {
        auto it = provenance.find(f);
        prov[f] = prov_name(it == provenance.end() ? Provenance::Default : it->second);
    }
    j["provenance"] = std::move(prov);
    return j;
}

StructuralConstants StructuralConstants::from_json(const nlohmann::json& j) {
    StructuralConstants c;
    for (const char* f : kAllFields)
        if (j.contains(f)) c.set(f, j.at(f).get<double>(), Provenance::Declared);
    if (j.contains("provenance"))
        for (auto& [k, v] : j.at("provenance").items())
            c.provenance[k] = prov_of(v.get<std::string>());
    return c;
}

namespace {

// max over nodes of the A0s-metric operator norm of a real matrix field
double metric_norm_max(const RealMatrixField& m, const Decomposition& dec) {
    const Grid& g = m.grid();
    const int d = g.dim();
    double best = 0.0;
    for (std::size_t node = 0; node < g.num_nodes(); ++node) {
        Mat2 a0s{dec.A0s.at(node, 0, 0), 0, 0, 0};
        Mat2 mm{m.at(node, 0, 0), 0, 0, 0};
        if (d == 2) {
            a0s = {dec.A0s.at(node, 0, 0), dec.A0s.at(node, 0, 1), dec.A0s.at(node, 1, 0),
                   dec.A0s.at(node, 1, 1)};
            mm = {m.at(node, 0, 0), m.at(node, 0, 1), m.at(node, 1, 0), m.at(node, 1, 1)};
        }
        Mat2 is = spd_inv_sqrt(a0s, d);
        Mat2 s = mul(mul(is, mm, d), is, d);
        best = std::max(best, real_op_norm(s, d));
    }
    return best;
}

} // namespace

double alpha_s_of(const Decomposition& dec) {
    validate_ellipticity(dec);
    return metric_norm_max(dec.A1s, dec);
}

std::pair<double, double> anti_bounds(const Decomposition& dec) {
    validate_ellipticity(dec);
    if (dec.A0s.grid().dim() == 1) return {0.0, 0.0};
    return {metric_norm_max(dec.A1a, dec), metric_norm_max(dec.A0a, dec)};
}

double c3_of(const CoefficientSet& cs, const Decomposition& dec) {
    const Grid& g = *cs.grid;
    const int d = g.dim();
    double best = 0.0;
    for (std::size_t node = 0; node < g.num_nodes(); ++node) {
        Mat2 a0s{dec.A0s.at(node, 0, 0), 0, 0, 0};
        if (d == 2)
            a0s = {dec.A0s.at(node, 0, 0), dec.A0s.at(node, 0, 1), dec.A0s.at(node, 1, 0),
                   dec.A0s.at(node, 1, 1)};
        Mat2 is = spd_inv_sqrt(a0s, d);
        CMat2 a{cs.A.at(node, 0, 0), 0, 0, 0};
        if (d == 2) a = {cs.A.at(node, 0, 0), cs.A.at(node, 0, 1), cs.A.at(node, 1, 0),
                         cs.A.at(node, 1, 1)};
        // is * a * is
        CMat2 t;
        if (d == 1) {
            t = {a[0] * is[0] * is[0], 0, 0, 0};
        } else {
            CMat2 tmp{is[0] * a[0] + is[1] * a[2], is[0] * a[1] + is[1] * a[3],
                      is[2] * a[0] + is[3] * a[2], is[2] * a[1] + is[3] * a[3]};
            t = {tmp[0] * is[0] + tmp[1] * is[2], tmp[0] * is[1] + tmp[1] * is[3],
                 tmp[2] * is[0] + tmp[3] * is[2], tmp[2] * is[1] + tmp[3] * is[3]};
        }
        best = std::max(best, cplx_op_norm(t, d));
    }
    return best;
}

std::pair<double, double> synthesize_beta_prime(double alpha_a, double beta_hat, double B_hat) {
    const double beta_prime = 2.0 * alpha_a + beta_hat;
    double B_prime;
    if (beta_hat > 0.0)
        B_prime = (1.0 + 2.0 * alpha_a / beta_hat) * B_hat;
    else if (alpha_a * B_hat == 0.0)
        B_prime = B_hat;
    else
        throw BadParameter("beta_hat = 0 with alpha_a * B_hat > 0 is not representable; the "
                           "synthesized B' would be unbounded");
    return {beta_prime, B_prime};
}

double C_p(const StructuralConstants& c, double s) {
    const double t = 1.0 - 2.0 * s;
    return 2.0 * (c.M * c.M + t * t + c.c_hat) + c.alpha_s * c.alpha_s;
}

} // namespace sgl
