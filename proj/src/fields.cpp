#include "sgl/fields.hpp"

#include <cmath>

#include "sgl/smallmat.hpp"

namespace sgl {

namespace {

void check_finite_impl(const std::vector<cplx>& v, const char* what) {
    for (const cplx& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw InvalidField(std::string(what) + " has a non-finite entry");
}

} // namespace

void ScalarField::check_finite(const char* what) const { check_finite_impl(values_, what); }
void VectorField::check_finite(const char* what) const { check_finite_impl(values_, what); }
void MatrixField::check_finite(const char* what) const { check_finite_impl(values_, what); }

MatrixField MatrixField::scaled_identity(const Grid& grid, cplx s) {
    MatrixField m(grid);
    for (std::size_t node = 0; node < grid.num_nodes(); ++node)
        for (int k = 0; k < grid.dim(); ++k) m.at(node, k, k) = s;
    return m;
}

void CoefficientSet::check() const {
    A.check_finite("A");
    b1.check_finite("b1");
    b2.check_finite("b2");
    Q.check_finite("Q");
}

Decomposition decompose(const MatrixField& A) {
    A.check_finite("A");
    const Grid& g = A.grid();
    int d = g.dim();
    Decomposition dec(g);
    for (std::size_t node = 0; node < g.num_nodes(); ++node) {
        for (int r = 0; r < d; ++r) {
            for (int c = 0; c < d; ++c) {
                double re = A.at(node, r, c).real();
                double reT = A.at(node, c, r).real();
                double im = A.at(node, r, c).imag();
                double imT = A.at(node, c, r).imag();
                dec.A0s.at(node, r, c) = 0.5 * (re + reT);
                dec.A0a.at(node, r, c) = 0.5 * (re - reT);
                dec.A1s.at(node, r, c) = 0.5 * (im + imT);
                dec.A1a.at(node, r, c) = 0.5 * (im - imT);
            }
        }
    }
    return dec;
}

MatrixField reassemble(const Decomposition& dec) {
    const Grid& g = dec.A0s.grid();
    int d = g.dim();
    MatrixField A(g);
    for (std::size_t node = 0; node < g.num_nodes(); ++node)
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                A.at(node, r, c) = cplx(dec.A0s.at(node, r, c) + dec.A0a.at(node, r, c),
                                        dec.A1s.at(node, r, c) + dec.A1a.at(node, r, c));
    return A;
}

std::pair<double, double> validate_ellipticity(const Decomposition& dec, double tol) {
    const Grid& g = dec.A0s.grid();
    int d = g.dim();
    double cmin = std::numeric_limits<double>::infinity();
    double cmax = -std::numeric_limits<double>::infinity();
    for (std::size_t node = 0; node < g.num_nodes(); ++node) {
        Mat2 m{dec.A0s.at(node, 0, 0), 0, 0, 0};
        if (d == 2) {
            m[1] = dec.A0s.at(node, 0, 1);
            m[2] = dec.A0s.at(node, 1, 0);
            m[3] = dec.A0s.at(node, 1, 1);
        }
        auto [lo, hi] = sym_eigenvalues(m, d);
        if (lo <= tol) throw NotElliptic(node, lo);
        cmin = std::min(cmin, lo);
        cmax = std::max(cmax, hi);
    }
    return {cmin, cmax};
}

std::pair<double, double> validate_ellipticity(const CoefficientSet& cs, double tol) {
    return validate_ellipticity(decompose(cs.A), tol);
}

} // namespace sgl
