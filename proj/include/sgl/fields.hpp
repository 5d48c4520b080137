#pragma once

#include <vector>

#include "sgl/grid.hpp"

namespace sgl {

/// Complex scalar coefficient sampled at grid nodes.
class ScalarField {
public:
    explicit ScalarField(const Grid& grid, cplx fill = cplx(0, 0))
        : grid_(&grid), values_(grid.num_nodes(), fill) {}

    const Grid& grid() const { return *grid_; }
    cplx& operator[](std::size_t i) { return values_[i]; }
    const cplx& operator[](std::size_t i) const { return values_[i]; }
    const std::vector<cplx>& values() const { return values_; }
    void check_finite(const char* what) const;

private:
    const Grid* grid_;
    std::vector<cplx> values_;
};

/// Complex N-vector per node, component-major within node: values[node*dim + k].
class VectorField {
public:
    explicit VectorField(const Grid& grid, cplx fill = cplx(0, 0))
        : grid_(&grid), values_(grid.num_nodes() * grid.dim(), fill) {}

    const Grid& grid() const { return *grid_; }
    cplx& at(std::size_t node, int k) { return values_[node * grid_->dim() + k]; }
    const cplx& at(std::size_t node, int k) const { return values_[node * grid_->dim() + k]; }
    void check_finite(const char* what) const;

private:
    const Grid* grid_;
    std::vector<cplx> values_;
};

/// Complex N x N matrix per node, row-major within node: values[node*dim*dim + r*dim + c].
class MatrixField {
public:
    explicit MatrixField(const Grid& grid, cplx fill = cplx(0, 0))
        : grid_(&grid), values_(grid.num_nodes() * grid.dim() * grid.dim(), fill) {}

    const Grid& grid() const { return *grid_; }
    cplx& at(std::size_t node, int r, int c) {
        int d = grid_->dim();
        return values_[node * d * d + r * d + c];
    }
    const cplx& at(std::size_t node, int r, int c) const {
        int d = grid_->dim();
        return values_[node * d * d + r * d + c];
    }
    void check_finite(const char* what) const;

    /// Identity matrix field scaled by s.
    static MatrixField scaled_identity(const Grid& grid, cplx s);

private:
    const Grid* grid_;
    std::vector<cplx> values_;
};

/// Real N x N matrix per node (same layout as MatrixField).
class RealMatrixField {
public:
    explicit RealMatrixField(const Grid& grid, double fill = 0.0)
        : grid_(&grid), values_(grid.num_nodes() * grid.dim() * grid.dim(), fill) {}

    const Grid& grid() const { return *grid_; }
    double& at(std::size_t node, int r, int c) {
        int d = grid_->dim();
        return values_[node * d * d + r * d + c];
    }
    const double& at(std::size_t node, int r, int c) const {
        int d = grid_->dim();
        return values_[node * d * d + r * d + c];
    }

private:
    const Grid* grid_;
    std::vector<double> values_;
};

/// Real symmetric/anti-symmetric split of the real and imaginary parts of A:
/// A = A0s + A0a + i*(A1s + A1a).
struct Decomposition {
    RealMatrixField A0s, A0a, A1s, A1a;

    explicit Decomposition(const Grid& grid) : A0s(grid), A0a(grid), A1s(grid), A1a(grid) {}
};

/// Full coefficient data of the operator: matrix A, drift fields b1, b2, potential Q.
struct CoefficientSet {
    const Grid* grid;
    MatrixField A;
    VectorField b1, b2;
    ScalarField Q;

    explicit CoefficientSet(const Grid& g) : grid(&g), A(g), b1(g), b2(g), Q(g) {}

    void check() const;
};

Decomposition decompose(const MatrixField& A);

/// Reassemble A0s + A0a + i(A1s + A1a); used in round-trip checks.
MatrixField reassemble(const Decomposition& dec);

/// Min/max over nodes of the extreme eigenvalues of A0s; throws NotElliptic when
/// the smallest eigenvalue at some node is <= tol.
std::pair<double, double> validate_ellipticity(const Decomposition& dec, double tol = 1e-12);
std::pair<double, double> validate_ellipticity(const CoefficientSet& cs, double tol = 1e-12);

} // namespace sgl
