#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "sgl/errors.hpp"

namespace sgl {

using cplx = std::complex<double>;

enum class Bc { Dirichlet, Neumann };

/// Structured tensor grid on an axis-aligned box, 1-D or 2-D.
/// Node ordering is row-major: index = iy*nx + ix (1-D: index = ix).
class Grid {
public:
    static constexpr std::size_t kNodeCap = 1000000;

    Grid(int dim, std::array<double, 2> lo, std::array<double, 2> hi,
         std::array<std::size_t, 2> n, Bc bc);

    static Grid line(double a, double b, std::size_t n, Bc bc) {
        return Grid(1, {a, 0.0}, {b, 0.0}, {n, 1}, bc);
    }
    static Grid box(double ax, double bx, double ay, double by, std::size_t nx, std::size_t ny,
                    Bc bc) {
        return Grid(2, {ax, ay}, {bx, by}, {nx, ny}, bc);
    }

    int dim() const { return dim_; }
    Bc bc() const { return bc_; }
    std::size_t n(int axis) const { return n_[axis]; }
    double lo(int axis) const { return lo_[axis]; }
    double hi(int axis) const { return hi_[axis]; }
    double h(int axis) const { return h_[axis]; }
    std::size_t num_nodes() const { return dim_ == 1 ? n_[0] : n_[0] * n_[1]; }
    std::size_t num_cells() const {
        return dim_ == 1 ? n_[0] - 1 : (n_[0] - 1) * (n_[1] - 1);
    }
    double cell_volume() const { return dim_ == 1 ? h_[0] : h_[0] * h_[1]; }

    std::size_t index(std::size_t ix, std::size_t iy = 0) const { return iy * n_[0] + ix; }
    std::size_t ix_of(std::size_t idx) const { return idx % n_[0]; }
    std::size_t iy_of(std::size_t idx) const { return idx / n_[0]; }

    double x_of(std::size_t idx) const { return lo_[0] + h_[0] * double(ix_of(idx)); }
    double y_of(std::size_t idx) const { return dim_ == 1 ? 0.0 : lo_[1] + h_[1] * double(iy_of(idx)); }

    bool on_boundary(std::size_t idx) const {
        std::size_t ix = ix_of(idx);
        if (ix == 0 || ix == n_[0] - 1) return true;
        if (dim_ == 2) {
            std::size_t iy = iy_of(idx);
            if (iy == 0 || iy == n_[1] - 1) return true;
        }
        return false;
    }

    /// Trapezoidal quadrature weight of a node (boundary factors 1/2 per axis).
    double quad_weight(std::size_t idx) const {
        double w = h_[0] * axis_factor(ix_of(idx), n_[0]);
        if (dim_ == 2) w *= h_[1] * axis_factor(iy_of(idx), n_[1]);
        return w;
    }

    bool same_as(const Grid& other) const;

private:
    static double axis_factor(std::size_t i, std::size_t n) {
        return (i == 0 || i == n - 1) ? 0.5 : 1.0;
    }

    int dim_;
    std::array<double, 2> lo_;
    std::array<double, 2> hi_;
    std::array<std::size_t, 2> n_;
    std::array<double, 2> h_;
    Bc bc_;
};

/// Complex nodal values on a grid.
class GridFunction {
public:
    GridFunction(const Grid& grid, cplx fill = cplx(0.0, 0.0))
        : grid_(&grid), values_(grid.num_nodes(), fill) {}
    GridFunction(const Grid& grid, std::vector<cplx> values);

    const Grid& grid() const { return *grid_; }
    std::size_t size() const { return values_.size(); }
    cplx& operator[](std::size_t i) { return values_[i]; }
    const cplx& operator[](std::size_t i) const { return values_[i]; }
    const std::vector<cplx>& values() const { return values_; }
    std::vector<cplx>& values() { return values_; }

    void check_finite(const char* what = "grid function") const;

private:
    const Grid* grid_;
    std::vector<cplx> values_;
};

} // namespace sgl
